"""Per-round space/time samples, window aggregation and CSV export.

Space is counted in digests: retained right nodes, authentication-path
entries not already retained, TreeHash stacks, pending bottom-level nodes,
and PRNG states (one chain per subtree, one for left leaves, one shared
context).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .structures import Node

RAW_HEADER = ("round", "leaves", "stored_hashes")
AGGREGATE_HEADER = ("window_start", "max_stored_hashes", "mean_leaves")
DEFAULT_WINDOW = 1 << 10


@dataclass(frozen=True)
class RoundRecord:
    round: int
    leaves: int
    stored_hashes: int


@dataclass(frozen=True)
class AggregateRecord:
    window_start: int
    max_stored_hashes: int
    mean_leaves: float


def prng_charge(L: int) -> int:
    return (L + 1) + 1


def auth_extra(auth: Sequence[Node], subtrees, h: int) -> int:
    """Auth entries that are not the very same node held in a retained tree."""
    extra = 0
    for node in auth:
        if node is None:
            continue
        st = subtrees[node.height // h]
        if not st.tree.holds(node.height, node.index):
            extra += 1
    return extra


def stored_hash_count(state) -> int:
    """Recount every live digest in a traversal state from scratch."""
    total = sum(st.tree.count for st in state.subtrees)
    total += auth_extra(state.auth, state.subtrees, state.h)
    total += len(state.lower_stack)
    for st in state.subtrees:
        if st.stack_high is not None:
            total += len(st.stack_high)
        if isinstance(st.bottom_node, Node):
            total += 1
    return total + prng_charge(state.L)


def aggregate(records: Sequence[RoundRecord], window: int = DEFAULT_WINDOW) -> list[AggregateRecord]:
    if window < 1:
        raise ValueError("window must be >= 1")
    out = []
    for start in range(0, len(records), window):
        chunk = records[start:start + window]
        out.append(AggregateRecord(
            window_start=chunk[0].round,
            max_stored_hashes=max(r.stored_hashes for r in chunk),
            mean_leaves=sum(r.leaves for r in chunk) / len(chunk),
        ))
    return out


def mean_leaves(records: Iterable[RoundRecord], last_round: int) -> float:
    """Mean leaf computations over rounds 1..last_round."""
    sel = [r.leaves for r in records if 1 <= r.round <= last_round]
    return sum(sel) / len(sel)


def write_raw_csv(records: Iterable[RoundRecord], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RAW_HEADER)
    for r in records:
        w.writerow((r.round, r.leaves, r.stored_hashes))


def write_aggregate_csv(aggs: Iterable[AggregateRecord], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(AGGREGATE_HEADER)
    for a in aggs:
        w.writerow((a.window_start, a.max_stored_hashes, f"{a.mean_leaves:.4f}"))

