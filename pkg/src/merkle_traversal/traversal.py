"""Fractal Merkle tree traversal with log-style lower TreeHash scheduling.

The tree of height ``H`` is cut into ``L = H / h`` stacked subtrees. Subtree
``i`` retains right nodes on heights ``[i*h, (i+1)*h)`` for the current Exist
tree while building the next (Desired) one in the same slots. Each Desired
tree is built by a lower TreeHash (leaves -> bottom-level nodes, scheduled by
tail height over one shared stack) and a higher TreeHash (bottom-level nodes
-> retained nodes, one update every ``2**bottom`` rounds).
"""

from __future__ import annotations

import math
import os
from typing import Callable, Optional

from .errors import ConfigError, EndOfTree, StallFault
from .hashing import HashSuite, PrngState
from .metrics import RoundRecord, auth_extra, prng_charge
from .structures import DUMMY, Node, NodeStack, RetainTree, SharedStack, Subtree
from .treehash import combine, treehash_step

DEFAULT_MAX_HEIGHT = 24

LeafFn = Callable[[int, bytes], bytes]


def max_height() -> int:
    raw = os.environ.get("MERKLE_MAX_HEIGHT")
    if raw is None:
        return DEFAULT_MAX_HEIGHT
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"MERKLE_MAX_HEIGHT must be an integer, got {raw!r}") from None


def check_params(H: int, h: int, limit: Optional[int] = None) -> None:
    limit = max_height() if limit is None else limit
    if not 1 <= H <= limit:
        raise ConfigError(f"tree height must be in [1, {limit}], got {H}")
    if not 1 <= h <= H or H % h:
        raise ConfigError(f"subtree height {h} must divide tree height {H}")


class Traversal:
    """Mutable traversal engine. Build one with :func:`keygen`."""

    def __init__(self, H: int, h: int, suite: HashSuite, leaf_fn: LeafFn):
        self.H = H
        self.h = h
        self.L = H // h
        self.suite = suite
        self.leaf_fn = leaf_fn
        self.round = 0
        self.root: bytes = b""
        self.auth: list[Optional[Node]] = [None] * H
        self.subtrees: list[Subtree] = []
        for i in range(self.L):
            bottom = i * h
            root = bottom + h
            st = Subtree(bottom=bottom, root=root, tree=RetainTree(bottom, root),
                         next_index=(1 << root) - 1)
            if i < self.L - 1:
                st.stack_high = NodeStack()
            self.subtrees.append(st)
        self.lower_stack = SharedStack()
        self.left_prng: Optional[PrngState] = None
        self._left_pos = 0

        # instrumentation
        self.leaves_total = 0
        self._round_leaves = 0
        self._round_peak = 0
        self._auth_extra = 0
        self.peak_stored = 0
        self.probe: Optional[Callable[["Traversal"], None]] = None

    # -- helpers -----------------------------------------------------------

    def subtree_for_level(self, height: int) -> Subtree:
        return self.subtrees[height // self.h]

    def _hash(self, left: bytes, right: bytes) -> bytes:
        return self.suite.hash_children(left, right)

    def _leaf(self, index: int, key: bytes) -> Node:
        self.leaves_total += 1
        self._round_leaves += 1
        return Node(0, index, self.leaf_fn(index, key))

    def stored_hashes(self) -> int:
        """Live digest count; same value as ``metrics.stored_hash_count``."""
        total = self._auth_extra + len(self.lower_stack) + prng_charge(self.L)
        for st in self.subtrees:
            total += st.tree.count
            if st.stack_high is not None:
                total += len(st.stack_high)
            if st.bottom_node is not None and st.bottom_node is not DUMMY:
                total += 1
        return total

    def _sample(self) -> None:
        n = self.stored_hashes()
        if n > self._round_peak:
            self._round_peak = n
        if self.probe is not None:
            self.probe(self)

    def _refresh_auth_extra(self) -> None:
        self._auth_extra = auth_extra(self.auth, self.subtrees, self.h)

    def auth_path(self) -> tuple[Node, ...]:
        return tuple(self.auth)

    @property
    def exhausted(self) -> bool:
        return self.round >= (1 << self.H) - 1

    # -- Process callbacks -------------------------------------------------

    def process_0(self, node: Node, _subtree) -> int:
        if node.index & 1:
            st = self.subtree_for_level(node.height)
            if node.index < 1 << (st.root - node.height):
                st.tree.add(node)
            if node.index == 1:
                self.auth[node.height] = node
        return 1

    def process_1(self, node: Node, j: int) -> int:
        st = self.subtrees[j]
        if node.height == st.bottom:
            st.bottom_node = node
            return 0
        return 1

    def process_2(self, node, i: int) -> int:
        if node is DUMMY:
            return 0
        st = self.subtrees[i]
        cont = 1
        if node.index & 1:
            st.tree.add(node)
            if (node.index >> 1) % (1 << (st.root - node.height - 1)) == 0:
                cont = 0
        if node.height == st.root - 1 and st.next_index + 1 >= 1 << self.H:
            # that was the last Desired tree of this subtree
            st.finished = True
        return cont

    # -- scheduling ----------------------------------------------------------

    def tail_height(self, i: int) -> float:
        st = self.subtrees[i]
        if st.stack_high is None or st.bottom_node is not None:
            return math.inf
        if self.lower_stack.count(i) == 0:
            return st.bottom
        return self.lower_stack.peek(i).height

    def distribute_lower_updates(self) -> None:
        updates = sum(1 for st in self.subtrees if st.active)
        for _ in range(updates):
            tails = [self.tail_height(j) for j in range(self.L - 1)]
            best = min(tails)
            if best == math.inf:
                # every instance is waiting on the higher TreeHash
                break
            s = tails.index(best)
            st = self.subtrees[s]
            st.next_index += 1
            key, st.prng = self.suite.prng_next(st.prng)
            pos = st.next_index % (1 << st.root)
            if pos >= 1 << st.bottom:
                leaf = self._leaf(st.next_index, key)
                treehash_step(self.lower_stack.segment(s), leaf, self.process_1, s, self._hash)
            elif pos + 1 == 1 << st.bottom:
                st.bottom_node = DUMMY
            self._sample()

    def next_auth_path(self) -> None:
        i = self.round + 1
        k = (i & -i).bit_length() - 1
        auth = self.auth
        if k == 0:
            while self._left_pos < i - 1:
                _, self.left_prng = self.suite.prng_next(self.left_prng)
                self._left_pos += 1
            key, self.left_prng = self.suite.prng_next(self.left_prng)
            self._left_pos += 1
            auth[0] = self._leaf(i - 1, key)
        else:
            left = auth[k - 1]
            tree = self.subtree_for_level(k - 1).tree
            right = tree.get(k - 1, left.index ^ 1)
            auth[k] = combine(left, right, self._hash)
            tree.remove(k - 1, right.index)
        if (auth[k].index >> 1) & 1:
            self.subtree_for_level(k).tree.remove(k, auth[k].index ^ 1)
        self._refresh_auth_extra()
        self._sample()

        for r in range(self.L - 1):
            st = self.subtrees[r]
            if st.bottom > k or not st.active:
                continue
            node = st.bottom_node
            if node is None:
                raise StallFault(f"round {i}: subtree {r} has no bottom-level node ready")
            st.bottom_node = None
            treehash_step(st.stack_high, node, self.process_2, r, self._hash)
            if st.finished:
                st.stack_high = None
                st.prng = None
            self._sample()

        for t in range(k):
            auth[t] = self.subtree_for_level(t).tree.get(t, (i >> t) ^ 1)
        self._refresh_auth_extra()
        self._sample()

    # -- rounds ---------------------------------------------------------------

    def advance(self) -> RoundRecord:
        """Compute the authentication path of the next leaf."""
        if self.exhausted:
            raise EndOfTree(f"all {1 << self.H} leaves consumed")
        self._round_leaves = 0
        self._round_peak = self.stored_hashes()
        self.distribute_lower_updates()
        self.next_auth_path()
        self.round += 1
        self.peak_stored = max(self.peak_stored, self._round_peak)
        return RoundRecord(self.round, self._round_leaves, self._round_peak)

    def step(self) -> tuple[tuple[Node, ...], RoundRecord]:
        """Emit the current path, then advance to the next leaf."""
        emitted = self.auth_path()
        return emitted, self.advance()


def keygen(H: int, h: int, seed: bytes, hash_name: str = "sha256",
           leaf_fn: Optional[LeafFn] = None,
           limit: Optional[int] = None) -> tuple[bytes, Traversal]:
    """Compute the root and set up the traversal state for leaf 0."""
    check_params(H, h, limit)
    suite = HashSuite(hash_name)
    if leaf_fn is None:
        leaf_fn = lambda index, key: suite.leaf_calc(key)  # noqa: E731
    state = Traversal(H, h, suite, leaf_fn)

    prng = suite.prng_seed(seed)
    state.left_prng = prng
    # subtree i's lower TreeHash starts at leaf 2^root_i
    starts = {1 << st.root: st for st in state.subtrees[:-1]}
    stack = NodeStack()
    for k in range(1 << H):
        if k in starts:
            starts[k].prng = prng
        key, prng = suite.prng_next(prng)
        leaf = state._leaf(k, key)
        treehash_step(stack, leaf, state.process_0, -1, state._hash)
    root = stack.pop()
    assert root.height == H and not stack
    state.root = root.digest
    state._refresh_auth_extra()
    state.peak_stored = state.stored_hashes()
    return root.digest, state
