"""Exit criteria. Each test reports one PASS/FAIL line in the terminal summary."""

import functools
import time

import pytest

from conftest import ORACLE_CONFIGS, SEED, report
from merkle_traversal.cli import main
from merkle_traversal.errors import SlotCollision, StallFault, TraversalFault
from merkle_traversal.oracle import FullTree, verify_path
from merkle_traversal.traversal import keygen

# every run feeding criteria 6-8 lands here: (H, h) -> fault name or None
FAULTS = {}


@functools.lru_cache(maxsize=None)
def campaign(H, h):
    """Full run without keeping paths; records per round plus wall time."""
    t0 = time.perf_counter()
    root, state = keygen(H, h, SEED)
    records = []
    try:
        while not state.exhausted:
            records.append(state.advance())
        FAULTS[(H, h)] = None
    except TraversalFault as exc:
        FAULTS[(H, h)] = type(exc).__name__
        raise
    return state, records, time.perf_counter() - t0


def test_1_oracle_equivalence():
    t0 = time.perf_counter()
    mismatches = 0
    total = 0
    for H, h in ORACLE_CONFIGS:
        tree = FullTree.build(H, SEED)
        root, state = keygen(H, h, SEED)
        mismatches += root != tree.root
        try:
            for i in range(1 << H):
                if i:
                    state.advance()
                path = state.auth_path()
                total += 1
                if list(path) != tree.auth_path(i) or not verify_path(
                        H, i, tree.levels[0][i], path, root):
                    mismatches += 1
            FAULTS[(H, h)] = None
        except TraversalFault as exc:
            FAULTS[(H, h)] = type(exc).__name__
            raise
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 30
    report(1, ok, f"{total} paths over {len(ORACLE_CONFIGS)} configs, "
                  f"{mismatches} mismatches, {elapsed:.1f}s (< 30s)")
    assert mismatches == 0
    assert elapsed < 30


def test_2_space_h16_h2():
    state, records, elapsed = campaign(16, 2)
    peak = max(r.stored_hashes for r in records)
    ok = peak <= 60 and elapsed < 60
    report(2, ok, f"H=16 h=2 peak stored hashes {peak} (<= 60), {elapsed:.1f}s (< 60s)")
    assert all(r.stored_hashes <= 60 for r in records)
    assert elapsed < 60


def test_3_space_h16_h4():
    state, records, _ = campaign(16, 4)
    peak = max(r.stored_hashes for r in records)
    report(3, peak <= 88, f"H=16 h=4 peak stored hashes {peak} (<= 88)")
    assert all(r.stored_hashes <= 88 for r in records)


def test_4_worst_case_time():
    _, rec16, _ = campaign(16, 2)
    _, rec12, _ = campaign(12, 3)
    w16 = max(r.leaves for r in rec16)
    w12 = max(r.leaves for r in rec12)
    ok = w16 <= 8 and w12 <= 4
    report(4, ok, f"max leaves/round H=16 h=2: {w16} (<= 8); H=12 h=3: {w12} (<= 4)")
    assert w16 <= 8
    assert w12 <= 4


def test_5_average_time_h16_h2():
    _, records, _ = campaign(16, 2)
    n = (1 << 16) - (1 << 14)
    window = records[:n]
    assert window[-1].round == n
    mean = sum(r.leaves for r in window) / n
    report(5, mean <= 5.75 + 0.01, f"mean leaves over rounds 1..{n}: {mean:.4f} (<= 5.76)")
    assert mean <= 5.75 + 0.01


def _all_runs():
    for cfg in [(16, 2), (16, 4), (12, 3)]:
        campaign(*cfg)
    for H, h in ORACLE_CONFIGS:
        if (H, h) not in FAULTS:
            campaign(H, h)
    return FAULTS


def test_6_node_supply():
    faults = _all_runs()
    stalls = [cfg for cfg, f in faults.items() if f == StallFault.__name__]
    report(6, not stalls, f"stall faults across {len(faults)} runs: {len(stalls)}")
    assert not stalls


def test_7_shared_stack_bound():
    worst = []
    for H, h in sorted(set(ORACLE_CONFIGS) | {(16, 2), (16, 4), (12, 3)}):
        if H // h < 2:
            continue
        state, _, _ = campaign(H, h)
        if state.lower_stack.peak > H - 2 * h:
            worst.append((H, h, state.lower_stack.peak))
    report(7, not worst, f"runs exceeding H-2h shared-stack digests: {worst or 'none'}")
    assert not worst


def test_8_slot_collision_freedom():
    faults = _all_runs()
    bad = [cfg for cfg, f in faults.items() if f is not None]
    report(8, not bad, f"retained-tree faults across {len(faults)} runs: {len(bad)}")
    assert not bad
    assert SlotCollision.__name__ not in faults.values()


def test_9_change_rate_h10():
    root, state = keygen(10, 2, SEED)
    prev = state.auth_path()
    violations = 0
    while not state.exhausted:
        state.advance()
        cur = state.auth_path()
        i = state.round
        for m in range(10):
            changed = cur[m] != prev[m]
            violations += changed != (i % (1 << m) == 0)
        prev = cur
    report(9, violations == 0, f"H=10 level changes violating 2^m | i: {violations}")
    assert violations == 0


def test_10_determinism(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        agg, raw = tmp_path / f"{name}.csv", tmp_path / f"{name}.raw.csv"
        code = main(["traverse", "-H", "10", "-s", "2", "--seed", "00ff", "--window", "64",
                     "--out", str(agg), "--raw", str(raw)])
        assert code == 0
        outs.append((agg.read_bytes(), raw.read_bytes()))
    capsys.readouterr()
    same = outs[0] == outs[1]
    report(10, same, "two identical traverse invocations give byte-identical CSV")
    assert same
