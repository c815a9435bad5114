import functools

import pytest

from merkle_traversal.metrics import stored_hash_count
from merkle_traversal.traversal import keygen

SEED = bytes.fromhex("00ff")

ORACLE_CONFIGS = [(2, 1), (4, 1), (4, 2), (6, 2), (6, 3), (8, 2), (8, 4), (10, 2), (10, 5)]


@functools.lru_cache(maxsize=None)
def full_run(H, h, seed=SEED, hash_name="sha256"):
    """Run every round; returns (root, state, paths, records). paths[i] is leaf i's path."""
    root, state = keygen(H, h, seed, hash_name)
    paths = [state.auth_path()]
    records = []
    while not state.exhausted:
        records.append(state.advance())
        paths.append(state.auth_path())
    return root, state, paths, records


@pytest.fixture
def cross_checked():
    """Factory for states whose fast storage count is checked against a full recount."""
    def make(H, h, seed=SEED):
        root, state = keygen(H, h, seed)

        def probe(s):
            assert s.stored_hashes() == stored_hash_count(s)
        state.probe = probe
        return root, state
    return make


ACCEPTANCE_LINES = []


def report(number, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
