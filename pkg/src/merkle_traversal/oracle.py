"""Brute-force reference: materialize the whole tree and read paths off it.

Shares only the hash suite with the traversal engine.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .errors import ConfigError
from .hashing import HashSuite
from .structures import Node

MAX_ORACLE_HEIGHT = 16

LeafFn = Callable[[int, bytes], bytes]


class FullTree:
    """All 2^(H+1) - 1 digests; ``levels[height][index]``."""

    def __init__(self, levels: list[list[bytes]]):
        self.levels = levels
        self.height = len(levels) - 1

    @classmethod
    def build(cls, H: int, seed: bytes, suite: Optional[HashSuite] = None,
              leaf_fn: Optional[LeafFn] = None) -> "FullTree":
        if not 0 <= H <= MAX_ORACLE_HEIGHT:
            raise ConfigError(f"oracle only handles 0 <= H <= {MAX_ORACLE_HEIGHT}, got {H}")
        suite = suite or HashSuite()
        leaf_fn = leaf_fn or (lambda i, key: suite.leaf_calc(key))
        state = suite.prng_seed(seed)
        leaves = []
        for i in range(1 << H):
            key, state = suite.prng_next(state)
            leaves.append(leaf_fn(i, key))
        levels = [leaves]
        while len(levels[-1]) > 1:
            below = levels[-1]
            levels.append([suite.hash_children(below[j], below[j + 1])
                           for j in range(0, len(below), 2)])
        return cls(levels)

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]

    def node(self, height: int, index: int) -> Node:
        return Node(height, index, self.levels[height][index])

    def auth_path(self, leaf: int) -> list[Node]:
        if not 0 <= leaf < len(self.levels[0]):
            raise IndexError(f"leaf {leaf} out of range for H={self.height}")
        return [self.node(t, (leaf >> t) ^ 1) for t in range(self.height)]


def brute_root(H: int, seed: bytes, suite: Optional[HashSuite] = None,
               leaf_fn: Optional[LeafFn] = None) -> bytes:
    return FullTree.build(H, seed, suite, leaf_fn).root


def brute_auth_path(H: int, seed: bytes, leaf: int, suite: Optional[HashSuite] = None,
                    leaf_fn: Optional[LeafFn] = None) -> list[Node]:
    return FullTree.build(H, seed, suite, leaf_fn).auth_path(leaf)


def verify_path(H: int, leaf: int, leaf_digest: bytes, path: Sequence, root: bytes,
                suite: Optional[HashSuite] = None) -> bool:
    """Fold ``leaf_digest`` up the path; ``path`` holds Nodes or raw digests."""
    if len(path) != H:
        raise ValueError(f"path has {len(path)} entries, expected {H}")
    suite = suite or HashSuite()
    if not 0 <= leaf < (1 << H):
        return False
    acc = leaf_digest
    for t, sibling in enumerate(path):
        sib = sibling.digest if isinstance(sibling, Node) else sibling
        if (leaf >> t) & 1:
            acc = suite.hash_children(sib, acc)
        else:
            acc = suite.hash_children(acc, sib)
    return acc == root
