"""Hash primitive and the continuous, forward-only PRNG used for leaf keys.

The PRNG state is a pair ``(chain, context)``. ``context`` depends only on the
seed and is shared by every state cloned from it; ``chain`` evolves with each
output. Stepping is deterministic, so cloning a state is just copying it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable

from .errors import ConfigError

TAG_CTX = b"\x43"
TAG_CHAIN = b"\x53"
TAG_LEAF = b"\x4c"
TAG_OUTPUT = b"\x01"
TAG_ADVANCE = b"\x02"

DEFAULT_HASH = "sha256"


@dataclass(frozen=True)
class PrngState:
    chain: bytes
    context: bytes


@dataclass(frozen=True)
class HashSuite:
    """A named hashlib algorithm plus the operations built on it."""

    name: str = DEFAULT_HASH
    _new: Callable = field(init=False, repr=False, compare=False)
    size: int = field(init=False, compare=False)

    def __post_init__(self):
        name = self.name
        try:
            probe = hashlib.new(name)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"unknown hash function {name!r}") from exc
        if probe.digest_size <= 0:
            raise ConfigError(f"hash {name!r} has no fixed output size")
        # named constructors (hashlib.sha256 etc.) are noticeably faster than hashlib.new
        ctor = getattr(hashlib, name, None)
        if not callable(ctor):
            ctor = lambda data: hashlib.new(name, data)  # noqa: E731
        object.__setattr__(self, "_new", ctor)
        object.__setattr__(self, "size", probe.digest_size)

    def digest(self, data: bytes) -> bytes:
        return self._new(data).digest()

    def hash_children(self, left: bytes, right: bytes) -> bytes:
        if len(left) != self.size or len(right) != self.size:
            raise ConfigError(
                f"child digests must be {self.size} bytes, got {len(left)} and {len(right)}"
            )
        return self._new(left + right).digest()

    def prng_seed(self, seed: bytes) -> PrngState:
        if not seed:
            raise ValueError("PRNG seed must be non-empty")
        return PrngState(
            chain=self.digest(seed + TAG_CHAIN),
            context=self.digest(seed + TAG_CTX),
        )

    def prng_next(self, state: PrngState) -> tuple[bytes, PrngState]:
        """Return the next private key and the advanced state."""
        base = state.chain + state.context
        key = self._new(base + TAG_OUTPUT).digest()
        chain = self._new(base + TAG_ADVANCE).digest()
        return key, PrngState(chain, state.context)

    def leaf_calc(self, key: bytes) -> bytes:
        return self._new(key + TAG_LEAF).digest()


_DEFAULT = HashSuite()


def hash_children(left: bytes, right: bytes) -> bytes:
    return _DEFAULT.hash_children(left, right)


def prng_seed(seed: bytes) -> PrngState:
    return _DEFAULT.prng_seed(seed)


def prng_next(state: PrngState) -> tuple[bytes, PrngState]:
    return _DEFAULT.prng_next(state)


def leaf_calc(key: bytes) -> bytes:
    return _DEFAULT.leaf_calc(key)
