"""Space- and time-efficient Merkle tree traversal (fractal subtrees, log-style scheduling)."""

from .errors import ConfigError, EndOfTree, MerkleError, TraversalFault
from .hashing import HashSuite, hash_children, leaf_calc, prng_next, prng_seed
from .metrics import RoundRecord, aggregate, stored_hash_count
from .oracle import FullTree, brute_auth_path, brute_root, verify_path
from .structures import DUMMY, Node
from .traversal import Traversal, keygen

__all__ = [
    "ConfigError", "DUMMY", "EndOfTree", "FullTree", "HashSuite", "MerkleError", "Node",
    "RoundRecord", "Traversal", "TraversalFault", "aggregate", "brute_auth_path", "brute_root",
    "hash_children", "keygen", "leaf_calc", "prng_next", "prng_seed", "stored_hash_count",
    "verify_path",
]
