"""Command-line front end.

Exit codes: 0 success, 1 verification or invariant failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError, MerkleError, TraversalFault
from .hashing import DEFAULT_HASH, HashSuite
from .metrics import DEFAULT_WINDOW, aggregate, write_aggregate_csv, write_raw_csv
from .oracle import verify_path
from .traversal import check_params, keygen

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    H: int
    h: int
    seed: bytes
    hash_name: str = DEFAULT_HASH
    rounds: Optional[int] = None
    window: int = DEFAULT_WINDOW
    out: Optional[str] = None
    raw: Optional[str] = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        try:
            seed = bytes.fromhex(args.seed)
        except ValueError:
            raise UsageError(f"--seed must be hex, got {args.seed!r}") from None
        if not seed:
            raise UsageError("--seed must not be empty")
        cfg = cls(args.height, args.subtree, seed, args.hash,
                  getattr(args, "rounds", None), getattr(args, "window", DEFAULT_WINDOW),
                  getattr(args, "out", None), getattr(args, "raw", None))
        try:
            check_params(cfg.H, cfg.h)
            HashSuite(cfg.hash_name)
        except ConfigError as exc:
            raise UsageError(str(exc)) from None
        if cfg.window < 1:
            raise UsageError("--window must be >= 1")
        if cfg.rounds is not None and not 0 <= cfg.rounds <= (1 << cfg.H) - 1:
            raise UsageError(f"--rounds must be in [0, {(1 << cfg.H) - 1}]")
        return cfg


@contextmanager
def _open_out(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_keygen(cfg: RunConfig) -> int:
    root, _ = keygen(cfg.H, cfg.h, cfg.seed, cfg.hash_name)
    print(root.hex())
    return EXIT_OK


def cmd_traverse(cfg: RunConfig, corrupt_round: Optional[int] = None) -> int:
    root, state = keygen(cfg.H, cfg.h, cfg.seed, cfg.hash_name)
    suite = state.suite
    # independent leaf chain for verification; not charged to the engine
    chain = suite.prng_seed(cfg.seed)

    def check(leaf: int, path) -> bool:
        nonlocal chain
        key, chain = suite.prng_next(chain)
        if leaf == corrupt_round:
            bad = bytearray(path[0].digest)
            bad[0] ^= 0xFF
            path = [bytes(bad)] + [n.digest for n in path[1:]]
        return verify_path(cfg.H, leaf, suite.leaf_calc(key), path, root, suite)

    if not check(0, state.auth_path()):
        print("verification failed at round 0", file=sys.stderr)
        return EXIT_FAIL
    total = (1 << cfg.H) - 1 if cfg.rounds is None else cfg.rounds
    records = []
    try:
        for _ in range(total):
            rec = state.advance()
            records.append(rec)
            if not check(rec.round, state.auth_path()):
                print(f"verification failed at round {rec.round}", file=sys.stderr)
                return EXIT_FAIL
    except TraversalFault as exc:
        print(f"invariant violated at round {state.round + 1}: {exc}", file=sys.stderr)
        return EXIT_FAIL

    if cfg.raw is not None:
        with _open_out(cfg.raw) as fh:
            write_raw_csv(records, fh)
    if cfg.out is not None or cfg.raw is None:
        with _open_out(cfg.out) as fh:
            write_aggregate_csv(aggregate(records, cfg.window), fh)
    return EXIT_OK


def cmd_path(cfg: RunConfig, leaf: int, out: Optional[str]) -> int:
    if not 0 <= leaf < 1 << cfg.H:
        raise UsageError(f"--leaf must be in [0, {(1 << cfg.H) - 1}]")
    _, state = keygen(cfg.H, cfg.h, cfg.seed, cfg.hash_name)
    while state.round < leaf:
        state.advance()
    with _open_out(out) as fh:
        write_path(state.auth_path(), fh)
    return EXIT_OK


def write_path(path, fh) -> None:
    for node in path:
        fh.write(node.digest.hex() + "\n")


def read_path(path_file: str) -> list[bytes]:
    try:
        with open(path_file) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        return [bytes.fromhex(ln) for ln in lines]
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read path file {path_file!r}: {exc}") from None


def cmd_verify(root_hex: str, leaf: int, leaf_hex: str, path_file: str,
               hash_name: str = DEFAULT_HASH, height: Optional[int] = None) -> int:
    try:
        root = bytes.fromhex(root_hex)
        leaf_digest = bytes.fromhex(leaf_hex)
        suite = HashSuite(hash_name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    digests = read_path(path_file)
    if not digests:
        raise UsageError("path file is empty")
    if any(len(d) != suite.size for d in digests + [root, leaf_digest]):
        raise UsageError(f"all digests must be {suite.size} bytes")
    H = len(digests)
    if height is not None and H != height:
        raise UsageError(f"path file has {H} digests, expected {height}")
    if not 0 <= leaf < 1 << H:
        raise UsageError(f"leaf {leaf} out of range for a path of length {H}")
    ok = verify_path(H, leaf, leaf_digest, digests, root, suite)
    print("OK" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def _tree_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-H", "--height", type=int, required=True, help="tree height H")
    p.add_argument("-s", "--subtree", type=int, required=True, help="subtree height h (divides H)")
    p.add_argument("--seed", default="00", help="hex-encoded PRNG seed (default: 00)")
    p.add_argument("--hash", default=DEFAULT_HASH, help="hashlib algorithm (default: sha256)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="merkle-traversal",
                                     description="Fractal Merkle tree traversal")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="print the root (public key)")
    _tree_args(p)

    p = sub.add_parser("traverse", help="run all rounds, verify each path, write metrics CSV")
    _tree_args(p)
    p.add_argument("--rounds", type=int, default=None, help="stop after this many rounds")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="aggregation window")
    p.add_argument("--out", default=None, help="aggregated CSV (default: stdout)")
    p.add_argument("--raw", default=None, help="per-round CSV")
    p.add_argument("--corrupt-round", type=int, default=None, help=argparse.SUPPRESS)

    p = sub.add_parser("path", help="export the authentication path of one leaf")
    _tree_args(p)
    p.add_argument("--leaf", type=int, required=True)
    p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("verify", help="check an exported path against a root")
    p.add_argument("--root", required=True, help="root digest, hex")
    p.add_argument("--leaf", type=int, required=True, help="leaf index")
    p.add_argument("--leaf-digest", required=True, help="leaf digest, hex")
    p.add_argument("--hash", default=DEFAULT_HASH)
    p.add_argument("-H", "--height", type=int, default=None,
                   help="expected tree height (path length)")
    p.add_argument("path_file", help="one hex digest per line, level 0 first")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.root, args.leaf, args.leaf_digest, args.path_file, args.hash,
                              args.height)
        cfg = RunConfig.from_args(args)
        if args.command == "keygen":
            return cmd_keygen(cfg)
        if args.command == "traverse":
            return cmd_traverse(cfg, args.corrupt_round)
        return cmd_path(cfg, args.leaf, args.out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MerkleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
