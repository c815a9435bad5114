"""Measure space/time of full traversals and compare against the closed-form bounds.

    python scripts/table1_bounds.py                 # default grid
    python scripts/table1_bounds.py -H 16 -s 2 4    # one height, several h
    python scripts/table1_bounds.py --csv-dir out/  # also dump aggregated CSVs
"""

import argparse
import math
import time
from pathlib import Path

from merkle_traversal.metrics import aggregate, mean_leaves, write_aggregate_csv
from merkle_traversal.traversal import keygen


def bounds(H, h):
    L = H // h
    return {
        "space": L * 2 ** h + 2 * H - 2 * h,
        "avg_time": (2 ** h - 1) / 2 ** h * (L - 1) + 0.5,
        "worst_time": L,
    }


def run(H, h, seed):
    t0 = time.perf_counter()
    _, state = keygen(H, h, seed)
    records = []
    while not state.exhausted:
        records.append(state.advance())
    return state, records, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("-H", "--height", type=int, nargs="*", default=[8, 10, 12, 16])
    ap.add_argument("-s", "--subtree", type=int, nargs="*", default=None,
                    help="subtree heights (default: 2 and log2 H when they divide H)")
    ap.add_argument("--seed", default="00ff")
    ap.add_argument("--window", type=int, default=1024)
    ap.add_argument("--csv-dir", type=Path, default=None)
    args = ap.parse_args()

    print(f"{'H':>3} {'h':>3} {'L':>3} | {'peak':>5} {'bound':>5} | {'worst':>5} {'L':>3} | "
          f"{'mean':>7} {'bound':>7} | {'stack':>5} {'H-2h':>4} | {'sec':>6}")
    for H in args.height:
        hs = args.subtree or sorted({2, int(math.log2(H))})
        for h in hs:
            if H % h:
                continue
            state, records, secs = run(H, h, bytes.fromhex(args.seed))
            b = bounds(H, h)
            last = (1 << H) - (1 << (H - h))
            print(f"{H:>3} {h:>3} {state.L:>3} | {state.peak_stored:>5} {b['space']:>5} | "
                  f"{max(r.leaves for r in records):>5} {b['worst_time']:>3} | "
                  f"{mean_leaves(records, last):>7.4f} {b['avg_time']:>7.4f} | "
                  f"{state.lower_stack.peak:>5} {max(H - 2 * h, 0):>4} | {secs:>6.1f}")
            if args.csv_dir:
                args.csv_dir.mkdir(parents=True, exist_ok=True)
                with open(args.csv_dir / f"H{H}_h{h}.csv", "w", newline="") as fh:
                    write_aggregate_csv(aggregate(records, args.window), fh)


if __name__ == "__main__":
    main()
