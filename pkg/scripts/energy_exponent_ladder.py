#!/usr/bin/env python3
"""Measure distinct-sums growth across a doubling ladder of budgets.

For each order k the ladder runs the restricted h-fold sums (h = k+1,
per-term cap c*X/h) at X = base, 2*base, 4*base, ... and prints the
step-to-step growth of the distinct-sums count next to the 2^(1/k)
comparison slope. Also emits the unrestricted exponent-fit record.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from binsum import ResultCache, dump_records_json, run_experiment, summary_line


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--orders", type=int, nargs="+", default=[2, 3])
    parser.add_argument("--base", type=int, default=10**4)
    parser.add_argument("--doublings", type=int, default=10)
    parser.add_argument("--c", type=Fraction, default=Fraction(1, 2))
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--cache-dir", type=Path, default=None)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    args = parser.parse_args(argv)

    cache = None if args.cache_dir is None else ResultCache(args.cache_dir)
    records = []
    for k in args.orders:
        h = k + 1
        counts: list[int] = []
        for i in range(args.doublings + 1):
            x = args.base * 2**i
            record, hit = run_experiment(
                "restricted-sums",
                {"k": k, "h": h, "x": x, "c": args.c},
                threads=args.threads,
                cache=cache,
            )
            print(summary_line(record) + (" [cached]" if hit else ""))
            records.append(record)
            counts.append(int(record.results["distinct_sums"]))
        slope = 2 ** (1 / k)
        for i in range(len(counts) - 1):
            ratio = counts[i + 1] / counts[i]
            print(
                f"  k={k} step {i}: |S| ratio {ratio:.3f} "
                f"(comparison 2^(1/{k}) = {slope:.3f})"
            )

        # pair-sum (h=2) energies stay cheap at every rung, so the
        # unrestricted exponent fit uses those
        fit_record, hit = run_experiment(
            "exponent-fit",
            {"k": k, "h": 2, "bounds": [args.base * 2**i for i in range(args.doublings + 1)]},
            threads=args.threads,
            cache=cache,
        )
        print(summary_line(fit_record) + (" [cached]" if hit else ""))
        records.append(fit_record)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    out = args.out_dir / "exponent_ladder.json"
    dump_records_json(records, out)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
