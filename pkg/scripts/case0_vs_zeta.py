"""Few-sums DP against the zeta/Mobius solver on all-equal weights (CSV on stdout)."""

import argparse
import sys

from binweaver.bench import BenchSuite, rows_to_csv, run_bench


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-values", default="14,16,18,20,22")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    suite = BenchSuite(kinds=("all-equal",), n_values=tuple(int(x) for x in args.n_values.split(",")),
                       solvers=("dp", "zeta"), repeats=args.repeats)
    rows = run_bench(suite)
    sys.stdout.write(rows_to_csv(rows))
    by_n: dict[int, dict[str, float]] = {}
    for r in rows:
        by_n.setdefault(r.n, {})[r.solver] = r.seconds
    for n, t in sorted(by_n.items()):
        print(f"# n={n}: zeta/dp time ratio {t['zeta'] / t['dp']:.1f}", file=sys.stderr)


if __name__ == "__main__":
    main()
