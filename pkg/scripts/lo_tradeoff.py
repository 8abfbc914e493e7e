"""Concentration versus distinct-sum exponents across weight families (CSV on stdout)."""

import argparse
import sys

from binweaver.lo_lab import (
    SCAN_KINDS,
    ScanConfig,
    concentration_outliers,
    records_to_csv,
    tradeoff_scan,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kinds", default=",".join(SCAN_KINDS))
    ap.add_argument("--n-min", type=int, default=6)
    ap.add_argument("--n-max", type=int, default=18)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bound", type=int, default=1000)
    args = ap.parse_args()

    records = []
    for kind in args.kinds.split(","):
        cfg = ScanConfig(kind, (args.n_min, args.n_max), trials=args.trials, seed=args.seed,
                         bound=args.bound)
        records.extend(tradeoff_scan(cfg))
    sys.stdout.write(records_to_csv(records))
    outliers = concentration_outliers(records)
    print(f"# {len(records)} records, {len(outliers)} with beta_exp >= 0.9 and sums_exp > 0.5",
          file=sys.stderr)
    for r in outliers:
        print(f"#   n={r.n} tag={r.tag} beta_exp={r.beta_exp:.3f} sums_exp={r.sums_exp:.3f}",
              file=sys.stderr)


if __name__ == "__main__":
    main()
