"""Median wall time of the zeta/Mobius solver per n, and the fitted log2 slope."""

import argparse
import statistics
import time

import numpy as np

from binweaver.generators import GeneratorSpec, generate
from binweaver.solvers import solve_zeta_mobius


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=16)
    ap.add_argument("--n-max", type=int, default=24)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ns, times = [], []
    print("n,answer,median_seconds")
    for n in range(args.n_min, args.n_max + 1):
        inst, _ = generate(GeneratorSpec("random-bounded", n, m=args.m, seed=args.seed))
        runs = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            rep = solve_zeta_mobius(inst)
            runs.append(time.perf_counter() - t0)
        ns.append(n)
        times.append(statistics.median(runs))
        print(f"{n},{rep.answer},{times[-1]:.6f}", flush=True)
    if len(ns) > 1:
        slope = np.polyfit(ns, np.log2(times), 1)[0]
        print(f"# log2(time) slope per item: {slope:.3f}")


if __name__ == "__main__":
    main()
