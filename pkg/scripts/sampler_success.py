"""Empirical success rates of the three witness samplers on planted instances,
plus a soundness sweep over instances with no packing."""

import argparse
from fractions import Fraction

import numpy as np

from binweaver.core import Instance, is_alpha_balanced, verify_solution
from binweaver.generators import GeneratorSpec, generate
from binweaver.solvers import (
    WitnessSearchConfig,
    solve_balanced_large_slack,
    solve_balanced_small_slack,
    solve_unbalanced_sampler,
)

SUITES = {
    "caseA": ("unbalanced-planted", solve_unbalanced_sampler),
    "caseB": ("tight-partition", solve_balanced_small_slack),
    "caseC": ("large-slack-planted", solve_balanced_large_slack),
}


def infeasible(rng: np.random.Generator, n: int, m: int) -> Instance:
    # multiples of 3 against capacities that are not, with matching totals
    while True:
        w = [3 * int(x) for x in rng.integers(1, 31, size=n)]
        caps = [3 * int(rng.integers(0, sum(w) // (3 * m) + 2)) + int(rng.integers(1, 3))
                for _ in range(m - 1)]
        last = sum(w) - sum(caps)
        if last >= 0 and last % 3:
            return Instance(tuple(w), tuple(caps + [last]))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--alpha", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    alpha = Fraction(args.alpha).limit_denominator(1000)

    print("suite,trials,hits,rate")
    for name, (kind, solver) in SUITES.items():
        hits = trials = 0
        for t in range(args.trials):
            seed = args.seed + t
            inst, sol = generate(GeneratorSpec(kind, args.n, m=args.m, seed=seed, alpha=alpha))
            # the small-slack sampler only targets balanced packings
            if name == "caseB" and not is_alpha_balanced(inst, sol, alpha):
                continue
            trials += 1
            rep = solver(inst, WitnessSearchConfig(alpha=alpha, seed=seed))
            hits += rep.answer == "yes" and verify_solution(inst, rep.certificate)
        print(f"{name},{trials},{hits},{hits / max(trials, 1):.3f}")

    rng = np.random.default_rng(args.seed)
    false_yes = 0
    for t in range(args.trials):
        inst = infeasible(rng, args.n, args.m)
        for _, solver in SUITES.values():
            false_yes += solver(inst, WitnessSearchConfig(alpha=alpha, seed=t)).answer == "yes"
    print(f"# false yes on {args.trials} infeasible instances: {false_yes}")


if __name__ == "__main__":
    main()
