"""``binweaver`` command line.

Exit codes: 0 yes, 1 no, 2 unknown or budget, 64 usage error, 65 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import entropy, lo_lab
from .bench import BenchSuite, rows_to_csv, rows_to_json, run_bench, SOLVERS
from .core import (
    BudgetExceeded,
    ContractError,
    InstanceFormatError,
    Instance,
    SolveReport,
    Solution,
    parse_instance,
    serialize_instance,
    verify_solution,
)
from .generators import KINDS, GeneratorSpec, generate
from .sums import NoCriticalPruner, bit_length_param, level_counts, sum_counts
from .solvers import WitnessSearchConfig, solve_master
from .lattice import DEFAULT_NODE_BUDGET

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65
ANSWER_CODES = {"yes": EXIT_YES, "no": EXIT_NO, "unknown": EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, default=str))


# --- subcommands ---------------------------------------------------------------


def _config(args) -> WitnessSearchConfig:
    kw = dict(seed=args.seed, budget_nodes=args.budget_nodes,
              use_paper_defaults=args.paper_defaults)
    if args.alpha is not None:
        kw["alpha"] = args.alpha
    if args.delta is not None:
        kw["delta"] = args.delta
    if args.samples is not None:
        kw["family_size"] = args.samples
    return WitnessSearchConfig(**kw)


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    cfg = _config(args)
    try:
        if args.algo == "auto":
            rep = solve_master(inst, cfg, budget_secs=args.budget_secs)
        else:
            rep = SOLVERS[args.algo](inst, cfg)
    except (BudgetExceeded, NoCriticalPruner) as exc:
        rep = SolveReport("unknown", args.algo, stats={"reason": str(exc)})
    _emit(rep.to_dict())
    return ANSWER_CODES[rep.answer]


def analyze_record(inst: Instance) -> dict:
    counts = level_counts(inst.weights)
    rec = {"n": inst.n, "l": bit_length_param(inst.weights), "level_counts": counts,
           "beta": None, "beta_value": None}
    try:
        sums, mult = sum_counts(inst.weights)
        k = int(mult.argmax())
        rec["beta"], rec["beta_value"] = int(mult[k]), int(sums[k])
    except BudgetExceeded:
        pass
    return rec


def cmd_analyze(args) -> int:
    rec = analyze_record(parse_instance(_read(args.instance)))
    if args.format == "csv":
        print("n,l,level_counts,beta,beta_value")
        print(f"{rec['n']},{rec['l']},\"{' '.join(map(str, rec['level_counts']))}\","
              f"{'' if rec['beta'] is None else rec['beta']},"
              f"{'' if rec['beta_value'] is None else rec['beta_value']}")
    else:
        _emit(rec)
    return 0


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    text = _read(args.solution).split()
    try:
        sol = Solution(tuple(int(t) for t in text))
    except ValueError:
        raise InstanceFormatError("solution must be whitespace-separated bin indices") from None
    try:
        ok = verify_solution(inst, sol)
    except ContractError as exc:
        raise InstanceFormatError(str(exc)) from None
    _emit({"valid": ok})
    return EXIT_YES if ok else EXIT_NO


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.kind, args.n, m=args.m, bound=args.bound, seed=args.seed,
                         alpha=args.alpha, delta=args.delta)
    inst, planted = generate(spec)
    if args.json:
        doc = {"weights": list(inst.weights), "capacities": list(inst.capacities)}
        if planted:
            doc["planted"] = list(planted.assignment)
        print(json.dumps(doc))
    else:
        print(serialize_instance(inst, f"{args.kind} n={args.n} m={args.m} seed={args.seed}"), end="")
    if args.solution_out and planted:
        with open(args.solution_out, "w", encoding="utf-8") as fh:
            fh.write(" ".join(map(str, planted.assignment)) + "\n")
    return 0


def cmd_lo_scan(args) -> int:
    cfg = lo_lab.ScanConfig(args.kind, (args.n_min, args.n_max), trials=args.trials,
                            seed=args.seed, bound=args.bound)
    sys.stdout.write(lo_lab.records_to_csv(lo_lab.tradeoff_scan(cfg)))
    return 0


def cmd_lemma_check(args) -> int:
    reports = entropy.run_checkers(args.names or None)
    _emit([r.to_dict() for r in reports])
    return 0 if all(r.passed for r in reports) else 1


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def cmd_bench(args) -> int:
    suite = BenchSuite(kinds=tuple(args.kinds.split(",")), n_values=_ints(args.n_values), m=args.m,
                       seeds=_ints(args.seeds), solvers=tuple(args.solvers.split(",")),
                       repeats=args.repeats, bound=args.bound,
                       config=WitnessSearchConfig(seed=args.seed, budget_nodes=args.budget_nodes))
    rows = run_bench(suite, parallel=args.parallel)
    sys.stdout.write(rows_to_json(rows) if args.format == "json" else rows_to_csv(rows))
    return 0


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    seed = _env_int("BINWEAVER_SEED", 0)
    budget = _env_int("BINWEAVER_BUDGET_NODES", DEFAULT_NODE_BUDGET)
    p = _Parser(prog="binweaver", description="Exact Bin Packing solvers and experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an instance and print a JSON report")
    s.add_argument("instance", help="instance file, or - for stdin")
    s.add_argument("--algo", default="auto", choices=["auto", "bruteforce", "zeta", "dp",
                                                      "caseA", "caseB", "caseC"])
    s.add_argument("--alpha", type=float)
    s.add_argument("--delta", type=float)
    s.add_argument("--samples", type=int, help="cap on sampled witness sets")
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--budget-nodes", type=int, default=budget)
    s.add_argument("--budget-secs", type=float)
    s.add_argument("--paper-defaults", action="store_true",
                   help="derive alpha and delta from the number of bins")
    s.set_defaults(func=cmd_solve)

    a = sub.add_parser("analyze", help="pruning levels, distinct sums and beta")
    a.add_argument("instance")
    a.add_argument("--format", choices=["json", "csv"], default="json")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="check a solution (bin index per item)")
    v.add_argument("instance")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--kind", choices=KINDS, default="random-bounded")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--bound", type=int, default=1000)
    g.add_argument("--seed", type=int, default=seed)
    g.add_argument("--alpha", type=float, default=0.2)
    g.add_argument("--delta", type=float, default=0.3)
    g.add_argument("--json", action="store_true")
    g.add_argument("--solution-out", help="write the planted solution here")
    g.set_defaults(func=cmd_gen)

    lo = sub.add_parser("lo-scan", help="beta versus distinct-sum tradeoff scan (CSV)")
    lo.add_argument("--kind", choices=lo_lab.SCAN_KINDS, default="random-bounded")
    lo.add_argument("--n-min", type=int, default=8)
    lo.add_argument("--n-max", type=int, default=16)
    lo.add_argument("--trials", type=int, default=1)
    lo.add_argument("--seed", type=int, default=seed)
    lo.add_argument("--bound", type=int, default=1000)
    lo.set_defaults(func=cmd_lo_scan)

    lc = sub.add_parser("lemma-check", help="run entropy inequality checkers (JSON)")
    lc.add_argument("names", nargs="*", help=f"subset of: {', '.join(entropy.CHECKERS)}")
    lc.set_defaults(func=cmd_lemma_check)

    b = sub.add_parser("bench", help="time solvers on generated instances")
    b.add_argument("--kinds", default="random-bounded")
    b.add_argument("--n-values", default="10,12,14")
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--seeds", default="0")
    b.add_argument("--solvers", default="zeta,dp")
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--bound", type=int, default=1000)
    b.add_argument("--seed", type=int, default=seed)
    b.add_argument("--budget-nodes", type=int, default=budget)
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.add_argument("--parallel", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ContractError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
