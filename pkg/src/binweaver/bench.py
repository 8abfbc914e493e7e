"""Timing harness: median wall time per (instance, solver), CSV or JSON rows."""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .core import BudgetExceeded, Instance, SolveReport, verify_solution
from .generators import GeneratorSpec, generate
from .sums import NoCriticalPruner
from .solvers import (
    WitnessSearchConfig,
    solve_balanced_large_slack,
    solve_balanced_small_slack,
    solve_bruteforce,
    solve_distinct_sums_dp,
    solve_master,
    solve_unbalanced_sampler,
    solve_zeta_mobius,
)

SolverFn = Callable[[Instance, WitnessSearchConfig], SolveReport]

SOLVERS: dict[str, SolverFn] = {
    "bruteforce": lambda inst, cfg: solve_bruteforce(inst),
    "zeta": lambda inst, cfg: solve_zeta_mobius(inst, cfg.budget_nodes),
    "dp": lambda inst, cfg: solve_distinct_sums_dp(inst),
    "caseA": solve_unbalanced_sampler,
    "caseB": solve_balanced_small_slack,
    "caseC": solve_balanced_large_slack,
    "master": lambda inst, cfg: solve_master(inst, cfg),
}

FIELDS = ("kind", "n", "m", "seed", "solver", "answer", "seconds", "nodes", "verified", "status")


@dataclass(frozen=True)
class BenchSuite:
    kinds: tuple[str, ...] = ("random-bounded",)
    n_values: tuple[int, ...] = (10, 12, 14)
    m: int = 2
    seeds: tuple[int, ...] = (0,)
    solvers: tuple[str, ...] = ("zeta", "dp")
    repeats: int = 3
    bound: int = 1000
    config: WitnessSearchConfig = field(default_factory=WitnessSearchConfig)

    def __post_init__(self):
        unknown = [s for s in self.solvers if s not in SOLVERS]
        if unknown:
            raise ValueError(f"unknown solver(s): {', '.join(unknown)}")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")


@dataclass
class BenchRow:
    kind: str
    n: int
    m: int
    seed: int
    solver: str
    answer: str
    seconds: float
    nodes: int | None
    verified: bool | None
    status: str  # ok | budget


def time_call(fn: Callable[[], object], repeats: int = 3) -> tuple[float, object]:
    """Median of ``repeats`` monotonic timings, with the last result."""
    times, result = [], None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), result


def _nodes(stats: dict) -> int | None:
    for key in ("nodes", "lattice", "states", "tried", "candidates"):
        if key in stats:
            return int(stats[key])
    return None


def _run_one(task: tuple[str, int, int, int, str, int, int, WitnessSearchConfig]) -> BenchRow:
    kind, n, m, seed, solver, repeats, bound, cfg = task
    inst, _ = generate(GeneratorSpec(kind, n, m=m, bound=bound, seed=seed))
    try:
        secs, rep = time_call(lambda: SOLVERS[solver](inst, cfg), repeats)
    except (BudgetExceeded, NoCriticalPruner):
        return BenchRow(kind, n, m, seed, solver, "unknown", float("nan"), None, None, "budget")
    verified = verify_solution(inst, rep.certificate) if rep.certificate else None
    return BenchRow(kind, n, m, seed, solver, rep.answer, secs, _nodes(rep.stats), verified, "ok")


def run_bench(suite: BenchSuite, parallel: bool = False) -> list[BenchRow]:
    tasks = [(k, n, suite.m, s, solver, suite.repeats, suite.bound, suite.config)
             for k in suite.kinds for n in suite.n_values for s in suite.seeds
             for solver in suite.solvers]
    if parallel:
        with ProcessPoolExecutor() as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(asdict(r))
    return buf.getvalue()


def rows_to_json(rows: Iterable[BenchRow]) -> str:
    return "\n".join(json.dumps(asdict(r)) for r in rows) + "\n"
