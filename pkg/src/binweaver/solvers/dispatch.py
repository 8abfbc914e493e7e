"""Master dispatcher: few-sums DP, then the three samplers, then an exact fallback."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Sequence

from ..core import BudgetExceeded, Instance, SolveReport
from ..sums import NoCriticalPruner, as_fraction, count_distinct_sums, sums_threshold
from .exact import overloaded, solve_bruteforce, solve_distinct_sums_dp, solve_zeta_mobius
from .params import paper_parameters
from .sampling import (
    WitnessSearchConfig,
    solve_balanced_large_slack,
    solve_balanced_small_slack,
    solve_unbalanced_sampler,
)

ZETA_MAX_ITEMS = 26


@dataclass
class TraceEntry:
    case: str
    outcome: str  # yes | no | inconclusive | skipped | budget
    stats: dict[str, Any] = field(default_factory=dict)


@dataclass
class DispatcherTrace:
    entries: list[TraceEntry] = field(default_factory=list)

    def add(self, case: str, outcome: str, **stats) -> None:
        self.entries.append(TraceEntry(case, outcome, stats))

    @property
    def cases(self) -> list[str]:
        return [e.case for e in self.entries]

    def to_list(self) -> list[dict[str, Any]]:
        return [{"case": e.case, "outcome": e.outcome, "stats": e.stats} for e in self.entries]


def with_paper_defaults(cfg: WitnessSearchConfig, m: int) -> tuple[WitnessSearchConfig, dict]:
    params = paper_parameters(m)
    alpha = Fraction(params.alpha).limit_denominator(10**6)
    delta = Fraction(params.delta).limit_denominator(10**6)
    return replace(cfg, alpha=alpha, delta=delta), params.to_dict()


def _exact(inst: Instance, budget_nodes: int) -> SolveReport:
    if inst.n <= ZETA_MAX_ITEMS and 1 << inst.n <= budget_nodes:
        return solve_zeta_mobius(inst, budget_nodes)
    return solve_bruteforce(inst)


def solve_master(inst: Instance, cfg: WitnessSearchConfig | None = None,
                 budget_secs: float | None = None) -> SolveReport:
    """Always-exact solve: any sampler "yes" is certified, and when every
    sampler is inconclusive a deterministic solver decides.

    Case 0 fires when ``|w(2^[n])| < ceil(2**(delta n))``, which is exactly
    when no critical pruner exists for delta.
    """
    t0 = time.perf_counter()
    cfg = cfg or WitnessSearchConfig()
    trace = DispatcherTrace()
    if cfg.use_paper_defaults:
        cfg, params = with_paper_defaults(cfg, inst.m)
        trace.add("parameters", "info", **params)
    deadline = None if budget_secs is None else t0 + budget_secs

    def finish(rep: SolveReport, algorithm: str | None = None) -> SolveReport:
        rep.trace = trace.to_list()
        rep.algorithm = f"master/{algorithm or rep.algorithm}"
        rep.stats = {"seconds": time.perf_counter() - t0, "alpha": str(cfg.alpha),
                     "delta": str(cfg.delta)}
        return rep

    if overloaded(inst):
        trace.add("total-weight", "no")
        return finish(SolveReport("no", "total-weight"))

    threshold = sums_threshold(cfg.delta, inst.n)
    count = count_distinct_sums(inst.weights, limit=threshold)
    if count < threshold:
        try:
            rep = solve_distinct_sums_dp(inst)
            trace.add("case0", rep.answer, threshold=threshold, **rep.stats)
            return finish(rep)
        except BudgetExceeded as exc:
            trace.add("case0", "budget", reason=str(exc))
    else:
        trace.add("case0", "skipped", distinct_sums_at_least=count, threshold=threshold)

    stages: Sequence[tuple[str, Callable]] = (
        ("caseA", solve_unbalanced_sampler),
        ("caseB", solve_balanced_small_slack),
        ("caseC", solve_balanced_large_slack),
    )
    for name, solver in stages:
        if deadline is not None and time.perf_counter() > deadline:
            trace.add(name, "skipped", reason="time budget")
            continue
        try:
            rep = solver(inst, cfg)
        except (BudgetExceeded, NoCriticalPruner) as exc:
            trace.add(name, "budget" if isinstance(exc, BudgetExceeded) else "skipped",
                      reason=str(exc))
            continue
        outcome = "yes" if rep.is_yes else "inconclusive"
        trace.add(name, outcome, **rep.stats)
        if rep.is_yes:
            return finish(rep)

    if deadline is not None and time.perf_counter() > deadline:
        trace.add("fallback", "budget", reason="time budget")
        return finish(SolveReport("unknown", "none"))
    try:
        rep = _exact(inst, cfg.budget_nodes)
    except BudgetExceeded as exc:
        trace.add("fallback", "budget", reason=str(exc))
        return finish(SolveReport("unknown", "none"))
    trace.add("fallback", rep.answer, algorithm=rep.algorithm, **rep.stats)
    return finish(rep)


def largebins_observation(sizes: Sequence[int], alpha) -> bool:
    """For an alpha-balanced size vector with alpha < 1/(4m): either the two
    largest bins both lie in ``[(1/2 - alpha) n, (1/2 + alpha) n]`` or every
    bin has at most ``(1/2 - 1/(4m)) n`` items.
    """
    a = as_fraction(alpha)
    n, m = sum(sizes), len(sizes)
    if m < 2:
        return all(s <= (Fraction(1, 2) - Fraction(1, 4 * m)) * n for s in sizes)
    top = sorted(sizes, reverse=True)[:2]
    lo, hi = (Fraction(1, 2) - a) * n, (Fraction(1, 2) + a) * n
    if all(lo <= s <= hi for s in top):
        return True
    return all(s <= (Fraction(1, 2) - Fraction(1, 4 * m)) * n for s in sizes)
