"""Witness-sampling solvers for unbalanced, small-slack and large-slack solutions.

All three are one-sided: "yes" always carries a verified certificate, while
"no" only means no witness was found (reported as answer "unknown").
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..core import BudgetExceeded, ContractError, Instance, SolveReport
from ..lattice import (
    DEFAULT_NODE_BUDGET,
    SetFamily,
    cover_positive_on,
    divide_feasibility_down,
    down_closure,
    indicator_at_most,
    mask_weights,
    popcounts_full,
    random_primes,
    subset_sums_full,
)
from ..sums import as_fraction, critical_pruner, distinct_sums, pruned
from .exact import BinRule, _report, overloaded, split_items
from .params import g_param

CASE_A, CASE_B, CASE_C = 1, 2, 3


@dataclass
class WitnessSearchConfig:
    alpha: Fraction | float = Fraction(1, 5)
    delta: Fraction | float = Fraction(3, 10)
    family_size: int = 4096  # cap on the number of sampled witness sets
    seed: int = 0
    budget_nodes: int = DEFAULT_NODE_BUDGET
    guess_budget: int = 4096  # cap on guess tuples tried by the large-slack solver
    exact_counts: bool = False  # exact integers instead of two random primes
    use_paper_defaults: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.alpha = as_fraction(self.alpha)
        self.delta = as_fraction(self.delta)
        if self.family_size < 1:
            raise ContractError("family_size must be at least 1")
        if not 0 <= self.alpha <= Fraction(1, 2):
            raise ContractError(f"alpha={self.alpha} outside [0, 1/2]")
        if not 0 < self.delta < 1:
            raise ContractError(f"delta={self.delta} outside (0, 1)")


def task_rng(seed: int, case: int, task: int = 0) -> np.random.Generator:
    """Independent stream for one task; identical regardless of scheduling."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(case, task)))


def sample_half_masks(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` i.i.d. uniform subsets of size ``n // 2``, in sample order."""
    if count < 1:
        raise ContractError("count must be at least 1")
    k = n // 2
    picks = np.argsort(rng.random((count, n)), axis=1)[:, :k]
    return (np.int64(1) << picks.astype(np.int64)).sum(axis=1, dtype=np.int64)


def sample_half_sets(n: int, count: int, rng: np.random.Generator) -> SetFamily:
    return SetFamily(n, sample_half_masks(n, count, rng))


def family_size(exponent: float, cap: int) -> tuple[int, bool]:
    """``min(ceil(2**exponent), cap)`` and whether the cap was binding."""
    want = math.inf if exponent > 1000 else math.ceil(2.0 ** exponent)
    return (cap, True) if want > cap else (int(want), False)


def _primes(cfg: WitnessSearchConfig, rng: np.random.Generator):
    return None if cfg.exact_counts else random_primes(rng)


def _best_below(feasible: np.ndarray, fam: SetFamily, weights: np.ndarray):
    """For X in a down-closed family: heaviest feasible Y subset of X and its weight."""
    dtype = object if len(weights) and int(weights.max()) >= 1 << 62 else np.int64
    best = np.where(feasible, weights.astype(dtype), -1)
    arg = np.where(feasible, fam.masks, -1)
    for idx, pred in fam.sweeps():
        better = best[pred] > best[idx]
        tgt = idx[better]
        best[tgt] = best[pred[better]]
        arg[tgt] = arg[pred[better]]
    return best, arg


def _certify(inst: Instance, parts: dict[int, int], t0: float, algo: str, **stats) -> SolveReport:
    bins = [parts.get(j, 0) for j in range(inst.m)]
    return _report(inst, algo, bins, t0, **stats)


def _split(inst: Instance, mask: int, bins: Sequence[int], budget: int) -> dict[int, int]:
    rules = [BinRule(inst.weights, inst.capacities[j]) for j in bins]
    parts = split_items(mask, rules, inst.n, budget)
    if parts is None:
        raise AssertionError("witness side reported divisible but no split exists")
    return dict(zip(bins, parts))


def _unknown(algo: str, t0: float, **stats) -> SolveReport:
    stats["seconds"] = time.perf_counter() - t0
    return SolveReport("unknown", algo, None, stats)


# --- unbalanced solutions ---------------------------------------------------


def solve_unbalanced_sampler(inst: Instance, cfg: WitnessSearchConfig,
                             witnesses: Sequence[int] = ()) -> SolveReport:
    """Search random half-size sets for an (L, R)-witness with one bin b left over.

    ``witnesses`` are extra masks appended to the sample (for tests that
    force a known witness into the family).
    """
    t0 = time.perf_counter()
    algo = "caseA"
    n, m = inst.n, inst.m
    if overloaded(inst):
        return SolveReport("no", algo, None, {"short_circuit": True})
    size, capped = family_size((1 - 2 * float(cfg.alpha)) * n, cfg.family_size)
    rng = task_rng(cfg.seed, CASE_A)
    order = np.concatenate([sample_half_masks(n, size, rng),
                            np.asarray(witnesses, dtype=np.int64)])
    primes = _primes(cfg, rng)
    fam = SetFamily(n, order)
    down = down_closure(fam, cfg.budget_nodes)
    comp = down_closure(fam.complement(), cfg.budget_nodes)  # mirror of the up-closure
    w_down = mask_weights(down.masks, inst.weights)
    w_comp = mask_weights(comp.masks, inst.weights)
    pos_w = down.index_of(order)
    pos_c = comp.index_of(order ^ inst.full)
    total = sum(inst.weights)
    stats = dict(family=size, family_capped=capped, down=len(down), up=len(comp), tried=0)

    for b in range(m):
        others = [j for j in range(m) if j != b]
        for pick in itertools.product((0, 1), repeat=len(others)):
            L = [j for j, s in zip(others, pick) if s == 0]
            R = [j for j, s in zip(others, pick) if s == 1]
            stats["tried"] += 1
            feas_l = divide_feasibility_down(inst, L, down, primes, check=False)
            feas_r = divide_feasibility_down(inst, R, comp, primes, check=False)
            l_star, l_arg = _best_below(feas_l, down, w_down)
            r_star, r_arg = _best_below(feas_r, comp, w_comp)
            slack = total - l_star[pos_w] - r_star[pos_c]
            hit = np.flatnonzero(slack <= inst.capacities[b])
            if len(hit):
                t = hit[0]
                xl, xr = int(l_arg[pos_w[t]]), int(r_arg[pos_c[t]])
                parts = _split(inst, xl, L, cfg.budget_nodes)
                parts.update(_split(inst, xr, R, cfg.budget_nodes))
                parts[b] = inst.full ^ xl ^ xr
                stats.update(bin=b, L=L, R=R, witness=int(order[t]))
                return _certify(inst, parts, t0, algo, **stats)
    return _unknown(algo, t0, **stats)


def lr_witness_masks(bin_masks: Sequence[int], n: int) -> np.ndarray:
    """Every ``n // 2``-subset W that is an (L, R)-witness of the given solution.

    W qualifies when, for some bin b, every other bin lies entirely inside
    or entirely outside W; i.e. at most one bin straddles W.
    """
    masks = np.flatnonzero(popcounts_full(n) == n // 2).astype(np.int64)
    straddling = np.zeros(len(masks), dtype=np.int64)
    for s in bin_masks:
        s = np.int64(s)
        inside = (s & ~masks) == 0
        outside = (s & masks) == 0
        straddling += ~(inside | outside)
    return masks[straddling <= 1]


# --- balanced, many small-slack items ---------------------------------------


def window_bounds(n: int, alpha) -> tuple[int, int]:
    """Integer sizes in ``[(1/2 - alpha) n, (1/2 + alpha) n]``."""
    a = as_fraction(alpha)
    lo = math.ceil((Fraction(1, 2) - a) * n)
    hi = math.floor((Fraction(1, 2) + a) * n)
    return max(lo, 0), min(hi, n)


def pruned_interval(cap_sum: int, shift: int, nbins: int, n: int) -> tuple[int, int]:
    """Integer range of pruned sums v with
    ``cap_sum / 2**shift - (nbins + 1) n <= v <= cap_sum / 2**shift``.

    Both endpoints are included.
    """
    hi = cap_sum >> shift
    lo = -((-cap_sum) >> shift) - (nbins + 1) * n
    return lo, hi


def _in_range(values: np.ndarray, lo: int, hi: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.uint64)
    if hi < 0 or lo > hi:
        return np.zeros(len(values), dtype=bool)
    ok = values <= np.uint64(min(hi, (1 << 64) - 1))
    if lo > 0:
        ok &= values >= np.uint64(lo)
    return ok


def small_slack_candidates(inst: Instance, L: Sequence[int], theta: int, l: int,
                           alpha, budget: int) -> np.ndarray:
    """All W with |W| in the alpha window and w_theta(W) in the pruned interval."""
    n = inst.n
    if 1 << n > budget:
        raise BudgetExceeded(f"direct enumeration of 2^{n} sets exceeds budget {budget}")
    lo, hi = window_bounds(n, alpha)
    pc = popcounts_full(n)
    ok = (pc >= lo) & (pc <= hi)
    wt = subset_sums_full(pruned(inst.weights, theta, l).values)
    cap_sum = sum(inst.capacities[j] for j in L)
    ok &= _in_range(wt, *pruned_interval(cap_sum, l - theta, len(L), n))
    return np.flatnonzero(ok).astype(np.int64)


def solve_balanced_small_slack(inst: Instance, cfg: WitnessSearchConfig) -> SolveReport:
    """Enumerate every candidate witness for each bipartition (L, R) of the bins."""
    t0 = time.perf_counter()
    algo = "caseB"
    n, m = inst.n, inst.m
    if overloaded(inst):
        return SolveReport("no", algo, None, {"short_circuit": True})
    crit = critical_pruner(inst.weights, cfg.delta)
    primes = _primes(cfg, task_rng(cfg.seed, CASE_B))
    stats = dict(theta=crit.theta, l=crit.l, partitions=0, candidates=0)
    for pick in itertools.product((0, 1), repeat=m):
        L = [j for j in range(m) if pick[j] == 0]
        R = [j for j in range(m) if pick[j] == 1]
        stats["partitions"] += 1
        cands = small_slack_candidates(inst, L, crit.theta, crit.l, cfg.alpha, cfg.budget_nodes)
        stats["candidates"] += len(cands)
        if not len(cands):
            continue
        fam = SetFamily(n, cands)
        down = down_closure(fam, cfg.budget_nodes)
        comp = down_closure(fam.complement(), cfg.budget_nodes)
        feas_l = divide_feasibility_down(inst, L, down, primes, check=False)[down.index_of(cands)]
        feas_r = divide_feasibility_down(inst, R, comp, primes, check=False)[
            comp.index_of(cands ^ inst.full)]
        hit = np.flatnonzero(feas_l & feas_r)
        if len(hit):
            W = int(cands[hit[0]])
            parts = _split(inst, W, L, cfg.budget_nodes)
            parts.update(_split(inst, inst.full ^ W, R, cfg.budget_nodes))
            stats.update(L=L, R=R, witness=W)
            return _certify(inst, parts, t0, algo, **stats)
    return _unknown(algo, t0, **stats)


# --- balanced, few small-slack items ----------------------------------------


class LargeSlackContext:
    """Witness family, closures and weight tables shared by every guess."""

    def __init__(self, inst: Instance, theta: int, l: int, order: np.ndarray,
                 primes, budget_nodes: int):
        self.inst, self.theta, self.l = inst, theta, l
        self.shift = l - theta
        self.wt = pruned(inst.weights, theta, l).values
        self.order = order
        self.primes = primes
        self.budget = budget_nodes
        fam = SetFamily(inst.n, order)
        self.down = down_closure(fam, budget_nodes)
        self.comp = down_closure(fam.complement(), budget_nodes)
        self.pos_w = self.down.index_of(order)
        self.pos_c = self.comp.index_of(order ^ inst.full)
        self.true_d = mask_weights(self.down.masks, inst.weights)
        self.true_c = mask_weights(self.comp.masks, inst.weights)
        self.prun_d = mask_weights(self.down.masks, self.wt)
        self.prun_c = mask_weights(self.comp.masks, self.wt)

    def far_caps(self, M: Sequence[int], a: Sequence[int]) -> list[int]:
        """Pruned capacity left on the complement side: ``c_j / 2**shift - n - a_j``, floored."""
        return [(self.inst.capacities[j] >> self.shift) - self.inst.n - aj for j, aj in zip(M, a)]

    def attempt(self, r: int, L: Sequence[int], M: Sequence[int],
                a: Sequence[int]) -> tuple[int, dict[int, int]] | None:
        """First sampled W with l_W = r_W = 1 for this guess, with the assembled bins."""
        inst, caps = self.inst, self.inst.capacities
        bar = self.far_caps(M, a)
        ind_l = ([indicator_at_most(self.true_d, caps[j]) for j in L]
                 + [indicator_at_most(self.prun_d, aj) for aj in a])
        ind_r = ([indicator_at_most(self.true_c, caps[r])]
                 + [indicator_at_most(self.prun_c, bj) for bj in bar])
        ok = cover_positive_on(ind_l, self.down, self.primes)[self.pos_w]
        ok &= cover_positive_on(ind_r, self.comp, self.primes)[self.pos_c]
        hit = np.flatnonzero(ok)
        if not len(hit):
            return None
        W = int(self.order[hit[0]])
        left = split_items(W, [BinRule(inst.weights, caps[j]) for j in L]
                           + [BinRule(self.wt, aj) for aj in a], inst.n, self.budget)
        right = split_items(inst.full ^ W, [BinRule(inst.weights, caps[r])]
                            + [BinRule(self.wt, bj) for bj in bar], inst.n, self.budget)
        if left is None or right is None:
            raise AssertionError("witness side reported divisible but no split exists")
        parts = dict(zip(L, left[:len(L)]))
        parts[r] = right[0]
        for j, x, y in zip(M, left[len(L):], right[1:]):
            parts[j] = x | y
        return W, parts


def solve_balanced_large_slack(inst: Instance, cfg: WitnessSearchConfig,
                               witnesses: Sequence[int] = ()) -> SolveReport:
    """Guess pruned loads a_j of the M bins on the witness side, then test
    both sides by cover-product positivity with true and pruned capacities.
    """
    t0 = time.perf_counter()
    algo = "caseC"
    n, m = inst.n, inst.m
    if overloaded(inst):
        return SolveReport("no", algo, None, {"short_circuit": True})
    crit = critical_pruner(inst.weights, cfg.delta)
    size, capped = family_size((1 - g_param(m)) * n, cfg.family_size)
    rng = task_rng(cfg.seed, CASE_C)
    order = np.concatenate([sample_half_masks(n, size, rng),
                            np.asarray(witnesses, dtype=np.int64)])
    ctx = LargeSlackContext(inst, crit.theta, crit.l, order, _primes(cfg, rng), cfg.budget_nodes)
    values = [int(v) for v in distinct_sums(ctx.wt)]
    stats = dict(theta=crit.theta, l=crit.l, family=size, family_capped=capped,
                 down=len(ctx.down), up=len(ctx.comp), sums_theta=len(values), guesses=0)

    for r in range(m):
        others = [j for j in range(m) if j != r]
        for pick in itertools.product((0, 1), repeat=len(others)):
            L = [j for j, s in zip(others, pick) if s == 0]
            M = [j for j, s in zip(others, pick) if s == 1]
            # a guess leaving a negative far cap admits no split, so it is never tried
            ranges = [[v for v in values if v <= ctx.far_caps([j], [0])[0]] for j in M]
            for a in itertools.product(*ranges):
                if stats["guesses"] >= cfg.guess_budget:
                    stats["guess_budget_hit"] = True
                    return _unknown(algo, t0, **stats)
                stats["guesses"] += 1
                found = ctx.attempt(r, L, M, a)
                if found is not None:
                    W, parts = found
                    stats.update(R=[r], L=L, M=M, guess=list(a), witness=W)
                    return _certify(inst, parts, t0, algo, **stats)
    return _unknown(algo, t0, **stats)
