"""Deterministic solvers: exhaustive search, zeta/Mobius counting, distinct-sums DP."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import BudgetExceeded, Instance, Solution, SolveReport, verify_solution
from ..lattice import (
    DEFAULT_NODE_BUDGET,
    cover_count_at_top,
    cover_positive_full,
    indicator_at_most,
    primes_for_bits,
    subset_sums_full,
)
from ..sums import distinct_sums

DEFAULT_SEARCH_NODES = 20_000_000
DEFAULT_DP_STATES = 5_000_000


def overloaded(inst: Instance) -> bool:
    return sum(inst.weights) > sum(inst.capacities)


def _report(inst: Instance, algorithm: str, bins: Sequence[int] | None, t0: float,
            **stats) -> SolveReport:
    stats["seconds"] = time.perf_counter() - t0
    if bins is None:
        return SolveReport("no", algorithm, None, stats)
    sol = Solution.from_bins(inst.n, bins)
    assert verify_solution(inst, sol), "solver produced an invalid certificate"
    return SolveReport("yes", algorithm, sol, stats)


# --- brute force ------------------------------------------------------------


def solve_bruteforce(inst: Instance, budget_nodes: int = DEFAULT_SEARCH_NODES) -> SolveReport:
    """Depth-first assignment of items (heaviest first) with failure memoization.

    Bins with equal residual capacity are interchangeable at a node, so only
    one of them is tried; failed (item index, residual multiset) states are
    remembered.
    """
    t0 = time.perf_counter()
    if overloaded(inst):
        return _report(inst, "bruteforce", None, t0, nodes=0, short_circuit=True)
    order = sorted(range(inst.n), key=lambda i: -inst.weights[i])
    w = [inst.weights[i] for i in order]
    residual = list(inst.capacities)
    choice = [0] * inst.n
    failed: set[tuple[int, tuple[int, ...]]] = set()
    nodes = 0

    def dfs(i: int) -> bool:
        nonlocal nodes
        if i == len(w):
            return True
        key = (i, tuple(sorted(residual)))
        if key in failed:
            return False
        nodes += 1
        if nodes > budget_nodes:
            raise BudgetExceeded(f"brute force exceeded {budget_nodes} nodes")
        tried = set()
        for j, r in enumerate(residual):
            if r < w[i] or r in tried:
                continue
            tried.add(r)
            residual[j] -= w[i]
            choice[i] = j
            if dfs(i + 1):
                return True
            residual[j] += w[i]
        failed.add(key)
        return False

    if not dfs(0):
        return _report(inst, "bruteforce", None, t0, nodes=nodes)
    bins = [0] * inst.m
    for pos, item in enumerate(order):
        bins[choice[pos]] |= 1 << item
    return _report(inst, "bruteforce", bins, t0, nodes=nodes)


# --- zeta / Mobius ----------------------------------------------------------


@dataclass(frozen=True)
class BinRule:
    """A bin constraint ``sum of weights[i] over the part <= cap``.

    Weights are per item over the whole universe; a negative cap admits no
    part at all, not even the empty one.
    """

    weights: tuple[int, ...]
    cap: int


def _indicators(items: list[int], rules: Sequence[BinRule]) -> list[np.ndarray]:
    out = []
    for rule in rules:
        sums = subset_sums_full([rule.weights[i] for i in items])
        out.append(indicator_at_most(sums, rule.cap).astype(np.int64))
    return out


def _expand(local: int, items: list[int]) -> int:
    mask = 0
    for b, item in enumerate(items):
        if local >> b & 1:
            mask |= 1 << item
    return mask


def split_items(mask: int, rules: Sequence[BinRule], n: int,
                budget_nodes: int = DEFAULT_NODE_BUDGET,
                decided: bool = False) -> list[int] | None:
    """Partition the items of ``mask`` into parts satisfying ``rules``, or None.

    Feasibility is the sign of the cover product of the rules' indicator
    functions at the top of the submask lattice.  A part is then peeled off
    for the last rule: any Y with the last rule satisfied whose complement
    is coverable by the remaining rules (positivity table computed modulo
    enough primes to be exact).  Repeat on the rest.
    """
    items = [i for i in range(n) if mask >> i & 1]
    k = len(items)
    if not rules:
        return [] if mask == 0 else None
    if 1 << k > budget_nodes:
        raise BudgetExceeded(f"lattice of 2^{k} sets exceeds node budget {budget_nodes}")
    ind = _indicators(items, rules)
    top = (1 << k) - 1
    if not decided and cover_count_at_top(ind, k) <= 0:
        return None

    parts = [0] * len(rules)
    while len(rules) > 1:
        d = len(rules)
        if d == 2:
            rest_ok = ind[0].astype(bool)
        else:
            rest_ok = cover_positive_full(ind[:-1], k, primes_for_bits(k * (d - 1) + 1))
        local = np.arange(1 << k, dtype=np.int64)
        cand = np.flatnonzero(ind[-1].astype(bool) & rest_ok[top ^ local])
        if len(cand) == 0:
            raise AssertionError("cover count positive but no part can be peeled")
        y = int(cand[-1])
        parts[d - 1] = _expand(y, items)
        items = [it for b, it in enumerate(items) if not y >> b & 1]
        k = len(items)
        top = (1 << k) - 1
        rules = rules[:-1]
        ind = _indicators(items, rules)
    if not ind[0][top]:
        raise AssertionError("peeling left an infeasible remainder")
    parts[0] = _expand(top, items)
    return parts


def solve_zeta_mobius(inst: Instance, budget_nodes: int = DEFAULT_NODE_BUDGET) -> SolveReport:
    """Exact answer from the cover product of the m capacity indicators at [n]."""
    t0 = time.perf_counter()
    if overloaded(inst):
        return _report(inst, "zeta", None, t0, lattice=0, short_circuit=True)
    rules = [BinRule(inst.weights, c) for c in inst.capacities]
    bins = split_items(inst.full, rules, inst.n, budget_nodes)
    return _report(inst, "zeta", bins, t0, lattice=1 << inst.n)


# --- distinct-sums dynamic program ------------------------------------------


def solve_distinct_sums_dp(inst: Instance, budget_states: int = DEFAULT_DP_STATES) -> SolveReport:
    """Reachable load vectors, item by item.

    Loads of the first m-1 bins are explicit; the last bin's load is the
    prefix weight minus their sum.  Every explicit load is a subset sum, so
    the table stays within ``|w(2^[n])|**(m-1)`` rows per level.
    """
    t0 = time.perf_counter()
    algo = "dp"
    if overloaded(inst):
        return _report(inst, algo, None, t0, states=0, short_circuit=True)
    n, m, w, c = inst.n, inst.m, inst.weights, inst.capacities
    if m == 1:
        return _report(inst, algo, [inst.full] if sum(w) <= c[0] else None, t0, states=1)

    sums_count = len(distinct_sums(w))
    # loads never exceed the total weight, so clamped caps fit in uint64
    total = sum(w)
    cap = np.array([min(x, total) for x in c[:-1]], dtype=np.uint64)
    last_cap = min(c[-1], total)
    levels = [np.zeros((1, m - 1), dtype=np.uint64)]
    prefix = 0
    peak = 1
    for i in range(n):
        cur = levels[-1]
        prefix += w[i]
        moves = []
        # item i to the implicit last bin
        keep = np.uint64(prefix) - cur.sum(axis=1, dtype=np.uint64) <= np.uint64(last_cap)
        moves.append(cur[keep])
        for j in range(m - 1):
            if w[i] > int(cap[j]):
                continue
            nxt = cur[cur[:, j] <= cap[j] - np.uint64(w[i])]  # boolean indexing copies
            nxt[:, j] += np.uint64(w[i])
            moves.append(nxt)
        nxt = np.unique(np.concatenate(moves), axis=0)
        peak = max(peak, len(nxt))
        if len(nxt) > budget_states:
            raise BudgetExceeded(f"DP exceeded {budget_states} states")
        levels.append(nxt)
        if len(nxt) == 0:
            return _report(inst, algo, None, t0, states=peak, distinct_sums=sums_count)

    state = levels[-1][0].copy()
    bins = [0] * m
    for i in range(n - 1, -1, -1):
        prev = levels[i]
        found = False
        for j in range(m - 1):
            if int(state[j]) < w[i]:
                continue
            cand = state.copy()
            cand[j] -= np.uint64(w[i])
            if (prev == cand).all(axis=1).any():
                state, found = cand, True
                bins[j] |= 1 << i
                break
        if not found:
            # must have come from the implicit bin with the same explicit loads
            assert (prev == state).all(axis=1).any()
            bins[m - 1] |= 1 << i
    return _report(inst, algo, bins, t0, states=peak, distinct_sums=sums_count)
