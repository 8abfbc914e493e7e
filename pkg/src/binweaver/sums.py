"""Subset-sum structure: distinct sums, bucket sizes, pruned weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np

from .core import BudgetExceeded, ContractError

DEFAULT_SUMS_BUDGET = 1 << 27
EXACT_ROOT_MAX_DEN = 1 << 16


class NoCriticalPruner(ValueError):
    """The full weight vector does not reach the distinct-sums threshold."""


def distinct_sums(w: Sequence[int], limit: int | None = None,
                  budget: int = DEFAULT_SUMS_BUDGET) -> np.ndarray:
    """Sorted distinct subset sums, built as ``W_i = W_{i-1} | (W_{i-1} + w_i)``.

    With ``limit`` the enumeration stops as soon as ``limit`` sums are known;
    the returned array is then a partial set whose size is ``>= limit``.
    """
    sums = np.zeros(1, dtype=np.uint64)
    for x in w:
        if x == 0:
            continue
        sums = np.union1d(sums, sums + np.uint64(x))
        if limit is not None and len(sums) >= limit:
            return sums
        if len(sums) > budget:
            raise BudgetExceeded(f"more than {budget} distinct sums")
    return sums


def count_distinct_sums(w: Sequence[int], limit: int | None = None) -> int:
    return len(distinct_sums(w, limit))


@dataclass(frozen=True)
class SumProfile:
    sums: np.ndarray
    count: int
    beta: int
    beta_value: int


def sum_counts(w: Sequence[int], max_items: int = 30) -> tuple[np.ndarray, np.ndarray]:
    """Distinct sums with the number of subsets attaining each."""
    if len(w) > max_items:
        raise BudgetExceeded(f"exact sum map limited to {max_items} items")
    sums = np.zeros(1, dtype=np.uint64)
    counts = np.ones(1, dtype=np.int64)
    for x in w:
        both = np.concatenate([sums, sums + np.uint64(x)])
        cnt = np.concatenate([counts, counts])
        sums, inv = np.unique(both, return_inverse=True)
        counts = np.zeros(len(sums), dtype=np.int64)
        np.add.at(counts, inv.ravel(), cnt)
    return sums, counts


def beta(w: Sequence[int]) -> tuple[int, int]:
    """Largest number of subsets sharing one sum, with the smallest such sum."""
    sums, counts = sum_counts(w)
    k = int(np.argmax(counts))
    return int(counts[k]), int(sums[k])


def sum_profile(w: Sequence[int]) -> SumProfile:
    sums, counts = sum_counts(w)
    k = int(np.argmax(counts))
    return SumProfile(sums, len(sums), int(counts[k]), int(sums[k]))


# --- pruned weights ---------------------------------------------------------


def bit_length_param(w: Sequence[int]) -> int:
    """``1 + ceil(log2 max w)``; 1 when every weight is zero."""
    top = max(w, default=0)
    if top <= 0:
        return 1
    return 1 + (top - 1).bit_length()


@dataclass(frozen=True)
class PrunedWeights:
    l: int
    s: int
    values: tuple[int, ...]

    @property
    def shift(self) -> int:
        return self.l - self.s


def pruned(w: Sequence[int], s: int, l: int | None = None) -> PrunedWeights:
    """Keep the ``s`` most significant of ``l`` bits: ``w_s(i) = w(i) >> (l - s)``."""
    if l is None:
        l = bit_length_param(w)
    if not 0 <= s <= l:
        raise ContractError(f"pruning level {s} outside [0, {l}]")
    return PrunedWeights(l, s, tuple(int(x) >> (l - s) for x in w))


def level_counts(w: Sequence[int]) -> list[int]:
    """``|w_s(2^[n])|`` for s = 0..l."""
    l = bit_length_param(w)
    return [count_distinct_sums(pruned(w, s, l).values) for s in range(l + 1)]


# --- thresholds 2**(delta n) -------------------------------------------------


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x)).limit_denominator(10**6)
    return Fraction(x)


def pow2_ceil(exponent) -> int:
    """Smallest integer >= ``2**exponent`` for a non-negative rational exponent."""
    e = as_fraction(exponent)
    if e < 0:
        raise ContractError("exponent must be non-negative")
    p, q = e.numerator, e.denominator
    if q <= EXACT_ROOT_MAX_DEN:
        root, exact = gmpy2.iroot(gmpy2.mpz(1) << p, q)
        return int(root) if exact else int(root) + 1
    # 2**(p/q) is irrational for reduced q > 1; a wide float pins its ceiling
    with gmpy2.context(gmpy2.get_context(), precision=p // q + 256):
        return int(gmpy2.ceil(gmpy2.exp2(gmpy2.mpq(p, q))))


def sums_threshold(delta, n: int) -> int:
    return pow2_ceil(as_fraction(delta) * n)


@dataclass(frozen=True)
class CriticalPruner:
    theta: int
    l: int
    count: int  # |w_theta(2^[n])|, possibly truncated at the threshold
    threshold: int


def critical_pruner(w: Sequence[int], delta=None, threshold: int | None = None) -> CriticalPruner:
    """Smallest pruning level whose distinct-sum count reaches the threshold.

    The threshold is either given directly or is ``ceil(2**(delta * n))``.
    Each level's enumeration stops early once the threshold is reached.
    """
    if threshold is None:
        if delta is None:
            raise ContractError("need delta or threshold")
        threshold = sums_threshold(delta, len(w))
    l = bit_length_param(w)
    for s in range(l + 1):
        c = count_distinct_sums(pruned(w, s, l).values, limit=threshold)
        if c >= threshold:
            return CriticalPruner(s, l, c, threshold)
    raise NoCriticalPruner(f"|w(2^[n])| below threshold {threshold}")


@dataclass(frozen=True)
class SmoothnessReport:
    counts: tuple[int, ...]
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def smoothness_check(w: Sequence[int]) -> SmoothnessReport:
    """Check ``|w_s|/(3n) <= |w_{s-1}| <= (3n/2)|w_s|`` for every level s >= 1."""
    n = len(w)
    counts = level_counts(w)
    bad = []
    for s in range(1, len(counts)):
        cur, prev = counts[s], counts[s - 1]
        if not (cur <= 3 * n * prev and 2 * prev <= 3 * n * cur):
            bad.append(s)
    return SmoothnessReport(tuple(counts), tuple(bad))


# --- GF(2) analogue ---------------------------------------------------------


def xor_sum_counts(w: Sequence[int], dim: int) -> np.ndarray:
    """``out[v]`` = number of subsets whose XOR of weight vectors equals ``v``."""
    if dim > 24:
        raise BudgetExceeded("xor table limited to 24 dimensions")
    counts = np.zeros(1 << dim, dtype=np.int64)
    counts[0] = 1
    idx = np.arange(1 << dim, dtype=np.int64)
    for x in w:
        counts = counts + counts[idx ^ x]
    return counts


def gf2_rank(vectors: Sequence[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)
