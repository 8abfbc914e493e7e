"""Subset-lattice algebra over item bitmasks.

Tables over the full lattice are numpy arrays indexed by the mask itself.
Tables over a set family are aligned with ``SetFamily.masks`` (sorted).
Counting is exact: int64 where provably safe, Python ints (object arrays)
otherwise, and residues modulo primes below 2**31 on the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import gmpy2
import numpy as np

from .core import BudgetExceeded, ContractError, Instance

DEFAULT_NODE_BUDGET = 1 << 26
_INT64_SAFE = 1 << 62


# --- subset sums over masks -------------------------------------------------


def subset_sums_full(weights: Sequence[int]) -> np.ndarray:
    """``out[X] = w(X)`` for every mask X over ``len(weights)`` items."""
    out = np.zeros(1, dtype=np.uint64)
    for w in weights:
        out = np.concatenate([out, out + np.uint64(w)])
    return out


def popcounts_full(n: int) -> np.ndarray:
    out = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        out = np.concatenate([out, out + 1])
    return out


def popcounts(masks: np.ndarray) -> np.ndarray:
    x = masks.astype(np.uint64)
    out = np.zeros(len(x), dtype=np.int64)
    while True:
        nz = x != 0
        if not nz.any():
            return out
        out += nz
        x &= x - np.uint64(1)


def mask_weights(masks: np.ndarray, weights: Sequence[int]) -> np.ndarray:
    """``w(X)`` for an array of masks, via 8-bit chunk lookup tables."""
    masks = np.asarray(masks, dtype=np.int64)
    total = np.zeros(len(masks), dtype=np.uint64)
    for start in range(0, len(weights), 8):
        table = subset_sums_full(weights[start:start + 8])
        chunk = (masks >> start) & (len(table) - 1)
        total += table[chunk]
    return total


def indicator_at_most(sums: np.ndarray, cap: int) -> np.ndarray:
    """``sums <= cap`` for uint64 sums and a possibly negative Python-int cap."""
    if cap < 0:
        return np.zeros(len(sums), dtype=bool)
    if cap >= 1 << 64:
        return np.ones(len(sums), dtype=bool)
    return sums <= np.uint64(cap)


# --- full-lattice transforms ------------------------------------------------


def _lattice_n(values: np.ndarray) -> int:
    size = len(values)
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ContractError(f"table size {size} is not a power of two")
    return n


def _working_copy(values, n: int, growth: int) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == object:
        return arr.copy()
    arr = arr.astype(np.int64)
    peak = int(np.abs(arr).max()) if len(arr) else 0
    if peak * growth < _INT64_SAFE:
        return arr.copy()
    return np.array([int(v) for v in arr], dtype=object)


def zeta_full(values) -> np.ndarray:
    """``(zeta f)(X) = sum over Y subset of X of f(Y)``, n in-place sweeps."""
    n = _lattice_n(values)
    a = _working_copy(values, n, 1 << n)
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] += v[:, 0, :]
    return a


def mobius_full(values) -> np.ndarray:
    """Inverse of ``zeta_full``: signed sum with sign ``(-1)**|X \\ Y|``."""
    n = _lattice_n(values)
    a = _working_copy(values, n, 1 << n)
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] -= v[:, 0, :]
    return a


def _zeta_mod(a: np.ndarray, n: int, p: int) -> None:
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] += v[:, 0, :]
        v[:, 1, :] %= p


def _mobius_mod(a: np.ndarray, n: int, p: int) -> None:
    for i in range(n):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] -= v[:, 0, :]
        v[:, 1, :] %= p


def cover_product(f, g) -> np.ndarray:
    """``h(Z) = sum over X | Y == Z of f(X) g(Y)`` via zeta, pointwise product, Mobius."""
    zf, zg = zeta_full(f), zeta_full(g)
    if zf.dtype != object and zg.dtype != object:
        peak = int(np.abs(zf).max()) * int(np.abs(zg).max())
        if peak << _lattice_n(zf) < _INT64_SAFE:
            return mobius_full(zf * zg)
    zf, zg = zf.astype(object), zg.astype(object)
    return mobius_full(zf * zg)


# --- primes -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _crt_primes(count: int) -> tuple[int, ...]:
    out, p = [], 1 << 31
    while len(out) < count:
        p = int(gmpy2.prev_prime(p))
        out.append(p)
    return tuple(out)


def primes_for_bits(bits: int) -> tuple[int, ...]:
    """Fixed primes below 2**31 whose product exceeds ``2**(bits + 1)``."""
    return _crt_primes(bits // 30 + 2)


def random_primes(rng: np.random.Generator, count: int = 2) -> tuple[int, ...]:
    out: list[int] = []
    while len(out) < count:
        p = int(gmpy2.next_prime(int(rng.integers(1 << 30, (1 << 31) - (1 << 20)))))
        if p not in out:
            out.append(p)
    return tuple(out)


def crt_signed(residues: Sequence[int], primes: Sequence[int]) -> int:
    """Symmetric CRT reconstruction into ``(-P/2, P/2]``."""
    total, modulus = 0, 1
    for r, p in zip(residues, primes):
        t = ((int(r) - total) * pow(modulus, -1, p)) % p
        total += modulus * t
        modulus *= p
    return total - modulus if total > modulus // 2 else total


def cover_count_at_top(indicators: Sequence[np.ndarray], n: int,
                       zetas: Sequence[np.ndarray] | None = None) -> int:
    """Exact ``(f_1 *c ... *c f_d)([n])`` for 0/1 tables over the full lattice.

    Only the top entry of the Mobius transform is needed, which is the signed
    sum ``sum_Y (-1)**(n - |Y|) prod_j (zeta f_j)(Y)``; it is reconstructed
    from residues modulo enough fixed primes to cover its magnitude.
    """
    if zetas is None:
        zetas = [zeta_full(f.astype(np.int64)) for f in indicators]
    if not zetas:
        return 1 if n == 0 else 0
    plus = (popcounts_full(n) & 1) == (n & 1)
    primes = primes_for_bits(n * (len(zetas) + 1) + 1)
    residues = []
    for p in primes:
        prod = zetas[0] % p
        for z in zetas[1:]:
            prod = (prod * (z % p)) % p
        residues.append((int(prod[plus].sum()) - int(prod[~plus].sum())) % p)
    return crt_signed(residues, primes)


def cover_positive_full(indicators: Sequence[np.ndarray], n: int,
                        primes: Sequence[int],
                        zetas: Sequence[np.ndarray] | None = None) -> np.ndarray:
    """Boolean table ``(f_1 *c ... *c f_d)(X) > 0`` over the full lattice.

    Positive iff nonzero modulo any of ``primes``; a zero count is zero
    modulo every prime, so the only possible error is a false "zero".
    """
    if zetas is None:
        zetas = [zeta_full(f.astype(np.int64)) for f in indicators]
    out = np.zeros(1 << n, dtype=bool)
    if not zetas:
        out[0] = True
        return out
    for p in primes:
        prod = zetas[0] % p
        for z in zetas[1:]:
            prod = (prod * (z % p)) % p
        _mobius_mod(prod, n, p)
        out |= prod != 0
    return out


# --- set families -----------------------------------------------------------


@dataclass(eq=False)
class SetFamily:
    """Deduplicated, sorted family of item bitmasks over a universe of size n."""

    n: int
    masks: np.ndarray
    _sweeps: list | None = field(default=None, repr=False)
    _layers: list | None = field(default=None, repr=False)

    def __post_init__(self):
        masks = np.unique(np.asarray(self.masks, dtype=np.int64))
        if len(masks) and (masks[0] < 0 or masks[-1] >> self.n):
            raise ContractError("family member outside the universe")
        self.masks = masks

    @classmethod
    def of(cls, n: int, members) -> "SetFamily":
        return cls(n, np.fromiter((int(x) for x in members), dtype=np.int64))

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, mask: int) -> bool:
        i = np.searchsorted(self.masks, mask)
        return bool(i < len(self.masks) and self.masks[i] == mask)

    def __iter__(self):
        return (int(x) for x in self.masks)

    def index_of(self, masks) -> np.ndarray:
        """Positions of ``masks`` in the family; raises if any is absent."""
        masks = np.asarray(masks, dtype=np.int64)
        idx = np.searchsorted(self.masks, masks)
        idx_c = np.minimum(idx, len(self.masks) - 1)
        if len(masks) and ((idx >= len(self.masks)).any() or (self.masks[idx_c] != masks).any()):
            raise ContractError("mask not in family")
        return idx

    def complement(self) -> "SetFamily":
        return SetFamily(self.n, self.masks ^ ((1 << self.n) - 1))

    def is_down_closed(self) -> bool:
        for i in range(self.n):
            bit = np.int64(1 << i)
            members = self.masks[(self.masks & bit) != 0]
            if len(members) and not np.isin(members ^ bit, self.masks).all():
                return False
        return True

    def is_up_closed(self) -> bool:
        return self.complement().is_down_closed()

    def sweeps(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per item i: positions of members containing i and of ``X \\ {i}``.

        Only meaningful for down-closed families.
        """
        if self._sweeps is None:
            out = []
            for i in range(self.n):
                bit = np.int64(1 << i)
                idx = np.flatnonzero(self.masks & bit)
                pred = np.searchsorted(self.masks, self.masks[idx] ^ bit)
                out.append((idx, pred))
            self._sweeps = out
        return self._sweeps

    def layers(self) -> list[np.ndarray]:
        """Member positions grouped by popcount, smallest first."""
        if self._layers is None:
            pc = popcounts(self.masks)
            self._layers = [np.flatnonzero(pc == k) for k in range(self.n + 1)]
        return self._layers


def _closure(fam: SetFamily, budget: int, up: bool) -> SetFamily:
    seen = fam.masks.copy()
    frontier = seen
    while len(frontier):
        grown = []
        for i in range(fam.n):
            bit = np.int64(1 << i)
            has = (frontier & bit) != 0
            grown.append(frontier[~has] | bit if up else frontier[has] ^ bit)
        cand = np.unique(np.concatenate(grown)) if grown else frontier[:0]
        frontier = cand[~np.isin(cand, seen, assume_unique=True)]
        seen = np.union1d(seen, frontier)
        if len(seen) > budget:
            raise BudgetExceeded(f"closure exceeds node budget {budget}")
    return SetFamily(fam.n, seen)


def down_closure(fam: SetFamily, budget: int = DEFAULT_NODE_BUDGET) -> SetFamily:
    """All subsets of members, by breadth-first removal of single items."""
    return _closure(fam, budget, up=False)


def up_closure(fam: SetFamily, budget: int = DEFAULT_NODE_BUDGET) -> SetFamily:
    """All supersets of members within the universe."""
    return _closure(fam, budget, up=True)


# --- closure-restricted transforms ------------------------------------------


def _require_down(fam: SetFamily) -> None:
    if not fam.is_down_closed():
        raise ContractError("family is not down-closed")


def _table_on(f, fam: SetFamily) -> np.ndarray:
    if callable(f):
        return np.array([int(f(int(x))) for x in fam.masks], dtype=object)
    arr = np.asarray(f)
    if len(arr) != len(fam):
        raise ContractError("table length does not match family")
    return arr


def zeta_on_closure(f: Callable[[int], int] | np.ndarray, fam: SetFamily,
                    check: bool = True) -> np.ndarray:
    """``(zeta f)(X)`` for every X of a down-closed family, aligned with ``fam.masks``."""
    if check:
        _require_down(fam)
    g = _table_on(f, fam)
    g = g.copy() if g.dtype == object else _working_copy(g, fam.n, len(fam) + 1)
    for idx, pred in fam.sweeps():
        g[idx] += g[pred]
    return g


def mobius_on_closure(f, fam: SetFamily, check: bool = True) -> np.ndarray:
    if check:
        _require_down(fam)
    g = _table_on(f, fam)
    g = g.copy() if g.dtype == object else _working_copy(g, fam.n, 1 << fam.n)
    for idx, pred in fam.sweeps():
        g[idx] -= g[pred]
    return g


def cover_positive_on(indicators: Sequence[np.ndarray], fam: SetFamily,
                      primes: Sequence[int] | None = None) -> np.ndarray:
    """Positivity of ``mu(prod_j zeta f_j)`` on a down-closed family.

    With ``primes=None`` the count is computed with Python integers (exact);
    otherwise it is declared positive iff nonzero modulo some prime.
    """
    out = np.zeros(len(fam), dtype=bool)
    if not indicators:
        # zero bins hold exactly the empty set
        if len(fam) and fam.masks[0] == 0:
            out[0] = True
        return out
    zetas = [zeta_on_closure(f.astype(np.int64), fam, check=False) for f in indicators]
    if primes is None:
        prod = zetas[0].astype(object)
        for z in zetas[1:]:
            prod = prod * z.astype(object)
        return mobius_on_closure(prod, fam, check=False) > 0
    sweeps = fam.sweeps()
    for p in primes:
        prod = zetas[0] % p
        for z in zetas[1:]:
            prod = (prod * (z % p)) % p
        for idx, pred in sweeps:
            prod[idx] = (prod[idx] - prod[pred]) % p
        out |= prod != 0
    return out


def divide_feasibility_down(inst: Instance, bins: Sequence[int], fam: SetFamily,
                            primes: Sequence[int] | None = None,
                            check: bool = True) -> np.ndarray:
    """For each X in a down-closed family: can X be divided over ``bins``?"""
    if check:
        _require_down(fam)
    sums = mask_weights(fam.masks, inst.weights)
    indicators = [indicator_at_most(sums, inst.capacities[j]) for j in bins]
    return cover_positive_on(indicators, fam, primes)


def divide_feasibility_up(inst: Instance, bins: Sequence[int], fam: SetFamily,
                          primes: Sequence[int] | None = None,
                          check: bool = True) -> np.ndarray:
    """For each X in an up-closed family: can ``[n] \\ X`` be divided over ``bins``?"""
    comp = fam.complement()
    res = divide_feasibility_down(inst, bins, comp, primes, check)
    return res[comp.index_of(fam.masks ^ ((1 << fam.n) - 1))]
