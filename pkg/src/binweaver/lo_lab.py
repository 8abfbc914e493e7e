"""Small-n experiments around concentrated subset sums: balanced vectors,
beta versus distinct-sum tradeoff scans and code-pair injectivity.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .core import BudgetExceeded, ContractError
from .entropy import ProbabilityVector, entropy
from .lattice import popcounts_full, subset_sums_full
from .sums import as_fraction, gf2_rank, sum_counts, xor_sum_counts

EXHAUSTIVE_LIMIT = 10**8
UDCP_MAX_ITEMS = 18


# --- balanced vectors ---------------------------------------------------------


@dataclass(frozen=True)
class DiscreteDistribution:
    omega: tuple
    p: ProbabilityVector

    def __post_init__(self):
        if not isinstance(self.p, ProbabilityVector):
            object.__setattr__(self, "p", ProbabilityVector(tuple(self.p)))
        if len(set(self.omega)) != len(self.omega):
            raise ContractError("omega values must be distinct")
        if len(self.omega) != self.p.k:
            raise ContractError("omega and p differ in length")

    @classmethod
    def uniform(cls, omega: Sequence) -> DiscreteDistribution:
        return cls(tuple(omega), ProbabilityVector((Fraction(1, len(omega)),) * len(omega)))

    def prob(self, value) -> Fraction:
        try:
            return self.p.p[self.omega.index(value)]
        except ValueError:
            return Fraction(0)

    @property
    def entropy(self) -> float:
        return entropy(self.p)


def _frac(x) -> Fraction:
    return as_fraction(x) if not isinstance(x, Fraction) else x


def is_gamma_balanced(v: Sequence, dist: DiscreteDistribution, gamma,
                      X: Iterable[int] | None = None) -> bool:
    """Every value's frequency on the coordinates X (0-based, default all)
    lies in the closed interval ``p(omega) +- gamma``."""
    idx = range(len(v)) if X is None else sorted(set(X))
    if not idx:
        raise ContractError("X must be nonempty")
    g = _frac(gamma)
    size = len(idx)
    freq: dict = {}
    for i in idx:
        freq[v[i]] = freq.get(v[i], 0) + 1
    for value in set(dist.omega) | set(freq):
        if abs(Fraction(freq.get(value, 0), size) - _frac(dist.prob(value))) > g:
            return False
    return True


def _admissible_counts(dist: DiscreteDistribution, gamma: Fraction, n: int) -> list[range]:
    out = []
    for q in dist.p.p:
        q = _frac(q)
        lo = max(0, math.ceil((q - gamma) * n))
        hi = min(n, math.floor((q + gamma) * n))
        out.append(range(lo, hi + 1))
    return out


def _count_multinomial(allowed: list[range], n: int) -> int:
    # DP over values: ways[t] = number of ways to fill t coordinates so far
    ways = {0: 1}
    for r in allowed:
        nxt: dict[int, int] = {}
        for used, w in ways.items():
            for c in r:
                if used + c > n:
                    break
                nxt[used + c] = nxt.get(used + c, 0) + w * comb(n - used, c)
        ways = nxt
    return ways.get(n, 0)


def _count_exhaustive(allowed: list[range], n: int, chunk: int = 1 << 20) -> int:
    s = len(allowed)
    total = s**n
    ok_tables = [np.zeros(n + 1, dtype=bool) for _ in allowed]
    for t, r in zip(ok_tables, allowed):
        t[list(r)] = True
    found = 0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        counts = np.zeros((s, len(codes)), dtype=np.int64)
        rest = codes.copy()
        for _ in range(n):
            digit = rest % s
            rest //= s
            counts[digit, np.arange(len(codes))] += 1
        good = np.ones(len(codes), dtype=bool)
        for j in range(s):
            good &= ok_tables[j][counts[j]]
        found += int(good.sum())
    return found


@dataclass
class BalancedCount:
    n: int
    gamma: Fraction
    count: int
    method: str
    log2_count: float
    log2_bound: float  # the proof's explicit bound

    @property
    def within_bound(self) -> bool:
        return self.log2_count <= self.log2_bound + 1e-9


def balanced_count_bound_log2(dist: DiscreteDistribution, gamma, n: int) -> float:
    """log2 of ``n^|Omega| * 2^((h + ln2 |Omega| gamma log2(1/gamma)) n)``."""
    g = float(_frac(gamma))
    s = len(dist.omega)
    spread = 0.0 if g == 0 else math.log(2) * s * g * math.log2(1 / g)
    return s * math.log2(n) + (dist.entropy + spread) * n


def count_balanced_vectors(dist: DiscreteDistribution, gamma, n: int,
                           method: str = "auto") -> BalancedCount:
    """Exact number of gamma-balanced vectors in Omega^n."""
    if n < 1:
        raise ContractError("n must be positive")
    g = _frac(gamma)
    allowed = _admissible_counts(dist, g, n)
    s = len(dist.omega)
    if method == "auto":
        method = "exhaustive" if s**n <= EXHAUSTIVE_LIMIT else "multinomial"
    if method == "exhaustive":
        if s**n > EXHAUSTIVE_LIMIT:
            raise BudgetExceeded(f"|Omega|^n = {s**n} exceeds {EXHAUSTIVE_LIMIT}")
        count = _count_exhaustive(allowed, n)
    elif method == "multinomial":
        count = _count_multinomial(allowed, n)
    else:
        raise ContractError(f"unknown method {method!r}")
    return BalancedCount(n, g, count, method, math.log2(count) if count else -math.inf,
                         balanced_count_bound_log2(dist, g, n))


# --- code pairs ---------------------------------------------------------------


@dataclass
class UDCPReport:
    n: int
    k: int
    tau: int
    popcount: int
    size_A: int
    size_B: int
    size_kB: int
    size_sum: int
    collisions: int
    sumset_bound_ok: bool

    @property
    def injective(self) -> bool:
        return self.collisions == 0 and self.size_sum == self.size_A * self.size_kB

    def to_dict(self) -> dict:
        return {**asdict(self), "injective": self.injective}


def _digits(masks: np.ndarray, n: int, base: int) -> np.ndarray:
    """Encode 0/1 masks as base-``base`` integers with one digit per item."""
    out = np.zeros(len(masks), dtype=np.int64)
    place = 1
    for i in range(n):
        out += ((masks >> i) & 1).astype(np.int64) * place
        place *= base
    return out


def code_pair(w: Sequence[int], tau: int) -> tuple[np.ndarray, np.ndarray, int]:
    """A: one mask per distinct sum within the popcount class holding the most
    distinct sums (smallest popcount on ties).  B: masks with sum exactly tau."""
    n = len(w)
    if n > UDCP_MAX_ITEMS:
        raise BudgetExceeded(f"code pairs enumerate 2^n masks; n limited to {UDCP_MAX_ITEMS}")
    sums = subset_sums_full(w)
    pcs = popcounts_full(n)
    masks = np.arange(1 << n, dtype=np.int64)
    B = masks[sums == np.uint64(tau)] if tau >= 0 else masks[:0]
    best, best_reps = 0, None
    for c in range(n + 1):
        in_class = pcs == c
        _, first = np.unique(sums[in_class], return_index=True)
        reps = masks[in_class][first]
        if best_reps is None or len(reps) > len(best_reps):
            best, best_reps = c, reps
    return np.sort(best_reps), B, best


def k_fold_sumset(B: np.ndarray, n: int, k: int, base: int) -> np.ndarray:
    """Distinct ``b_1 + ... + b_k`` in {0..k}^n, packed in the given base."""
    enc = _digits(B, n, base)
    out = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        out = np.unique((out[:, None] + enc[None, :]).ravel())
    return out


def udcp_injectivity_check(w: Sequence[int], tau: int, k: int) -> UDCPReport:
    """Check ``|A + k.B| = |A| |k.B|`` by materializing every sum."""
    if not 1 <= k <= 4:
        raise ContractError("k must lie in [1, 4]")
    n = len(w)
    A, B, pc = code_pair(w, tau)
    base = k + 2  # digits of a + b_1 + ... + b_k lie in {0..k+1}
    if base**n >= 1 << 62:
        raise BudgetExceeded("packed encoding would overflow int64")
    kB = k_fold_sumset(B, n, k, base) if len(B) else np.zeros(0, dtype=np.int64)
    total = (_digits(A, n, base)[:, None] + kB[None, :]).ravel()
    distinct = len(np.unique(total))
    bound_ok = len(kB) <= min(len(B) ** k, (k + 1) ** n)
    return UDCPReport(n, k, tau, pc, len(A), len(B), len(kB), distinct,
                      len(total) - distinct, bound_ok)


# --- tradeoff scans -------------------------------------------------------------

SCAN_KINDS = ("all-zero", "all-equal", "powers-of-two", "random-bounded", "low-rank",
              "binary-matrix")
CSV_FIELDS = ("n", "tag", "beta", "sums", "beta_exp", "sums_exp")


@dataclass(frozen=True)
class TradeoffRecord:
    n: int
    tag: str
    beta: int
    sums: int
    beta_exp: float
    sums_exp: float
    trial: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def row(self) -> dict:
        return {k: getattr(self, k) for k in CSV_FIELDS}


@dataclass(frozen=True)
class ScanConfig:
    kind: str
    n_range: tuple[int, int]  # inclusive
    trials: int = 1
    seed: int = 0
    bound: int = 1000
    rank: int = 3  # low-rank: number of base values
    dim: int = 8  # binary-matrix: vector dimension
    beta_floor: float = 0.9
    sums_ceiling: float = 0.5

    def __post_init__(self):
        if self.kind not in SCAN_KINDS:
            raise ContractError(f"unknown scan kind {self.kind!r}")
        lo, hi = self.n_range
        if not 1 <= lo <= hi <= 24:
            raise ContractError("n range must lie within [1, 24]")


def scan_weights(cfg: ScanConfig, n: int, rng: np.random.Generator) -> list[int]:
    if cfg.kind == "all-zero":
        return [0] * n
    if cfg.kind == "all-equal":
        return [1] * n
    if cfg.kind == "powers-of-two":
        return [1 << i for i in range(n)]
    if cfg.kind == "random-bounded":
        return [int(x) for x in rng.integers(1, cfg.bound + 1, size=n)]
    if cfg.kind == "low-rank":
        base = rng.integers(1, cfg.bound + 1, size=cfg.rank)
        coeff = rng.integers(0, 2, size=(n, cfg.rank))
        return [int(x) for x in coeff @ base]
    return [int(x) for x in rng.integers(0, 1 << cfg.dim, size=n)]


def _record(n: int, tag: str, b: int, s: int, trial: int, **extra) -> TradeoffRecord:
    return TradeoffRecord(n, tag, b, s, math.log2(b) / n, math.log2(s) / n, trial, extra)


@dataclass
class F2Identity:
    beta: int
    sums: int
    rank: int
    n: int

    @property
    def holds(self) -> bool:
        return self.beta * self.sums == 1 << self.n and self.sums == 1 << self.rank


def f2_identity(vectors: Sequence[int], dim: int) -> F2Identity:
    """Over GF(2)^dim the subset-XOR map is linear, so ``beta * |sums| = 2^n``."""
    counts = xor_sum_counts(vectors, dim)
    return F2Identity(int(counts.max()), int((counts > 0).sum()), gf2_rank(vectors), len(vectors))


def tradeoff_scan(cfg: ScanConfig) -> list[TradeoffRecord]:
    """One record per (n, trial); trial t uses its own seeded stream."""
    records = []
    lo, hi = cfg.n_range
    for n in range(lo, hi + 1):
        for t in range(cfg.trials):
            rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(n, t)))
            w = scan_weights(cfg, n, rng)
            if cfg.kind == "binary-matrix":
                ident = f2_identity(w, cfg.dim)
                records.append(_record(n, cfg.kind, ident.beta, ident.sums, t,
                                       rank=ident.rank, identity=ident.holds))
            else:
                _, counts = sum_counts(w)
                records.append(_record(n, cfg.kind, int(counts.max()), len(counts), t))
    return records


def concentration_outliers(records: Iterable[TradeoffRecord], beta_floor: float = 0.9,
                           sums_ceiling: float = 0.5) -> list[TradeoffRecord]:
    """Records with highly concentrated sums yet many distinct sums (reported, never asserted)."""
    return [r for r in records if r.beta_exp >= beta_floor and r.sums_exp > sums_ceiling]


def records_to_csv(records: Iterable[TradeoffRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()
