"""Entropy, binomial distributions and numeric checkers for the entropy inequalities.

Distribution masses are exact Fractions; they become floats only inside the
logarithm.  Every checker reports the smallest margin (bound minus value)
it saw, so tight spots are visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Sequence

import numpy as np

from .core import ContractError

TOL = 1e-12


@dataclass(frozen=True)
class ProbabilityVector:
    p: tuple

    def __post_init__(self):
        vals = tuple(self.p)
        if not vals:
            raise ContractError("empty probability vector")
        if any(x < 0 for x in vals):
            raise ContractError("negative probability")
        total = sum(vals)
        if abs(total - 1) > TOL:
            raise ContractError(f"probabilities sum to {float(total)}, not 1")
        object.__setattr__(self, "p", vals)

    @property
    def k(self) -> int:
        return len(self.p)


def _plogp(x) -> float:
    if x == 0:
        return 0.0
    if isinstance(x, Fraction):
        # log of numerator and denominator separately keeps tiny masses accurate
        return -float(x) * (math.log2(x.numerator) - math.log2(x.denominator))
    return -float(x) * math.log2(float(x))


def entropy(p: Sequence | ProbabilityVector) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    vec = p if isinstance(p, ProbabilityVector) else ProbabilityVector(tuple(p))
    return math.fsum(_plogp(x) for x in vec.p)


def h(x) -> float:
    """Binary entropy ``h(x) = h((x, 1 - x))``."""
    if not 0 <= x <= 1:
        raise ContractError(f"x={x} outside [0, 1]")
    return math.fsum((_plogp(x), _plogp(1 - x)))


def h_inverse(y: float, tol: float = TOL) -> float:
    """Inverse of h restricted to [0, 1/2], by bisection."""
    if not 0 <= y <= 1:
        raise ContractError(f"y={y} outside [0, 1]")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if h(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# --- binomial distributions -------------------------------------------------


@dataclass(frozen=True)
class BinomialSpec:
    """``Bin(k)`` when alpha is None, else the altered ``Bin(k, alpha)`` on {0..k+1}."""

    k: int
    alpha: Fraction | None = None

    def probabilities(self) -> tuple[Fraction, ...]:
        if self.alpha is None:
            return binomial(self.k)
        return altered_binomial(self.k, self.alpha)

    def entropy(self) -> float:
        return entropy(self.probabilities())


def binomial(k: int) -> tuple[Fraction, ...]:
    if k < 0:
        raise ContractError("k must be non-negative")
    return tuple(Fraction(comb(k, i), 1 << k) for i in range(k + 1))


def altered_binomial(k: int, alpha) -> tuple[Fraction, ...]:
    a = Fraction(alpha) if not isinstance(alpha, float) else Fraction(repr(alpha))
    if not 0 <= a <= 1:
        raise ContractError(f"alpha={alpha} outside [0, 1]")
    den = 1 << k
    return tuple((1 - a) * Fraction(comb(k, i), den) + a * Fraction(comb(k, i - 1) if i else 0, den)
                 for i in range(k + 2))


def h_bin(k: int) -> float:
    return entropy(binomial(k))


# --- checker reports --------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    cases: int = 0
    min_margin: float = math.inf
    failures: list[dict[str, Any]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, margin: float, tol: float = TOL, **where) -> None:
        self.cases += 1
        self.min_margin = min(self.min_margin, margin)
        if margin < -tol:
            self.failures.append({"margin": margin, **where})

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "cases": self.cases,
                "min_margin": self.min_margin, "failures": self.failures[:20],
                "details": self.details}


def _grid(points: int, lo: float = 0.0, hi: float = 1.0, open_ends: bool = False) -> np.ndarray:
    g = np.linspace(lo, hi, points + (2 if open_ends else 0))
    return g[1:-1] if open_ends else g


def binomial_entropy_gap_check(k_min: int = 9, k_max: int = 64) -> CheckReport:
    """``h(Bin(k)) - h(Bin(k-1)) <= log2(k) / sqrt(k)`` for k in [k_min, k_max]."""
    if k_min < 9 or k_max > 512 or k_min > k_max:
        raise ContractError("k range must lie within [9, 512]")
    rep = CheckReport("binomial_entropy_gap")
    prev = h_bin(k_min - 1)
    for k in range(k_min, k_max + 1):
        cur = h_bin(k)
        gap, bound = cur - prev, math.log2(k) / math.sqrt(k)
        rep.record(bound - gap, k=k, gap=gap, bound=bound)
        rep.details[k] = {"gap": gap, "bound": bound}
        prev = cur
    return rep


def altered_vs_next_check(k: int, alpha_grid: Iterable | None = None) -> CheckReport:
    """``h(Bin(k, alpha)) <= h(Bin(k+1))``, with equality at alpha = 1/2."""
    grid = [Fraction(i, 100) for i in range(101)] if alpha_grid is None else list(alpha_grid)
    rep = CheckReport("altered_vs_next")
    target = h_bin(k + 1)
    for a in grid:
        if not 0 <= a <= 1:
            raise ContractError(f"alpha={a} outside [0, 1]")
        val = entropy(altered_binomial(k, a))
        rep.record(target - val, k=k, alpha=float(a))
    pascal_exact = altered_binomial(k, Fraction(1, 2)) == binomial(k + 1)
    half_gap = abs(entropy(altered_binomial(k, Fraction(1, 2))) - target)
    rep.details = {"pascal_exact": pascal_exact, "half_gap": half_gap}
    if not pascal_exact or half_gap > TOL:
        rep.failures.append({"k": k, "alpha": 0.5, "half_gap": half_gap,
                             "pascal_exact": pascal_exact})
    return rep


def entropy_sandwich_check(x_grid: Iterable | None = None) -> CheckReport:
    """``1 - 4(x - 1/2)^2 <= h(x) <= 1 - (2/ln 2)(x - 1/2)^2`` and
    ``x / (2 log2(6/x)) <= h^{-1}(x) <= x / log2(1/x)``.
    """
    grid = _grid(1001) if x_grid is None else np.asarray(list(x_grid), dtype=float)
    rep = CheckReport("entropy_sandwich")
    for x in grid:
        x = float(x)
        if not 0 <= x <= 1:
            raise ContractError(f"x={x} outside [0, 1]")
        hx = h(x)
        d2 = (x - 0.5) ** 2
        rep.record(hx - (1 - 4 * d2), x=x, side="h lower")
        rep.record((1 - 2 / math.log(2) * d2) - hx, x=x, side="h upper")
        if x > 0:
            inv = h_inverse(x)
            rep.record(inv - x / (2 * math.log2(6 / x)), tol=1e-11, x=x, side="inverse lower")
            if x < 1:
                rep.record(x / math.log2(1 / x) - inv, tol=1e-11, x=x, side="inverse upper")
    return rep


def gamma_threshold(x: float, b: float, c: float) -> float:
    return x / (4 * b * c * math.log2(12 * b / x))


def gamma_entropy_check(x: float, b: float, c: float, points: int = 1001) -> CheckReport:
    """``h(1/2 - gamma) >= 1 - x + b h(c gamma)`` for gamma up to the threshold."""
    if not (c >= 1 and b >= 0.5 and 0 < x < 1):
        raise ContractError("need c >= 1, b >= 1/2 and 0 < x < 1")
    top = gamma_threshold(x, b, c)
    rep = CheckReport("gamma_entropy", details={"x": x, "b": b, "c": c, "gamma_max": top})
    for g in np.linspace(0.0, top, points):
        g = float(g)
        rep.record(h(0.5 - g) - (1 - x + b * h(c * g)), gamma=g)
    return rep


def binom_exponent_gap(alpha: float, beta: float, rho: float) -> float:
    """``h(alpha) - rho^2 - [beta h(alpha - rho/beta) + (1-beta) h(alpha + rho/(1-beta))]``."""
    lhs = beta * h(alpha - rho / beta) + (1 - beta) * h(alpha + rho / (1 - beta))
    return h(alpha) - rho * rho - lhs


def in_small_rho_regime(alpha: float, beta: float, rho: float) -> bool:
    return abs(rho) < alpha * (1 - alpha) * min(beta, 1 - beta)


def binom_inequality_check(alpha_grid: Iterable | None = None, beta_grid: Iterable | None = None,
                           rho_grid: Iterable | None = None, random_triples: int = 0,
                           seed: int = 0) -> CheckReport:
    """Entropy-level form of the two-binomial inequality, on grid points in the
    small-rho regime plus optional random triples."""
    ag = _grid(24, 0, 0.5, True) if alpha_grid is None else list(alpha_grid)
    bg = _grid(24, 0, 0.5, True) if beta_grid is None else list(beta_grid)
    rg = _grid(24, 0, 0.5, False) if rho_grid is None else list(rho_grid)
    rep = CheckReport("binom_inequality")
    skipped = 0

    def visit(a, b, r):
        nonlocal skipped
        if not (0 <= a <= 0.5 and 0 <= b <= 0.5 and 0 <= r <= 0.5):
            raise ContractError("parameters must lie in [0, 1/2]")
        if not (a > 0 and b > 0 and in_small_rho_regime(a, b, r)):
            skipped += 1
            return
        rep.record(binom_exponent_gap(a, b, r), alpha=a, beta=b, rho=r)

    for a in ag:
        for b in bg:
            for r in rg:
                visit(float(a), float(b), float(r))
    rng = np.random.default_rng(seed)
    drawn = 0
    while drawn < random_triples:
        a, b = rng.uniform(1e-3, 0.5, size=2)
        r = rng.uniform(0, a * (1 - a) * min(b, 1 - b))
        visit(float(a), float(b), float(r))
        drawn += 1
    rep.details["skipped_outside_regime"] = skipped
    return rep


def binom_inequality_finite(n: int) -> CheckReport:
    """Exact-integer spot check of the binomial form at size n (informational).

    Visits every (alpha n, beta n, rho n) in the small-rho regime with all
    binomial arguments integral and compares
    ``C(bn, abn - rn) C((1-b)n, a(1-b)n + rn) * 2^(rho^2 n)`` against ``C(n, an)``.
    """
    rep = CheckReport("binom_inequality_finite", details={"n": n})
    for A in range(1, n // 2 + 1):
        for B in range(1, n // 2 + 1):
            if (A * B) % n or (A * (n - B)) % n:
                continue
            a, b = A / n, B / n
            for R in range(0, n // 2 + 1):
                if not in_small_rho_regime(a, b, R / n):
                    continue
                left = comb(B, A * B // n - R) * comb(n - B, A * (n - B) // n + R)
                margin = math.log2(comb(n, A)) - math.log2(left) - R * R / n
                rep.record(margin, alpha=a, beta=b, rho=R / n)
    return rep


def multinomial_bounds_check(p: Sequence, n: int) -> CheckReport:
    """``C(n+s-1, s-1)^{-1} 2^{h(p) n} <= multinomial(n; p n) <= 2^{h(p) n}`` in integers.

    With counts k_i = p_i n, ``2^{h(p) n} = n^n / prod k_i^{k_i}``, so both
    sides are compared after multiplying through by ``prod k_i^{k_i}``.
    """
    probs = [Fraction(x) if not isinstance(x, float) else Fraction(repr(x)) for x in p]
    ProbabilityVector(tuple(probs))
    counts = [x * n for x in probs]
    if any(c.denominator != 1 for c in counts):
        raise ContractError("p * n must be integral")
    counts = [int(c) for c in counts]
    s = len(probs)
    mult = math.factorial(n)
    for c in counts:
        mult //= math.factorial(c)
    powers = math.prod(c**c for c in counts)
    nn = n**n
    lower_factor = comb(n + s - 1, s - 1)
    rep = CheckReport("multinomial_bounds", details={
        "multinomial": mult, "lower_factor": lower_factor, "n": n, "counts": counts})
    # the integer comparisons decide; log2 margins are for reporting only
    for side, small, big in (("upper", mult * powers, nn), ("lower", nn, lower_factor * mult * powers)):
        rep.cases += 1
        rep.min_margin = min(rep.min_margin, math.log2(big) - math.log2(small))
        if small > big:
            rep.failures.append({"side": side})
    return rep


def lipschitz_bound(k: int, eps: float) -> float:
    return math.log(2) * k * eps * math.log2(1 / eps)


def _near_pair(rng: np.random.Generator, k: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    p = rng.dirichlet(np.ones(k))
    d = rng.uniform(-1, 1, size=k)
    d -= d.mean()
    d *= eps * rng.uniform(0, 1) / max(np.abs(d).max(), 1e-300)
    q = p + d
    if (q < 0).any():
        # shrink toward p until q is a probability vector
        neg = q < 0
        d *= float(np.min(p[neg] / -d[neg]))
        q = p + d
    q = np.clip(q, 0, None)
    return p, q / q.sum()


def entropy_lipschitz_check(k: int, eps: float, trials: int = 10_000, seed: int = 0) -> CheckReport:
    """``|h(p) - h(q)| <= ln(2) k eps log2(1/eps)`` for pairs within eps coordinatewise."""
    if not 0 < eps <= 1 / math.e:
        raise ContractError("eps must lie in (0, 1/e]")
    rng = np.random.default_rng(seed)
    bound = lipschitz_bound(k, eps)
    rep = CheckReport("entropy_lipschitz", details={"k": k, "eps": eps, "bound": bound})

    def visit(p, q, **tag):
        if np.abs(p - q).max() > eps + 1e-15:
            return
        diff = abs(entropy(p.tolist()) - entropy(q.tolist()))
        rep.record(bound - diff, **tag)

    for t in range(trials):
        p, q = _near_pair(rng, k, eps)
        visit(p, q, trial=t)
    adv_p = np.zeros(k)
    adv_q = np.zeros(k)
    adv_p[0], adv_p[1] = eps, 1 - eps
    adv_q[1] = 1.0
    visit(adv_p, adv_q, trial="adversarial")
    visit(adv_q, adv_q, trial="identical")
    return rep


CHECKERS = {
    "binomial-gap": lambda: binomial_entropy_gap_check(9, 64),
    "altered-vs-next": lambda: _merge("altered_vs_next", [altered_vs_next_check(k) for k in range(33)]),
    "entropy-sandwich": entropy_sandwich_check,
    "gamma-entropy": lambda: _merge("gamma_entropy", [gamma_entropy_check(0.1, 0.5, 2),
                                                      gamma_entropy_check(0.01, 1, 2)]),
    "binom-inequality": lambda: binom_inequality_check(random_triples=10_000),
    "multinomial-bounds": lambda: _merge("multinomial_bounds", [
        multinomial_bounds_check((Fraction(1, 2), Fraction(1, 2)), 10),
        multinomial_bounds_check((1, 0), 5),
        multinomial_bounds_check((Fraction(1, 3),) * 3, 9),
    ]),
    "entropy-lipschitz": lambda: entropy_lipschitz_check(4, 0.01),
}


def _merge(name: str, reports: list[CheckReport]) -> CheckReport:
    out = CheckReport(name)
    for r in reports:
        out.cases += r.cases
        out.min_margin = min(out.min_margin, r.min_margin)
        out.failures.extend(r.failures)
    return out


def run_checkers(names: Iterable[str] | None = None) -> list[CheckReport]:
    chosen = list(CHECKERS) if not names else list(names)
    unknown = [c for c in chosen if c not in CHECKERS]
    if unknown:
        raise ContractError(f"unknown checker(s): {', '.join(unknown)}")
    return [CHECKERS[c]() for c in chosen]
