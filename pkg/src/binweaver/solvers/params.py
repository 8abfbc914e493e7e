"""Parameter formulas of the case analysis, evaluated with mpmath.

These are reporting fields; only the defaults for delta and alpha feed
control flow.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import mpmath as mp

mp.mp.dps = 50


def h2(x) -> mp.mpf:
    x = mp.mpf(x)
    if x <= 0 or x >= 1:
        return mp.mpf(0)
    return -x * mp.log(x, 2) - (1 - x) * mp.log(1 - x, 2)


def g_param(m: int) -> float:
    """Exponent deficit of the large-slack sample size: ``h(1/(2m)) / 2``."""
    return float(h2(mp.mpf(1) / (2 * m)) / 2)


def f_A(alpha) -> mp.mpf:
    a = mp.mpf(alpha)
    return a**2 / (8 * mp.log(2) * mp.log(6 / a, 2) ** 2)


def eps_of_delta(delta) -> mp.mpf:
    return mp.power(2, -1 / mp.mpf(delta) ** 3)


def f_B(delta) -> mp.mpf:
    e = eps_of_delta(delta)
    return e**2 / (32 * mp.log(2) * mp.log(6 / e, 2) ** 2)


def f_C(m: int) -> mp.mpf:
    hm = h2(mp.mpf(1) / (2 * m))
    return hm**2 / (32 * mp.log(2) * mp.log(24 / hm, 2) ** 2)


@dataclass(frozen=True)
class PaperParameters:
    m: int
    f_C: float
    delta: float
    alpha_log2: float  # alpha itself underflows every float type
    alpha: float
    g: float
    eps_log2: float
    f_B: float
    f_A_at_alpha: float

    def to_dict(self) -> dict:
        return asdict(self)


def paper_parameters(m: int) -> PaperParameters:
    """``delta = f_C(m) / (2m)`` and ``alpha = 2**(-2 / delta**3)``."""
    fc = f_C(m)
    delta = fc / (2 * m)
    alpha_log2 = -2 / delta**3
    alpha = mp.power(2, alpha_log2)
    return PaperParameters(
        m=m,
        f_C=float(fc),
        delta=float(delta),
        alpha_log2=float(alpha_log2),
        alpha=float(alpha),
        g=g_param(m),
        eps_log2=float(-1 / delta**3),
        f_B=float(f_B(delta)),
        f_A_at_alpha=float(f_A(alpha)) if alpha > 0 else 0.0,
    )
