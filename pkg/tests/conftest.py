import itertools
import os

import numpy as np
from hypothesis import HealthCheck, settings

from binweaver.core import Instance

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def naive_feasible(weights, caps) -> bool:
    """Try every assignment of items to bins."""
    m = len(caps)
    for assignment in itertools.product(range(m), repeat=len(weights)):
        loads = [0] * m
        for w, b in zip(weights, assignment):
            loads[b] += w
        if all(x <= c for x, c in zip(loads, caps)):
            return True
    return False


def naive_zeta(f):
    n = len(f).bit_length() - 1
    return [sum(int(f[y]) for y in range(1 << n) if y & x == y) for x in range(1 << n)]


def naive_cover(f, g):
    h = [0] * len(f)
    for x in range(len(f)):
        for y in range(len(g)):
            h[x | y] += int(f[x]) * int(g[y])
    return h


def random_instance(rng: np.random.Generator, n_max=14, m_max=4, w_max=20) -> Instance:
    """Random instance whose capacity total is near the weight total, so the
    trivial overload test rarely decides it."""
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    w = [int(x) for x in rng.integers(1, w_max + 1, size=n)]
    total = sum(w)
    cuts = np.sort(rng.integers(0, total + 1, size=m - 1))
    shares = np.diff(np.concatenate([[0], cuts, [total]]))
    extra = rng.integers(0, max(2, w_max // 2), size=m)
    return Instance(tuple(w), tuple(int(s + e) for s, e in zip(shares, extra)))


def crafted_infeasible(rng: np.random.Generator, n: int, m: int, w_max: int = 30) -> Instance:
    """Weights are multiples of 3 and no capacity is, while the capacity total
    equals the weight total: every bin wastes a unit, so no packing exists,
    yet the overload test cannot tell."""
    while True:
        w = [3 * int(x) for x in rng.integers(1, w_max + 1, size=n)]
        total = sum(w)
        caps = [3 * int(rng.integers(0, total // (3 * m) + 2)) + int(rng.integers(1, 3))
                for _ in range(m - 1)]
        last = total - sum(caps)
        if last >= 0 and last % 3:
            return Instance(tuple(w), tuple(caps + [last]))
