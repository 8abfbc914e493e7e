"""Seeded instance generators, including planted yes-instances for each case."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import ContractError, Instance, Solution
from .sums import as_fraction, critical_pruner

KINDS = (
    "random-bounded",
    "tight-partition",
    "unbalanced-planted",
    "large-slack-planted",
    "all-equal",
    "powers-of-two",
)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    m: int = 2
    bound: int = 1000  # weights drawn from [1, bound]
    seed: int = 0
    alpha: Fraction | float = Fraction(1, 5)
    delta: Fraction | float = Fraction(3, 10)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"unknown generator kind {self.kind!r}")
        if self.n < 1 or self.m < 1 or self.bound < 1:
            raise ContractError("n, m and bound must be positive")


def _weights(rng: np.random.Generator, n: int, bound: int) -> list[int]:
    return [int(x) for x in rng.integers(1, bound + 1, size=n)]


def _tight(w: list[int], assignment: list[int], m: int) -> tuple[Instance, Solution]:
    sol = Solution(tuple(assignment))
    loads = [0] * m
    for x, b in zip(w, assignment):
        loads[b] += x
    return Instance(tuple(w), tuple(loads)), sol


def _spread(rng: np.random.Generator, n: int, m: int) -> list[int]:
    """Random assignment with every bin nonempty when n >= m."""
    a = [int(b) for b in rng.integers(0, m, size=n)]
    if n >= m:
        slots = rng.permutation(n)[:m]
        for b, i in enumerate(slots):
            a[int(i)] = b
    return a


def generate(spec: GeneratorSpec) -> tuple[Instance, Solution | None]:
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n, spec.m

    if spec.kind == "all-equal":
        w = [1] * n
        return Instance(tuple(w), tuple([math.ceil(n / m)] * m)), None
    if spec.kind == "powers-of-two":
        w = [1 << i for i in range(n)]
        return Instance(tuple(w), tuple([sum(w) // m + 1] * m)), None
    if spec.kind == "random-bounded":
        w = _weights(rng, n, spec.bound)
        cuts = np.sort(rng.integers(0, sum(w) + 1, size=m - 1))
        shares = np.diff(np.concatenate([[0], cuts, [sum(w)]]))
        extra = rng.integers(0, spec.bound + 1, size=m)
        return Instance(tuple(w), tuple(int(s + e) for s, e in zip(shares, extra))), None
    if spec.kind == "tight-partition":
        w = _weights(rng, n, spec.bound)
        return _tight(w, _spread(rng, n, m), m)

    alpha = as_fraction(spec.alpha)
    if spec.kind == "unbalanced-planted":
        # one bin holds more than (1/2 + alpha) n items
        big = math.floor((Fraction(1, 2) + alpha) * n) + 1
        if big > n or (m == 1):
            raise ContractError("unbalanced planting needs m >= 2 and (1/2 + alpha) n < n")
        w = _weights(rng, n, spec.bound)
        perm = rng.permutation(n)
        assignment = [0] * n
        for i in perm[big:]:
            assignment[int(i)] = int(rng.integers(1, m))
        return _tight(w, assignment, m)

    # large-slack-planted: balanced sizes, every bin gets slack n * 2**(l - theta)
    w = _weights(rng, n, spec.bound)
    crit = critical_pruner(w, spec.delta)
    slack = n << (crit.l - crit.theta)
    perm = [int(i) for i in rng.permutation(n)]
    assignment = [0] * n
    for pos, i in enumerate(perm):
        assignment[i] = pos * m // n
    tight, sol = _tight(w, assignment, m)
    return Instance(tight.weights, tuple(c + slack for c in tight.capacities)), sol
