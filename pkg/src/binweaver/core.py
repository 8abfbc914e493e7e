"""Bin Packing instances, solutions and the predicates used by the case analysis."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

MAX_ITEMS = 62
MAX_BINS = 16
U64_MAX = (1 << 64) - 1


class InstanceFormatError(ValueError):
    """Raised when instance text cannot be parsed; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractError(ValueError):
    """A caller violated an operation's precondition."""


class BudgetExceeded(RuntimeError):
    """A node, state or time budget was exhausted before an answer was found."""


@dataclass(frozen=True)
class Instance:
    weights: tuple[int, ...]
    capacities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(x) for x in self.weights))
        object.__setattr__(self, "capacities", tuple(int(x) for x in self.capacities))
        if not 1 <= len(self.weights) <= MAX_ITEMS:
            raise ContractError(f"item count {len(self.weights)} outside [1, {MAX_ITEMS}]")
        if not 1 <= len(self.capacities) <= MAX_BINS:
            raise ContractError(f"bin count {len(self.capacities)} outside [1, {MAX_BINS}]")
        if any(x < 0 for x in self.weights) or any(c < 0 for c in self.capacities):
            raise ContractError("weights and capacities must be non-negative")
        if sum(self.weights) > U64_MAX or sum(self.capacities) > U64_MAX:
            raise ContractError("weight or capacity total overflows 64 bits")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def m(self) -> int:
        return len(self.capacities)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def weight_of(self, mask: int) -> int:
        return sum(w for i, w in enumerate(self.weights) if mask >> i & 1)


@dataclass(frozen=True)
class Solution:
    """Item ``i`` goes to bin ``assignment[i]`` (0-based)."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(b) for b in self.assignment))

    def bins(self, m: int) -> list[int]:
        """Item bitmask of every bin."""
        masks = [0] * m
        for i, b in enumerate(self.assignment):
            masks[b] |= 1 << i
        return masks

    def sizes(self, m: int) -> list[int]:
        counts = [0] * m
        for b in self.assignment:
            counts[b] += 1
        return counts

    @classmethod
    def from_bins(cls, n: int, bin_masks: Sequence[int]) -> "Solution":
        assignment = [-1] * n
        for j, mask in enumerate(bin_masks):
            for i in range(n):
                if mask >> i & 1:
                    if assignment[i] != -1:
                        raise ContractError(f"item {i} placed in two bins")
                    assignment[i] = j
        if -1 in assignment:
            raise ContractError(f"item {assignment.index(-1)} not placed")
        return cls(tuple(assignment))


@dataclass
class SolveReport:
    answer: str  # "yes" | "no" | "unknown"
    algorithm: str
    certificate: Solution | None = None
    stats: dict[str, Any] = field(default_factory=dict)
    trace: list[dict[str, Any]] | None = None

    @property
    def is_yes(self) -> bool:
        return self.answer == "yes"

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "answer": self.answer,
            "algorithm": self.algorithm,
            "certificate": list(self.certificate.assignment) if self.certificate else None,
            "stats": self.stats,
        }
        if self.trace is not None:
            out["trace"] = self.trace
        return out


# --- instance I/O -----------------------------------------------------------


def _ints(tokens: list[str], line: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not t.lstrip("+-").isdigit())
        raise InstanceFormatError(f"non-integer token {bad!r}", line) from None


def _build(weights: list[int], caps: list[int], line: int | None = None) -> Instance:
    try:
        return Instance(tuple(weights), tuple(caps))
    except ContractError as exc:
        raise InstanceFormatError(str(exc), line) from None


def parse_instance(text: str | bytes) -> Instance:
    """Parse the canonical three-line text format or its JSON equivalent."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(stripped)

    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.strip()
        if not body or body.startswith("#"):
            continue
        rows.append((lineno, body.split()))
    if len(rows) != 3:
        last = rows[-1][0] if rows else 1
        raise InstanceFormatError(f"expected 3 data lines, found {len(rows)}", last)

    (l1, head), (l2, wtok), (l3, ctok) = rows
    if len(head) != 2:
        raise InstanceFormatError(f"header needs 'n m', found {len(head)} tokens", l1)
    n, m = _ints(head, l1)
    if not 1 <= n <= MAX_ITEMS:
        raise InstanceFormatError(f"n={n} outside [1, {MAX_ITEMS}]", l1)
    if not 1 <= m <= MAX_BINS:
        raise InstanceFormatError(f"m={m} outside [1, {MAX_BINS}]", l1)
    weights = _ints(wtok, l2)
    if len(weights) != n:
        raise InstanceFormatError(f"expected {n} weights, found {len(weights)}", l2)
    caps = _ints(ctok, l3)
    if len(caps) != m:
        raise InstanceFormatError(f"expected {m} capacities, found {len(caps)}", l3)
    if any(x < 0 for x in weights):
        raise InstanceFormatError("negative weight", l2)
    if any(c < 0 for c in caps):
        raise InstanceFormatError("negative capacity", l3)
    if sum(weights) > U64_MAX:
        raise InstanceFormatError("sum of weights overflows 64 bits", l2)
    if sum(caps) > U64_MAX:
        raise InstanceFormatError("sum of capacities overflows 64 bits", l3)
    return _build(weights, caps)


def _parse_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "weights" not in doc or "capacities" not in doc:
        raise InstanceFormatError("JSON instance needs 'weights' and 'capacities'", 1)
    weights, caps = doc["weights"], doc["capacities"]
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in [*weights, *caps]):
        raise InstanceFormatError("weights and capacities must be integers", 1)
    return _build(list(weights), list(caps), 1)


def serialize_instance(inst: Instance, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"{inst.n} {inst.m}")
    lines.append(" ".join(map(str, inst.weights)))
    lines.append(" ".join(map(str, inst.capacities)))
    return "\n".join(lines) + "\n"


# --- predicates -------------------------------------------------------------


def _check_assignment(inst: Instance, sol: Solution) -> None:
    if len(sol.assignment) != inst.n:
        raise ContractError(f"assignment has length {len(sol.assignment)}, expected {inst.n}")
    bad = [b for b in sol.assignment if not 0 <= b < inst.m]
    if bad:
        raise ContractError(f"bin index {bad[0]} outside [0, {inst.m})")


def bin_loads(inst: Instance, sol: Solution) -> list[int]:
    _check_assignment(inst, sol)
    loads = [0] * inst.m
    for w, b in zip(inst.weights, sol.assignment):
        loads[b] += w
    return loads


def verify_solution(inst: Instance, sol: Solution) -> bool:
    return all(load <= c for load, c in zip(bin_loads(inst, sol), inst.capacities))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def unbalancing_pair(sizes: Sequence[int], alpha) -> tuple[int, int] | None:
    """Return ``(T, j)`` with T a bin bitmask and j a bin proving the sizes
    are alpha-unbalanced, or None if they are alpha-balanced.

    Unbalanced iff some prefix set T and next bin j jump over the window:
    ``|S^T| < (1/2 - alpha) n`` and ``|S^T| + |S_j| > (1/2 + alpha) n``.
    """
    a = _as_fraction(alpha)
    n = sum(sizes)
    lo = (Fraction(1, 2) - a) * n
    hi = (Fraction(1, 2) + a) * n
    m = len(sizes)
    for T in range(1 << m):
        below = sum(sizes[j] for j in range(m) if T >> j & 1)
        if below >= lo:
            continue
        for j in range(m):
            if not T >> j & 1 and below + sizes[j] > hi:
                return T, j
    return None


def is_alpha_balanced(inst: Instance, sol: Solution, alpha) -> bool:
    _check_assignment(inst, sol)
    a = _as_fraction(alpha)
    if not 0 <= a <= Fraction(1, 2):
        raise ContractError(f"alpha={alpha} outside [0, 1/2]")
    return unbalancing_pair(sol.sizes(inst.m), a) is None


def sizes_balanced(sizes: Sequence[int], alpha) -> bool:
    return unbalancing_pair(sizes, alpha) is None


@dataclass(frozen=True)
class SlackReport:
    slack: tuple[int, ...]
    large: tuple[bool, ...]
    threshold: int
    small_items: int
    large_items: int


def classify_slack(inst: Instance, sol: Solution, theta: int, l: int) -> SlackReport:
    """Per-bin slack; a bin is large-slack when its slack is at least ``n * 2**(l - theta)``."""
    if not 0 <= theta <= l:
        raise ContractError(f"theta={theta} outside [0, l={l}]")
    loads = bin_loads(inst, sol)
    slack = [c - load for c, load in zip(inst.capacities, loads)]
    for j, s in enumerate(slack):
        if s < 0:
            raise ContractError(f"bin {j} overfull by {-s}")
    threshold = inst.n << (l - theta)
    large = [s >= threshold for s in slack]
    sizes = sol.sizes(inst.m)
    large_items = sum(k for k, big in zip(sizes, large) if big)
    return SlackReport(tuple(slack), tuple(large), threshold, inst.n - large_items, large_items)
