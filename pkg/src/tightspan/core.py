"""Instance and assignment model with exact load arithmetic.

Processing times are positive integers; an infeasible (job, machine) pair is
represented by :data:`INFEASIBLE` (``None``) and never by a large number.
Rational quantities (average load, feasibility factor, bounds) are
:class:`fractions.Fraction` values so every bound comparison is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InvalidAssignment, InvalidInstance

INFEASIBLE = None
MAX_TIME = 10**6

Time = Optional[int]


def to_rational(value: float, max_denominator: int = 10**6) -> Fraction:
    """Convert a float to the closest fraction with bounded denominator."""
    return Fraction(value).limit_denominator(max_denominator)


@dataclass(frozen=True)
class Instance:
    """``p[j][i]`` is the time of job ``j`` on machine ``i`` (rows are jobs)."""

    m: int
    n: int
    p: tuple[tuple[Time, ...], ...]

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidInstance(f"machine count must be a positive integer, got {self.m!r}")
        if not isinstance(self.n, int) or self.n < 0:
            raise InvalidInstance(f"job count must be a non-negative integer, got {self.n!r}")
        rows = tuple(tuple(row) for row in self.p)
        object.__setattr__(self, "p", rows)
        if len(rows) != self.n:
            raise InvalidInstance(f"expected {self.n} job rows, got {len(rows)}")
        for j, row in enumerate(rows):
            if len(row) != self.m:
                raise InvalidInstance(f"job {j} has {len(row)} entries, expected {self.m}")
            finite = 0
            for i, t in enumerate(row):
                if t is INFEASIBLE:
                    continue
                if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= MAX_TIME:
                    raise InvalidInstance(
                        f"p[{j}][{i}]={t!r} is not an integer in [1, {MAX_TIME}]"
                    )
                finite += 1
            if finite == 0:
                raise InvalidInstance(f"job {j} has no feasible machine")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Time]], m: int | None = None) -> "Instance":
        rows = [list(r) for r in rows]
        if m is None:
            if not rows:
                raise InvalidInstance("cannot infer machine count from zero jobs")
            m = len(rows[0])
        return cls(m=m, n=len(rows), p=tuple(tuple(r) for r in rows))

    @classmethod
    def restricted(cls, sizes: Sequence[int], feasible: Sequence[Iterable[int]], m: int) -> "Instance":
        """Build a restricted instance from job sizes and feasible machine sets."""
        rows = []
        for size, machines in zip(sizes, feasible):
            allowed = set(machines)
            rows.append(tuple(size if i in allowed else INFEASIBLE for i in range(m)))
        return cls(m=m, n=len(rows), p=tuple(rows))

    def time(self, i: int, j: int) -> Time:
        return self.p[j][i]

    def feasible(self, i: int, j: int) -> bool:
        return self.p[j][i] is not INFEASIBLE

    def machines_of(self, j: int) -> list[int]:
        return [i for i, t in enumerate(self.p[j]) if t is not INFEASIBLE]

    def min_time(self, j: int) -> int:
        return min(t for t in self.p[j] if t is not INFEASIBLE)

    @property
    def is_restricted(self) -> bool:
        return all(len({t for t in row if t is not INFEASIBLE}) == 1 for row in self.p)

    @property
    def sizes(self) -> list[int]:
        """Job sizes ``p_j`` of a restricted instance."""
        if not self.is_restricted:
            raise InvalidInstance("job sizes are only defined for restricted instances")
        return [next(t for t in row if t is not INFEASIBLE) for row in self.p]

    @property
    def p_max(self) -> int:
        return max((t for row in self.p for t in row if t is not INFEASIBLE), default=0)

    @property
    def k_min(self) -> int:
        """Smallest number of feasible machines over all jobs."""
        return min((len(self.machines_of(j)) for j in range(self.n)), default=self.m)

    @property
    def support_size(self) -> int:
        """Number of finite entries (``S`` in the reports)."""
        return sum(1 for row in self.p for t in row if t is not INFEASIBLE)


@dataclass(frozen=True)
class Assignment:
    """``alpha[j]`` is the (0-based) machine of job ``j``."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(i) for i in self.alpha))

    def __len__(self):
        return len(self.alpha)

    def __getitem__(self, j):
        return self.alpha[j]

    def moved(self, j: int, i: int) -> "Assignment":
        alpha = list(self.alpha)
        alpha[j] = i
        return Assignment(tuple(alpha))

    def jobs_on(self, i: int) -> list[int]:
        return [j for j, k in enumerate(self.alpha) if k == i]


def validate(inst: Instance, a: Assignment, w: int | None = None) -> None:
    """Raise :class:`InvalidAssignment` unless ``a`` is total and feasible
    (and ``w``-feasible when ``w`` is given)."""
    if len(a.alpha) != inst.n:
        raise InvalidAssignment(f"assignment covers {len(a.alpha)} jobs, instance has {inst.n}")
    for j, i in enumerate(a.alpha):
        if not 0 <= i < inst.m:
            raise InvalidAssignment(f"job {j} mapped to machine {i} outside [0, {inst.m})")
        t = inst.p[j][i]
        if t is INFEASIBLE:
            raise InvalidAssignment(f"job {j} mapped to infeasible machine {i}")
        if w is not None and t > w:
            raise InvalidAssignment(f"job {j} on machine {i} takes {t} > w={w}")


def loads(inst: Instance, a: Assignment) -> list[int]:
    out = [0] * inst.m
    for j, i in enumerate(a.alpha):
        out[i] += inst.p[j][i]
    return out


def load(inst: Instance, a: Assignment, i: int) -> int:
    if not 0 <= i < inst.m:
        raise IndexError(f"machine index {i} out of range [0, {inst.m})")
    return sum(inst.p[j][i] for j, k in enumerate(a.alpha) if k == i)


def makespan(inst: Instance, a: Assignment) -> int:
    return max(loads(inst, a))


def total_load(inst: Instance, a: Assignment) -> int:
    return sum(inst.p[j][i] for j, i in enumerate(a.alpha))


def average_load(inst: Instance, a: Assignment) -> Fraction:
    return Fraction(total_load(inst, a), inst.m)


def legal(inst: Instance, i: int, j: int, T: int) -> bool:
    t = inst.p[j][i]
    return t is not INFEASIBLE and t <= T


def legal_machines(inst: Instance, j: int, T: int) -> list[int]:
    return [i for i in range(inst.m) if legal(inst, i, j, T)]


def feasibility_factor(inst: Instance, T: int) -> Fraction:
    """Minimum over jobs of the fraction of machines legal under ``T``.

    Zero when some job has no legal machine; one for an instance without jobs.
    """
    if inst.n == 0:
        return Fraction(1)
    k = min(len(legal_machines(inst, j, T)) for j in range(inst.n))
    return Fraction(k, inst.m)


def largest_job(inst: Instance, a: Assignment, i: int) -> int | None:
    """Index of the longest job on machine ``i`` (lowest index on ties)."""
    best = None
    for j, k in enumerate(a.alpha):
        if k == i and (best is None or inst.p[j][i] > inst.p[best][i]):
            best = j
    return best
