"""Combinatorial balancer for restricted instances (``p_ij in {p_j, inf}``).

With ``w = p_max`` and ``delta = L/eps = sum_j p_j / k_min`` the machines
split into overloaded (load > w + delta), middle and underloaded
(load <= delta) sets.  The solver drives the overloaded set to empty by
best-response descent: move a job whenever that strictly lowers the larger
of the two loads involved.  At a fixed point every job on the most loaded
machine sees at least ``k_min`` feasible machines, each loaded to at least
``makespan - p_max``, which gives ``makespan <= p_max + delta``.

Augmenting paths in the machine/job graph (``path_exists`` and
``push_along_path``) are available as an alternative strategy and as a
probe for the reachability argument.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .core import Assignment, Instance, average_load, loads, makespan
from .errors import IllegalPush, InvalidInstance, InvariantViolation, MoveLimitExceeded

THRESHOLD_33_17 = Fraction(33, 17)
DESCENT = "descent"
PATH_PUSH = "path-push"


@dataclass(frozen=True)
class RestrictedPartition:
    w: int
    delta: Fraction
    m_plus: tuple[int, ...]
    m_zero: tuple[int, ...]
    m_minus: tuple[int, ...]


@dataclass
class AssignmentGraph:
    # arcs machine -> job (job placed there) and job -> machine (other
    # feasible machines with time <= w)
    machine_jobs: list[list[int]]
    job_machines: list[list[int]]


def _require_restricted(inst: Instance) -> None:
    if not inst.is_restricted:
        raise InvalidInstance("instance is not restricted")


def overload_threshold(inst: Instance) -> Fraction:
    """``L/eps``, i.e. ``sum_j p_j / k_min``."""
    return Fraction(sum(inst.sizes), inst.k_min)


def initial_assignment(inst: Instance) -> Assignment:
    """Longest job first, each onto the least loaded feasible machine."""
    _require_restricted(inst)
    sizes = inst.sizes
    ld = [0] * inst.m
    alpha = [0] * inst.n
    for j in sorted(range(inst.n), key=lambda j: (-sizes[j], j)):
        i = min(inst.machines_of(j), key=lambda i: (ld[i], i))
        alpha[j] = i
        ld[i] += sizes[j]
    return Assignment(tuple(alpha))


def partition(inst: Instance, a: Assignment, w: int, delta) -> RestrictedPartition:
    delta = Fraction(delta)
    plus, zero, minus = [], [], []
    for i, d in enumerate(loads(inst, a)):
        if d <= delta:
            minus.append(i)
        elif d <= w + delta:
            zero.append(i)
        else:
            plus.append(i)
    return RestrictedPartition(w, delta, tuple(plus), tuple(zero), tuple(minus))


def build_assignment_graph(inst: Instance, a: Assignment, w: int) -> AssignmentGraph:
    machine_jobs = [[] for _ in range(inst.m)]
    job_machines = []
    for j, row in enumerate(inst.p):
        machine_jobs[a[j]].append(j)
        job_machines.append([i for i, t in enumerate(row)
                             if i != a[j] and t is not None and t <= w])
    return AssignmentGraph(machine_jobs, job_machines)


def path_exists(g: AssignmentGraph, sources, sinks) -> Optional[list[int]]:
    """Shortest alternating path ``[i0, j1, i1, ..., jt, it]`` from a source
    machine to a sink machine, found by breadth-first search; ``None`` if
    no sink is reachable."""
    sinks = set(sinks)
    parent: dict[int, tuple[int, int] | None] = {}
    queue = deque()
    for s in sorted(sources):
        parent[s] = None
        queue.append(s)
    while queue:
        i = queue.popleft()
        for j in g.machine_jobs[i]:
            for k in g.job_machines[j]:
                if k in parent:
                    continue
                parent[k] = (i, j)
                if k in sinks:
                    path = [k]
                    while parent[path[-1]] is not None:
                        prev, job = parent[path[-1]]
                        path += [job, prev]
                    return path[::-1]
                queue.append(k)
    return None


def reachable_machines(g: AssignmentGraph, source: int) -> set[int]:
    seen = {source}
    queue = deque([source])
    while queue:
        i = queue.popleft()
        for j in g.machine_jobs[i]:
            for k in g.job_machines[j]:
                if k not in seen:
                    seen.add(k)
                    queue.append(k)
    return seen


def push_along_path(inst: Instance, a: Assignment, path: list[int], w: int | None = None) -> Assignment:
    """Move ``path[2k+1]`` from machine ``path[2k]`` to ``path[2k+2]``."""
    if len(path) < 3 or len(path) % 2 == 0:
        raise IllegalPush(f"malformed path {path}")
    alpha = list(a.alpha)
    for k in range(1, len(path), 2):
        src, j, dst = path[k - 1], path[k], path[k + 1]
        t = inst.p[j][dst]
        if a[j] != src:
            raise IllegalPush(f"job {j} is not on machine {src}")
        if t is None or (w is not None and t > w):
            raise IllegalPush(f"job {j} cannot run on machine {dst}")
        alpha[j] = dst
    return Assignment(tuple(alpha))


def improving_move(inst: Instance, a: Assignment) -> Optional[tuple[int, int]]:
    """The move ``(j, i)`` with the largest positive
    ``load(alpha(j)) - load(i) - p_j``; ``None`` at a fixed point."""
    ld = loads(inst, a)
    best, choice = 0, None
    for j, row in enumerate(inst.p):
        src = a[j]
        for i, t in enumerate(row):
            if t is None or i == src:
                continue
            gain = ld[src] - ld[i] - inst.p[j][src]
            if gain > best:
                best, choice = gain, (j, i)
    return choice


@dataclass
class RatioBound:
    q: Fraction
    epsilon: Fraction
    absolute_bound: Fraction
    ratio: Optional[Fraction]
    beats_33_17: bool


def ratio_bound(inst: Instance) -> RatioBound:
    """``q = L/p_max``; when ``q < eps`` the certified ratio ``1 + q/eps``."""
    _require_restricted(inst)
    total = sum(inst.sizes)
    pmax = inst.p_max
    eps = Fraction(inst.k_min, inst.m)
    absolute = pmax + Fraction(total, inst.k_min)
    if pmax == 0:
        # no jobs: nothing to approximate
        return RatioBound(Fraction(0), eps, absolute, None, False)
    q = Fraction(total, inst.m * pmax)
    if q < eps:
        ratio = 1 + q / eps
        return RatioBound(q, eps, absolute, ratio, ratio < THRESHOLD_33_17)
    return RatioBound(q, eps, absolute, None, False)


@dataclass
class RestrictedResult:
    assignment: Assignment
    makespan: int
    bound: Fraction
    epsilon: Fraction
    L: Fraction
    k_min: int
    p_max: int
    moves: int = 0
    pushes: int = 0
    strategy: str = DESCENT
    partition: Optional[RestrictedPartition] = None
    ratio: RatioBound | None = None
    checks: dict = field(default_factory=dict)


def move_cap(inst: Instance) -> int:
    total = sum(inst.sizes)
    return total * total // 2 + 1


def descend(inst: Instance, a: Assignment, backend=None) -> tuple[Assignment, int]:
    """Run best-response descent to a fixed point via the kernel backend."""
    backend = backend or kernels.backend
    sizes = np.array(inst.sizes, dtype=np.int64)
    feas = np.array([[t is not None for t in row] for row in inst.p], dtype=np.uint8).reshape(inst.n, inst.m)
    alpha = np.array(a.alpha, dtype=np.int64)
    ld = np.array(loads(inst, a), dtype=np.int64)
    cap = move_cap(inst)
    moves, converged = backend.descent(sizes, feas, alpha, ld, cap)
    if not converged:
        raise MoveLimitExceeded(f"descent exceeded {cap} moves")
    return Assignment(tuple(int(i) for i in alpha)), int(moves)


def solve_restricted(inst: Instance, strategy: str = DESCENT, backend=None) -> RestrictedResult:
    _require_restricted(inst)
    total = sum(inst.sizes)
    k_min, pmax = inst.k_min, inst.p_max
    delta = Fraction(total, k_min)
    a = initial_assignment(inst)
    pushes = 0
    if strategy == PATH_PUSH:
        cap = inst.m * total
        while pushes < cap:
            part = partition(inst, a, pmax, delta)
            if not part.m_plus:
                break
            path = path_exists(build_assignment_graph(inst, a, pmax), part.m_plus, part.m_minus)
            if path is None:
                break
            a = push_along_path(inst, a, path, pmax)
            pushes += 1
    elif strategy != DESCENT:
        raise ValueError(f"unknown strategy {strategy!r}")
    a, moves = descend(inst, a, backend)

    span = makespan(inst, a) if inst.n else 0
    part = partition(inst, a, pmax, delta)
    checks = {
        "fixed_point": improving_move(inst, a) is None,
        "bound": span * k_min <= pmax * k_min + total,
        "m_plus_empty": not part.m_plus,
        "no_path": path_exists(build_assignment_graph(inst, a, pmax), part.m_plus, part.m_minus) is None,
        "average_load": average_load(inst, a) == Fraction(total, inst.m),
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InvariantViolation(f"restricted solve broke {failed}")
    eps = Fraction(k_min, inst.m)
    return RestrictedResult(
        assignment=a, makespan=span, bound=pmax + delta, epsilon=eps,
        L=Fraction(total, inst.m), k_min=k_min, p_max=pmax, moves=moves, pushes=pushes,
        strategy=strategy, partition=part, ratio=ratio_bound(inst), checks=checks,
    )
