"""Exact reference solver for small instances (depth-first branch and bound)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

import numpy as np

from . import kernels
from .core import INFEASIBLE, Assignment, Instance
from .errors import LimitExceeded


@dataclass(frozen=True)
class OracleLimits:
    max_jobs: int = 12
    max_machines: int = 4
    node_limit: int = 200_000_000


@dataclass
class OracleResult:
    opt_makespan: int
    witness: Assignment
    nodes_explored: int


def instance_arrays(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    """``(times, feasible)`` as int64/uint8 ``n x m`` arrays; infeasible
    entries have time 0 and are masked out."""
    times = np.zeros((inst.n, inst.m), dtype=np.int64)
    feas = np.zeros((inst.n, inst.m), dtype=np.uint8)
    for j, row in enumerate(inst.p):
        for i, t in enumerate(row):
            if t is not INFEASIBLE:
                times[j, i] = t
                feas[j, i] = 1
    return times, feas


def search_order(inst: Instance) -> list[int]:
    return sorted(range(inst.n), key=lambda j: (-inst.min_time(j), j))


def _check_limits(inst: Instance, limits: OracleLimits) -> None:
    if inst.n > limits.max_jobs or inst.m > limits.max_machines:
        raise LimitExceeded(
            f"instance {inst.m}x{inst.n} exceeds oracle limits "
            f"{limits.max_machines} machines / {limits.max_jobs} jobs"
        )


def optimal_makespan(inst: Instance, limits: OracleLimits | None = None,
                     backend=None) -> OracleResult:
    limits = limits or OracleLimits()
    _check_limits(inst, limits)
    backend = backend or kernels.backend
    times, feas = instance_arrays(inst)
    start = sum(inst.min_time(j) for j in range(inst.n)) + 1
    best, witness, nodes, complete = backend.bnb_min_makespan(
        times, feas, search_order(inst), start, limits.node_limit
    )
    if not complete:
        raise LimitExceeded(f"oracle stopped after {nodes} nodes")
    return OracleResult(int(best), Assignment(tuple(witness)), int(nodes))


def schedule_witness(inst: Instance, T: int, L, limits: OracleLimits | None = None,
                     backend=None) -> Assignment | None:
    """An assignment with makespan ``<= T`` and total load ``<= m*L``, or None."""
    limits = limits or OracleLimits()
    _check_limits(inst, limits)
    backend = backend or kernels.backend
    budget = floor(inst.m * Fraction(L))
    if budget < 0:
        return None
    times, feas = instance_arrays(inst)
    found, witness, nodes, complete = backend.bnb_exists(
        times, feas, search_order(inst), int(T), int(budget), limits.node_limit
    )
    if not complete:
        raise LimitExceeded(f"oracle stopped after {nodes} nodes")
    return Assignment(tuple(witness)) if found else None


def schedule_exists(inst: Instance, T: int, L, limits: OracleLimits | None = None,
                    backend=None) -> bool:
    return schedule_witness(inst, T, L, limits, backend) is not None
