"""Choose ``(T, L)`` for the general pipeline when the user supplies neither."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..balance import AumResult, a_um
from ..core import Instance
from ..errors import InvariantViolation, NoLegalMachine
from ..simplex import FractionalAssignment, Infeasible, build_lp, min_cost, solve_feasible


@dataclass
class AutoDrive:
    T: int
    L: Fraction
    lp_cost: Fraction
    result: AumResult
    probes: int
    pivots: int


def lp_feasible(inst: Instance, T: int) -> tuple[bool, int]:
    """Whether the assignment + capacity LP is feasible at ``T``; also the pivot count."""
    if T < 1:
        return False, 0
    try:
        model = build_lp(inst, T)
    except NoLegalMachine:
        return False, 0
    sol = solve_feasible(model)
    return isinstance(sol, FractionalAssignment), sol.pivots


def smallest_feasible_T(inst: Instance) -> tuple[int, int, int]:
    """Binary search over ``[max_j min_i p_ij, sum_j min_i p_ij]``.

    Returns ``(T, probes, pivots)``.  The upper end is always feasible: each
    job on its fastest machine.
    """
    if inst.n == 0:
        return 1, 0, 0
    mins = [inst.min_time(j) for j in range(inst.n)]
    lo, hi = max(mins), sum(mins)
    probes = pivots = 0
    while lo < hi:
        mid = (lo + hi) // 2
        ok, piv = lp_feasible(inst, mid)
        probes += 1
        pivots += piv
        if ok:
            hi = mid
        else:
            lo = mid + 1
    return lo, probes, pivots


def auto_drive_general(inst: Instance) -> AutoDrive:
    T, probes, pivots = smallest_feasible_T(inst)
    below, piv = lp_feasible(inst, T - 1)
    pivots += piv
    if below:
        raise InvariantViolation(f"T={T} is not minimal: T-1 is LP-feasible")
    if inst.n == 0:
        cost = Fraction(0)
    else:
        sol = min_cost(build_lp(inst, T))
        if isinstance(sol, Infeasible):
            raise InvariantViolation(f"min-cost LP infeasible at the feasible T={T}")
        _, cost = sol
        pivots += sol[0].pivots
    L = cost / inst.m
    result = a_um(inst, T, L)
    if not result.feasible:
        raise InvariantViolation(f"budgeted LP infeasible at T={T}, L={L}")
    return AutoDrive(T, L, cost, result, probes, pivots + result.pivots)
