"""Assignment LP with capacity and cost-budget rows, solved by a dense
two-phase tableau simplex using Bland's rule.

Variables exist only for pairs ``(i, j)`` with ``p_ij <= T``; every other
``x_ij`` is implicitly zero.  Rows are, in order: one equality per job
(``sum_i x_ij = 1``), one capacity row per machine (``sum_j p_ij x_ij <= T``)
and optionally one budget row (``sum c_ij x_ij <= budget``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import INFEASIBLE, Instance, to_rational
from .errors import IterationLimit, NoLegalMachine

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-6
ZERO_TOL = 1e-9
ROW_TOL = 1e-7


@dataclass
class LpModel:
    m: int
    n: int
    T: int
    pairs: list[tuple[int, int]]          # (machine, job) per variable
    times: np.ndarray                     # p_ij per variable
    costs: np.ndarray                     # c_ij per variable
    budget: Optional[Fraction] = None

    @property
    def n_vars(self) -> int:
        return len(self.pairs)

    @property
    def n_rows(self) -> int:
        return self.n + self.m + (self.budget is not None)

    def without_budget(self) -> "LpModel":
        return LpModel(self.m, self.n, self.T, self.pairs, self.times, self.costs, None)

    def with_budget(self, budget: Fraction) -> "LpModel":
        return LpModel(self.m, self.n, self.T, self.pairs, self.times, self.costs, Fraction(budget))

    def matrices(self):
        """Dense ``(A_eq, b_eq, A_ub, b_ub)``."""
        V = self.n_vars
        A_eq = np.zeros((self.n, V))
        A_ub = np.zeros((self.m + (self.budget is not None), V))
        for v, (i, j) in enumerate(self.pairs):
            A_eq[j, v] = 1.0
            A_ub[i, v] = self.times[v]
        b_ub = [float(self.T)] * self.m
        if self.budget is not None:
            A_ub[self.m, :] = self.costs
            b_ub.append(float(self.budget))
        return A_eq, np.ones(self.n), A_ub, np.array(b_ub)


@dataclass
class FractionalAssignment:
    """``x[j, i]``: fraction of job ``j`` placed on machine ``i``."""

    x: np.ndarray
    pivots: int = 0

    def cost(self, inst: Instance, costs=None) -> float:
        total = 0.0
        for j in range(inst.n):
            for i in range(inst.m):
                if self.x[j, i] > 0:
                    c = inst.p[j][i] if costs is None else costs[j][i]
                    total += c * self.x[j, i]
        return total

    def machine_loads(self, inst: Instance) -> list[float]:
        return [
            sum(inst.p[j][i] * self.x[j, i] for j in range(inst.n) if self.x[j, i] > 0)
            for i in range(inst.m)
        ]

    def is_integral(self) -> bool:
        return bool(np.all((self.x == 0) | (self.x == 1)))


@dataclass
class Infeasible:
    """Phase 1 ended with a positive sum of artificial variables."""

    phase1_value: float
    pivots: int = 0
    reason: str = field(default="phase-1 objective positive")

    def __bool__(self):
        return False


def build_lp(inst: Instance, T: int, budget: Fraction | None = None,
             costs: Sequence[Sequence[int]] | None = None) -> LpModel:
    """Assemble the LP for threshold ``T``; ``costs`` defaults to the
    processing times.  ``budget=None`` omits the budget row."""
    if T < 1:
        raise ValueError(f"T must be at least 1, got {T}")
    pairs, times, cvals = [], [], []
    for j in range(inst.n):
        found = False
        for i in range(inst.m):
            t = inst.p[j][i]
            if t is INFEASIBLE or t > T:
                continue
            found = True
            pairs.append((i, j))
            times.append(t)
            cvals.append(t if costs is None else costs[j][i])
        if not found:
            raise NoLegalMachine(j, T)
    return LpModel(
        m=inst.m, n=inst.n, T=T, pairs=pairs,
        times=np.array(times, dtype=float), costs=np.array(cvals, dtype=float),
        budget=None if budget is None else Fraction(budget),
    )


class _Tableau:
    """Dense tableau for ``min c.x  s.t.  A x = b, x >= 0`` with ``b >= 0``."""

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: list[int], max_pivots: int):
        self.t = np.hstack([A, b[:, None]]).astype(float)
        self.basis = list(basis)
        self.obj = np.zeros(A.shape[1] + 1)
        self.pivots = 0
        self.max_pivots = max_pivots

    def set_objective(self, c: np.ndarray) -> None:
        # reduced costs r = c - c_B B^-1 A; last entry holds -objective value
        self.obj = np.append(c.astype(float), 0.0)
        for r, var in enumerate(self.basis):
            if self.obj[var] != 0.0:
                self.obj -= self.obj[var] * self.t[r]

    @property
    def value(self) -> float:
        return -self.obj[-1]

    def pivot(self, row: int, col: int) -> None:
        t = self.t
        t[row] /= t[row, col]
        column = t[:, col].copy()
        column[row] = 0.0
        nz = np.nonzero(np.abs(column) > 0.0)[0]
        if len(nz):
            t[nz] -= np.outer(column[nz], t[row])
        if self.obj[col] != 0.0:
            self.obj -= self.obj[col] * t[row]
        self.basis[row] = col
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise IterationLimit(f"simplex exceeded {self.max_pivots} pivots")

    def run(self, allowed: np.ndarray) -> None:
        """Bland's rule: lowest-index entering column, lowest-index leaving
        basic variable among minimum-ratio ties."""
        while True:
            candidates = np.nonzero((self.obj[:-1] < -PIVOT_TOL) & allowed)[0]
            if len(candidates) == 0:
                return
            col = int(candidates[0])
            a = self.t[:, col]
            rows = np.nonzero(a > PIVOT_TOL)[0]
            if len(rows) == 0:
                raise ArithmeticError("LP unbounded; cannot happen for bounded assignment rows")
            ratios = np.maximum(self.t[rows, -1], 0.0) / a[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12]
            row = int(min(tied, key=lambda r: self.basis[r]))
            self.pivot(row, col)

    def drop_row(self, row: int) -> None:
        self.t = np.delete(self.t, row, axis=0)
        del self.basis[row]


def _solve(model: LpModel, optimize: bool, max_pivots: int | None):
    A_eq, b_eq, A_ub, b_ub = model.matrices()
    V = model.n_vars
    n_ub = A_ub.shape[0]
    n_eq = A_eq.shape[0]
    if np.any(b_ub < 0):
        return Infeasible(phase1_value=float(-b_ub.min()), reason="negative right-hand side")
    # columns: structural | slacks (one per <= row) | artificials (one per = row)
    A = np.zeros((n_ub + n_eq, V + n_ub + n_eq))
    A[:n_ub, :V] = A_ub
    A[:n_ub, V:V + n_ub] = np.eye(n_ub)
    A[n_ub:, :V] = A_eq
    A[n_ub:, V + n_ub:] = np.eye(n_eq)
    b = np.concatenate([b_ub, b_eq])
    cols = A.shape[1]
    if max_pivots is None:
        max_pivots = 50 * A.shape[0] * cols
    art_start = V + n_ub
    tab = _Tableau(A, b, list(range(V, V + n_ub)) + list(range(art_start, cols)), max_pivots)

    phase1 = np.zeros(cols)
    phase1[art_start:] = 1.0
    tab.set_objective(phase1)
    tab.run(np.ones(cols, dtype=bool))
    if tab.value > FEAS_TOL:
        return Infeasible(phase1_value=float(tab.value), pivots=tab.pivots)

    # drive zero-valued artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tab.basis):
        if tab.basis[r] >= art_start:
            row = tab.t[r, :art_start]
            nz = np.nonzero(np.abs(row) > PIVOT_TOL)[0]
            if len(nz):
                tab.pivot(r, int(nz[0]))
            else:
                tab.drop_row(r)
                continue
        r += 1

    allowed = np.zeros(cols, dtype=bool)
    allowed[:art_start] = True
    if optimize:
        c = np.zeros(cols)
        c[:V] = model.costs
        tab.set_objective(c)
        tab.run(allowed)

    values = np.zeros(cols)
    for r, var in enumerate(tab.basis):
        values[var] = tab.t[r, -1]
    x = np.zeros((model.n, model.m))
    for v, (i, j) in enumerate(model.pairs):
        x[j, i] = values[v]
    return FractionalAssignment(clean(x), pivots=tab.pivots)


def clean(x: np.ndarray) -> np.ndarray:
    """Snap entries below ``ZERO_TOL`` to zero and renormalise job rows."""
    x = np.where(x < ZERO_TOL, 0.0, x)
    sums = x.sum(axis=1, keepdims=True)
    sums[sums == 0] = 1.0
    return x / sums


def solve_feasible(model: LpModel, max_pivots: int | None = None):
    """Return a :class:`FractionalAssignment` satisfying every row, or
    :class:`Infeasible` carrying the phase-1 objective value."""
    return _solve(model, optimize=False, max_pivots=max_pivots)


def min_cost(model: LpModel, max_pivots: int | None = None):
    """Minimise ``sum c_ij x_ij``.

    Returns ``(FractionalAssignment, cost)`` with ``cost`` converted to a
    fraction with denominator at most 10**6, or :class:`Infeasible`.
    """
    sol = _solve(model, optimize=True, max_pivots=max_pivots)
    if isinstance(sol, Infeasible):
        return sol
    value = float(sum(model.costs[v] * sol.x[j, i] for v, (i, j) in enumerate(model.pairs)))
    return sol, to_rational(value)


def check_solution(model: LpModel, x: np.ndarray, tol: float = FEAS_TOL) -> list[str]:
    """List the rows of ``model`` violated by ``x`` beyond ``tol``."""
    problems = []
    legal = {(i, j) for i, j in model.pairs}
    for j in range(model.n):
        if abs(x[j].sum() - 1.0) > ROW_TOL:
            problems.append(f"job {j} row sums to {x[j].sum()}")
        for i in range(model.m):
            if x[j, i] < -tol or x[j, i] > 1 + tol:
                problems.append(f"x[{j},{i}]={x[j, i]} outside [0,1]")
            if x[j, i] > 0 and (i, j) not in legal:
                problems.append(f"x[{j},{i}] positive on illegal pair")
    load = np.zeros(model.m)
    cost = 0.0
    for v, (i, j) in enumerate(model.pairs):
        load[i] += model.times[v] * x[j, i]
        cost += model.costs[v] * x[j, i]
    for i in range(model.m):
        if load[i] > model.T + tol:
            problems.append(f"machine {i} load {load[i]} > T={model.T}")
    if model.budget is not None and cost > float(model.budget) + tol:
        problems.append(f"cost {cost} exceeds budget {model.budget}")
    return problems
