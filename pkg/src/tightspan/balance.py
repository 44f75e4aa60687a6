"""Bad/good rebalancing of a rounded schedule and the full general-instance
pipeline.

After rounding, every machine's load minus its longest job is at most ``T``.
Machines whose load exceeds ``T + gamma*L`` ("bad") each hand their longest
job to a distinct "good" machine (load at most ``gamma*L``) on which that job
is legal.  With ``gamma = 1/eps`` and ``eps > L/T`` such a matching always
exists, and afterwards every load is at most ``T + L/eps``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    Assignment, Instance, average_load, feasibility_factor, largest_job, legal,
    loads, makespan,
)
from .errors import (
    EmptyBadMachine, IllegalTransfer, InvariantViolation, MatchingFailure,
    NoLegalMachine, NoSaturatingMatching,
)
from .rounding import lemma1_violations, round_assignment
from .simplex import Infeasible, build_lp, solve_feasible

T_PLUS_L_OVER_EPS = "T_plus_L_over_eps"
TWO_T = "two_T"


@dataclass(frozen=True)
class MachineClassification:
    gamma: Fraction
    bad: tuple[int, ...]
    good: tuple[int, ...]
    other: tuple[int, ...]
    T: int
    L: Fraction
    loads: tuple[int, ...] = ()


@dataclass
class TransferGraph:
    left: list[int]                       # bad machines
    right: list[int]                      # good machines
    jmax: dict[int, int]                  # bad machine -> its longest job
    adj: dict[int, list[int]]             # bad machine -> legal good machines

    def edges(self) -> set[tuple[int, int]]:
        return {(a, b) for a in self.left for b in self.adj[a]}


def classify(inst: Instance, a: Assignment, T: int, L, gamma) -> MachineClassification:
    L, gamma = Fraction(L), Fraction(gamma)
    if gamma < 1:
        raise ValueError(f"gamma must be at least 1, got {gamma}")
    ld = loads(inst, a)
    hi = T + gamma * L
    lo = gamma * L
    bad, good, other = [], [], []
    for i, d in enumerate(ld):
        if d > hi:
            bad.append(i)
        elif d <= lo:
            good.append(i)
        else:
            other.append(i)
    return MachineClassification(gamma, tuple(bad), tuple(good), tuple(other), T, L, tuple(ld))


def good_for(inst: Instance, cls: MachineClassification, j: int) -> list[int]:
    """Good machines legal for job ``j``."""
    return [i for i in cls.good if legal(inst, i, j, cls.T)]


def build_transfer_graph(inst: Instance, a: Assignment, cls: MachineClassification,
                         T: int | None = None) -> TransferGraph:
    T = cls.T if T is None else T
    jmax, adj = {}, {}
    for i in cls.bad:
        j = largest_job(inst, a, i)
        if j is None:
            raise EmptyBadMachine(f"bad machine {i} has no jobs")
        jmax[i] = j
        adj[i] = [g for g in cls.good if legal(inst, g, j, T)]
    return TransferGraph(list(cls.bad), list(cls.good), jmax, adj)


def _hopcroft_karp(g: TransferGraph) -> dict[int, int]:
    match_l: dict[int, int] = {}
    match_r: dict[int, int] = {}
    INF = float("inf")

    def bfs():
        dist = {}
        queue = deque()
        for u in g.left:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in g.adj[u]:
                w = match_r.get(v)
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found, dist

    def dfs(u, dist):
        for v in g.adj[u]:
            w = match_r.get(v)
            if w is None or (dist[w] == dist[u] + 1 and dfs(w, dist)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while True:
        found, dist = bfs()
        if not found:
            break
        for u in g.left:
            if u not in match_l:
                dfs(u, dist)
    return match_l


def _deficient_set(g: TransferGraph, match_l: dict[int, int]) -> frozenset:
    # left vertices reachable from unmatched ones by alternating paths
    match_r = {v: u for u, v in match_l.items()}
    seen = {u for u in g.left if u not in match_l}
    queue = deque(sorted(seen))
    while queue:
        u = queue.popleft()
        for v in g.adj[u]:
            w = match_r.get(v)
            if w is not None and w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def check_hall(g: TransferGraph) -> Optional[frozenset]:
    """``None`` when a matching saturating the bad side exists, otherwise a
    set ``A`` of bad machines with fewer than ``|A|`` neighbours."""
    match_l = _hopcroft_karp(g)
    if len(match_l) == len(g.left):
        return None
    return _deficient_set(g, match_l)


def neighbours(g: TransferGraph, subset) -> set[int]:
    return {v for u in subset for v in g.adj[u]}


def saturating_matching(g: TransferGraph) -> list[tuple[int, int]]:
    match_l = _hopcroft_karp(g)
    if len(match_l) != len(g.left):
        raise NoSaturatingMatching(_deficient_set(g, match_l))
    return [(u, match_l[u]) for u in g.left]


def apply_transfers(inst: Instance, a: Assignment, matching, T: int | None = None) -> Assignment:
    """Move each bad machine's longest job to its matched good machine."""
    targets = [g for _, g in matching]
    if len(set(targets)) != len(targets):
        raise IllegalTransfer("a good machine is matched more than once")
    alpha = list(a.alpha)
    for bad, good in matching:
        j = largest_job(inst, a, bad)
        if j is None:
            raise EmptyBadMachine(f"bad machine {bad} has no jobs")
        t = inst.p[j][good]
        if t is None or (T is not None and t > T):
            raise IllegalTransfer(f"job {j} is not legal on machine {good}")
        alpha[j] = good
    return Assignment(tuple(alpha))


@dataclass
class Lemma2Report:
    k: int
    good: int
    part1: bool
    part2: bool                 # non-strict form
    part2_strict: bool
    part2_rhs: Fraction | None

    @property
    def ok(self) -> bool:
        return self.part1 and self.part2

    @property
    def equality(self) -> bool:
        return self.part2 and not self.part2_strict


def check_lemma2(cls: MachineClassification, T: int, L, gamma, m: int) -> Lemma2Report:
    """Check ``|bad| < m/(gamma+1)`` and
    ``|good| > (1 - 1/gamma) m + (|bad|/gamma)(T/L)``."""
    L, gamma = Fraction(L), Fraction(gamma)
    k, good = len(cls.bad), len(cls.good)
    part1 = k * (gamma + 1) < m
    if k == 0:
        rhs = (1 - 1 / gamma) * m
    elif L > 0:
        rhs = (1 - 1 / gamma) * m + Fraction(k) / gamma * Fraction(T) / L
    else:
        return Lemma2Report(k, good, part1, False, False, None)
    return Lemma2Report(k, good, part1, good >= rhs, good > rhs, rhs)


@dataclass
class AumResult:
    feasible: bool
    T: int
    L: Fraction
    assignment: Optional[Assignment] = None
    rounded: Optional[Assignment] = None
    epsilon: Optional[Fraction] = None
    bound: Optional[Fraction] = None
    bound_kind: Optional[str] = None
    classification: Optional[MachineClassification] = None
    transfers: list[tuple[int, int]] = field(default_factory=list)
    makespan: Optional[int] = None
    pivots: int = 0
    phase1_value: Optional[float] = None


def a_um(inst: Instance, T: int, L, *, avg_tol: float = 1e-6) -> AumResult:
    """Solve the budgeted LP, round it and rebalance.

    Returns an infeasible result when the LP has no solution, which shows no
    schedule with makespan ``T`` and average load ``L`` exists.  Otherwise the
    makespan is at most ``min(T + L/eps, 2T)`` with ``eps = eps(T)``.
    """
    L = Fraction(L)
    if T < 1:
        raise ValueError(f"T must be at least 1, got {T}")
    if L > T:
        raise ValueError(f"L={L} exceeds T={T}")
    try:
        model = build_lp(inst, T, budget=inst.m * L)
    except NoLegalMachine:
        return AumResult(False, T, L, epsilon=Fraction(0))
    sol = solve_feasible(model)
    if isinstance(sol, Infeasible):
        return AumResult(False, T, L, epsilon=feasibility_factor(inst, T),
                         pivots=sol.pivots, phase1_value=sol.phase1_value)

    alpha = round_assignment(inst, sol)
    if lemma1_violations(inst, alpha, T):
        raise InvariantViolation(f"rounded schedule breaks the small-jobs bound on "
                                 f"machines {lemma1_violations(inst, alpha, T)}")
    if inst.n and makespan(inst, alpha) > 2 * T:
        raise InvariantViolation("rounded makespan exceeds 2T")
    if float(average_load(inst, alpha)) > float(L) + avg_tol:
        raise InvariantViolation(f"rounded average load {average_load(inst, alpha)} exceeds L={L}")

    eps = feasibility_factor(inst, T)
    out = AumResult(True, T, L, rounded=alpha, epsilon=eps, pivots=sol.pivots)
    if eps <= L / T:
        out.assignment, out.bound, out.bound_kind = alpha, Fraction(2 * T), TWO_T
        out.makespan = makespan(inst, alpha) if inst.n else 0
        return out

    gamma = 1 / eps
    cls = classify(inst, alpha, T, L, gamma)
    g = build_transfer_graph(inst, alpha, cls, T)
    violating = check_hall(g)
    if violating is not None:
        raise MatchingFailure(
            f"Hall condition fails for bad machines {sorted(violating)} "
            f"(neighbours {sorted(neighbours(g, violating))}); T={T} L={L} eps={eps} "
            f"loads={list(cls.loads)}"
        )
    matching = saturating_matching(g)
    beta = apply_transfers(inst, alpha, matching, T)
    bound = T + L / eps
    over = [i for i, d in enumerate(loads(inst, beta)) if d > bound]
    if over:
        raise InvariantViolation(f"machines {over} exceed T + L/eps = {bound}")
    moved = [j for j in range(inst.n) if alpha[j] != beta[j]]
    if sorted(moved) != sorted(g.jmax.values()):
        raise InvariantViolation(f"expected to move {sorted(g.jmax.values())}, moved {moved}")
    out.assignment, out.bound, out.bound_kind = beta, bound, T_PLUS_L_OVER_EPS
    out.classification, out.transfers = cls, matching
    out.makespan = makespan(inst, beta) if inst.n else 0
    return out
