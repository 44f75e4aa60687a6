"""Sub-machine packing and min-cost matching rounding of a fractional
assignment.

Each machine ``i`` is split into ``ceil(sum_j x_ij)`` unit bins.  The jobs
with ``x_ij > 0`` are packed into them in non-increasing order of ``p_ij``
(ties by job index), a job spilling into the next bin when the current one
fills.  A minimum-cost matching that saturates all jobs then picks one bin,
hence one machine, per job.  Because every bin after the first only holds
jobs no longer than anything in the previous (full) bin, a machine's load
minus its longest job is at most ``sum_j p_ij x_ij <= T``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import Sequence

import numpy as np

from .core import Assignment, Instance, largest_job, loads
from .errors import NoPerfectMatching
from .simplex import FractionalAssignment, ZERO_TOL, clean

FILL_TOL = 1e-9


@dataclass
class SubMachinePacking:
    # bins[i][s] is the list of (job, packed fraction) in bin s of machine i
    bins: list[list[list[tuple[int, float]]]]

    def k(self, i: int) -> int:
        return len(self.bins[i])

    def fractions(self, i: int, j: int) -> float:
        return sum(f for b in self.bins[i] for jj, f in b if jj == j)


@dataclass
class RoundingGraph:
    n: int
    nodes: list[tuple[int, int]]             # (machine, bin) per sub-machine node
    edges: list[dict[int, int]]              # per job: node index -> cost

    def edge_set(self) -> set[tuple[int, tuple[int, int]]]:
        return {(j, self.nodes[v]) for j in range(self.n) for v in self.edges[j]}


def pack_bins(inst: Instance, x) -> SubMachinePacking:
    if isinstance(x, FractionalAssignment):
        x = x.x
    x = clean(np.asarray(x, dtype=float))
    bins = []
    for i in range(inst.m):
        order = sorted(
            (j for j in range(inst.n) if x[j, i] > 0),
            key=lambda j: (-inst.p[j][i], j),
        )
        machine_bins: list[list[tuple[int, float]]] = []
        current: list[tuple[int, float]] = []
        room = 1.0
        for j in order:
            amount = float(x[j, i])
            while amount > FILL_TOL:
                take = min(amount, room)
                current.append((j, take))
                amount -= take
                room -= take
                if room <= FILL_TOL:
                    machine_bins.append(current)
                    current, room = [], 1.0
        if current:
            machine_bins.append(current)
        bins.append(machine_bins)
    return SubMachinePacking(bins)


def build_rounding_graph(inst: Instance, packing: SubMachinePacking,
                         costs: Sequence[Sequence[int]] | None = None) -> RoundingGraph:
    nodes = []
    edges: list[dict[int, int]] = [dict() for _ in range(inst.n)]
    for i, machine_bins in enumerate(packing.bins):
        for s, content in enumerate(machine_bins):
            v = len(nodes)
            nodes.append((i, s))
            for j, f in content:
                if f > 0:
                    edges[j][v] = inst.p[j][i] if costs is None else costs[j][i]
    return RoundingGraph(inst.n, nodes, edges)


def min_cost_perfect_matching(g: RoundingGraph) -> tuple[list[int], int]:
    """Minimum-cost matching covering every job node.

    Successive shortest augmenting paths with dual potentials (the
    Hungarian method for a rectangular cost matrix), skipping absent edges.
    Returns ``(node index per job, total cost)``.
    """
    n, K = g.n, len(g.nodes)
    if n > K:
        raise NoPerfectMatching(f"{n} jobs but only {K} sub-machines")
    # 1-based rows (jobs) and columns (nodes); column 0 is the virtual root
    u = [0] * (n + 1)
    v = [0] * (K + 1)
    owner = [0] * (K + 1)
    way = [0] * (K + 1)
    for row in range(1, n + 1):
        owner[0] = row
        col0 = 0
        minv = [inf] * (K + 1)
        used = [False] * (K + 1)
        while True:
            used[col0] = True
            r0 = owner[col0]
            for node, c in g.edges[r0 - 1].items():
                col = node + 1
                if not used[col]:
                    cur = c - u[r0] - v[col]
                    if cur < minv[col]:
                        minv[col] = cur
                        way[col] = col0
            delta, col1 = inf, -1
            for col in range(1, K + 1):
                if not used[col] and minv[col] < delta:
                    delta, col1 = minv[col], col
            if col1 < 0:
                raise NoPerfectMatching(f"job {row - 1} cannot be matched")
            for col in range(K + 1):
                if used[col]:
                    u[owner[col]] += delta
                    v[col] -= delta
                else:
                    minv[col] -= delta
            col0 = col1
            if owner[col0] == 0:
                break
        while col0:
            col1 = way[col0]
            owner[col0] = owner[col1]
            col0 = col1
    match = [-1] * n
    for col in range(1, K + 1):
        if owner[col]:
            match[owner[col] - 1] = col - 1
    cost = sum(g.edges[j][match[j]] for j in range(n))
    return match, cost


def round_assignment(inst: Instance, x, T: int | None = None) -> Assignment:
    """Round a feasible fractional assignment to an integral one.

    ``T`` is accepted for symmetry with the LP threshold; the result only
    uses pairs already in the support of ``x``.
    """
    packing = pack_bins(inst, x)
    g = build_rounding_graph(inst, packing)
    match, _ = min_cost_perfect_matching(g)
    return Assignment(tuple(g.nodes[v][0] for v in match))


def lemma1_violations(inst: Instance, a: Assignment, T: int) -> list[int]:
    """Machines whose load without their longest job exceeds ``T``."""
    bad = []
    for i, total in enumerate(loads(inst, a)):
        top = largest_job(inst, a, i)
        if top is not None and total - inst.p[top][i] > T:
            bad.append(i)
    return bad
