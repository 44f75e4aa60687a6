"""Run solvers over instance files and collect :class:`SolveReport` rows."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from ..balance import a_um
from ..core import Instance
from ..errors import InvariantViolation, MatchingFailure, TightspanError
from ..oracle import OracleLimits, optimal_makespan
from ..restricted import DESCENT, solve_restricted
from .driver import auto_drive_general
from .io import load_instance
from .report import PMAX_PLUS_L_OVER_EPS, SolveReport

MODES = ("general", "restricted", "oracle")


def _base(inst: Instance, name: str, mode: str) -> SolveReport:
    return SolveReport(instance=name, mode=mode, m=inst.m, n=inst.n,
                       restricted=inst.is_restricted, S=inst.support_size)


def general_report(inst: Instance, name: str = "", T: int | None = None,
                   L: Fraction | None = None) -> tuple[SolveReport, object]:
    """Run the general pipeline (auto-driven unless ``T`` and ``L`` are given)."""
    rep = _base(inst, name, "general")
    start = time.perf_counter()
    if T is None or L is None:
        drive = auto_drive_general(inst)
        result, pivots = drive.result, drive.pivots
    else:
        result = a_um(inst, T, L)
        pivots = result.pivots
    rep.wall_time = time.perf_counter() - start
    rep.T, rep.L, rep.epsilon, rep.pivots = result.T, result.L, result.epsilon, pivots
    if not result.feasible:
        rep.error = "infeasible"
        return rep, result
    rep.makespan = result.makespan
    rep.certified_bound = result.bound
    rep.bound_kind = result.bound_kind
    return rep, result


def restricted_report(inst: Instance, name: str = "",
                      strategy: str = DESCENT) -> tuple[SolveReport, object]:
    rep = _base(inst, name, "restricted")
    start = time.perf_counter()
    result = solve_restricted(inst, strategy=strategy)
    rep.wall_time = time.perf_counter() - start
    rep.epsilon, rep.L = result.epsilon, result.L
    rep.makespan, rep.certified_bound = result.makespan, result.bound
    rep.bound_kind = PMAX_PLUS_L_OVER_EPS
    rep.q = result.ratio.q
    rep.beats_33_17 = result.ratio.beats_33_17
    rep.moves = result.moves + result.pushes
    rep.W = sum(inst.sizes)
    return rep, result


def oracle_report(inst: Instance, name: str = "",
                  limits: OracleLimits | None = None) -> SolveReport:
    rep = _base(inst, name, "oracle")
    start = time.perf_counter()
    res = optimal_makespan(inst, limits)
    rep.wall_time = time.perf_counter() - start
    rep.makespan = rep.opt = res.opt_makespan
    rep.moves = res.nodes_explored
    return rep


def _error(inst: Instance, name: str, mode: str, exc: Exception) -> SolveReport:
    # proven guarantees failing are bugs, not per-row errors
    if isinstance(exc, (InvariantViolation, MatchingFailure)):
        raise exc
    rep = _base(inst, name, mode)
    rep.error = f"{type(exc).__name__}: {exc}"
    return rep


def bench_instance(args) -> list[SolveReport]:
    name, inst, modes = args
    rows: list[SolveReport] = []
    opt = None
    if "oracle" in modes:
        try:
            orow = oracle_report(inst, name)
            opt = orow.opt
        except TightspanError as exc:
            orow = _error(inst, name, "oracle", exc)
    if "general" in modes:
        try:
            rows.append(general_report(inst, name)[0])
        except TightspanError as exc:
            rows.append(_error(inst, name, "general", exc))
    if "restricted" in modes:
        if inst.is_restricted:
            try:
                rows.append(restricted_report(inst, name)[0])
            except TightspanError as exc:
                rows.append(_error(inst, name, "restricted", exc))
        else:
            rows.append(_error(inst, name, "restricted", ValueError("instance is not restricted")))
    if opt is not None:
        for r in rows:
            if not r.error:
                r.attach_opt(opt)
    if "oracle" in modes:
        rows.append(orow)
    return rows


def collect(directory) -> list[tuple[str, Instance]]:
    paths = sorted(Path(directory).glob("*.json"))
    return [(p.name, load_instance(p)) for p in paths]


def bench(instances: Sequence[tuple[str, Instance]], modes: Iterable[str],
          jobs: int = 1) -> list[SolveReport]:
    """One report per (instance, mode), in instance order then mode order."""
    modes = tuple(modes)
    unknown = set(modes) - set(MODES)
    if unknown:
        raise ValueError(f"unknown modes {sorted(unknown)}")
    work = [(name, inst, modes) for name, inst in instances]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(bench_instance, work))
    else:
        chunks = [bench_instance(w) for w in work]
    return [r for chunk in chunks for r in chunk]
