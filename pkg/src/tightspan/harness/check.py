"""Re-verify the proven properties of a given assignment."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..balance import build_transfer_graph, check_hall, check_lemma2, classify
from ..core import Assignment, Instance, average_load, feasibility_factor, loads, makespan
from ..restricted import (
    build_assignment_graph, improving_move, overload_threshold, partition, path_exists,
)
from ..rounding import lemma1_violations
from .driver import auto_drive_general

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""

    def line(self) -> str:
        return f"{self.status} {self.name}" + (f": {self.detail}" if self.detail else "")


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def general_checks(inst: Instance, a: Assignment, T: int, L: Fraction) -> list[Check]:
    out = []
    span = makespan(inst, a) if inst.n else 0
    avg = average_load(inst, a)
    bad = lemma1_violations(inst, a, T)
    out.append(Check("small-jobs-sum", _status(not bad),
                     f"machines {bad} exceed T={T} without their longest job" if bad else f"T={T}"))
    out.append(Check("makespan<=2T", _status(span <= 2 * T), f"{span} vs {2 * T}"))
    out.append(Check("average<=L", _status(avg <= L), f"{avg} vs {L}"))
    eps = feasibility_factor(inst, T)
    pre = span <= 2 * T and avg <= L and L <= T and eps > 0
    if pre:
        gamma = 1 / eps
        cls = classify(inst, a, T, L, gamma)
        rep = check_lemma2(cls, T, L, gamma, inst.m)
        out.append(Check("bad-count", _status(rep.part1), f"|bad|={rep.k}, m={inst.m}, gamma={gamma}"))
        out.append(Check("good-count", _status(rep.part2),
                         f"|good|={rep.good} vs {rep.part2_rhs}" + (" (equality)" if rep.equality else "")))
        if eps > L / T:
            violating = check_hall(build_transfer_graph(inst, a, cls, T))
            out.append(Check("hall", _status(violating is None),
                             "" if violating is None else f"deficient set {sorted(violating)}"))
        else:
            out.append(Check("hall", SKIP, f"eps={eps} <= L/T={L / T}"))
    else:
        for name in ("bad-count", "good-count", "hall"):
            out.append(Check(name, SKIP, "preconditions (makespan<=2T, average<=L, eps>0) not met"))
    bound = Fraction(2 * T) if eps <= L / T else min(T + L / eps, Fraction(2 * T))
    out.append(Check("general-bound", _status(span <= bound), f"makespan {span} vs {bound}"))
    return out


def restricted_checks(inst: Instance, a: Assignment) -> list[Check]:
    pmax = inst.p_max
    delta = overload_threshold(inst)
    part = partition(inst, a, pmax, delta)
    span = makespan(inst, a) if inst.n else 0
    path = path_exists(build_assignment_graph(inst, a, pmax), part.m_plus, part.m_minus)
    return [
        Check("partition", PASS, f"M+={list(part.m_plus)} M0={list(part.m_zero)} "
                                 f"M-={list(part.m_minus)} (w={pmax}, delta={delta})"),
        Check("overloaded-empty", _status(not part.m_plus)),
        Check("augmenting-path", PASS if part.m_plus and path is not None or not part.m_plus else FAIL,
              "none needed" if not part.m_plus else f"path {path}"),
        Check("fixed-point", _status(improving_move(inst, a) is None)),
        Check("restricted-bound", _status(span <= pmax + delta), f"makespan {span} vs {pmax + delta}"),
    ]


def check_assignment(inst: Instance, a: Assignment, T: int | None = None,
                     L: Fraction | None = None) -> list[Check]:
    out = [Check("loads", PASS, f"{loads(inst, a)} makespan {makespan(inst, a) if inst.n else 0}")]
    if inst.is_restricted:
        out += restricted_checks(inst, a)
    if not inst.is_restricted or T is not None:
        if T is None or L is None:
            drive = auto_drive_general(inst)
            T, L = drive.T, drive.L
        out += general_checks(inst, a, T, L)
    return out
