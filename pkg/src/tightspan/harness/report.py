"""Per-instance solve records and their CSV/JSON encodings."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Iterable, Optional

PMAX_PLUS_L_OVER_EPS = "pmax_plus_L_over_eps"

COLUMNS = [
    "instance", "mode", "m", "n", "restricted", "epsilon", "L", "T", "makespan",
    "certified_bound", "bound_kind", "q", "opt", "ratio_vs_opt", "beats_33_17",
    "moves", "pivots", "S", "W", "wall_time", "error",
]


@dataclass
class SolveReport:
    instance: str
    mode: str
    m: int
    n: int
    restricted: bool = False
    epsilon: Optional[Fraction] = None
    L: Optional[Fraction] = None
    T: Optional[int] = None
    makespan: Optional[int] = None
    certified_bound: Optional[Fraction] = None
    bound_kind: Optional[str] = None
    q: Optional[Fraction] = None
    opt: Optional[int] = None
    ratio_vs_opt: Optional[Fraction] = None
    beats_33_17: bool = False
    moves: Optional[int] = None
    pivots: Optional[int] = None
    S: Optional[int] = None
    W: Optional[int] = None
    wall_time: float = 0.0
    error: str = ""

    @property
    def violation(self) -> bool:
        return (self.makespan is not None and self.certified_bound is not None
                and self.makespan > self.certified_bound)

    def attach_opt(self, opt: int) -> None:
        self.opt = opt
        if self.makespan is not None and opt > 0:
            self.ratio_vs_opt = Fraction(self.makespan, opt)

    def as_dict(self) -> dict:
        return {k: _encode(v) for k, v in asdict(self).items()}


def _encode(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return round(v, 6)
    return v


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    return str(_encode(v))


def summary_row(reports: Iterable[SolveReport]) -> dict:
    reports = list(reports)
    ratios = [r.ratio_vs_opt for r in reports if r.ratio_vs_opt is not None]
    violations = sum(r.violation for r in reports)
    errors = sum(bool(r.error) for r in reports)
    row = {c: "" for c in COLUMNS}
    row.update(
        instance="__summary__", mode="summary",
        ratio_vs_opt=str(max(ratios)) if ratios else "",
        error=f"violations={violations};errors={errors};rows={len(reports)}",
    )
    return row


def to_csv(reports: Iterable[SolveReport], with_summary: bool = True) -> str:
    reports = list(reports)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        d = asdict(r)
        writer.writerow({c: _csv_cell(d[c]) for c in COLUMNS})
    if with_summary and reports:
        writer.writerow(summary_row(reports))
    return buf.getvalue()


def to_json(report: SolveReport) -> str:
    return json.dumps(report.as_dict())


assert [f.name for f in fields(SolveReport)] == COLUMNS
