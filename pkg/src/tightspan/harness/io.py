"""Instance and assignment JSON formats.

Instance: ``{"m": int, "n": int, "p": [[int | null] * m] * n}`` with rows
indexed by job and ``null`` marking an infeasible pair.  Assignment: a JSON
array of ``n`` one-based machine indices.
"""
from __future__ import annotations

import json
from pathlib import Path

from ..core import MAX_TIME, Assignment, Instance
from ..errors import InvalidInstance, ParseError


def parse_instance(data: bytes | str) -> Instance:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"instance is not UTF-8: {exc}") from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    if not isinstance(obj, dict):
        raise ParseError("instance must be a JSON object")
    for key in ("m", "n", "p"):
        if key not in obj:
            raise ParseError(f"missing key {key!r}")
    m, n, p = obj["m"], obj["n"], obj["p"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ParseError(f"m must be a positive integer, got {m!r}")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParseError(f"n must be a non-negative integer, got {n!r}")
    if not isinstance(p, list) or len(p) != n:
        raise ParseError(f"p must be a list of {n} rows")
    rows = []
    for j, row in enumerate(p):
        if not isinstance(row, list) or len(row) != m:
            raise ParseError(f"row must be a list of {m} entries", row=j)
        for i, t in enumerate(row):
            if t is None:
                continue
            if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= MAX_TIME:
                raise ParseError(f"entry {t!r} is not an integer in [1, {MAX_TIME}] or null",
                                 row=j, column=i)
        if all(t is None for t in row):
            raise ParseError("job has no feasible machine", row=j)
        rows.append(tuple(row))
    try:
        return Instance(m=m, n=n, p=tuple(rows))
    except InvalidInstance as exc:
        raise ParseError(str(exc)) from None


def dump_instance(inst: Instance) -> str:
    return json.dumps({"m": inst.m, "n": inst.n, "p": [list(r) for r in inst.p]})


def load_instance(path) -> Instance:
    return parse_instance(Path(path).read_bytes())


def parse_assignment(data: bytes | str, inst: Instance | None = None) -> Assignment:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from None
    if not isinstance(obj, list) or not all(
        isinstance(i, int) and not isinstance(i, bool) for i in obj
    ):
        raise ParseError("assignment must be a JSON array of integers")
    if inst is not None:
        if len(obj) != inst.n:
            raise ParseError(f"assignment has {len(obj)} entries, instance has {inst.n} jobs")
        for j, i in enumerate(obj):
            if not 1 <= i <= inst.m:
                raise ParseError(f"machine {i} outside 1..{inst.m}", row=j)
    return Assignment(tuple(i - 1 for i in obj))


def dump_assignment(a: Assignment) -> str:
    return json.dumps([i + 1 for i in a.alpha])
