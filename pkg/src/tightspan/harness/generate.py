"""Seeded random instances with a controlled feasibility factor."""
from __future__ import annotations

import os
import random
from dataclasses import dataclass

from ..core import INFEASIBLE, Instance

DEFAULT_SEED = 0


def default_seed() -> int:
    return int(os.environ.get("TIGHTSPAN_SEED", DEFAULT_SEED))


@dataclass(frozen=True)
class GeneratorSpec:
    m: int
    n: int
    pmax: int
    k: int
    seed: int = DEFAULT_SEED
    restricted: bool = False

    def __post_init__(self):
        if self.m < 1 or self.n < 0 or self.pmax < 1:
            raise ValueError(f"invalid generator sizes m={self.m} n={self.n} pmax={self.pmax}")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"k={self.k} must lie in [1, m={self.m}]")


def legal_sets(spec: GeneratorSpec) -> list[list[int]]:
    """The machine subsets drawn for each job (same stream as :func:`generate`)."""
    return [sorted(s) for s in _draw(spec)[1]]


def _draw(spec: GeneratorSpec):
    rng = random.Random(spec.seed)
    rows, sets = [], []
    for _ in range(spec.n):
        chosen = set(rng.sample(range(spec.m), spec.k))
        if spec.restricted:
            size = rng.randint(1, spec.pmax)
            row = [size if i in chosen else INFEASIBLE for i in range(spec.m)]
        else:
            row = [rng.randint(1, spec.pmax) if i in chosen else INFEASIBLE for i in range(spec.m)]
        rows.append(tuple(row))
        sets.append(chosen)
    return rows, sets


def generate(spec: GeneratorSpec) -> Instance:
    """Every job gets a uniformly random ``k``-subset of machines; times are
    uniform on ``[1, pmax]`` (one shared size per job when restricted)."""
    rows, _ = _draw(spec)
    return Instance(m=spec.m, n=spec.n, p=tuple(rows))
