import itertools
import random

import pytest

from tightspan import _kernels_py, kernels
from tightspan.core import Assignment, Instance

BACKENDS = [pytest.param(_kernels_py, id="python")]
if kernels.compiled is not None:
    BACKENDS.append(pytest.param(kernels.compiled, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_instance(rng: random.Random, m: int, n: int, pmax: int = 20,
                    density: float = 0.7, restricted: bool = False) -> Instance:
    rows = []
    for _ in range(n):
        size = rng.randint(1, pmax)
        row = [(size if restricted else rng.randint(1, pmax)) if rng.random() < density else None
               for _ in range(m)]
        if all(t is None for t in row):
            row[rng.randrange(m)] = size if restricted else rng.randint(1, pmax)
        rows.append(row)
    return Instance(m=m, n=n, p=tuple(tuple(r) for r in rows))


def all_assignments(inst: Instance):
    """Every feasible assignment (brute force; small instances only)."""
    choices = [inst.machines_of(j) for j in range(inst.n)]
    for combo in itertools.product(*choices):
        yield Assignment(combo)


def brute_loads(inst: Instance, a: Assignment) -> list[int]:
    out = []
    for i in range(inst.m):
        out.append(sum(inst.p[j][i] for j in range(inst.n) if a[j] == i))
    return out
