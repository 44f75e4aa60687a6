"""The compiled and pure-Python kernels must agree bit for bit."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightspan import _kernels_py, kernels

pytestmark = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")


@st.composite
def problems(draw, max_m=4, max_n=8):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(0, max_n))
    times = np.array(draw(st.lists(st.lists(st.integers(1, 15), min_size=m, max_size=m),
                                   min_size=n, max_size=n)), dtype=np.int64).reshape(n, m)
    feas = np.array(draw(st.lists(st.lists(st.booleans(), min_size=m, max_size=m),
                                  min_size=n, max_size=n)), dtype=np.uint8).reshape(n, m)
    for j in range(n):
        if not feas[j].any():
            feas[j, draw(st.integers(0, m - 1))] = 1
    alpha = np.array([int(np.flatnonzero(feas[j])[draw(st.integers(0, int(feas[j].sum()) - 1))])
                      for j in range(n)], dtype=np.int64)
    order = np.array(draw(st.permutations(list(range(n)))), dtype=np.int64)
    return times, feas, alpha, order


def _loads(sizes, alpha, m):
    ld = np.zeros(m, dtype=np.int64)
    for j, i in enumerate(alpha):
        ld[i] += sizes[j]
    return ld


def test_backend_flag():
    assert kernels.BACKEND == "cython"
    assert kernels.backend is kernels.compiled


@settings(max_examples=300, deadline=None)
@given(problems(), st.integers(0, 50))
def test_descent_parity(prob, cap):
    times, feas, alpha, _ = prob
    m = feas.shape[1]
    sizes = times[:, 0].copy()
    outs = []
    for mod in (_kernels_py, kernels.compiled):
        a = alpha.copy()
        ld = _loads(sizes, a, m)
        res = mod.descent(sizes, feas, a, ld, cap)
        outs.append((tuple(res), a.tolist(), ld.tolist()))
    assert outs[0] == outs[1]


@settings(max_examples=300, deadline=None)
@given(problems(), st.integers(1, 60), st.sampled_from([5, 50, 10**6]))
def test_bnb_parity(prob, T, limit):
    times, feas, _, order = prob
    best = int(times.sum()) + 1
    py = _kernels_py.bnb_min_makespan(times, feas, order, best, limit)
    cy = kernels.compiled.bnb_min_makespan(times, feas, order, best, limit)
    assert (py[0], py[2], py[3]) == (cy[0], cy[2], cy[3])
    assert (py[1] is None) == (cy[1] is None)
    if py[1] is not None:
        assert list(py[1]) == list(cy[1])
    budget = T * feas.shape[1]
    py = _kernels_py.bnb_exists(times, feas, order, T, budget, limit)
    cy = kernels.compiled.bnb_exists(times, feas, order, T, budget, limit)
    assert py[0] == cy[0] and py[2:] == cy[2:]
    if py[1] is not None:
        assert list(py[1]) == list(cy[1])
