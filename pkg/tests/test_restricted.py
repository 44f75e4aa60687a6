import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightspan.core import Assignment, Instance, loads, makespan
from tightspan.errors import IllegalPush, InvalidInstance, MoveLimitExceeded
from tightspan.oracle import optimal_makespan
from tightspan.restricted import (
    DESCENT, PATH_PUSH, THRESHOLD_33_17, build_assignment_graph, descend, improving_move,
    initial_assignment, move_cap, partition, path_exists, push_along_path, ratio_bound,
    reachable_machines, solve_restricted,
)


def all_on(sizes, m):
    return Instance.restricted(sizes, [list(range(m))] * len(sizes), m)


@st.composite
def restricted_instances(draw, max_m=5, max_n=10, pmax=12):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(0, max_n))
    sizes = draw(st.lists(st.integers(1, pmax), min_size=n, max_size=n))
    sets = [draw(st.lists(st.integers(0, m - 1), min_size=1, max_size=m, unique=True)) for _ in range(n)]
    return Instance.restricted(sizes, sets, m)


def potential(inst, a):
    return sum(d * d for d in loads(inst, a))


def test_initial_assignment_example():
    inst = all_on([10, 2, 2, 2], 4)
    a = initial_assignment(inst)
    assert loads(inst, a) == [10, 2, 2, 2]


def test_partition_example():
    inst = Instance.restricted([12, 8, 4], [[0], [1], [2]], 3)
    part = partition(inst, Assignment((0, 1, 2)), 5, 6)
    assert (part.m_plus, part.m_zero, part.m_minus) == ((0,), (1,), (2,))


def test_assignment_graph_arcs():
    inst = Instance.restricted([3, 3], [[0, 1, 2], [1]], 3)
    g = build_assignment_graph(inst, Assignment((0, 1)), 3)
    assert g.machine_jobs == [[0], [1], []]
    assert g.job_machines == [[1, 2], []]
    assert reachable_machines(g, 0) == {0, 1, 2}
    assert path_exists(g, [0], [2]) == [0, 0, 2]
    assert path_exists(g, [1], [0, 2]) is None


def test_push_along_two_hop_path():
    inst = Instance.restricted([5, 3], [[0, 1], [1, 2]], 3)
    a = Assignment((0, 1))
    b = push_along_path(inst, a, [0, 0, 1, 1, 2])
    assert loads(inst, a) == [5, 3, 0]
    assert loads(inst, b) == [0, 5, 3]
    assert loads(inst, b)[1] - loads(inst, a)[1] == 2
    with pytest.raises(IllegalPush):
        push_along_path(inst, a, [0, 1, 2])
    with pytest.raises(IllegalPush):
        push_along_path(inst, a, [0, 0])
    with pytest.raises(IllegalPush):
        push_along_path(inst, a, [0, 0, 1], w=4)


def test_improving_move_examples():
    inst = Instance.restricted([4, 6], [[0, 1], [0]], 2)
    assert improving_move(inst, Assignment((0, 0))) == (0, 1)
    inst = Instance.restricted([4, 3, 3], [[0, 1], [0], [1]], 2)
    assert loads(inst, Assignment((0, 0, 1))) == [7, 3]
    assert improving_move(inst, Assignment((0, 0, 1))) is None


def test_solve_identical_jobs():
    inst = all_on([3, 3, 3, 3], 2)
    res = solve_restricted(inst)
    assert loads(inst, res.assignment) == [6, 6]
    assert optimal_makespan(inst).opt_makespan == 6


def test_solve_one_long_job():
    inst = all_on([10, 2, 2, 2], 4)
    res = solve_restricted(inst)
    assert res.makespan == 10 and res.bound == 14
    assert optimal_makespan(inst).opt_makespan == 10
    assert res.ratio.ratio == Fraction(7, 5) and res.ratio.beats_33_17


def test_ratio_bound_examples():
    rb = ratio_bound(all_on([10, 2, 2, 2], 4))
    assert (rb.q, rb.epsilon, rb.ratio) == (Fraction(2, 5), 1, Fraction(7, 5))
    rb = ratio_bound(all_on([1000], 100))
    assert rb.q == Fraction(1, 100) and rb.ratio == Fraction(101, 100) and rb.beats_33_17
    # q >= eps: no ratio claimed
    rb = ratio_bound(all_on([5, 5], 2))
    assert rb.q == 1 and rb.ratio is None and not rb.beats_33_17


def test_ratio_boundary_is_not_flagged():
    # k_min=17 of m=17, q = 16/17: ratio exactly 33/17
    inst = all_on([17] * 16, 17)
    rb = ratio_bound(inst)
    assert rb.q == Fraction(16, 17)
    assert rb.ratio == THRESHOLD_33_17 and not rb.beats_33_17


def test_empty_instance():
    res = solve_restricted(Instance(3, 0, ()))
    assert res.makespan == 0 and res.ratio.ratio is None


def test_rejects_unrelated():
    with pytest.raises(InvalidInstance):
        solve_restricted(Instance.from_rows([[1, 2]]))
    with pytest.raises(ValueError):
        solve_restricted(all_on([1], 1), strategy="nope")


def test_move_cap_enforced(backend):
    inst = all_on([5, 5, 5, 5], 2)
    with pytest.raises(MoveLimitExceeded):
        descend(inst, Assignment((0, 0, 0, 0)), backend=_Capped(backend))


class _Capped:
    """Backend wrapper with a zero move budget."""

    def __init__(self, inner):
        self.inner = inner

    def descent(self, sizes, feasible, alpha, loads, max_moves):
        return self.inner.descent(sizes, feasible, alpha, loads, 0)


@settings(max_examples=150, deadline=None)
@given(restricted_instances())
def test_stepwise_descent_matches_kernel(inst):
    a = initial_assignment(inst)
    steps = 0
    cur = a
    while (mv := improving_move(inst, cur)) is not None:
        j, i = mv
        nxt = Assignment(tuple(i if k == j else x for k, x in enumerate(cur.alpha)))
        assert potential(inst, nxt) <= potential(inst, cur) - 2
        cur = nxt
        steps += 1
        assert steps <= move_cap(inst)
    got, moves = descend(inst, a)
    assert got == cur and moves == steps


@settings(max_examples=150, deadline=None)
@given(restricted_instances(), st.sampled_from([DESCENT, PATH_PUSH]))
def test_solver_invariants(inst, strategy):
    res = solve_restricted(inst, strategy=strategy)
    assert all(res.checks.values())
    assert res.makespan * res.k_min <= res.p_max * res.k_min + sum(inst.sizes or [0])
    assert not res.partition.m_plus


@pytest.mark.parametrize("seed", range(40))
def test_against_oracle(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 3), rng.randint(1, 8)
    sets = [rng.sample(range(m), rng.randint(1, m)) for _ in range(n)]
    inst = Instance.restricted([rng.randint(1, 10) for _ in range(n)], sets, m)
    res = solve_restricted(inst)
    opt = optimal_makespan(inst).opt_makespan
    assert opt <= res.makespan <= res.bound
    rb = res.ratio
    if rb.ratio is not None:
        assert Fraction(res.makespan, opt) <= rb.ratio
