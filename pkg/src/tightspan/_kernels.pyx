# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def descent(sizes, feasible, alpha, loads, long long max_moves):
    cdef i64[::1] sz = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef cnp.uint8_t[:, ::1] feas = np.ascontiguousarray(feasible, dtype=np.uint8)
    cdef i64[::1] a = np.array(alpha, dtype=np.int64)
    cdef i64[::1] ld = np.array(loads, dtype=np.int64)
    cdef Py_ssize_t n = sz.shape[0], m = ld.shape[0]
    cdef Py_ssize_t j, i, bj, bi
    cdef i64 best, src, gain
    cdef long long moves = 0
    cdef bint converged = False
    with nogil:
        while True:
            best = 0
            bj = -1
            bi = -1
            for j in range(n):
                src = ld[a[j]] - sz[j]
                if src - best <= 0:
                    continue
                for i in range(m):
                    if feas[j, i]:
                        gain = src - ld[i]
                        if gain > best:
                            best = gain
                            bj = j
                            bi = i
            if bj < 0:
                converged = True
                break
            if moves >= max_moves:
                break
            ld[a[bj]] -= sz[bj]
            ld[bi] += sz[bj]
            a[bj] = bi
            moves += 1
    for j in range(n):
        alpha[j] = a[j]
    for i in range(m):
        loads[i] = ld[i]
    return moves, converged


cdef struct Search:
    Py_ssize_t n
    Py_ssize_t m
    i64* times       # n x m, in branching order
    cnp.uint8_t* feas
    i64* rest        # suffix sums of per-job minimum times
    i64* rest_max    # suffix maxima of per-job minimum times
    i64* ld
    i64* cur
    i64* witness
    i64 best
    i64 T
    i64 budget
    long long nodes
    long long node_limit
    bint aborted
    bint found


cdef void _min_dfs(Search* s, Py_ssize_t k, i64 total, i64 top) noexcept nogil:
    cdef Py_ssize_t i, q
    cdef i64 t, new, lb, avg
    s.nodes += 1
    if s.nodes > s.node_limit:
        s.aborted = True
        return
    if k == s.n:
        if top < s.best:
            s.best = top
            s.found = True
            for q in range(s.n):
                s.witness[q] = s.cur[q]
        return
    lb = top
    if s.rest_max[k] > lb:
        lb = s.rest_max[k]
    avg = (total + s.rest[k] + s.m - 1) // s.m
    if avg > lb:
        lb = avg
    if lb >= s.best:
        return
    for i in range(s.m):
        if not s.feas[k * s.m + i]:
            continue
        t = s.times[k * s.m + i]
        new = s.ld[i] + t
        if new >= s.best:
            continue
        s.ld[i] = new
        s.cur[k] = i
        _min_dfs(s, k + 1, total + t, top if top > new else new)
        s.ld[i] -= t
        if s.aborted:
            return


cdef bint _exists_dfs(Search* s, Py_ssize_t k, i64 total) noexcept nogil:
    cdef Py_ssize_t i
    cdef i64 t
    s.nodes += 1
    if s.nodes > s.node_limit:
        s.aborted = True
        return False
    if total + s.rest[k] > s.budget:
        return False
    if k == s.n:
        return True
    for i in range(s.m):
        if not s.feas[k * s.m + i]:
            continue
        t = s.times[k * s.m + i]
        if s.ld[i] + t > s.T:
            continue
        s.ld[i] += t
        s.cur[k] = i
        if _exists_dfs(s, k + 1, total + t):
            return True
        s.ld[i] -= t
        if s.aborted:
            return False
    return False


cdef _prepare(times, feasible, order, i64 T, bint cap):
    # rows permuted into branching order; entries above T masked when cap
    t = np.ascontiguousarray(np.asarray(times, dtype=np.int64)[np.asarray(order, dtype=np.int64)])
    f = np.ascontiguousarray(np.asarray(feasible, dtype=np.uint8)[np.asarray(order, dtype=np.int64)])
    if cap:
        f = np.ascontiguousarray((f != 0) & (t <= T), dtype=np.uint8)
    return t, f


def _run(times, feasible, order, long long node_limit, i64 best, i64 T, i64 budget, bint exists):
    cdef Py_ssize_t n = len(order)
    if n == 0:
        return (True, [], 1, True) if exists else (0, [], 1, True)
    t, f = _prepare(times, feasible, order, T, exists)
    cdef Py_ssize_t m = t.shape[1]
    cdef i64[:, ::1] tv = t
    cdef cnp.uint8_t[:, ::1] fv = f
    cdef Py_ssize_t k, i
    cdef i64 mn
    rest = np.zeros(n + 1, dtype=np.int64)
    rest_max = np.zeros(n + 1, dtype=np.int64)
    cdef i64[::1] rv = rest, rmv = rest_max
    for k in range(n - 1, -1, -1):
        mn = -1
        for i in range(m):
            if fv[k, i] and (mn < 0 or tv[k, i] < mn):
                mn = tv[k, i]
        if mn < 0:
            return (False, None, 0, True) if exists else (best, None, 0, True)
        rv[k] = rv[k + 1] + mn
        rmv[k] = mn if mn > rmv[k + 1] else rmv[k + 1]
    ld = np.zeros(m, dtype=np.int64)
    cur = np.zeros(n, dtype=np.int64)
    wit = np.zeros(n, dtype=np.int64)
    cdef i64[::1] ldv = ld, cv = cur, wv = wit
    cdef Search s
    s.n = n
    s.m = m
    s.times = &tv[0, 0]
    s.feas = &fv[0, 0]
    s.rest = &rv[0]
    s.rest_max = &rmv[0]
    s.ld = &ldv[0]
    s.cur = &cv[0]
    s.witness = &wv[0]
    s.best = best
    s.T = T
    s.budget = budget
    s.nodes = 0
    s.node_limit = node_limit
    s.aborted = False
    s.found = False
    cdef bint ok
    if exists:
        with nogil:
            ok = _exists_dfs(&s, 0, 0)
        witness = None
        if ok:
            witness = [0] * n
            for k in range(n):
                witness[int(order[k])] = int(cv[k])
        return ok, witness, s.nodes, not s.aborted
    with nogil:
        _min_dfs(&s, 0, 0, 0)
    witness = None
    if s.found:
        witness = [0] * n
        for k in range(n):
            witness[int(order[k])] = int(wv[k])
    return s.best, witness, s.nodes, not s.aborted


def bnb_min_makespan(times, feasible, order, best, node_limit):
    return _run(times, feasible, order, node_limit, best, 0, 0, False)


def bnb_exists(times, feasible, order, T, budget, node_limit):
    return _run(times, feasible, order, node_limit, 0, T, budget, True)
