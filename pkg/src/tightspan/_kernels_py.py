"""Pure-Python kernels; same contract as the compiled ``_kernels`` module.

Arrays may be numpy arrays or plain sequences.  ``feasible[j][i]`` is
nonzero when job ``j`` may run on machine ``i``; ``times[j][i]`` is only
read where ``feasible`` is set.
"""


def descent(sizes, feasible, alpha, loads, max_moves):
    """Best-response descent on a restricted instance, in place.

    Repeatedly moves the job ``j`` to the machine ``i`` maximising
    ``loads[alpha[j]] - loads[i] - sizes[j]`` while that gain is positive
    (first job, then first machine, on ties).  Returns ``(moves, converged)``;
    ``converged`` is false when ``max_moves`` was reached first.
    """
    n = len(sizes)
    m = len(loads)
    sizes = [int(s) for s in sizes]
    feas = [[bool(feasible[j][i]) for i in range(m)] for j in range(n)]
    a = [int(x) for x in alpha]
    ld = [int(x) for x in loads]
    moves = 0
    converged = False
    while True:
        best = 0
        bj = -1
        bi = -1
        for j in range(n):
            src = ld[a[j]] - sizes[j]
            if src - best <= 0:
                continue
            row = feas[j]
            for i in range(m):
                if row[i]:
                    gain = src - ld[i]
                    if gain > best:
                        best, bj, bi = gain, j, i
        if bj < 0:
            converged = True
            break
        if moves >= max_moves:
            break
        ld[a[bj]] -= sizes[bj]
        ld[bi] += sizes[bj]
        a[bj] = bi
        moves += 1
    for j in range(n):
        alpha[j] = a[j]
    for i in range(m):
        loads[i] = ld[i]
    return moves, converged


def bnb_min_makespan(times, feasible, order, best, node_limit):
    """Depth-first branch and bound for the minimum makespan.

    Jobs are branched in ``order``; machines in index order.  Only
    schedules with makespan strictly below ``best`` are accepted.  Returns
    ``(best, witness, nodes, complete)`` where ``witness`` is the first
    schedule found at the final value (``None`` if none beat the initial
    ``best``) and ``complete`` is false when ``node_limit`` stopped the search.
    """
    n = len(order)
    m = len(times[0]) if n else 0
    order = [int(j) for j in order]
    opts = []
    mins = []
    for j in order:
        row = [(i, int(times[j][i])) for i in range(m) if feasible[j][i]]
        opts.append(row)
        mins.append(min(t for _, t in row))
    rest = [0] * (n + 1)
    rest_max = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        rest[k] = rest[k + 1] + mins[k]
        rest_max[k] = max(rest_max[k + 1], mins[k])
    ld = [0] * m
    cur = [0] * n
    state = {"best": int(best), "witness": None, "nodes": 0, "aborted": False}

    def dfs(k, total, top):
        state["nodes"] += 1
        if state["nodes"] > node_limit:
            state["aborted"] = True
            return
        if k == n:
            if top < state["best"]:
                state["best"] = top
                w = [0] * n
                for pos, j in enumerate(order):
                    w[j] = cur[pos]
                state["witness"] = w
            return
        lb = max(top, rest_max[k], -(-(total + rest[k]) // m))
        if lb >= state["best"]:
            return
        for i, t in opts[k]:
            new = ld[i] + t
            if new >= state["best"]:
                continue
            ld[i] = new
            cur[k] = i
            dfs(k + 1, total + t, top if top > new else new)
            ld[i] -= t
            if state["aborted"]:
                return

    dfs(0, 0, 0)
    return state["best"], state["witness"], state["nodes"], not state["aborted"]


def bnb_exists(times, feasible, order, T, budget, node_limit):
    """Search for a schedule with every load ``<= T`` and total ``<= budget``.

    Returns ``(found, witness, nodes, complete)``.
    """
    n = len(order)
    m = len(times[0]) if n else 0
    order = [int(j) for j in order]
    opts = []
    mins = []
    for j in order:
        row = [(i, int(times[j][i])) for i in range(m) if feasible[j][i] and times[j][i] <= T]
        if not row:
            return False, None, 0, True
        opts.append(row)
        mins.append(min(t for _, t in row))
    rest = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        rest[k] = rest[k + 1] + mins[k]
    ld = [0] * m
    cur = [0] * n
    state = {"nodes": 0, "aborted": False}

    def dfs(k, total):
        state["nodes"] += 1
        if state["nodes"] > node_limit:
            state["aborted"] = True
            return False
        if total + rest[k] > budget:
            return False
        if k == n:
            return True
        for i, t in opts[k]:
            if ld[i] + t > T:
                continue
            ld[i] += t
            cur[k] = i
            if dfs(k + 1, total + t):
                return True
            ld[i] -= t
            if state["aborted"]:
                return False
        return False

    found = dfs(0, 0)
    witness = None
    if found:
        witness = [0] * n
        for pos, j in enumerate(order):
            witness[j] = cur[pos]
    return found, witness, state["nodes"], not state["aborted"]
