"""Dense O(n^3) weighted blossom algorithm, compiled with numba.

Primal-dual Edmonds matching on an adjacency matrix.  Vertices are 1-based
internally; indices ``n+1 .. 2n`` hold contracted blossoms.  Dual labels are
stored doubled so that integer weights keep every quantity integral.

All helpers mutate the state arrays in place.  Recursion in the textbook
formulation (blossom traversal, match propagation) is replaced by explicit
stacks so the kernel compiles in nopython mode.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_INF = np.int64(1) << np.int64(60)


@njit(cache=True, inline="always")
def _dist(lab, gu, gv, gw, a, b):
    return lab[gu[a, b]] + lab[gv[a, b]] - gw[a, b] * 2


@njit(cache=True)
def _update_slack(lab, gu, gv, gw, slack, u, x):
    if slack[x] == 0 or _dist(lab, gu, gv, gw, u, x) < _dist(lab, gu, gv, gw, slack[x], x):
        slack[x] = u


@njit(cache=True)
def _set_slack(n, lab, gu, gv, gw, slack, st, S, x):
    slack[x] = 0
    for u in range(1, n + 1):
        if gw[u, x] > 0 and st[u] != x and S[st[u]] == 0:
            _update_slack(lab, gu, gv, gw, slack, u, x)


@njit(cache=True)
def _q_push(n, flower, flen, queue, qs, stack, x):
    sp = 0
    stack[sp] = x
    sp += 1
    while sp > 0:
        sp -= 1
        y = stack[sp]
        if y <= n:
            queue[qs[1]] = y
            qs[1] += 1
        else:
            for i in range(flen[y] - 1, -1, -1):
                stack[sp] = flower[y, i]
                sp += 1


@njit(cache=True)
def _set_st(n, flower, flen, st, stack, x, b):
    sp = 0
    stack[sp] = x
    sp += 1
    while sp > 0:
        sp -= 1
        y = stack[sp]
        st[y] = b
        if y > n:
            for i in range(flen[y]):
                stack[sp] = flower[y, i]
                sp += 1


@njit(cache=True)
def _get_pr(flower, flen, b, xr):
    m = flen[b]
    pr = 0
    while flower[b, pr] != xr:
        pr += 1
    if pr % 2 == 1:
        i, j = 1, m - 1
        while i < j:
            flower[b, i], flower[b, j] = flower[b, j], flower[b, i]
            i += 1
            j -= 1
        return m - pr
    return pr


@njit(cache=True)
def _set_match(n, gu, gv, match, flower, flen, flower_from, tmp, pstack, u, v):
    sp = 0
    pstack[sp, 0] = u
    pstack[sp, 1] = v
    sp += 1
    while sp > 0:
        sp -= 1
        a = pstack[sp, 0]
        c = pstack[sp, 1]
        match[a] = gv[a, c]
        if a > n:
            xr = flower_from[a, gu[a, c]]
            pr = _get_pr(flower, flen, a, xr)
            for i in range(pr):
                pstack[sp, 0] = flower[a, i]
                pstack[sp, 1] = flower[a, i ^ 1]
                sp += 1
            pstack[sp, 0] = xr
            pstack[sp, 1] = c
            sp += 1
            m = flen[a]
            for i in range(m):
                tmp[i] = flower[a, (i + pr) % m]
            for i in range(m):
                flower[a, i] = tmp[i]


@njit(cache=True)
def _augment(n, gu, gv, match, st, pa, flower, flen, flower_from, tmp, pstack, u, v):
    while True:
        xnv = st[match[u]]
        _set_match(n, gu, gv, match, flower, flen, flower_from, tmp, pstack, u, v)
        if xnv == 0:
            return
        _set_match(n, gu, gv, match, flower, flen, flower_from, tmp, pstack, xnv, st[pa[xnv]])
        u = st[pa[xnv]]
        v = xnv


@njit(cache=True)
def _get_lca(match, st, pa, vis, meta, u, v):
    meta[1] += 1
    t = meta[1]
    while u != 0 or v != 0:
        if u != 0:
            if vis[u] == t:
                return u
            vis[u] = t
            u = st[match[u]]
            if u != 0:
                u = st[pa[u]]
        u, v = v, u
    return 0


@njit(cache=True)
def _matching_stage(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower, flen,
                    flower_from, queue, qs, stack, tmp, pstack, meta):
    n_x = meta[0]
    for x in range(1, n_x + 1):
        S[x] = -1
        slack[x] = 0
    qs[0] = 0
    qs[1] = 0
    for x in range(1, n_x + 1):
        if st[x] == x and match[x] == 0:
            pa[x] = 0
            S[x] = 0
            _q_push(n, flower, flen, queue, qs, stack, x)
    if qs[1] == 0:
        return False
    while True:
        while qs[0] < qs[1]:
            u = queue[qs[0]]
            qs[0] += 1
            if S[st[u]] == 1:
                continue
            for v in range(1, n + 1):
                if gw[u, v] > 0 and st[u] != st[v]:
                    if _dist(lab, gu, gv, gw, u, v) == 0:
                        if _on_found_edge(n, lab, gu, gv, gw, match, slack, st, pa, S, vis,
                                          flower, flen, flower_from, queue, qs, stack, tmp,
                                          pstack, meta, gu[u, v], gv[u, v]):
                            return True
                    else:
                        _update_slack(lab, gu, gv, gw, slack, u, st[v])
        n_x = meta[0]
        d = _INF
        for b in range(n + 1, n_x + 1):
            if st[b] == b and S[b] == 1:
                d = min(d, lab[b] // 2)
        for x in range(1, n_x + 1):
            if st[x] == x and slack[x] != 0:
                if S[x] == -1:
                    d = min(d, _dist(lab, gu, gv, gw, slack[x], x))
                elif S[x] == 0:
                    d = min(d, _dist(lab, gu, gv, gw, slack[x], x) // 2)
        for u in range(1, n + 1):
            if S[st[u]] == 0:
                if lab[u] <= d:
                    return False
                lab[u] -= d
            elif S[st[u]] == 1:
                lab[u] += d
        for b in range(n + 1, n_x + 1):
            if st[b] == b:
                if S[st[b]] == 0:
                    lab[b] += d * 2
                elif S[st[b]] == 1:
                    lab[b] -= d * 2
        qs[0] = 0
        qs[1] = 0
        for x in range(1, n_x + 1):
            if st[x] == x and slack[x] != 0 and st[slack[x]] != x \
                    and _dist(lab, gu, gv, gw, slack[x], x) == 0:
                if _on_found_edge(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower,
                                  flen, flower_from, queue, qs, stack, tmp, pstack, meta,
                                  gu[slack[x], x], gv[slack[x], x]):
                    return True
        n_x = meta[0]
        for b in range(n + 1, n_x + 1):
            if st[b] == b and S[b] == 1 and lab[b] == 0:
                _expand_blossom(n, lab, gu, gv, gw, slack, st, pa, S, flower, flen,
                                flower_from, queue, qs, stack, b)


@njit(cache=True)
def _on_found_edge(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower, flen,
                   flower_from, queue, qs, stack, tmp, pstack, meta, eu, ev):
    u = st[eu]
    v = st[ev]
    if S[v] == -1:
        pa[v] = eu
        S[v] = 1
        nu = st[match[v]]
        slack[v] = 0
        slack[nu] = 0
        S[nu] = 0
        _q_push(n, flower, flen, queue, qs, stack, nu)
    elif S[v] == 0:
        lca = _get_lca(match, st, pa, vis, meta, u, v)
        if lca == 0:
            _augment(n, gu, gv, match, st, pa, flower, flen, flower_from, tmp, pstack, u, v)
            _augment(n, gu, gv, match, st, pa, flower, flen, flower_from, tmp, pstack, v, u)
            return True
        _add_blossom(n, lab, gu, gv, gw, match, slack, st, pa, S, flower, flen, flower_from,
                     queue, qs, stack, meta, u, lca, v)
    return False


@njit(cache=True)
def _add_blossom(n, lab, gu, gv, gw, match, slack, st, pa, S, flower, flen, flower_from,
                 queue, qs, stack, meta, u, lca, v):
    b = n + 1
    while b <= meta[0] and st[b] != 0:
        b += 1
    if b > meta[0]:
        meta[0] += 1
    n_x = meta[0]
    lab[b] = 0
    S[b] = 0
    match[b] = match[lca]
    m = 0
    flower[b, m] = lca
    m += 1
    x = u
    while x != lca:
        flower[b, m] = x
        m += 1
        y = st[match[x]]
        flower[b, m] = y
        m += 1
        _q_push(n, flower, flen, queue, qs, stack, y)
        x = st[pa[y]]
    i, j = 1, m - 1
    while i < j:
        flower[b, i], flower[b, j] = flower[b, j], flower[b, i]
        i += 1
        j -= 1
    x = v
    while x != lca:
        flower[b, m] = x
        m += 1
        y = st[match[x]]
        flower[b, m] = y
        m += 1
        _q_push(n, flower, flen, queue, qs, stack, y)
        x = st[pa[y]]
    flen[b] = m
    _set_st(n, flower, flen, st, stack, b, b)
    for x in range(1, n_x + 1):
        gw[b, x] = 0
        gw[x, b] = 0
    for x in range(1, n + 1):
        flower_from[b, x] = 0
    for i in range(m):
        xs = flower[b, i]
        for x in range(1, n_x + 1):
            if gw[b, x] == 0 or _dist(lab, gu, gv, gw, xs, x) < _dist(lab, gu, gv, gw, b, x):
                gu[b, x] = gu[xs, x]
                gv[b, x] = gv[xs, x]
                gw[b, x] = gw[xs, x]
                gu[x, b] = gu[x, xs]
                gv[x, b] = gv[x, xs]
                gw[x, b] = gw[x, xs]
        for x in range(1, n + 1):
            if flower_from[xs, x] != 0:
                flower_from[b, x] = xs
    _set_slack(n, lab, gu, gv, gw, slack, st, S, b)


@njit(cache=True)
def _expand_blossom(n, lab, gu, gv, gw, slack, st, pa, S, flower, flen, flower_from,
                    queue, qs, stack, b):
    for i in range(flen[b]):
        _set_st(n, flower, flen, st, stack, flower[b, i], flower[b, i])
    xr = flower_from[b, gu[b, pa[b]]]
    pr = _get_pr(flower, flen, b, xr)
    for i in range(0, pr, 2):
        xs = flower[b, i]
        xns = flower[b, i + 1]
        pa[xs] = gu[xns, xs]
        S[xs] = 1
        S[xns] = 0
        slack[xs] = 0
        _set_slack(n, lab, gu, gv, gw, slack, st, S, xns)
        _q_push(n, flower, flen, queue, qs, stack, xns)
    S[xr] = 1
    pa[xr] = pa[b]
    for i in range(pr + 1, flen[b]):
        xs = flower[b, i]
        S[xs] = -1
        _set_slack(n, lab, gu, gv, gw, slack, st, S, xs)
    st[b] = 0


@njit(cache=True)
def max_weight_matching(weights):
    """Maximum-weight matching of a dense symmetric matrix.

    Entries ``<= 0`` mean "no edge".  Returns a 0-based mate array with -1 for
    unmatched vertices.
    """
    n = weights.shape[0]
    nx = 2 * n + 2
    gu = np.empty((nx, nx), dtype=np.int64)
    gv = np.empty((nx, nx), dtype=np.int64)
    gw = np.zeros((nx, nx), dtype=np.int64)
    for a in range(nx):
        for c in range(nx):
            gu[a, c] = a
            gv[a, c] = c
    w_max = 0
    for a in range(n):
        for c in range(n):
            if a != c and weights[a, c] > 0:
                gw[a + 1, c + 1] = weights[a, c] * 2
                if gw[a + 1, c + 1] > w_max:
                    w_max = gw[a + 1, c + 1]
    lab = np.zeros(nx, dtype=np.int64)
    match = np.zeros(nx, dtype=np.int64)
    slack = np.zeros(nx, dtype=np.int64)
    st = np.zeros(nx, dtype=np.int64)
    pa = np.zeros(nx, dtype=np.int64)
    S = np.zeros(nx, dtype=np.int64)
    vis = np.zeros(nx, dtype=np.int64)
    flower = np.zeros((nx, n + 2), dtype=np.int64)
    flen = np.zeros(nx, dtype=np.int64)
    flower_from = np.zeros((nx, n + 1), dtype=np.int64)
    queue = np.zeros(nx * nx + 16, dtype=np.int64)
    qs = np.zeros(2, dtype=np.int64)
    stack = np.zeros(nx * 2 + 4, dtype=np.int64)
    tmp = np.zeros(n + 2, dtype=np.int64)
    pstack = np.zeros((nx * 2 + 4, 2), dtype=np.int64)
    meta = np.zeros(2, dtype=np.int64)
    meta[0] = n
    for u in range(n + 1):
        st[u] = u
    for u in range(1, n + 1):
        flower_from[u, u] = u
        lab[u] = w_max
    while _matching_stage(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower, flen,
                          flower_from, queue, qs, stack, tmp, pstack, meta):
        pass
    mate = np.full(n, -1, dtype=np.int64)
    for u in range(1, n + 1):
        if match[u] != 0:
            mate[u - 1] = match[u] - 1
    return mate


@njit(cache=True)
def min_weight_perfect_matching(cost):
    """Minimum-cost perfect matching of a dense symmetric matrix.

    Negative entries are forbidden edges.  Returns ``(mate, total)``; when no
    perfect matching avoids the forbidden edges ``mate`` contains -1 and
    ``total`` is -1.
    """
    n = cost.shape[0]
    mate = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return mate, np.int64(0)
    if n % 2 == 1:
        return mate, np.int64(-1)
    if n == 2:
        if cost[0, 1] < 0:
            return mate, np.int64(-1)
        mate[0] = 1
        mate[1] = 0
        return mate, np.int64(cost[0, 1])
    c_max = 0
    for a in range(n):
        for c in range(n):
            if cost[a, c] > c_max:
                c_max = cost[a, c]
    offset = c_max * (n // 2) + 1
    w = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for c in range(n):
            if a != c and cost[a, c] >= 0:
                w[a, c] = offset - cost[a, c]
    mate = max_weight_matching(w)
    total = np.int64(0)
    for a in range(n):
        c = mate[a]
        if c < 0 or cost[a, c] < 0:
            return np.full(n, -1, dtype=np.int64), np.int64(-1)
        if a < c:
            total += cost[a, c]
    return mate, total
