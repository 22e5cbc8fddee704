"""Compiled decode kernels shared by the library API and the batch drivers.

Node ids follow :mod:`moebius_colorcode.unified`: face ``f`` has copies
``2f`` and ``2f + 1``.  Every kernel works on plain arrays so that batch loops
never return to the interpreter.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numba import njit

from ._blossom import min_weight_perfect_matching
from .lattice import Color

_BIG = np.int64(1) << np.int64(40)


class Tables(NamedTuple):
    qubit_faces: np.ndarray   # (n_qubits, 3), -1 padded
    on_green: np.ndarray      # (n_qubits,) uint8, membership of the green logical
    dist_len: np.ndarray
    dist_parity: np.ndarray
    class_len: np.ndarray     # (2, V, V)
    torn_len: np.ndarray
    site_left: np.ndarray
    site_right: np.ndarray
    site_weight: np.ndarray
    n_faces: int
    d: int


def make_tables(u) -> Tables:
    lat = u.lattice
    qf = np.full((lat.n_qubits, 3), -1, dtype=np.int64)
    for q, fs in enumerate(lat.qubit_faces):
        qf[q, : len(fs)] = fs
    on_green = np.zeros(lat.n_qubits, dtype=np.uint8)
    on_green[list(lat.boundary[Color.G])] = 1
    return Tables(
        qubit_faces=qf,
        on_green=on_green,
        dist_len=np.ascontiguousarray(u.dist_len),
        dist_parity=np.ascontiguousarray(u.dist_parity).astype(np.int64),
        class_len=np.ascontiguousarray(u.class_len),
        torn_len=np.ascontiguousarray(u.torn_len),
        site_left=np.array([s.left for s in u.tear_sites], dtype=np.int64),
        site_right=np.array([s.right for s in u.tear_sites], dtype=np.int64),
        site_weight=np.array([s.weight for s in u.tear_sites], dtype=np.int64),
        n_faces=lat.n_faces,
        d=lat.d,
    )


@njit(cache=True)
def defect_nodes_of(err, qubit_faces, n_faces):
    flags = np.zeros(n_faces, dtype=np.uint8)
    for i in range(err.shape[0]):
        q = err[i]
        for k in range(3):
            f = qubit_faces[q, k]
            if f >= 0:
                flags[f] ^= 1
    count = 0
    for f in range(n_faces):
        count += flags[f]
    nodes = np.empty(2 * count, dtype=np.int64)
    j = 0
    for f in range(n_faces):
        if flags[f]:
            nodes[j] = 2 * f
            nodes[j + 1] = 2 * f + 1
            j += 2
    return nodes


@njit(cache=True)
def match_original(nodes, dist_len, dist_parity):
    """Returns (mate over positions in ``nodes``, total length, green parity)."""
    m = nodes.shape[0]
    cost = np.empty((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            cost[i, j] = dist_len[nodes[i], nodes[j]]
    mate, total = min_weight_perfect_matching(cost)
    parity = 0
    for i in range(m):
        if i < mate[i]:
            parity ^= dist_parity[nodes[i], nodes[mate[i]]]
    return mate, total, parity


@njit(cache=True)
def match_alternative(nodes, mate, dist_parity, class_len, torn_len,
                      site_left, site_right, site_weight):
    """Cheapest of the tear construction and the class-constrained search."""
    found, ell, parity, pairs, req, site, u_l, u_r, rew = match_tear(
        nodes, mate, dist_parity, class_len, torn_len, site_left, site_right, site_weight)
    f2, ell2, par2, pairs2, req2, site2, ul2, ur2 = match_flipped_class(
        nodes, mate, dist_parity, class_len, site_left, site_right, site_weight)
    if f2 and (not found or ell2 < ell):
        return True, ell2, par2, pairs2, req2, site2, ul2, ur2, -1
    return found, ell, parity, pairs, req, site, u_l, u_r, rew


@njit(cache=True)
def match_flipped_class(nodes, mate, dist_parity, class_len, site_left, site_right, site_weight):
    """Minimum matching in the other class with at most one odd-crossing pair.

    Even target: all pairs on even-crossing paths.  Odd target: one dummy pair
    at a tear site joins two defects through the cut edge; every other pair
    (and both legs) use even-crossing paths.
    """
    m = nodes.shape[0]
    parity_or = 0
    for i in range(m):
        if i < mate[i]:
            parity_or ^= dist_parity[nodes[i], nodes[mate[i]]]
    target = 1 - parity_or
    n_pairs = m // 2
    pairs = np.empty((n_pairs, 2), dtype=np.int64)
    req = np.zeros(n_pairs, dtype=np.int64)
    if m == 0:
        return False, -1, -1, pairs, req, -1, -1, -1
    if target == 0:
        cost = np.empty((m, m), dtype=np.int64)
        for a in range(m):
            for b in range(m):
                cost[a, b] = class_len[0, nodes[a], nodes[b]]
        mate0, total = min_weight_perfect_matching(cost)
        if total < 0:
            return False, -1, -1, pairs, req, -1, -1, -1
        t = 0
        for a in range(m):
            if a < mate0[a]:
                pairs[t, 0] = nodes[a]
                pairs[t, 1] = nodes[mate0[a]]
                t += 1
        return True, total, 0, pairs, req, -1, -1, -1

    size = m + 2
    cost = np.empty((size, size), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            cost[a, b] = class_len[0, nodes[a], nodes[b]]
    best_total = _BIG
    best_site = -1
    best_mate = np.full(size, -1, dtype=np.int64)
    for s in range(site_left.shape[0]):
        for a in range(m):
            cost[a, m] = class_len[0, nodes[a], site_left[s]]
            cost[m, a] = cost[a, m]
            cost[a, m + 1] = class_len[0, nodes[a], site_right[s]]
            cost[m + 1, a] = cost[a, m + 1]
        cost[m, m] = 0
        cost[m + 1, m + 1] = 0
        cost[m, m + 1] = -1
        cost[m + 1, m] = -1
        mate_s, total = min_weight_perfect_matching(cost)
        if total < 0:
            continue
        total += site_weight[s]
        if total < best_total:
            best_total = total
            best_site = s
            best_mate[:] = mate_s
    if best_site < 0:
        return False, -1, -1, pairs, req, -1, -1, -1
    u_l = nodes[best_mate[m]]
    u_r = nodes[best_mate[m + 1]]
    t = 0
    for a in range(m):
        b = best_mate[a]
        if a < b and b < m:
            pairs[t, 0] = nodes[a]
            pairs[t, 1] = nodes[b]
            t += 1
    pairs[t, 0] = u_l
    pairs[t, 1] = u_r
    req[t] = 1
    ell = np.int64(0)
    for i in range(n_pairs):
        ell += class_len[req[i], pairs[i, 0], pairs[i, 1]]
    return True, ell, 1, pairs, req, best_site, u_l, u_r


@njit(cache=True)
def match_tear(nodes, mate, dist_parity, class_len, torn_len,
               site_left, site_right, site_weight):
    """Tear-and-dummy search for a matching in the opposite logical class.

    Returns ``(found, ell_alt, parity_alt, pairs, req_parity, site, u_l, u_r, rewired)``
    where ``pairs`` holds node ids of the final edges and ``req_parity`` the
    crossing parity each edge is measured in.
    """
    m = nodes.shape[0]
    empty_pairs = np.zeros((0, 2), dtype=np.int64)
    empty_req = np.zeros(0, dtype=np.int64)
    if m == 0:
        return False, -1, -1, empty_pairs, empty_req, -1, -1, -1, -1

    removed = np.empty((m // 2, 2), dtype=np.int64)
    n_removed = 0
    rest = np.empty(m, dtype=np.int64)
    k = 0
    parity_or = 0
    for i in range(m):
        j = mate[i]
        if i < j:
            p = dist_parity[nodes[i], nodes[j]]
            parity_or ^= p
            if p == 1:
                removed[n_removed, 0] = nodes[i]
                removed[n_removed, 1] = nodes[j]
                n_removed += 1
    for i in range(m):
        j = mate[i]
        if dist_parity[nodes[i], nodes[j]] == 0:
            rest[k] = nodes[i]
            k += 1

    size = k + 2
    cost = np.empty((size, size), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            cost[a, b] = torn_len[rest[a], rest[b]]
    best_total = _BIG
    best_site = -1
    best_mate = np.full(size, -1, dtype=np.int64)
    for s in range(site_left.shape[0]):
        dl = site_left[s]
        dr = site_right[s]
        for a in range(k):
            cost[a, k] = torn_len[rest[a], dl]
            cost[k, a] = cost[a, k]
            cost[a, k + 1] = torn_len[rest[a], dr]
            cost[k + 1, a] = cost[a, k + 1]
        cost[k, k] = 0
        cost[k + 1, k + 1] = 0
        cost[k, k + 1] = -1
        cost[k + 1, k] = -1
        mate_s, total = min_weight_perfect_matching(cost)
        if total < 0:
            continue
        total += site_weight[s]
        if total < best_total:
            best_total = total
            best_site = s
            best_mate[:] = mate_s
    if best_site < 0:
        return False, -1, -1, empty_pairs, empty_req, -1, -1, -1, -1

    u_l = rest[best_mate[k]]
    u_r = rest[best_mate[k + 1]]

    n_pairs = m // 2
    pairs = np.empty((n_pairs, 2), dtype=np.int64)
    req = np.empty(n_pairs, dtype=np.int64)
    t = 0
    for a in range(k):
        b = best_mate[a]
        if a < b and b < k:
            pairs[t, 0] = rest[a]
            pairs[t, 1] = rest[b]
            req[t] = 0
            t += 1

    # try to shorten the new crossing edge through one removed pair
    base_cross = class_len[1, u_l, u_r]
    best_gain = np.int64(0)
    best_j = -1
    best_p = np.zeros(4, dtype=np.int64)
    best_par = 0
    for j in range(n_removed):
        lj = removed[j, 0]
        rj = removed[j, 1]
        base = base_cross + class_len[1, lj, rj]
        for swap in range(2):
            x = lj if swap == 0 else rj
            y = rj if swap == 0 else lj
            for par in range(2):
                cand = class_len[par, u_l, x] + class_len[par, u_r, y]
                gain = cand - base
                if gain < best_gain:
                    best_gain = gain
                    best_j = j
                    best_p[0] = u_l
                    best_p[1] = x
                    best_p[2] = u_r
                    best_p[3] = y
                    best_par = par
    if best_j >= 0:
        pairs[t, 0] = best_p[0]
        pairs[t, 1] = best_p[1]
        req[t] = best_par
        t += 1
        pairs[t, 0] = best_p[2]
        pairs[t, 1] = best_p[3]
        req[t] = best_par
        t += 1
    else:
        pairs[t, 0] = u_l
        pairs[t, 1] = u_r
        req[t] = 1
        t += 1
    for j in range(n_removed):
        if j == best_j:
            continue
        pairs[t, 0] = removed[j, 0]
        pairs[t, 1] = removed[j, 1]
        req[t] = 1
        t += 1

    ell = np.int64(0)
    parity = 0
    for i in range(t):
        ell += class_len[req[i], pairs[i, 0], pairs[i, 1]]
        parity ^= req[i]
    return True, ell, parity, pairs, req, best_site, u_l, u_r, best_j


@njit(cache=True)
def switch_rule(ell_or, ell_alt, d, upsilon):
    return ell_alt - ell_or == upsilon and (2 * ell_or - d) % 4 == 1


@njit(cache=True)
def decode_one(err, qubit_faces, n_faces, dist_len, dist_parity, class_len, torn_len,
               site_left, site_right, site_weight, d, comparative, upsilon):
    """Predicted green-logical parity of one error support.

    Returns ``(parity, ell_or, ell_alt, switched)``; ``ell_alt`` is -1 when the
    alternative was not needed or not found.
    """
    nodes = defect_nodes_of(err, qubit_faces, n_faces)
    if nodes.shape[0] == 0:
        return 0, 0, -1, False
    mate, ell_or, parity = match_original(nodes, dist_len, dist_parity)
    if not comparative or (2 * ell_or - d) % 4 != 1:
        return parity, ell_or, -1, False
    found, ell_alt, parity_alt, _p, _r, _s, _ul, _ur, _j = match_alternative(
        nodes, mate, dist_parity, class_len, torn_len, site_left, site_right, site_weight)
    if not found:
        return parity, ell_or, -1, False
    if switch_rule(ell_or, ell_alt, d, upsilon):
        return parity_alt, ell_or, ell_alt, True
    return parity, ell_or, ell_alt, False


@njit(cache=True)
def decode_rows(errors, qubit_faces, on_green, n_faces, dist_len, dist_parity, class_len,
                torn_len, site_left, site_right, site_weight, d, comparative, upsilon):
    """Decode each row of a 0/1 error matrix; returns the number of failures."""
    failures = 0
    nq = errors.shape[1]
    buf = np.empty(nq, dtype=np.int64)
    for r in range(errors.shape[0]):
        w = 0
        truth = 0
        for q in range(nq):
            if errors[r, q]:
                buf[w] = q
                w += 1
                truth ^= on_green[q]
        if w == 0:
            continue
        pred, _a, _b, _c = decode_one(buf[:w], qubit_faces, n_faces, dist_len, dist_parity,
                                      class_len, torn_len, site_left, site_right, site_weight,
                                      d, comparative, upsilon)
        if pred != truth:
            failures += 1
    return failures


@njit(cache=True)
def sweep_combinations(first, count, n, qubit_faces, on_green, n_faces, dist_len, dist_parity,
                       class_len, torn_len, site_left, site_right, site_weight, d,
                       comparative, upsilon, max_record):
    """Decode ``count`` consecutive weight-w supports starting at ``first``.

    Supports advance in lexicographic order.  Returns ``(tested, n_fail, recorded)``
    with up to ``max_record`` failing supports.
    """
    w = first.shape[0]
    comb = first.copy()
    recorded = np.empty((max_record, w), dtype=np.int64)
    n_fail = 0
    tested = 0
    while tested < count:
        truth = 0
        for i in range(w):
            truth ^= on_green[comb[i]]
        pred, _a, _b, _c = decode_one(comb, qubit_faces, n_faces, dist_len, dist_parity,
                                      class_len, torn_len, site_left, site_right, site_weight,
                                      d, comparative, upsilon)
        if pred != truth:
            if n_fail < max_record:
                recorded[n_fail, :] = comb
            n_fail += 1
        tested += 1
        # next combination
        i = w - 1
        while i >= 0 and comb[i] == n - w + i:
            i -= 1
        if i < 0:
            break
        comb[i] += 1
        for j in range(i + 1, w):
            comb[j] = comb[j - 1] + 1
    return tested, n_fail, recorded[: min(n_fail, max_record)]
