"""Compiled kernels (numba) for graph construction and limit-law sampling.

Everything here is deliberately scalar and allocation-light: these loops
run for 1e9+ iterations in the verification experiments.  The shift
functions of the fixed-point laws live here as njit scalars so that the
samplers and the quadrature code share one definition.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

INF = np.inf

# variant codes
PLAIN = 0
ROOTED0 = 1
ROOTED01 = 2

# rde family codes
FAM_J = 0
FAM_H = 1
FAM_G = 2


# ---------------------------------------------------------------------------
# fixed-point shift functions B(U)
#
# Arguments carry u, 1-u and their alpha powers so the callers can reuse
# the powers for the recursion coefficients.  alpha == 1 selects the
# logarithmic forms (removable singularity of the generic ones).
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _half_xlogx(x):
    # (x/2) log x, continuously extended by 0 at x = 0
    return 0.5 * x * math.log(x) if x > 0.0 else 0.0


@njit(cache=True, inline="always")
def shift_j(u, v, ua, va, alpha):
    if alpha == 1.0:
        mn = u if u < v else v
        return mn + _half_xlogx(u) + _half_xlogx(v)
    mn = ua if ua < va else va
    return mn + (2.0 ** -alpha / (alpha - 1.0)) * (ua + va - 1.0)


@njit(cache=True, inline="always")
def shift_h(u, v, ua, va, alpha):
    if alpha == 1.0:
        return 0.5 * u + _half_xlogx(u) + _half_xlogx(v)
    ta = 2.0 ** -alpha
    return ua * (1.0 + ta / (alpha - 1.0)) + (va - 1.0) * (
        1.0 / alpha + ta / (alpha * (alpha - 1.0))
    )


@njit(cache=True, inline="always")
def shift_g(u, v, ua, va, alpha):
    if alpha == 1.0:
        return _half_xlogx(u) + _half_xlogx(v) + 0.25
    ta = 2.0 ** -alpha
    return (ua + va - 2.0 / (1.0 + alpha)) * (
        1.0 / alpha + ta / (alpha * (alpha - 1.0))
    )


@njit(cache=True, inline="always")
def shift_r(u, v, ua, va, alpha):
    # second component of the joint (J, R, S) system; continuous in alpha
    out = (va - 1.0) * (1.0 - 2.0 ** -alpha) / alpha
    if u > 0.5:
        out += ua - va
    return out


@njit(cache=True, inline="always")
def shift_s(u, v, ua, va, alpha):
    return (ua - 1.0 / (1.0 + alpha)) * (1.0 - 2.0 ** -alpha - alpha) / alpha


# ---------------------------------------------------------------------------
# fixed-point samplers
#
# A draw expands the recursion into its weighted tree, depth first,
# pruning any subtree whose accumulated coefficient product falls below
# `tol`; pruned subtrees stand in for centred remainders of mean zero
# and are replaced by 0.  Each core returns
#     (value, max pruned weight, cap_hit)
# where cap_hit marks a truncation forced by the depth / chain cap at a
# weight still >= tol (a flagged, potentially biased draw).
# ---------------------------------------------------------------------------

MAX_CHAIN_LINKS = 4096


@njit(cache=True, nogil=True, fastmath=True)
def _j_core(gen, w0, alpha, tol, depth_cap, stack_w, stack_d):
    val = 0.0
    mx = 0.0
    hit = False
    stack_w[0] = w0
    stack_d[0] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        w = stack_w[sp]
        dep = stack_d[sp]
        u = gen.random()
        v = 1.0 - u
        if alpha == 1.0:
            ua = u
            va = v
        else:
            ua = u ** alpha
            va = v ** alpha
        val += w * shift_j(u, v, ua, va, alpha)
        cw1 = w * ua
        cw2 = w * va
        if cw1 >= tol:
            if dep < depth_cap:
                stack_w[sp] = cw1
                stack_d[sp] = dep + 1
                sp += 1
            else:
                hit = True
                if cw1 > mx:
                    mx = cw1
        elif cw1 > mx:
            mx = cw1
        if cw2 >= tol:
            if dep < depth_cap:
                stack_w[sp] = cw2
                stack_d[sp] = dep + 1
                sp += 1
            else:
                hit = True
                if cw2 > mx:
                    mx = cw2
        elif cw2 > mx:
            mx = cw2
    return val, mx, hit


@njit(cache=True, nogil=True, fastmath=True)
def _h_core(gen, w0, alpha, tol, depth_cap, stack_w, stack_d):
    val = 0.0
    mx = 0.0
    hit = False
    c = w0
    links = 0
    while c >= tol:
        links += 1
        if links > MAX_CHAIN_LINKS:
            hit = True
            if c > mx:
                mx = c
            return val, mx, hit
        u = gen.random()
        v = 1.0 - u
        if alpha == 1.0:
            ua = u
            va = v
        else:
            ua = u ** alpha
            va = v ** alpha
        val += c * shift_h(u, v, ua, va, alpha)
        jw = c * ua
        if jw >= tol:
            jv, jm, jh = _j_core(gen, jw, alpha, tol, depth_cap, stack_w, stack_d)
            val += jv
            if jm > mx:
                mx = jm
            hit = hit or jh
        elif jw > mx:
            mx = jw
        c = c * va
    if c > mx:
        mx = c  # pruned chain tail
    return val, mx, hit


@njit(cache=True, nogil=True, fastmath=True)
def _g_core(gen, alpha, tol, depth_cap, stack_w, stack_d):
    u = gen.random()
    v = 1.0 - u
    if alpha == 1.0:
        ua = u
        va = v
    else:
        ua = u ** alpha
        va = v ** alpha
    val = shift_g(u, v, ua, va, alpha)
    mx = 0.0
    hit = False
    if ua >= tol:
        hv, hm, hh = _h_core(gen, ua, alpha, tol, depth_cap, stack_w, stack_d)
        val += hv
        if hm > mx:
            mx = hm
        hit = hit or hh
    elif ua > mx:
        mx = ua
    if va >= tol:
        hv, hm, hh = _h_core(gen, va, alpha, tol, depth_cap, stack_w, stack_d)
        val += hv
        if hm > mx:
            mx = hm
        hit = hit or hh
    elif va > mx:
        mx = va
    return val, mx, hit


@njit(cache=True, nogil=True, fastmath=True)
def rde_block(gen, reps, family, alpha, tol, depth_cap, out):
    """Fill out[:reps] with centred draws; returns (max discard, cap hits)."""
    stack_w = np.empty(depth_cap + 2)
    stack_d = np.empty(depth_cap + 2, np.int32)
    mx = 0.0
    nhit = 0
    for r in range(reps):
        if family == FAM_J:
            v, m, h = _j_core(gen, 1.0, alpha, tol, depth_cap, stack_w, stack_d)
        elif family == FAM_H:
            v, m, h = _h_core(gen, 1.0, alpha, tol, depth_cap, stack_w, stack_d)
        else:
            v, m, h = _g_core(gen, alpha, tol, depth_cap, stack_w, stack_d)
        out[r] = v
        if m > mx:
            mx = m
        if h:
            nhit += 1
    return mx, nhit


# ---------------------------------------------------------------------------
# 1-D ONG construction: reverse sweep
#
# All coordinates are known up front, so instead of maintaining an
# ordered set under insertion we delete arrivals from a doubly linked
# list over the sorted order, last arrival first.  At the moment arrival
# i is deleted its list neighbours are exactly its sorted-order
# neighbours among arrivals 0..i-1, one of which is its nearest
# predecessor.  Equal distances resolve to the left neighbour (the
# lexicographically smaller point).
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def sweep_1d(x, start, parent, elen):
    """Nearest-predecessor edges for arrivals start..m-1 of coordinates x."""
    m = x.shape[0]
    order = np.argsort(x)
    rank = np.empty(m, np.int64)
    for k in range(m):
        rank[order[k]] = k
    left = np.empty(m, np.int64)
    right = np.empty(m, np.int64)
    for k in range(m):
        left[k] = k - 1
        right[k] = k + 1
    xs = x[order]
    for i in range(m - 1, start - 1, -1):
        k = rank[i]
        lk = left[k]
        rk = right[k]
        dl = xs[k] - xs[lk] if lk >= 0 else INF
        dr = xs[rk] - xs[k] if rk < m else INF
        if dl <= dr:
            parent[i] = order[lk]
            elen[i] = dl
        else:
            parent[i] = order[rk]
            elen[i] = dr
        if lk >= 0:
            right[lk] = rk
        if rk < m:
            left[rk] = lk


@njit(cache=True, nogil=True, fastmath=True)
def ong1d_total_block(gen, reps, n, alpha, variant, out):
    """Per-replication total edge weight of the 1-D ONG on n uniforms."""
    nroots = 0
    if variant == ROOTED0:
        nroots = 1
    elif variant == ROOTED01:
        nroots = 2
    m = n + nroots
    start = 1 if variant != ROOTED01 else 2
    x = np.empty(m)
    left = np.empty(m, np.int64)
    right = np.empty(m, np.int64)
    rank = np.empty(m, np.int64)
    for r in range(reps):
        if nroots >= 1:
            x[0] = 0.0
        if nroots == 2:
            x[1] = 1.0
        for i in range(nroots, m):
            x[i] = gen.random()
        order = np.argsort(x)
        for k in range(m):
            rank[order[k]] = k
        for k in range(m):
            left[k] = k - 1
            right[k] = k + 1
        xs = x[order]
        total = 1.0 if variant == ROOTED01 else 0.0  # fixed first edge weighs 1
        for i in range(m - 1, start - 1, -1):
            k = rank[i]
            lk = left[k]
            rk = right[k]
            dl = xs[k] - xs[lk] if lk >= 0 else INF
            dr = xs[rk] - xs[k] if rk < m else INF
            e = dl if dl <= dr else dr
            if alpha == 1.0:
                total += e
            elif alpha == 2.0:
                total += e * e
            else:
                total += e ** alpha
            if lk >= 0:
                right[lk] = rk
            if rk < m:
                left[rk] = lk
        out[r] = total


@njit(cache=True, nogil=True, fastmath=True)
def ong1d_total_block_sizes(gen, sizes, alpha, variant, out):
    """Like ong1d_total_block but with a per-replication point count."""
    nroots = 0
    if variant == ROOTED0:
        nroots = 1
    elif variant == ROOTED01:
        nroots = 2
    start = 1 if variant != ROOTED01 else 2
    nmax = 0
    for r in range(sizes.shape[0]):
        if sizes[r] > nmax:
            nmax = sizes[r]
    mmax = nmax + nroots
    x = np.empty(mmax)
    left = np.empty(mmax, np.int64)
    right = np.empty(mmax, np.int64)
    rank = np.empty(mmax, np.int64)
    for r in range(sizes.shape[0]):
        n = sizes[r]
        m = n + nroots
        if m == 0 or (variant == PLAIN and n == 0):
            out[r] = 0.0
            continue
        if nroots >= 1:
            x[0] = 0.0
        if nroots == 2:
            x[1] = 1.0
        for i in range(nroots, m):
            x[i] = gen.random()
        order = np.argsort(x[:m])
        for k in range(m):
            rank[order[k]] = k
        for k in range(m):
            left[k] = k - 1
            right[k] = k + 1
        total = 1.0 if variant == ROOTED01 else 0.0
        for i in range(m - 1, start - 1, -1):
            k = rank[i]
            lk = left[k]
            rk = right[k]
            dl = x[order[k]] - x[order[lk]] if lk >= 0 else INF
            dr = x[order[rk]] - x[order[k]] if rk < m else INF
            e = dl if dl <= dr else dr
            if alpha == 1.0:
                total += e
            else:
                total += e ** alpha
            if lk >= 0:
                right[lk] = rk
            if rk < m:
                left[rk] = lk
        out[r] = total


# ---------------------------------------------------------------------------
# general-dimension ONG: naive scan (oracle) and uniform-grid search
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _lex_less(pts, i, j):
    for k in range(pts.shape[1]):
        if pts[i, k] < pts[j, k]:
            return True
        if pts[i, k] > pts[j, k]:
            return False
    return False


@njit(cache=True, nogil=True)
def naive_scan(pts, start, parent, elen):
    """O(m^2) nearest-predecessor oracle, any dimension.

    d = 1 compares |x_i - x_j| directly (matching sweep_1d bit for bit);
    d >= 2 compares squared distances.  Equal distances resolve to the
    lexicographically smaller predecessor point.
    """
    m, d = pts.shape
    for i in range(start, m):
        best = INF
        bestj = -1
        for j in range(i):
            if d == 1:
                dd = pts[i, 0] - pts[j, 0]
                if dd < 0.0:
                    dd = -dd
            else:
                dd = 0.0
                for k in range(d):
                    t = pts[i, k] - pts[j, k]
                    dd += t * t
            if dd < best:
                best = dd
                bestj = j
            elif dd == best and bestj >= 0 and _lex_less(pts, j, bestj):
                bestj = j
        parent[i] = bestj
        elen[i] = best if d == 1 else math.sqrt(best)


@njit(cache=True, nogil=True)
def grid_build(pts, start, parent, elen):
    """Nearest-predecessor edges via a uniform grid with expanding rings.

    Cell side is ~(1/m)^(1/d); a ring at Chebyshev cell distance r can
    only hold points at Euclidean distance >= (r-1)*side, which yields
    the stopping rule.  Matches naive_scan including the lexicographic
    tie rule (ties at exactly the ring bound have probability zero for
    continuous inputs).
    """
    m, d = pts.shape
    g = int(round(m ** (1.0 / d)))
    if g < 1:
        g = 1
    side = 1.0 / g
    ncells = 1
    for _ in range(d):
        ncells *= g
    head = np.full(ncells, -1, np.int64)
    nxt = np.full(m, -1, np.int64)
    coord = np.empty(d, np.int64)
    off = np.empty(d, np.int64)

    for i in range(m):
        # locate cell of point i
        ci = 0
        for k in range(d):
            c = int(pts[i, k] * g)
            if c >= g:
                c = g - 1
            if c < 0:
                c = 0
            coord[k] = c
            ci = ci * g + c
        if i >= start:
            best = INF
            bestj = -1
            r = 0
            while True:
                # scan cells at Chebyshev ring distance exactly r
                for k in range(d):
                    off[k] = -r
                while True:
                    cheb = 0
                    for k in range(d):
                        a = off[k] if off[k] >= 0 else -off[k]
                        if a > cheb:
                            cheb = a
                    if cheb == r:
                        ok = True
                        cj = 0
                        for k in range(d):
                            c = coord[k] + off[k]
                            if c < 0 or c >= g:
                                ok = False
                                break
                            cj = cj * g + c
                        if ok:
                            j = head[cj]
                            while j >= 0:
                                dd = 0.0
                                for k in range(d):
                                    t = pts[i, k] - pts[j, k]
                                    dd += t * t
                                if dd < best:
                                    best = dd
                                    bestj = j
                                elif dd == best and bestj >= 0 and _lex_less(pts, j, bestj):
                                    bestj = j
                                j = nxt[j]
                    # odometer over [-r, r]^d
                    k = d - 1
                    while k >= 0:
                        off[k] += 1
                        if off[k] <= r:
                            break
                        off[k] = -r
                        k -= 1
                    if k < 0:
                        break
                if bestj >= 0:
                    rb = r * side
                    if rb * rb >= best:
                        break
                if r > g:
                    break
                r += 1
            parent[i] = bestj
            elen[i] = math.sqrt(best)
        # insert point i
        nxt[i] = head[ci]
        head[ci] = i


@njit(cache=True, nogil=True, fastmath=True)
def ongdd_total_block(gen, reps, n, d, alpha, out):
    """Per-replication total weight of the d-dimensional plain ONG."""
    g = int(round(n ** (1.0 / d)))
    if g < 1:
        g = 1
    side = 1.0 / g
    ncells = 1
    for _ in range(d):
        ncells *= g
    head = np.empty(ncells, np.int64)
    nxt = np.empty(n, np.int64)
    pts = np.empty((n, d))
    coord = np.empty(d, np.int64)
    off = np.empty(d, np.int64)
    for rep in range(reps):
        head[:] = -1
        total = 0.0
        for i in range(n):
            ci = 0
            for k in range(d):
                v = gen.random()
                pts[i, k] = v
                c = int(v * g)
                if c >= g:
                    c = g - 1
                coord[k] = c
                ci = ci * g + c
            if i >= 1:
                best = INF
                found = False
                r = 0
                while True:
                    for k in range(d):
                        off[k] = -r
                    while True:
                        cheb = 0
                        for k in range(d):
                            a = off[k] if off[k] >= 0 else -off[k]
                            if a > cheb:
                                cheb = a
                        if cheb == r:
                            ok = True
                            cj = 0
                            for k in range(d):
                                c = coord[k] + off[k]
                                if c < 0 or c >= g:
                                    ok = False
                                    break
                                cj = cj * g + c
                            if ok:
                                j = head[cj]
                                while j >= 0:
                                    dd = 0.0
                                    for k in range(d):
                                        t = pts[i, k] - pts[j, k]
                                        dd += t * t
                                    if dd < best:
                                        best = dd
                                        found = True
                                    j = nxt[j]
                        k = d - 1
                        while k >= 0:
                            off[k] += 1
                            if off[k] <= r:
                                break
                            off[k] = -r
                            k -= 1
                        if k < 0:
                            break
                    if found:
                        rb = r * side
                        if rb * rb >= best:
                            break
                    if r > g:
                        break
                    r += 1
                e = math.sqrt(best)
                if alpha == 1.0:
                    total += e
                elif alpha == 2.0:
                    total += best
                else:
                    total += e ** alpha
            nxt[i] = head[ci]
            head[ci] = i
        out[rep] = total
