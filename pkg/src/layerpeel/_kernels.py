"""Hot loops. Each function here compiles with numba unless the JIT is disabled.

Kept free of Python objects so the same source runs both ways.
"""

import numpy as np

from ._jit import njit

_EPS = 2.0**-53
_SPLITTER = 134217729.0  # 2**27 + 1
_CCW_ERRBOUND_A = (3.0 + 16.0 * _EPS) * _EPS
_O3D_ERRBOUND_A = (7.0 + 56.0 * _EPS) * _EPS

# status codes returned by extreme_status_nd
NON_EXTREME = 0
EXTREME = 1
UNDECIDED = -1


# --------------------------------------------------------------------------
# exact planar orientation
# --------------------------------------------------------------------------


@njit(cache=True)
def _two_sum(a, b):
    x = a + b
    bv = x - a
    av = x - bv
    return x, (a - av) + (b - bv)


@njit(cache=True)
def _split(a):
    c = _SPLITTER * a
    abig = c - a
    ahi = c - abig
    return ahi, a - ahi


@njit(cache=True)
def _two_product(a, b):
    x = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    err1 = x - ahi * bhi
    err2 = err1 - alo * bhi
    err3 = err2 - ahi * blo
    return x, alo * blo - err3


@njit(cache=True)
def _grow(e, n, t):
    q = t
    for i in range(n):
        q, e[i] = _two_sum(q, e[i])
    e[n] = q
    return n + 1


@njit(cache=True)
def _two_diff(a, b):
    x = a - b
    bv = a - x
    av = x + bv
    return x, (a - av) + (bv - b)


@njit(cache=True)
def _two_two_diff(a1, a0, b1, b0):
    # (a1 + a0) - (b1 + b0) as a 4-component expansion, most significant first
    i, x0 = _two_diff(a0, b0)
    j, t = _two_sum(a1, i)
    k, x1 = _two_diff(t, b1)
    x3, x2 = _two_sum(j, k)
    return x3, x2, x1, x0


@njit(cache=True)
def orient2d_exact(ax, ay, bx, by, cx, cy):
    u1, e1 = _two_diff(bx, ax)
    v2, e2 = _two_diff(cy, ay)
    u2, e3 = _two_diff(by, ay)
    v1, e4 = _two_diff(cx, ax)
    if e1 == 0.0 and e2 == 0.0 and e3 == 0.0 and e4 == 0.0:
        # differences are exact: det = u1*v2 - u2*v1 from two exact products
        p1, p0 = _two_product(u1, v2)
        q1, q0 = _two_product(u2, v1)
        x3, x2, x1, x0 = _two_two_diff(p1, p0, q1, q0)
        for v in (x3, x2, x1, x0):
            if v > 0.0:
                return 1
            if v < 0.0:
                return -1
        return 0
    return _orient2d_expansion(ax, ay, bx, by, cx, cy)


@njit(cache=True)
def _orient2d_expansion(ax, ay, bx, by, cx, cy):
    # det = bx*cy - bx*ay - ax*cy - by*cx + by*ax + ay*cx, summed as an exact expansion
    e = np.zeros(12)
    n = 0
    for s, u, v in (
        (1.0, bx, cy),
        (-1.0, bx, ay),
        (-1.0, ax, cy),
        (-1.0, by, cx),
        (1.0, by, ax),
        (1.0, ay, cx),
    ):
        hi, lo = _two_product(s * u, v)
        n = _grow(e, n, lo)
        n = _grow(e, n, hi)
    for i in range(n - 1, -1, -1):
        if e[i] > 0.0:
            return 1
        if e[i] < 0.0:
            return -1
    return 0


@njit(cache=True)
def orient2d(ax, ay, bx, by, cx, cy):
    """Sign of det[b - a, c - a]: +1 counter-clockwise, -1 clockwise, 0 collinear."""
    detleft = (bx - ax) * (cy - ay)
    detright = (by - ay) * (cx - ax)
    det = detleft - detright
    errbound = _CCW_ERRBOUND_A * (abs(detleft) + abs(detright))
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


# --------------------------------------------------------------------------
# planar peeling (monotone chain with strict turns)
# --------------------------------------------------------------------------


@njit(cache=True)
def _mark_hull_vertices(xs, ys, cur, m, mark, stack):
    if m == 1:
        mark[cur[0]] = True
        return
    t = 0
    for i in range(m):
        p = cur[i]
        while t >= 2:
            a = stack[t - 2]
            b = stack[t - 1]
            if orient2d(xs[a], ys[a], xs[b], ys[b], xs[p], ys[p]) > 0:
                break
            t -= 1
        stack[t] = p
        t += 1
    for i in range(t):
        mark[stack[i]] = True
    t = 0
    for i in range(m - 1, -1, -1):
        p = cur[i]
        while t >= 2:
            a = stack[t - 2]
            b = stack[t - 1]
            if orient2d(xs[a], ys[a], xs[b], ys[b], xs[p], ys[p]) > 0:
                break
            t -= 1
        stack[t] = p
        t += 1
    for i in range(t):
        mark[stack[i]] = True


@njit(cache=True)
def extreme_mask_sorted_2d(xs, ys):
    """Extreme-point mask for points already in lexicographic (x, y) order."""
    n = xs.size
    mark = np.zeros(n, np.bool_)
    if n == 0:
        return mark
    cur = np.arange(n)
    stack = np.empty(n, np.int64)
    _mark_hull_vertices(xs, ys, cur, n, mark, stack)
    return mark


@njit(cache=True, nogil=True)
def peel_sorted_2d(xs, ys):
    """Full peeling of lexicographically sorted points.

    Returns (layer, sizes): 1-based layer of every point and the size of each layer.
    """
    n = xs.size
    layer = np.zeros(n, np.int64)
    sizes = np.zeros(n, np.int64)
    cur = np.arange(n)
    stack = np.empty(n, np.int64)
    mark = np.zeros(n, np.bool_)
    m = n
    level = 0
    while m > 0:
        level += 1
        _mark_hull_vertices(xs, ys, cur, m, mark, stack)
        w = 0
        removed = 0
        for i in range(m):
            p = cur[i]
            if mark[p]:
                layer[p] = level
                removed += 1
            else:
                cur[w] = p
                w += 1
        sizes[level - 1] = removed
        m = w
    return layer, sizes[:level]


# --------------------------------------------------------------------------
# minimum pairwise distance
# --------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def min_sq_distance_sweep(pts, order, axis):
    """Smallest squared distance, sweeping along ``axis`` in ``order``.

    Squared distances are accumulated coordinate by coordinate in index order,
    so every candidate value is bitwise identical to a plain double loop.
    """
    n, d = pts.shape
    best = np.inf
    for ii in range(n):
        i = order[ii]
        for jj in range(ii + 1, n):
            j = order[jj]
            gap = pts[j, axis] - pts[i, axis]
            if gap * gap > best:
                break
            s = 0.0
            for k in range(d):
                t = pts[i, k] - pts[j, k]
                s += t * t
            if s < best:
                best = s
    return best


@njit(cache=True)
def min_sq_distance_scan(pts):
    n, d = pts.shape
    best = np.inf
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                t = pts[i, k] - pts[j, k]
                s += t * t
            if s < best:
                best = s
    return best


# --------------------------------------------------------------------------
# extremeness in d >= 3: Wolfe's minimum-norm-point iteration
# --------------------------------------------------------------------------


@njit(cache=True)
def _solve_inplace(a, n):
    # Gaussian elimination with partial pivoting on augmented n x (n+1) matrix.
    scale = 0.0
    for i in range(n):
        for j in range(n):
            if abs(a[i, j]) > scale:
                scale = abs(a[i, j])
    if scale == 0.0:
        return False
    for c in range(n):
        piv = c
        for r in range(c + 1, n):
            if abs(a[r, c]) > abs(a[piv, c]):
                piv = r
        if abs(a[piv, c]) <= 1e-13 * scale:
            return False
        if piv != c:
            for k in range(n + 1):
                tmp = a[c, k]
                a[c, k] = a[piv, k]
                a[piv, k] = tmp
        for r in range(c + 1, n):
            f = a[r, c] / a[c, c]
            if f != 0.0:
                for k in range(c, n + 1):
                    a[r, k] -= f * a[c, k]
    for c in range(n - 1, -1, -1):
        s = a[c, n]
        for k in range(c + 1, n):
            s -= a[c, k] * a[k, n]
        a[c, n] = s / a[c, c]
    return True


@njit(cache=True)
def _affine_minimizer(pts, q, corral, c, out):
    d = pts.shape[1]
    n = c + 1
    a = np.zeros((n, n + 1))
    for i in range(c):
        for j in range(i, c):
            s = 0.0
            for k in range(d):
                s += (pts[corral[i], k] - pts[q, k]) * (pts[corral[j], k] - pts[q, k])
            a[i, j] = s
            a[j, i] = s
        a[i, c] = 1.0
        a[c, i] = 1.0
    a[c, n] = 1.0
    if not _solve_inplace(a, n):
        return False
    for i in range(c):
        out[i] = a[i, n]
    return True


@njit(cache=True)
def wolfe_min_norm(pts, q, active, corral, weights, x):
    """Nearest point of conv(active \\ {q}) to pts[q], as the offset vector ``x``.

    ``corral``/``weights`` receive the supporting points and their convex weights.
    Returns the corral size, or -1 if the iteration broke down numerically.
    """
    d = pts.shape[1]
    m = active.size
    best = np.inf
    j0 = -1
    for ii in range(m):
        i = active[ii]
        if i == q:
            continue
        s = 0.0
        for k in range(d):
            t = pts[i, k] - pts[q, k]
            s += t * t
        if s < best:
            best = s
            j0 = i
    if j0 < 0:
        return -1
    corral[0] = j0
    weights[0] = 1.0
    c = 1
    for k in range(d):
        x[k] = pts[j0, k] - pts[q, k]
    a = np.empty(d + 2)
    for _major in range(200):
        xx = 0.0
        for k in range(d):
            xx += x[k] * x[k]
        if xx <= 1e-300:
            return c
        vmin = np.inf
        jmin = -1
        for ii in range(m):
            i = active[ii]
            if i == q:
                continue
            s = 0.0
            for k in range(d):
                s += (pts[i, k] - pts[q, k]) * x[k]
            if s < vmin:
                vmin = s
                jmin = i
        if vmin >= xx * (1.0 - 1e-12):
            return c
        for t in range(c):
            if corral[t] == jmin:
                return c
        if c == d + 1:
            return -1
        corral[c] = jmin
        weights[c] = 0.0
        c += 1
        ok = False
        for _minor in range(d + 3):
            if not _affine_minimizer(pts, q, corral, c, a):
                return -1
            allpos = True
            for t in range(c):
                if a[t] <= 1e-14:
                    allpos = False
                    break
            if allpos:
                for t in range(c):
                    weights[t] = a[t]
                ok = True
                break
            theta = 1.0
            for t in range(c):
                if a[t] <= 1e-14 and weights[t] - a[t] > 0.0:
                    r = weights[t] / (weights[t] - a[t])
                    if r < theta:
                        theta = r
            w = 0
            for t in range(c):
                nw = theta * a[t] + (1.0 - theta) * weights[t]
                if nw > 1e-14:
                    corral[w] = corral[t]
                    weights[w] = nw
                    w += 1
            if w == c:
                return -1
            c = w
            if c == 0:
                return -1
        if not ok:
            return -1
        for k in range(d):
            x[k] = 0.0
        if c == d + 1:
            # full-dimensional corral: its affine hull is everything, so x = 0
            return c
        for t in range(c):
            for k in range(d):
                x[k] += weights[t] * (pts[corral[t], k] - pts[q, k])
    return -1


@njit(cache=True)
def _orient3d(pts, i0, i1, i2, i3):
    # Sign of det[p0 - p3, p1 - p3, p2 - p3] with a static filter; 0 means "unsure".
    adx = pts[i0, 0] - pts[i3, 0]
    ady = pts[i0, 1] - pts[i3, 1]
    adz = pts[i0, 2] - pts[i3, 2]
    bdx = pts[i1, 0] - pts[i3, 0]
    bdy = pts[i1, 1] - pts[i3, 1]
    bdz = pts[i1, 2] - pts[i3, 2]
    cdx = pts[i2, 0] - pts[i3, 0]
    cdy = pts[i2, 1] - pts[i3, 1]
    cdz = pts[i2, 2] - pts[i3, 2]
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
        + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
        + (abs(adxbdy) + abs(bdxady)) * abs(cdz)
    )
    errbound = _O3D_ERRBOUND_A * permanent
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    return 0


@njit(cache=True)
def _strictly_inside_tetra(pts, q, corral):
    s = _orient3d(pts, corral[0], corral[1], corral[2], corral[3])
    if s == 0:
        return False
    if _orient3d(pts, q, corral[1], corral[2], corral[3]) != s:
        return False
    if _orient3d(pts, corral[0], q, corral[2], corral[3]) != s:
        return False
    if _orient3d(pts, corral[0], corral[1], q, corral[3]) != s:
        return False
    if _orient3d(pts, corral[0], corral[1], corral[2], q) != s:
        return False
    return True


@njit(cache=True, nogil=True)
def extreme_status_nd(pts, tol):
    """Classify every row of ``pts`` (d >= 2) as EXTREME, NON_EXTREME or UNDECIDED.

    EXTREME needs a separating direction with margin > tol; NON_EXTREME needs
    (in d = 3) a filtered-exact proof that the point is strictly inside a
    tetrahedron of other points. Anything else is UNDECIDED, and the corral
    found by the float iteration is returned in ``hints`` for exact follow-up.
    """
    m, d = pts.shape
    status = np.full(m, UNDECIDED, np.int8)
    hints = np.full((m, d + 1), -1, np.int64)
    if m == 1:
        status[0] = EXTREME
        return status, hints
    active = np.arange(m)
    corral = np.empty(d + 1, np.int64)
    weights = np.empty(d + 1)
    x = np.empty(d)
    for q in range(m):
        c = wolfe_min_norm(pts, q, active, corral, weights, x)
        if c < 0:
            continue
        for t in range(c):
            hints[q, t] = corral[t]
        xx = 0.0
        for k in range(d):
            xx += x[k] * x[k]
        norm = np.sqrt(xx)
        if norm > tol:
            margin = np.inf
            for i in range(m):
                if i == q:
                    continue
                s = 0.0
                for k in range(d):
                    s += (pts[i, k] - pts[q, k]) * x[k]
                s /= norm
                if s < margin:
                    margin = s
            if margin > tol:
                status[q] = EXTREME
            continue
        if d == 3 and c == 4 and _strictly_inside_tetra(pts, q, corral):
            status[q] = NON_EXTREME
    return status, hints


# --------------------------------------------------------------------------
# cap counting
# --------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def cap_counts(xs, ys, ux, uy, r, forced):
    """Points with x.u >= r for each direction; ``forced[k]`` (if >= 0) is counted
    regardless, being the point the k-th cap boundary was built through."""
    K = ux.size
    n = xs.size
    out = np.zeros(K, np.int64)
    for k in range(K):
        cnt = 0
        f = forced[k]
        for i in range(n):
            if i == f or xs[i] * ux[k] + ys[i] * uy[k] >= r:
                cnt += 1
        out[k] = cnt
    return out


@njit(cache=True)
def strictly_inside_convex(px, py, qx, qy):
    """Exact strict containment in the counter-clockwise convex polygon (px, py)."""
    k = px.size
    out = np.ones(qx.size, np.bool_)
    for i in range(qx.size):
        for e in range(k):
            f = e + 1 if e + 1 < k else 0
            if orient2d(px[e], py[e], px[f], py[f], qx[i], qy[i]) <= 0:
                out[i] = False
                break
    return out
