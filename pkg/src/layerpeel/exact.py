"""Exact convex-hull membership over float coordinates.

Float coordinates are dyadic rationals, so scaling a whole set by a common
power of two turns it into integers without changing any geometric answer.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def to_integer_coords(pts: np.ndarray) -> list[tuple[int, ...]]:
    """Rows of ``pts`` scaled by one common power of two, as exact integers."""
    ratios = [[float(c).as_integer_ratio() for c in row] for row in np.asarray(pts, dtype=np.float64)]
    den = 1
    for row in ratios:
        for _, q in row:
            if q > den:
                den = q
    return [tuple(p * (den // q) for p, q in row) for row in ratios]


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _solve(rows: list[list[Fraction]], ncols: int):
    """Gauss-Jordan on an augmented system. Returns (solution, consistent) or None if not unique."""
    a = [r[:] for r in rows]
    nrows = len(a)
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    consistent = all(a[i][ncols] == 0 for i in range(r, nrows))
    return [a[i][ncols] for i in range(ncols)], consistent


def in_simplex_exact(p, support) -> bool | None:
    """Is ``p`` a convex combination of the (affinely independent) ``support``?

    Returns None when the support is affinely dependent, since then the
    barycentric coordinates are not unique and this quick test cannot decide.
    """
    c = len(support)
    d = len(p)
    rows = [[Fraction(s[k]) for s in support] + [Fraction(p[k])] for k in range(d)]
    rows.append([Fraction(1)] * c + [Fraction(1)])
    res = _solve(rows, c)
    if res is None:
        return None
    lam, consistent = res
    if not consistent:
        return False
    return all(v >= 0 for v in lam)


def _affine_minimizer(V, corral):
    c = len(corral)
    rows = []
    for i in range(c):
        rows.append([Fraction(_dot(V[corral[i]], V[corral[j]])) for j in range(c)] + [Fraction(1), Fraction(0)])
    rows.append([Fraction(1)] * c + [Fraction(0), Fraction(1)])
    res = _solve(rows, c + 1)
    if res is None:
        raise ArithmeticError("corral lost affine independence")
    return res[0][:c]


def min_norm_is_zero(V: list[tuple[int, ...]]) -> bool:
    """Does the origin lie in conv(V)? Wolfe's minimum-norm-point method, exactly.

    With exact arithmetic the corral stays affinely independent and the
    iteration terminates in finitely many steps.
    """
    if not V:
        return False
    d = len(V[0])
    j0 = min(range(len(V)), key=lambda i: _dot(V[i], V[i]))
    corral = [j0]
    w = [Fraction(1)]
    while True:
        den = 1
        for wi in w:
            den = den * wi.denominator // _gcd(den, wi.denominator)
        xn = [0] * d
        for ci, wi in zip(corral, w):
            f = wi.numerator * (den // wi.denominator)
            v = V[ci]
            for k in range(d):
                xn[k] += f * v[k]
        xx = _dot(xn, xn)
        if xx == 0:
            return True
        vals = [_dot(v, xn) for v in V]
        j = min(range(len(V)), key=vals.__getitem__)
        # optimal once v.x >= |x|^2 for every v (both sides scaled by den^2)
        if vals[j] * den >= xx:
            return False
        if j in corral:
            raise ArithmeticError("Wolfe iteration stalled")
        corral.append(j)
        w.append(Fraction(0))
        while True:
            a = _affine_minimizer(V, corral)
            if all(ai > 0 for ai in a):
                w = a
                break
            theta = min(wi / (wi - ai) for wi, ai in zip(w, a) if ai <= 0 and wi > ai)
            w = [theta * ai + (1 - theta) * wi for wi, ai in zip(w, a)]
            keep = [i for i, wi in enumerate(w) if wi > 0]
            corral = [corral[i] for i in keep]
            w = [w[i] for i in keep]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def in_hull_exact(p, others) -> bool:
    """Exact test of p in conv(others) for integer coordinate tuples."""
    V = [tuple(s[k] - p[k] for k in range(len(p))) for s in others]
    return min_norm_is_zero(V)
