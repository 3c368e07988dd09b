"""Brute-force extreme-point oracle.

Decides p in conv(X \\ {p}) for every point with a phase-one simplex over
exact rationals. Shares no code with the fast engines, which is the point.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .geom import GeometryError, PointSet

MAX_POINTS = 60
MAX_DIM = 4


def _feasible(p: list[Fraction], S: list[list[Fraction]]) -> bool:
    """Is there lambda >= 0 with sum(lambda) = 1 and sum(lambda_i S_i) = p?"""
    d = len(p)
    n = len(S)
    m = d + 1
    rows = []
    for k in range(d):
        rows.append([S[i][k] for i in range(n)] + [p[k]])
    rows.append([Fraction(1)] * n + [Fraction(1)])
    for r in rows:
        if r[-1] < 0:
            for i in range(len(r)):
                r[i] = -r[i]
    # tableau columns: n structural, m artificial, rhs
    tab = []
    for i, r in enumerate(rows):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append(r[:n] + art + [r[-1]])
    basis = [n + i for i in range(m)]
    ncol = n + m
    cost = [Fraction(0)] * (ncol + 1)
    for r in tab:
        for j in range(n):
            cost[j] -= r[j]
        cost[ncol] -= r[ncol]
    while True:
        enter = next((j for j in range(ncol) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = -1
        for i, r in enumerate(tab):
            if r[enter] > 0:
                ratio = r[ncol] / r[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:  # unbounded phase one cannot happen; bail out loudly
            raise ArithmeticError("phase-one simplex unbounded")
        pr = tab[leave]
        inv = 1 / pr[enter]
        pr = [v * inv for v in pr]
        tab[leave] = pr
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], pr)]
        f = cost[enter]
        cost = [a - f * b for a, b in zip(cost, pr)]
        basis[leave] = enter
    return cost[ncol] == 0


def extreme_points_oracle(X: PointSet) -> frozenset[int]:
    """Positions of the extreme points of ``X``, decided exactly point by point."""
    n = len(X)
    if n == 0:
        raise GeometryError("extreme points of an empty set are undefined")
    if n > MAX_POINTS or X.dim > MAX_DIM:
        raise GeometryError(f"oracle is limited to {MAX_POINTS} points in dimension <= {MAX_DIM}")
    P = [[Fraction(float(c)) for c in row] for row in np.asarray(X.points)]
    out = set()
    for i in range(n):
        others = P[:i] + P[i + 1 :]
        if not others or not _feasible(P[i], others):
            out.add(i)
    return frozenset(out)


def peel_oracle(X: PointSet) -> list[frozenset[int]]:
    """Peeling sequence by repeated oracle calls; layers as sets of positions in ``X``."""
    alive = list(range(len(X)))
    layers = []
    while alive:
        ext = extreme_points_oracle(X.subset(alive))
        layers.append(frozenset(alive[i] for i in ext))
        alive = [a for i, a in enumerate(alive) if i not in ext]
    return layers
