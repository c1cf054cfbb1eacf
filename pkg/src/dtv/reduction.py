"""Two-dimensional lattice helpers: Lagrange-Gauss reduction and integer row echelon.

Vectors are ``(x, y)`` pairs of Fractions (exact) or floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _sub(u, v, k):
    return (u[0] - k * v[0], u[1] - k * v[1])


def _round(x):
    # round half away from zero, identical for Fraction and float
    return floor(x + Fraction(1, 2)) if isinstance(x, Fraction) else floor(x + 0.5)


def gauss_reduce(u, v, max_iter=10_000):
    """Lagrange-Gauss reduction: returns (b1, b2) with |b1| <= |b2| <= |b2 +- b1|."""
    if _dot(u, u) > _dot(v, v):
        u, v = v, u
    for _ in range(max_iter):
        k = _round(_dot(u, v) / _dot(u, u))
        v = _sub(v, u, k)
        if _dot(v, v) >= _dot(u, u):
            return u, v
        u, v = v, u
    raise RuntimeError("Gauss reduction did not terminate")


def gauss_reduce_complex(w1: complex, w2: complex):
    """Reduced basis of the lattice Z*w1 + Z*w2, oriented so Im(b2/b1) > 0."""
    b1, b2 = gauss_reduce((w1.real, w1.imag), (w2.real, w2.imag))
    c1, c2 = complex(*b1), complex(*b2)
    if (c2 / c1).imag < 0:
        c2 = -c2
    return c1, c2


def integer_hnf_rows(rows):
    """Row-reduce an integer matrix (list of lists) over Z; return nonzero rows.

    The row span over Z is preserved (unimodular operations only).
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    col = 0
    while rows and col < ncols:
        pivots = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(pivots) > 1:
            pivots.sort(key=lambda r: abs(r[col]))
            p = pivots[0]
            nxt = [p]
            for r in pivots[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            pivots = nxt
        if pivots:
            p = pivots[0]
            if p[col] < 0:
                p = [-a for a in p]
            out.append(p)
        rows = rest
        col += 1
    return out
