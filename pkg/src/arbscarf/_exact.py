"""Small exact linear algebra over the rationals.

Matrices are lists of rows. Sizes in this package are small (a basis is
``(n+1) x (n+1)``), so plain Python with :class:`fractions.Fraction` is enough.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Optional, Sequence


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free (Bareiss) elimination.

    Rational entries are scaled to integers row by row first, which leaves
    the rank unchanged.
    """
    a = _integer_rows(rows)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if a[k][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for k in range(r + 1, nrows):
            f = a[k][c]
            row_k = a[k]
            row_r = a[r]
            for cc in range(c, ncols):
                # exact by Sylvester's identity
                row_k[cc] = (p * row_k[cc] - f * row_r[cc]) // prev
        prev = p
        r += 1
    return r


def inverse(rows: Sequence[Sequence]) -> Optional[list[list[Fraction]]]:
    """Gauss-Jordan inverse; ``None`` when the matrix is singular."""
    n = len(rows)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == k)) for k in range(n)]
         for i, row in enumerate(rows)]
    for c in range(n):
        piv = next((k for k in range(c, n) if a[k][c] != 0), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        if p != 1:
            a[c] = [v / p for v in a[c]]
        row_c = a[c]
        for k in range(n):
            if k != c and a[k][c] != 0:
                f = a[k][c]
                a[k] = [v - f * w for v, w in zip(a[k], row_c)]
    return [row[n:] for row in a]


def matvec(mat: Sequence[Sequence], vec: Sequence) -> list[Fraction]:
    return [sum((Fraction(m) * v for m, v in zip(row, vec)), Fraction(0)) for row in mat]
