"""Small dense exact linear algebra over any field of Python number objects.

Matrices are lists of row lists.  Entries may be ``int``, ``Fraction``,
``GaussRational`` or ``RatFunc``; pivoting only needs ``== 0`` and ``/``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

__all__ = [
    "SingularMatrixError", "zeros", "identity", "matmul", "matvec", "transpose",
    "mat_add", "mat_sub", "mat_scale", "inverse", "det", "rank", "solve", "is_zero_matrix",
]


class SingularMatrixError(ArithmeticError):
    pass


def zeros(n: int, m: int | None = None):
    return [[0] * (n if m is None else m) for _ in range(n)]


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matmul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            s = 0
            for x, y in zip(row, col):
                if x != 0 and y != 0:
                    s = s + x * y
            out_row.append(s)
        out.append(out_row)
    return out


def matvec(a, v):
    out = []
    for row in a:
        s = 0
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                s = s + x * y
        out.append(s)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in r] for r in a]


def is_zero_matrix(a) -> bool:
    return all(x == 0 for r in a for x in r)


def _lift(a):
    # plain ints would turn into floats under "/"
    return [[Fraction(x) if type(x) is int else x for x in r] for r in a]


def _row_reduce(a: List[list], ncols: int | None = None):
    """In-place Gauss-Jordan elimination; returns (pivot columns, det factor of the pivots)."""
    rows = len(a)
    cols = len(a[0]) if a else 0
    ncols = cols if ncols is None else ncols
    pivots = []
    sign = 1
    prod = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            sign = -sign
        pv = a[r][c]
        prod = prod * pv
        inv = 1 / pv
        a[r] = [x * inv if x != 0 else x for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y if y != 0 else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots, sign * prod


def det(a):
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    work = _lift(a)
    pivots, d = _row_reduce(work)
    return d if len(pivots) == n else 0


def rank(a) -> int:
    if not a:
        return 0
    work = _lift(a)
    pivots, _ = _row_reduce(work)
    return len(pivots)


def inverse(a):
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("inverse of a non-square matrix")
    work = _lift([list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)])
    pivots, _ = _row_reduce(work, n)
    if len(pivots) != n:
        raise SingularMatrixError(f"matrix is singular (rank {len(pivots)} < {n})")
    return [r[n:] for r in work]


def solve(a, b: Sequence):
    """Solve ``a x = b`` for square nonsingular ``a``."""
    n = len(a)
    work = _lift([list(r) + [b[i]] for i, r in enumerate(a)])
    pivots, _ = _row_reduce(work, n)
    if len(pivots) != n:
        raise SingularMatrixError(f"matrix is singular (rank {len(pivots)} < {n})")
    return [r[n] for r in work]
