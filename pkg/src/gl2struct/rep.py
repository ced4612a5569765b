"""Matrices of the gl(2) and GL(2) representations on V[k].

Side convention: matrices act on coefficient *columns* in the frame
``(x^k, ..., y^k)``; column ``j`` of ``rep_group(k, g)`` holds the
coefficients of ``act(x^(k-j) y^j, g)``.  With this choice
``rep_group(k, h @ g) == rep_group(k, h) @ rep_group(k, g)`` and the
derivative of ``rep_group(k, I + t*phi)`` at ``t = 0`` is exactly the banded
matrix ``rep_algebra(k, phi)`` (checked by ``differential_check``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from . import linalg
from .binary_forms import BinaryForm, Gl2Matrix, x_family
from .scalars import GaussRational, I, to_gauss, render_scalar

__all__ = [
    "RepMatrix", "rep_algebra", "rep_group", "differential_check", "zeta_alpha",
    "xkj_action_decomposition", "xkj_closed_form", "Dual",
]

_ZERO = GaussRational(0)


@dataclass(frozen=True)
class RepMatrix:
    k: int
    entries: Tuple[Tuple, ...]
    kind: str  # "algebra" or "group"

    def rows(self) -> List[list]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        return RepMatrix(self.k, _freeze(linalg.matmul(self.rows(), other.rows())), self.kind)

    def apply(self, V: BinaryForm) -> BinaryForm:
        return BinaryForm(linalg.matvec(self.rows(), V.coeffs))

    def inverse(self) -> "RepMatrix":
        return RepMatrix(self.k, _freeze(linalg.inverse(self.rows())), self.kind)

    def to_json(self) -> List[List[str]]:
        return [[render_scalar(v) for v in r] for r in self.entries]

    def is_banded(self) -> bool:
        return all(not v for i, r in enumerate(self.entries) for j, v in enumerate(r) if abs(i - j) > 1)


def _freeze(rows) -> Tuple[Tuple, ...]:
    return tuple(tuple(to_gauss(v) if not isinstance(v, Dual) else v for v in r) for r in rows)


def rep_algebra(k: int, phi: Gl2Matrix) -> RepMatrix:
    """The banded matrix of ``phi`` acting on V[k]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    m = [[_ZERO] * (k + 1) for _ in range(k + 1)]
    for j in range(k + 1):
        m[j][j] = (k - j) * a + j * d
        if j < k:
            m[j + 1][j] = (k - j) * c
        if j > 0:
            m[j - 1][j] = j * b
    return RepMatrix(k, _freeze(m), "algebra")


def _poly_mul(p: Sequence, q: Sequence, zero) -> list:
    out = [zero] * (len(p) + len(q) - 1)
    for i, u in enumerate(p):
        for j, v in enumerate(q):
            out[i + j] = out[i + j] + u * v
    return out


def _substitution_columns(k: int, a, b, c, d, zero, one) -> List[list]:
    """Columns ``coeffs((a x + c y)^(k-j) (b x + d y)^j)`` over any commutative ring."""
    lx, ly = [a, c], [b, d]
    px, py = [[one]], [[one]]
    for _ in range(k):
        px.append(_poly_mul(px[-1], lx, zero))
        py.append(_poly_mul(py[-1], ly, zero))
    return [_poly_mul(px[k - j], py[j], zero) for j in range(k + 1)]


def rep_group(k: int, g: Gl2Matrix) -> RepMatrix:
    """Matrix of ``V -> act(V, g)`` on coefficient columns."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not g.det():
        raise ValueError("rep_group needs an invertible matrix")
    cols = _substitution_columns(k, g.a, g.b, g.c, g.d, _ZERO, GaussRational(1))
    return RepMatrix(k, _freeze(linalg.transpose(cols)), "group")


class Dual:
    """``x + eps*y`` with ``eps^2 = 0``."""

    __slots__ = ("x", "y")

    def __init__(self, x, y=0):
        self.x, self.y = to_gauss(x), to_gauss(y)

    def __add__(self, o):
        o = o if isinstance(o, Dual) else Dual(o)
        return Dual(self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __mul__(self, o):
        o = o if isinstance(o, Dual) else Dual(o)
        return Dual(self.x * o.x, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def __eq__(self, o):
        o = o if isinstance(o, Dual) else Dual(o)
        return self.x == o.x and self.y == o.y

    def __repr__(self):
        return f"Dual({self.x}, {self.y})"


def differential_check(k: int, phi: Gl2Matrix) -> bool:
    """``rep_group(k, I + eps*phi) == I + eps*rep_algebra(k, phi)`` modulo ``eps^2``."""
    cols = _substitution_columns(
        k, Dual(1, phi.a), Dual(0, phi.b), Dual(0, phi.c), Dual(1, phi.d), Dual(0), Dual(1))
    alg = rep_algebra(k, phi).entries
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            if v.x != (1 if i == j else 0) or v.y != alg[i][j]:
                return False
    return True


def zeta_alpha(phi: Gl2Matrix):
    """``(zeta, zeta_bar, alpha, alpha_bar)`` as linear expressions in the entries of ``phi``.

    ``zeta = (phi^1_2 + phi^2_1) + i (phi^2_2 - phi^1_1)`` and
    ``alpha = phi^1_1 + phi^2_2 + i (phi^1_2 - phi^2_1)``; the barred versions
    flip the sign of ``i`` only, so they are the complex conjugates when
    ``phi`` is real.
    """
    p11, p21, p12, p22 = phi.a, phi.b, phi.c, phi.d
    zeta = (p12 + p21) + I * (p22 - p11)
    zeta_bar = (p12 + p21) - I * (p22 - p11)
    alpha = p11 + p22 + I * (p12 - p21)
    alpha_bar = p11 + p22 - I * (p12 - p21)
    return zeta, zeta_bar, alpha, alpha_bar


def xkj_closed_form(k: int, j: int, phi: Gl2Matrix) -> Tuple[GaussRational, GaussRational, GaussRational]:
    """Coefficients of ``rep_algebra(k, phi) X_{k,j}`` on ``(X_{k,j-1}, X_{k,j}, X_{k,j+1})``.

    Differentiating ``(x + i y) -> (x + i y) . g`` gives
    ``(alpha_bar/2)(x + i y) + (i zeta/2)(x - i y)`` and the conjugate
    relation for ``x - i y``; the Leibniz rule then yields
    ``(i j zeta / 2, (j alpha_bar + (k - j) alpha) / 2, -i (k - j) zeta_bar / 2)``.
    """
    zeta, zeta_bar, alpha, alpha_bar = zeta_alpha(phi)
    return (I * j * zeta / 2,
            (j * alpha_bar + (k - j) * alpha) / 2,
            -I * (k - j) * zeta_bar / 2)


def xkj_action_decomposition(k: int, j: int, phi: Gl2Matrix) -> Tuple[GaussRational, GaussRational, GaussRational]:
    """Expand ``rep_algebra(k, phi) X_{k,j}`` in the X-basis and return the three neighbouring coefficients.

    Raises ``ArithmeticError`` if any coefficient outside ``j-1..j+1`` is
    nonzero.  Out-of-range neighbours (``j = 0`` or ``j = k``) are 0.
    """
    if not 0 <= j <= k:
        raise ValueError(f"j={j} out of range 0..{k}")
    basis = [x_family(k, l) for l in range(k + 1)]
    image = rep_algebra(k, phi).apply(basis[j])
    cols = linalg.transpose([list(b.coeffs) for b in basis])
    coeffs = linalg.solve(cols, list(image.coeffs))
    for l, c in enumerate(coeffs):
        if abs(l - j) > 1 and c != 0:
            raise ArithmeticError(f"X_{{{k},{j}}} image has a component on X_{{{k},{l}}}")
    get = lambda l: to_gauss(coeffs[l]) if 0 <= l <= k else _ZERO
    return get(j - 1), get(j), get(j + 1)
