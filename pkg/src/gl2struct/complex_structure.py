"""The CO(2)-invariant complex structure J^k on V[k] and its (1,0)-forms.

``J^k`` rotates each weight component: ``J V_{k,j}^even = V_{k,j}^odd`` and
``J V_{k,j}^odd = -V_{k,j}^even``.  For even k the weight-0 line spanned by
``(x^2+y^2)^(k/2)`` is annihilated and reported in ``annihilated``.

``xi^{k,j} = xi_even^{k,j} + i xi_odd^{k,j}`` where the ``xi_even/odd`` are
the dual basis of the V-family.  They pair with ``X_{k,l}`` to ``2 delta_jl``
(this normalisation is kept on purpose) and kill ``conj(X_{k,l})``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .binary_forms import BinaryForm, v_family
from .poly import ratfunc_sum
from .scalars import GaussRational, I, to_gauss, render_scalar

__all__ = [
    "ComplexStructureMatrix", "XiBasis", "ComplexBasisChange", "jk_matrix", "xi_basis",
    "complex_basis_change", "to_complex_frame", "render_xi_row", "v_basis",
]


def v_basis(k: int) -> Tuple[List[BinaryForm], List[str]]:
    """The V-family basis of V[k] (even/odd pairs by j, then the weight-0 form for even k)."""
    forms, labels = [], []
    for j in range(k // 2 + 1):
        fam = v_family(k, j)
        if len(fam) == 2:
            forms += list(fam)
            labels += [f"V_{k},{j}^even", f"V_{k},{j}^odd"]
        else:
            forms.append(fam[0])
            labels.append(f"V_{k},{j}^0")
    return forms, labels


@dataclass(frozen=True)
class ComplexStructureMatrix:
    k: int
    matrix: Tuple[Tuple[Fraction, ...], ...]
    annihilated: Optional[BinaryForm] = None

    def rows(self):
        return [list(r) for r in self.matrix]

    def apply(self, V: BinaryForm) -> BinaryForm:
        return BinaryForm(linalg.matvec(self.rows(), V.coeffs))

    def to_json(self):
        return [[render_scalar(v) for v in r] for r in self.matrix]


def jk_matrix(k: int) -> ComplexStructureMatrix:
    if k < 1:
        raise ValueError("k must be >= 1")
    forms, _ = v_basis(k)
    n = k + 1
    P = linalg.transpose([[c.re for c in f.coeffs] for f in forms])
    R = linalg.zeros(n)
    for t in range(0, 2 * ((k + 1) // 2), 2):
        R[t + 1][t] = 1
        R[t][t + 1] = -1
    J = linalg.matmul(linalg.matmul(P, R), linalg.inverse(P))
    annihilated = forms[-1] if k % 2 == 0 else None
    return ComplexStructureMatrix(k, tuple(tuple(Fraction(v) for v in r) for r in J), annihilated)


@dataclass(frozen=True)
class XiBasis:
    """Row ``j`` holds the coefficients of ``xi^{k,j}`` on ``omega^0 .. omega^k``."""

    k: int
    rows: Tuple[Tuple[GaussRational, ...], ...]

    def pair(self, j: int, V: BinaryForm) -> GaussRational:
        return sum((a * b for a, b in zip(self.rows[j], V.coeffs)), GaussRational(0))

    def render(self) -> List[str]:
        return [f"xi^{{{self.k},{j}}} = {render_xi_row(r)}" for j, r in enumerate(self.rows)]

    def to_json(self):
        return [[render_scalar(v) for v in r] for r in self.rows]


def xi_basis(k: int) -> XiBasis:
    if k < 1:
        raise ValueError("k must be >= 1")
    forms, _ = v_basis(k)
    P = linalg.transpose([list(f.coeffs) for f in forms])
    dual = linalg.inverse(P)
    rows = []
    for t in range(0, 2 * ((k + 1) // 2), 2):
        rows.append(tuple(to_gauss(e) + I * o for e, o in zip(dual[t], dual[t + 1])))
    return XiBasis(k, tuple(rows))


def _int_combo(coeffs: Sequence[int]) -> str:
    out = ""
    for i, c in enumerate(coeffs):
        if not c:
            continue
        term = f"ω^{i}" if abs(c) == 1 else f"{abs(c)}ω^{i}"
        if c < 0:
            out += "-" + term
        else:
            out += ("+" if out else "") + term
    return out


def render_xi_row(row: Sequence[GaussRational]) -> str:
    """Render as e.g. ``(1/4)(3ω^0+ω^2+i(ω^1+3ω^3))``: common denominator, then real part, then ``i(...)``."""
    row = [to_gauss(v) for v in row]
    den = 1
    for v in row:
        den = lcm(den, v.re.denominator, v.im.denominator)
    re_int = [int(v.re * den) for v in row]
    im_int = [int(v.im * den) for v in row]
    real = _int_combo(re_int)
    imag = _int_combo(im_int)
    if imag:
        single_unit = sum(1 for c in im_int if c) == 1 and max(abs(c) for c in im_int) == 1 and not imag.startswith("-")
        imag = f"i{imag}" if single_unit else f"i({imag})"
        body = f"{real}+{imag}" if real else imag
    else:
        body = real or "0"
    return body if den == 1 else f"(1/{den})({body})"


@dataclass(frozen=True)
class ComplexBasisChange:
    """``S`` maps omega-coordinates of a vector to (xi, xi_bar) coordinates.

    Rows: ``xi^{k,0..m-1}``, then their conjugates, then (even k only) the
    real covector dual to ``(x^2+y^2)^(k/2)``.
    """

    k: int
    S: Tuple[Tuple[GaussRational, ...], ...]
    S_inv: Tuple[Tuple[GaussRational, ...], ...]
    m: int

    def labels(self) -> List[str]:
        out = [f"xi{j}" for j in range(self.m)] + [f"xibar{j}" for j in range(self.m)]
        if len(self.S) > 2 * self.m:
            out.append("w0")
        return out


def complex_basis_change(k: int) -> ComplexBasisChange:
    xb = xi_basis(k)
    rows = [list(r) for r in xb.rows] + [[v.conjugate() for v in r] for r in xb.rows]
    if k % 2 == 0:
        forms, _ = v_basis(k)
        P = linalg.transpose([list(f.coeffs) for f in forms])
        rows.append([to_gauss(v) for v in linalg.inverse(P)[-1]])
    inv = linalg.inverse(rows)
    freeze = lambda M: tuple(tuple(to_gauss(v) for v in r) for r in M)
    return ComplexBasisChange(k, freeze(rows), freeze(inv), len(xb.rows))


def to_complex_frame(k: int, tensor, valence: str, change: Optional[ComplexBasisChange] = None):
    """Change frame from omega to (xi, xi_bar).

    ``valence``: ``"vector"`` (list ``v^i``), ``"covector"`` (list ``a_i``),
    ``"2form"`` (antisymmetric ``T[a][b]``) or ``"vector2form"`` (``T[i][a][b]``,
    a V[k]-valued 2-form such as a torsion).  Entries may be any ring elements
    that multiply with ``GaussRational``.
    """
    B = change or complex_basis_change(k)
    n = k + 1
    S, Si = B.S, B.S_inv

    def _check(length):
        if length != n:
            raise ValueError(f"dimension mismatch: expected {n}, got {length}")

    def two_form(T):
        _check(len(T))
        for r in T:
            _check(len(r))
        # T'_{AB} = sum_{a,b} T_{ab} Si[a][A] Si[b][B]
        tmp = [[_dot((T[a][b] for b in range(n)), (Si[b][B] for b in range(n))) for B in range(n)] for a in range(n)]
        return [[_dot((tmp[a][B] for a in range(n)), (Si[a][A] for a in range(n))) for B in range(n)] for A in range(n)]

    if valence == "vector":
        _check(len(tensor))
        return [_dot(S[A], tensor) for A in range(n)]
    if valence == "covector":
        _check(len(tensor))
        return [_dot(tensor, (Si[a][A] for a in range(n))) for A in range(n)]
    if valence == "2form":
        return two_form(tensor)
    if valence == "vector2form":
        _check(len(tensor))
        forms = [two_form(T) for T in tensor]
        return [[[_dot(S[A], (forms[i][P][Q] for i in range(n))) for Q in range(n)] for P in range(n)]
                for A in range(n)]
    raise ValueError(f"unknown valence {valence!r}")


def _dot(u, v):
    return ratfunc_sum(a * b for a, b in zip(u, v) if a != 0 and b != 0)
