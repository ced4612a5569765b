"""Binary forms of degree k (the space V[k]) and the GL(2) substitution action.

Coefficient convention: ``coeffs[i]`` multiplies ``x^(k-i) * y^i``, i.e. the
frame ``(x^k, x^(k-1) y, ..., y^k)``.  Every other module inherits this order.

The action is ``(V . g)(x, y) = V((x, y) g)``: for ``g = [[a, b], [c, d]]``
this substitutes ``x -> a x + c y`` and ``y -> b x + d y``.  Composing two
substitutions gives ``(V . g) . h = V . (h g)``; this is the order the
package uses everywhere (see ``rep.rep_group``, which is therefore a group
homomorphism on coefficient columns).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly
from .scalars import GaussRational, I, to_gauss, render_scalar

__all__ = [
    "BinaryForm", "Gl2Matrix", "w_polynomials", "v_family", "x_family", "act",
    "alpha_plane_basis", "null_cone_root", "linear_form", "root_multiplicity",
]

_XY = ("x", "y")


class BinaryForm:
    __slots__ = ("degree", "coeffs")

    def __init__(self, coeffs: Sequence, degree: Optional[int] = None):
        coeffs = tuple(to_gauss(c) for c in coeffs)
        if degree is None:
            degree = len(coeffs) - 1
        if degree < 0 or len(coeffs) != degree + 1:
            raise ValueError(f"degree {degree} form needs {degree + 1} coefficients, got {len(coeffs)}")
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, k: int) -> "BinaryForm":
        return cls([0] * (k + 1))

    @classmethod
    def monomial(cls, k: int, i: int) -> "BinaryForm":
        """``x^(k-i) y^i``."""
        c = [0] * (k + 1)
        c[i] = 1
        return cls(c)

    @classmethod
    def from_poly(cls, p: MultiPoly, k: Optional[int] = None) -> "BinaryForm":
        p = p.embed(_XY)
        degrees = {sum(m) for m in p.terms}
        if k is None:
            if len(degrees) > 1:
                raise ValueError("polynomial is not homogeneous")
            k = degrees.pop() if degrees else 0
        elif degrees - {k}:
            raise ValueError(f"polynomial is not homogeneous of degree {k}")
        c = [0] * (k + 1)
        for (ex, ey), v in p.terms.items():
            c[ey] = v
        return cls(c)

    @classmethod
    def parse(cls, text: str, k: Optional[int] = None) -> "BinaryForm":
        from .parsing import parse_poly
        return cls.from_poly(parse_poly(text, _XY), k)

    def to_poly(self) -> MultiPoly:
        k = self.degree
        return MultiPoly(_XY, {(k - i, i): c for i, c in enumerate(self.coeffs) if c})

    # -- vector space / ring structure ---------------------------------
    def _check(self, other: "BinaryForm"):
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        return BinaryForm([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        return BinaryForm([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "BinaryForm":
        return BinaryForm([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            out = [GaussRational(0)] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return BinaryForm(out)
        c = to_gauss(other)
        return BinaryForm([a * c for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BinaryForm":
        result = BinaryForm([1])
        for _ in range(n):
            result = result * self
        return result

    def conjugate(self) -> "BinaryForm":
        return BinaryForm([a.conjugate() for a in self.coeffs])

    def real_part(self) -> "BinaryForm":
        return BinaryForm([a.re for a in self.coeffs])

    def imag_part(self) -> "BinaryForm":
        return BinaryForm([a.im for a in self.coeffs])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self, x, y) -> GaussRational:
        x, y = to_gauss(x), to_gauss(y)
        k = self.degree
        return sum((c * x ** (k - i) * y ** i for i, c in enumerate(self.coeffs)), GaussRational(0))

    def __eq__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"BinaryForm({str(self)!r})"

    def __str__(self):
        return str(self.to_poly())

    def to_json(self) -> List[str]:
        return [render_scalar(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "BinaryForm":
        return cls([to_gauss(c) for c in data])


def linear_form(a, b) -> BinaryForm:
    """``a x + b y``."""
    return BinaryForm([a, b])


class Gl2Matrix:
    """2x2 matrix ``[[a, b], [c, d]]`` acting on the row ``(x, y)`` from the right.

    As a gl(2) element the entries are ``a = phi^1_1, b = phi^2_1,
    c = phi^1_2, d = phi^2_2``.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (to_gauss(v) for v in (a, b, c, d))

    @classmethod
    def identity(cls) -> "Gl2Matrix":
        return cls(1, 0, 0, 1)

    @classmethod
    def co2(cls, u, v) -> "Gl2Matrix":
        """The conformal element ``[[u, -v], [v, u]]``."""
        u, v = to_gauss(u), to_gauss(v)
        return cls(u, -v, v, u)

    @classmethod
    def from_phi(cls, phi11=0, phi21=0, phi12=0, phi22=0) -> "Gl2Matrix":
        return cls(phi11, phi21, phi12, phi22)

    @classmethod
    def elementary(cls, upper: int, lower: int) -> "Gl2Matrix":
        """``E^upper_lower``: the gl(2) element with only ``phi^upper_lower = 1``."""
        kw = {f"phi{upper}{lower}": 1}
        return cls.from_phi(**kw)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def det(self) -> GaussRational:
        return self.a * self.d - self.b * self.c

    def trace(self) -> GaussRational:
        return self.a + self.d

    def __matmul__(self, o: "Gl2Matrix") -> "Gl2Matrix":
        return Gl2Matrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __add__(self, o: "Gl2Matrix") -> "Gl2Matrix":
        return Gl2Matrix(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: "Gl2Matrix") -> "Gl2Matrix":
        return Gl2Matrix(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __mul__(self, s) -> "Gl2Matrix":
        s = to_gauss(s)
        return Gl2Matrix(self.a * s, self.b * s, self.c * s, self.d * s)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Gl2Matrix":
        if n < 0:
            return self.inverse() ** (-n)
        result = Gl2Matrix.identity()
        for _ in range(n):
            result = result @ self
        return result

    def inverse(self) -> "Gl2Matrix":
        dt = self.det()
        if not dt:
            raise ZeroDivisionError("singular 2x2 matrix")
        return Gl2Matrix(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)

    def bracket(self, o: "Gl2Matrix") -> "Gl2Matrix":
        return self @ o - o @ self

    def is_co2(self) -> bool:
        return self.a == self.d and self.b == -self.c

    def __eq__(self, o):
        if not isinstance(o, Gl2Matrix):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return "Gl2Matrix([[{}, {}], [{}, {}]])".format(*(render_scalar(v) for v in (self.a, self.b, self.c, self.d)))


# ---------------------------------------------------------------------------
# the polynomial families

def w_polynomials(i: int) -> Tuple[BinaryForm, BinaryForm]:
    """``(W_i^even, W_i^odd)``: real and imaginary parts of ``(x + i y)^i``."""
    if i < 1:
        raise ValueError("W polynomials need i >= 1")
    even = [0] * (i + 1)
    odd = [0] * (i + 1)
    for s in range(i // 2 + 1):
        even[2 * s] = (-1) ** s * comb(i, 2 * s)
    for s in range((i - 1) // 2 + 1):
        odd[2 * s + 1] = (-1) ** s * comb(i, 2 * s + 1)
    return BinaryForm(even), BinaryForm(odd)


def _r2(j: int) -> BinaryForm:
    return BinaryForm([1, 0, 1]) ** j


def v_family(k: int, j: int) -> Tuple[BinaryForm, ...]:
    """``(V_{k,j}^even, V_{k,j}^odd)``; for even k and ``j = k/2`` the single ``(x^2+y^2)^(k/2)``."""
    if k < 1 or j < 0 or 2 * j > k:
        raise ValueError(f"weight index j={j} out of range for k={k}")
    if 2 * j == k:
        return (_r2(j),)
    we, wo = w_polynomials(k - 2 * j)
    f = _r2(j)
    return f * we, f * wo


def x_family(k: int, j: int) -> BinaryForm:
    """``X_{k,j} = (x + i y)^j (x - i y)^(k-j)``."""
    if not 0 <= j <= k:
        raise ValueError(f"j={j} out of range 0..{k}")
    return linear_form(1, I) ** j * linear_form(1, -I) ** (k - j)


def act(V: BinaryForm, g: Gl2Matrix) -> BinaryForm:
    """``(V . g)(x, y) = V((x, y) g)``."""
    k = V.degree
    lx = linear_form(g.a, g.c)
    ly = linear_form(g.b, g.d)
    px = [BinaryForm([1])]
    py = [BinaryForm([1])]
    for _ in range(k):
        px.append(px[-1] * lx)
        py.append(py[-1] * ly)
    out = BinaryForm.zero(k)
    for i, c in enumerate(V.coeffs):
        if c:
            out = out + (px[k - i] * py[i]) * c
    return out


def alpha_plane_basis(k: int, i: int, frame: Sequence) -> List[BinaryForm]:
    """Basis ``(ax+by)^(k-s) (cx+dy)^s``, ``s = 0..i-1``, of an alpha_i-plane."""
    a, b, c, d = (to_gauss(v) for v in frame)
    if a * d - b * c == 0:
        raise ValueError("frame (a, b, c, d) must satisfy ad - bc != 0")
    if not 1 <= i <= k + 1:
        raise ValueError(f"plane dimension i={i} out of range 1..{k + 1}")
    l1, l2 = linear_form(a, b), linear_form(c, d)
    return [l1 ** (k - s) * l2 ** s for s in range(i)]


def divide_linear(V: BinaryForm, a, b) -> Tuple[BinaryForm, bool]:
    """Divide by ``a x + b y``; returns (quotient, exact)."""
    a, b = to_gauss(a), to_gauss(b)
    k = V.degree
    if k == 0:
        return V, V.is_zero()
    v = V.coeffs
    q: List[GaussRational] = []
    if a:
        prev = GaussRational(0)
        for m in range(k):
            prev = (v[m] - b * prev) / a
            q.append(prev)
        exact = v[k] == b * q[-1]
    else:
        if not b:
            raise ZeroDivisionError("zero linear form")
        q = [c / b for c in v[1:]]
        exact = not v[0]
    return BinaryForm(q), exact


def root_multiplicity(V: BinaryForm, x0, y0) -> int:
    """Multiplicity of the root direction ``(x0 : y0)``, i.e. of the factor ``y0 x - x0 y``."""
    if V.is_zero():
        raise ValueError("zero form has every root")
    a, b = to_gauss(y0), -to_gauss(x0)
    m = 0
    while V.degree > 0:
        q, exact = divide_linear(V, a, b)
        if not exact:
            break
        V = q
        m += 1
    return m


def null_cone_root(V: BinaryForm) -> Optional[Tuple[Fraction, Fraction]]:
    """Return ``(a, b)`` with ``V`` proportional to ``(a x + b y)^k``, if such a rational pair exists.

    The pair is normalised to ``(1, b)`` or ``(0, 1)``.  Irrational or
    non-real roots give ``None``.
    """
    if V.is_zero():
        raise ValueError("the zero form has no null direction")
    k = V.degree
    c0 = V.coeffs[0]
    if c0:
        r = V.coeffs[1] / (k * c0) if k else GaussRational(0)
        if not r.is_real:
            return None
        if linear_form(1, r) ** k * c0 != V:
            return None
        return Fraction(1), r.re
    if any(V.coeffs[:-1]):
        return None
    return Fraction(0), Fraction(1)
