"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals.

Every number handled by the package is an element of Q(i).  ``GaussRational``
is an immutable value type; mixed arithmetic with ``int`` and ``Fraction``
coerces automatically.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction

__all__ = ["Rational", "GaussRational", "I", "to_gauss", "render_rational", "render_scalar"]


class GaussRational:
    """A number ``re + i*im`` with ``re``, ``im`` rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    # -- coercion -------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, (int, _RationalABC)):
            return GaussRational(other)
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussRational((self.re * o.re + self.im * o.im) / n,
                             (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (GaussRational(1) / self) ** (-n)
        result = GaussRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    conj = conjugate

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    # -- comparison / hashing ------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussRational({render_scalar(self)!r})"

    def __str__(self):
        return render_scalar(self)


I = GaussRational(0, 1)


def to_gauss(x) -> GaussRational:
    """Coerce an int, Fraction, GaussRational or scalar string to ``GaussRational``."""
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, _RationalABC)):
        return GaussRational(x)
    if isinstance(x, str):
        from .parsing import parse_scalar
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to GaussRational")


def render_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _wrapped(q: Fraction) -> str:
    s = render_rational(q)
    return s if q.denominator == 1 else f"({s})"


def render_scalar(z) -> str:
    """Canonical text: ``1/76``, ``(3/4)+i(1/2)``, ``-i``, ``2-i(3)``."""
    z = to_gauss(z)
    if z.im == 0:
        return render_rational(z.re)
    if z.im == 1:
        imag = "i"
    elif z.im == -1:
        imag = "-i"
    else:
        sign = "-" if z.im < 0 else ""
        imag = f"{sign}i({render_rational(abs(z.im))})"
    if z.re == 0:
        return imag
    real = _wrapped(z.re)
    return real + (imag if imag.startswith("-") else "+" + imag)
