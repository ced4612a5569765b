"""Multivariate polynomials over Q(i) and their fraction field.

``MultiPoly`` stores a sparse map from exponent vectors to nonzero
``GaussRational`` coefficients over an ordered tuple of variable names.
Operands with different variable tuples are re-embedded into the union
(left operand's order first), so constants and polynomials in fewer
variables mix freely.

``RatFunc`` keeps numerator/denominator coprime.  The fast path (constant
denominator) never calls a gcd; otherwise the common factor is removed with
sympy's sparse polynomial gcd over ``QQ_I`` and the denominator is made
monic with respect to graded-lex order, which makes the representation
canonical.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .scalars import GaussRational, to_gauss, render_scalar, render_rational

__all__ = ["MultiPoly", "RatFunc", "natural_key", "as_ratfunc"]

Monomial = Tuple[int, ...]
_ZERO = GaussRational(0)
_ONE = GaussRational(1)


def natural_key(name: str):
    """Sort key putting ``p2`` before ``p10``."""
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def _merge_vars(a: Tuple[str, ...], b: Tuple[str, ...]) -> Tuple[str, ...]:
    if a == b or not b:
        return a
    if not a:
        return b
    seen = set(a)
    return a + tuple(v for v in b if v not in seen)


def _grlex_key(m: Monomial):
    return (sum(m), m)


class MultiPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping[Monomial, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        clean: Dict[Monomial, GaussRational] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != len(variables):
                raise ValueError("exponent vector length does not match variables")
            c = to_gauss(c)
            if c:
                clean[mono] = c
        self.variables = variables
        self.terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        mono = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {mono: 1})

    @classmethod
    def _raw(cls, variables, terms) -> "MultiPoly":
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # -- structure ------------------------------------------------------
    def embed(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express in a superset of variables (in the given order)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        idx = {v: k for k, v in enumerate(variables)}
        missing = set(self.used_variables()) - set(idx)
        if missing:
            raise ValueError(f"variables {sorted(missing)} missing from target variables")
        terms = {}
        for mono, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, mono):
                if e:
                    new[idx[v]] = e
            terms[tuple(new)] = c
        return MultiPoly._raw(variables, terms)

    def _unify(self, other: "MultiPoly"):
        if self.variables == other.variables:
            return self, other
        vs = _merge_vars(self.variables, other.variables)
        return self.embed(vs), other.embed(vs)

    @staticmethod
    def _coerce(other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, RatFunc):
            return None
        try:
            return MultiPoly.constant(to_gauss(other))
        except TypeError:
            return None

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> GaussRational:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values())) if self.terms else _ZERO

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_coefficient(self) -> GaussRational:
        if not self.terms:
            return _ZERO
        return max(self.terms.items(), key=lambda t: _grlex_key(t[0]))[1]

    def used_variables(self) -> Tuple[str, ...]:
        return tuple(v for k, v in enumerate(self.variables) if any(m[k] for m in self.terms))

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._unify(o)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            s = terms.get(m, _ZERO) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return MultiPoly._raw(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._unify(o)
        if b.is_constant():
            c = b.constant_value()
            if not c:
                return MultiPoly._raw(a.variables, {})
            return MultiPoly._raw(a.variables, {m: v * c for m, v in a.terms.items()})
        terms: Dict[Monomial, GaussRational] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                s = terms.get(m, _ZERO) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return MultiPoly._raw(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (MultiPoly, RatFunc)):
            return RatFunc(self) / other
        c = to_gauss(other)
        if not c:
            raise ZeroDivisionError("polynomial division by zero")
        inv = 1 / c
        return MultiPoly._raw(self.variables, {m: v * inv for m, v in self.terms.items()})

    def __rtruediv__(self, other):
        return RatFunc(other) / RatFunc(self)

    def conjugate(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {m: c.conjugate() for m, c in self.terms.items()})

    def partial(self, var: str) -> "MultiPoly":
        if var not in self.variables:
            raise KeyError(f"unknown variable {var!r}; declared {self.variables}")
        k = self.variables.index(var)
        terms = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                terms[m[:k] + (e - 1,) + m[k + 1:]] = c * e
        return MultiPoly._raw(self.variables, terms)

    def evaluate(self, point) -> GaussRational:
        """Evaluate at a mapping name->value or a sequence aligned with ``variables``."""
        if not isinstance(point, Mapping):
            point = dict(zip(self.variables, point))
        vals = []
        for v in self.variables:
            if v in point:
                vals.append(to_gauss(point[v]))
            else:
                vals.append(None)
        total = _ZERO
        for m, c in self.terms.items():
            t = c
            for val, e in zip(vals, m):
                if e:
                    if val is None:
                        raise KeyError("point does not assign every variable in use")
                    t = t * val ** e
            total = total + t
        return total

    def substitute(self, mapping: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        result = MultiPoly.constant(0)
        for m, c in self.terms.items():
            t = MultiPoly.constant(c)
            for v, e in zip(self.variables, m):
                if e:
                    t = t * (mapping[v] if v in mapping else MultiPoly.var(v, self.variables)) ** e
            result = result + t
        return result

    # -- comparison -----------------------------------------------------
    def _canonical_items(self):
        return frozenset(
            (tuple((v, e) for v, e in zip(self.variables, m) if e), c) for m, c in self.terms.items()
        )

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, RatFunc):
                return other == self
            return NotImplemented
        if self.variables == o.variables:
            return self.terms == o.terms
        return self._canonical_items() == o._canonical_items()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._canonical_items())
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"

    def __str__(self):
        return render_poly(self)


def _monomial_str(variables, m) -> str:
    parts = []
    for v, e in zip(variables, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def _coeff_prefix(c: GaussRational) -> str:
    """Coefficient text to put in front of ``*monomial``."""
    if c == 1:
        return ""
    if c == -1:
        return "-"
    if c.im == 0:
        q = c.re
        if q.denominator == 1:
            return f"{q.numerator}*"
        sign = "-" if q < 0 else ""
        return f"{sign}({render_rational(abs(q))})*"
    return f"({render_scalar(c)})*"


def render_poly(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        if not any(m):
            s = render_scalar(c)
            if c.im != 0 and c.re != 0:
                s = f"({s})"
        else:
            s = _coeff_prefix(c) + _monomial_str(p.variables, m)
        if out:
            out.append(" - " + s[1:] if s.startswith("-") else " + " + s)
        else:
            out.append(s)
    return "".join(out)


# ---------------------------------------------------------------------------
# gcd backend

@lru_cache(maxsize=64)
def _sympy_ring(variables: Tuple[str, ...]):
    from sympy.polys.domains import QQ_I
    from sympy.polys.rings import ring
    R, *_ = ring(",".join(variables), QQ_I)
    return R


def _to_sympy(p: MultiPoly, R):
    from sympy.polys.domains import QQ, QQ_I
    return R.from_dict({m: QQ_I(QQ(c.re.numerator, c.re.denominator), QQ(c.im.numerator, c.im.denominator))
                        for m, c in p.terms.items()})


def _from_sympy(f, variables) -> MultiPoly:
    terms = {}
    for m, c in f.items():
        terms[tuple(m)] = GaussRational(Fraction(int(c.x.numerator), int(c.x.denominator)),
                                        Fraction(int(c.y.numerator), int(c.y.denominator)))
    return MultiPoly._raw(tuple(variables), terms)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic (graded-lex) gcd of two polynomials over Q(i)."""
    a, b = a._unify(b)
    if not a.variables:
        return MultiPoly.constant(1)
    R = _sympy_ring(a.variables)
    g = _to_sympy(a, R).gcd(_to_sympy(b, R))
    g = _from_sympy(g, a.variables)
    lc = g.leading_coefficient()
    return g / lc if lc else g


def poly_divexact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    a, b = a._unify(b)
    if b.is_constant():
        return a / b.constant_value()
    R = _sympy_ring(a.variables)
    q, r = _to_sympy(a, R).div(_to_sympy(b, R))
    if r:
        raise ArithmeticError("inexact polynomial division")
    return _from_sympy(q, a.variables)


# ---------------------------------------------------------------------------

class RatFunc:
    """Quotient ``numerator / denominator`` of two ``MultiPoly`` values."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1, _reduced: bool = False):
        num = num if isinstance(num, MultiPoly) else MultiPoly.constant(to_gauss(num))
        den = den if isinstance(den, MultiPoly) else MultiPoly.constant(to_gauss(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num: MultiPoly, den: MultiPoly):
        num, den = num._unify(den)
        if num.is_zero():
            return num, MultiPoly.constant(1, num.variables)
        if den.is_constant():
            c = den.constant_value()
            return (num / c if c != 1 else num), MultiPoly.constant(1, num.variables)
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return num, den

    @property
    def numerator(self) -> MultiPoly:
        return self.num

    @property
    def denominator(self) -> MultiPoly:
        return self.den

    @property
    def variables(self):
        return _merge_vars(self.num.variables, self.den.variables)

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other, MultiPoly.constant(1, other.variables), _reduced=True)
        try:
            return RatFunc(MultiPoly.constant(to_gauss(other)), _reduced=True)
        except TypeError:
            return None

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> GaussRational:
        return self.num.constant_value() / self.den.constant_value()

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc(self.num + o.num, 1, _reduced=True)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if o.den.is_constant():
            c = o.den.constant_value()
            return RatFunc(self.num + o.num * self.den / c, self.den, _reduced=True)
        if self.den.is_constant():
            c = self.den.constant_value()
            return RatFunc(o.num + self.num * o.den / c, o.den, _reduced=True)
        # Henrici: only the common factor of the denominators can cancel
        g = poly_gcd(self.den, o.den)
        if g.is_constant():
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, _reduced=True)
        d1, d2 = poly_divexact(self.den, g), poly_divexact(o.den, g)
        t = self.num * d2 + o.num * d1
        if t.is_zero():
            return RatFunc(0)
        g2 = poly_gcd(t, g)
        if not g2.is_constant():
            t, g = poly_divexact(t, g2), poly_divexact(g, g2)
        den = d1 * d2 * g
        lc = den.leading_coefficient()
        if lc != 1:
            t, den = t / lc, den / lc
        return RatFunc(t, den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc(self.num * o.num, 1, _reduced=True)
        # scaling by a constant keeps the fraction reduced
        if o.is_constant():
            c = o.constant_value()
            return RatFunc(self.num * c, self.den, _reduced=True) if c else RatFunc(0)
        if self.is_constant():
            c = self.constant_value()
            return RatFunc(o.num * c, o.den, _reduced=True) if c else RatFunc(0)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        if o.is_constant():
            return RatFunc(self.num / o.constant_value(), self.den, _reduced=True)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def conjugate(self) -> "RatFunc":
        return RatFunc(self.num.conjugate(), self.den.conjugate())

    def partial(self, var: str) -> "RatFunc":
        vs = self.variables
        if var not in vs:
            raise KeyError(f"unknown variable {var!r}; declared {vs}")
        num, den = self.num.embed(vs), self.den.embed(vs)
        if den.is_constant():
            return RatFunc(num.partial(var), den, _reduced=True)
        return RatFunc(num.partial(var) * den - num * den.partial(var), den * den)

    def evaluate(self, point) -> GaussRational:
        vs = self.variables
        if not isinstance(point, Mapping):
            point = dict(zip(vs, point))
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at the point")
        return self.num.evaluate(point) / d

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # cross-multiplication keeps equality decidable regardless of reduction
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        if self.den.is_constant():
            return hash(self.num)
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        if self.den.is_constant():
            return render_poly(self.num)
        return f"({render_poly(self.num)})/({render_poly(self.den)})"


def ratfunc_sum(terms: Iterable) -> "RatFunc | int":
    """Sum of RatFunc and scalar terms, adding numerators over equal denominators first.

    Returns plain ``0`` for an empty or all-scalar-zero sum so callers can mix
    it with other number types.
    """
    groups: Dict[MultiPoly, MultiPoly] = {}
    scalar = 0
    for t in terms:
        if isinstance(t, RatFunc):
            if t.is_zero():
                continue
            if t.den in groups:
                groups[t.den] = groups[t.den] + t.num
            else:
                groups[t.den] = t.num
        elif isinstance(t, MultiPoly):
            one = MultiPoly.constant(1, t.variables)
            groups[one] = groups[one] + t if one in groups else t
        else:
            scalar = scalar + t
    total = scalar
    for den, num in groups.items():
        total = total + RatFunc(num, den)
    return total


def as_ratfunc(x) -> RatFunc:
    r = RatFunc._coerce(x)
    if r is None:
        raise TypeError(f"cannot convert {type(x).__name__} to RatFunc")
    return r
