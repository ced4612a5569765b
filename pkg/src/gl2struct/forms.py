"""Differential forms with rational-function coefficients on a coordinate patch.

A ``DForm`` of degree d stores one ``RatFunc`` per strictly increasing index
tuple ``(a_1 < ... < a_d)``, meaning ``coeff * dp_{a_1} ^ ... ^ dp_{a_d}``.
Forms are evaluated on vectors with the determinant convention, so
``(alpha ^ beta)(X, Y) = alpha(X) beta(Y) - alpha(Y) beta(X)``.

Structure functions of a coframe use ``d eta^i = sum_{j<l} c^i_{jl} eta^j ^ eta^l``,
which is the same as ``(1/2) sum_{j,l} c^i_{jl} eta^j ^ eta^l`` with ``c``
antisymmetric; equivalently ``c^i_{jl} = d eta^i(e_j, e_l)`` for the dual frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import linalg
from .parsing import parse_ratfunc
from .poly import RatFunc, as_ratfunc, ratfunc_sum
from .scalars import GaussRational

__all__ = [
    "Patch", "DForm", "Coframe", "StructureFunctions", "wedge", "ext_d",
    "structure_functions", "structure_residual", "evaluate_at", "SingularCoframeError",
]


class SingularCoframeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Patch:
    names: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate coordinate names in {self.names}")

    @classmethod
    def standard(cls, n: int, prefix: str = "p") -> "Patch":
        return cls(tuple(f"{prefix}{i}" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.names)

    def coerce(self, value) -> RatFunc:
        """Turn a number, polynomial, string or RatFunc into a RatFunc over this patch."""
        if isinstance(value, str):
            return parse_ratfunc(value, self.names)
        r = as_ratfunc(value)
        extra = set(r.variables) - set(self.names)
        if extra:
            raise ValueError(f"coefficient uses variables {sorted(extra)} outside the patch")
        return RatFunc(r.num.embed(self.names), r.den.embed(self.names), _reduced=True)


def _sort_sign(idx: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple (sign 0 on repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class DForm:
    """An exterior form ``sum_I c_I dp_I`` with RatFunc coefficients."""

    __slots__ = ("patch", "degree", "coeffs")

    def __init__(self, patch: Patch, degree: int, coeffs: Mapping[Tuple[int, ...], object] | None = None):
        self.patch = patch
        self.degree = degree
        clean: Dict[Tuple[int, ...], RatFunc] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(not 0 <= a < patch.n for a in idx):
                raise ValueError(f"bad index tuple {idx} for a {degree}-form on {patch.n} coordinates")
            sign, key = _sort_sign(idx)
            if not sign:
                continue
            c = patch.coerce(c)
            if c.is_zero():
                continue
            c = c if sign > 0 else -c
            if key in clean:
                c = clean[key] + c
                if c.is_zero():
                    del clean[key]
                    continue
            clean[key] = c
        self.coeffs = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, patch: Patch, degree: int) -> "DForm":
        return cls(patch, degree, {})

    @classmethod
    def function(cls, patch: Patch, f) -> "DForm":
        return cls(patch, 0, {(): f})

    @classmethod
    def dp(cls, patch: Patch, a: int) -> "DForm":
        return cls(patch, 1, {(a,): 1})

    @classmethod
    def one_form(cls, patch: Patch, coeffs: Sequence) -> "DForm":
        """``sum_a coeffs[a] dp_a``."""
        if len(coeffs) != patch.n:
            raise ValueError("one_form needs one coefficient per coordinate")
        return cls(patch, 1, {(a,): c for a, c in enumerate(coeffs)})

    # algebra ------------------------------------------------------------
    def _same(self, other: "DForm"):
        if not isinstance(other, DForm):
            raise TypeError("expected a DForm")
        if other.patch != self.patch:
            raise ValueError("forms live on different patches")

    def __add__(self, other: "DForm") -> "DForm":
        self._same(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return DForm(self.patch, self.degree, out)

    def __neg__(self) -> "DForm":
        return DForm(self.patch, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "DForm") -> "DForm":
        return self + (-other)

    def scale(self, f) -> "DForm":
        f = self.patch.coerce(f)
        return DForm(self.patch, self.degree, {k: f * c for k, c in self.coeffs.items()})

    def __mul__(self, f) -> "DForm":
        if isinstance(f, DForm):
            return wedge(self, f)
        return self.scale(f)

    __rmul__ = scale

    def __xor__(self, other: "DForm") -> "DForm":
        return wedge(self, other)

    def conjugate(self) -> "DForm":
        return DForm(self.patch, self.degree, {k: c.conjugate() for k, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, DForm):
            return NotImplemented
        return self.patch == other.patch and self.degree == other.degree and (self - other).is_zero()

    def __hash__(self):
        return hash((self.patch, self.degree, frozenset(self.coeffs)))

    def coefficient(self, *idx: int) -> RatFunc:
        sign, key = _sort_sign(idx)
        if not sign:
            return RatFunc(0)
        c = self.coeffs.get(key)
        if c is None:
            return RatFunc(0)
        return c if sign > 0 else -c

    # evaluation -----------------------------------------------------------
    def on_vectors(self, *vectors: Sequence):
        """Value on ``degree`` vectors given by their ``dp``-components."""
        if len(vectors) != self.degree:
            raise ValueError(f"a {self.degree}-form needs {self.degree} vectors")
        terms = []
        for idx, c in self.coeffs.items():
            s = 0
            for perm in permutations(range(self.degree)):
                sign, _ = _sort_sign(perm)
                term = sign
                for slot, p in enumerate(perm):
                    v = vectors[slot][idx[p]]
                    if v == 0:
                        term = 0
                        break
                    term = term * v
                if term != 0:
                    s = s + term
            if s != 0:
                terms.append(c * s)
        return as_ratfunc(ratfunc_sum(terms))

    def evaluate_at(self, point) -> Dict[Tuple[int, ...], GaussRational]:
        return evaluate_at(self, point)

    # text -----------------------------------------------------------------
    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            basis = "^".join(f"d{self.patch.names[a]}" for a in idx)
            if not basis:
                parts.append(f"({c})")
            elif c == 1:
                parts.append(basis)
            else:
                parts.append(f"({c})*{basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DForm({self})"

    def to_json(self) -> List[dict]:
        return [{"coeff": str(c), "d": list(idx)} for idx, c in sorted(self.coeffs.items())]


def wedge(alpha: DForm, beta: DForm) -> DForm:
    alpha._same(beta)
    out: Dict[Tuple[int, ...], RatFunc] = {}
    for ia, ca in alpha.coeffs.items():
        for ib, cb in beta.coeffs.items():
            sign, key = _sort_sign(ia + ib)
            if not sign:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return DForm(alpha.patch, alpha.degree + beta.degree, out)


def ext_d(alpha: DForm) -> DForm:
    out: Dict[Tuple[int, ...], RatFunc] = {}
    names = alpha.patch.names
    for idx, c in alpha.coeffs.items():
        if c.is_constant():
            continue
        used = set(c.num.used_variables()) | set(c.den.used_variables())
        for a, name in enumerate(names):
            if name not in used or a in idx:
                continue
            sign, key = _sort_sign((a,) + idx)
            term = c.partial(name)
            if sign < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return DForm(alpha.patch, alpha.degree + 1, out)


def evaluate_at(obj, point) -> Dict:
    """Exact values at a rational point.

    Works on a ``DForm`` (keys are index tuples) or on any mapping from keys to
    RatFunc.  A vanishing denominator raises ``ZeroDivisionError`` naming the
    offending coefficient.
    """
    if isinstance(obj, DForm):
        names = obj.patch.names
        items = obj.coeffs.items()
        label = lambda key: "^".join(f"d{names[a]}" for a in key) or "function"
    else:
        items = obj.items()
        names = None
        label = str
    pt = point
    if names is not None and not isinstance(point, Mapping):
        if len(point) != len(names):
            raise ValueError(f"point needs {len(names)} coordinates")
        pt = dict(zip(names, point))
    out = {}
    for key, c in items:
        c = as_ratfunc(c)
        try:
            out[key] = c.evaluate(pt)
        except ZeroDivisionError:
            raise ZeroDivisionError(f"coefficient of {label(key)} ({c}) is singular at {tuple(point) if not isinstance(point, Mapping) else point}") from None
    return out


# ---------------------------------------------------------------------------
# coframes
# ---------------------------------------------------------------------------

class Coframe:
    """``n`` 1-forms on an ``n``-dimensional patch, invertible as a RatFunc matrix."""

    def __init__(self, patch: Patch, forms: Sequence[DForm]):
        if len(forms) != patch.n:
            raise ValueError(f"a coframe on {patch.n} coordinates needs {patch.n} forms, got {len(forms)}")
        for f in forms:
            if f.degree != 1 or f.patch != patch:
                raise ValueError("coframe entries must be 1-forms on the patch")
        self.patch = patch
        self.forms = tuple(forms)

    @classmethod
    def flat(cls, n: int) -> "Coframe":
        P = Patch.standard(n)
        return cls(P, [DForm.dp(P, a) for a in range(n)])

    @classmethod
    def from_matrix(cls, patch: Patch, rows: Sequence[Sequence]) -> "Coframe":
        return cls(patch, [DForm.one_form(patch, r) for r in rows])

    @property
    def n(self) -> int:
        return self.patch.n

    def matrix(self) -> List[List[RatFunc]]:
        """``A[i][a]``: coefficient of ``dp_a`` in ``eta^i``."""
        return [[f.coefficient(a) for a in range(self.n)] for f in self.forms]

    @cached_property
    def frame(self) -> List[List[RatFunc]]:
        """Dual frame: ``frame[j]`` are the ``dp``-components of ``e_j`` (``eta^i(e_j) = delta``)."""
        try:
            inv = linalg.inverse(self.matrix())
        except linalg.SingularMatrixError:
            raise SingularCoframeError("coframe is singular as a rational-function matrix") from None
        return [[as_ratfunc(inv[a][j]) for a in range(self.n)] for j in range(self.n)]

    def components(self, alpha: DForm):
        """Frame components: a list for 1-forms, an antisymmetric matrix for 2-forms."""
        e = self.frame
        if alpha.degree == 1:
            return [alpha.on_vectors(e[j]) for j in range(self.n)]
        if alpha.degree == 2:
            out = [[RatFunc(0)] * self.n for _ in range(self.n)]
            for j in range(self.n):
                for l in range(j + 1, self.n):
                    v = alpha.on_vectors(e[j], e[l])
                    out[j][l], out[l][j] = v, -v
            return out
        raise ValueError("components are implemented for degrees 1 and 2")

    def combination(self, coeffs: Sequence) -> DForm:
        """``sum_j coeffs[j] eta^j``."""
        total = DForm.zero(self.patch, 1)
        for c, f in zip(coeffs, self.forms):
            if c != 0:
                total = total + f.scale(c)
        return total

    def two_form(self, coeffs: Mapping[Tuple[int, int], object]) -> DForm:
        """``sum_{j<l} coeffs[(j, l)] eta^j ^ eta^l``."""
        total = DForm.zero(self.patch, 2)
        for (j, l), c in coeffs.items():
            if c != 0:
                total = total + wedge(self.forms[j], self.forms[l]).scale(c)
        return total

    def check_points(self, points: Iterable[Sequence]) -> None:
        """Raise if the coefficient matrix is singular at any of ``points``."""
        A = self.matrix()
        for pt in points:
            vals = [[c.evaluate(dict(zip(self.patch.names, pt))) for c in r] for r in A]
            if linalg.det(vals) == 0:
                raise SingularCoframeError(f"coframe is singular at {tuple(pt)}")

    def to_json(self) -> dict:
        return {"vars": list(self.patch.names),
                "forms": [[{"coeff": str(c), "d": idx[0]} for idx, c in sorted(f.coeffs.items())]
                          for f in self.forms]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Coframe":
        if "vars" not in data or "forms" not in data:
            raise ValueError("coframe JSON needs 'vars' and 'forms'")
        patch = Patch(tuple(data["vars"]))
        forms = []
        for n, entry in enumerate(data["forms"]):
            coeffs: Dict[Tuple[int, ...], RatFunc] = {}
            for term in entry:
                a = int(term["d"])
                if not 0 <= a < patch.n:
                    raise ValueError(f"form {n}: differential index {a} out of range")
                c = patch.coerce(str(term["coeff"]))
                coeffs[(a,)] = coeffs[(a,)] + c if (a,) in coeffs else c
            forms.append(DForm(patch, 1, coeffs))
        return cls(patch, forms)


@dataclass(frozen=True)
class StructureFunctions:
    """``c[(i, j, l)]`` for ``j < l``; ``get`` extends antisymmetrically."""

    n: int
    c: Mapping[Tuple[int, int, int], RatFunc]

    def get(self, i: int, j: int, l: int) -> RatFunc:
        if j < l:
            return self.c.get((i, j, l), RatFunc(0))
        if j > l:
            return -self.c.get((i, l, j), RatFunc(0))
        return RatFunc(0)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.c.values())


def structure_functions(eta: Coframe) -> StructureFunctions:
    c = {}
    for i, f in enumerate(eta.forms):
        comps = eta.components(ext_d(f))
        for j in range(eta.n):
            for l in range(j + 1, eta.n):
                if not comps[j][l].is_zero():
                    c[(i, j, l)] = comps[j][l]
    return StructureFunctions(eta.n, c)


def structure_residual(eta: Coframe, sf: StructureFunctions) -> List[DForm]:
    """``d eta^i - sum_{j<l} c^i_{jl} eta^j ^ eta^l`` for each ``i``."""
    out = []
    for i, f in enumerate(eta.forms):
        rebuilt = eta.two_form({(j, l): v for (r, j, l), v in sf.c.items() if r == i})
        out.append(ext_d(f) - rebuilt)
    return out
