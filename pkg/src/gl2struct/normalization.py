"""Normalizing the torsion of a GL(2)-connection on V[k].

The normal condition requires every contraction ``Theta(X, .)`` of the
torsion, seen as an endomorphism of V[k], to lie in ``g_k^perp``, the
annihilator of ``g_k = rep_algebra(k, gl(2))`` under the trace form
``(eta, M) -> tr(eta M)``.  Four functionals cut it out:

* ``sum``:    ``sum_i M[i][i]``
* ``weight``: ``sum_i (k - 2i) M[i][i]``
* ``up``:     ``sum_i (k - i) M[i][i+1]``
* ``down``:   ``sum_i i M[i][i-1]``

Changing the connection by ``psi`` (a gl(2)-valued 1-form) alters the torsion
by ``Theta(X, Y) -> Theta(X, Y) + Psi(Y) X - Psi(X) Y``.  For ``k >= 3`` the
resulting linear system for the ``4(k+1)`` numbers ``psi^a_b(X_m)`` has a
unique solution.

Indices follow the frame ``X_m = x^(k-m) y^m`` throughout, and ``psi^a_b``
uses the layout ``[[psi^1_1, psi^2_1], [psi^1_2, psi^2_2]]`` of
``Gl2Matrix``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .binary_forms import Gl2Matrix
from .scalars import GaussRational, render_scalar, to_gauss

__all__ = [
    "FUNCTIONAL_NAMES", "PSI_NAMES", "PerpConditions", "TorsionTensor", "ConnectionCorrection",
    "NormalizationOperator", "BlockReport", "SingularSystemError", "perp_conditions", "perp_values",
    "perp_test", "build_normalization", "block_determinant", "closed_form_determinant",
    "bryant_torsion", "apply_correction", "contractions_in_perp",
]

FUNCTIONAL_NAMES = ("sum", "weight", "up", "down")
PSI_NAMES = ("11", "21", "12", "22")


class SingularSystemError(linalg.SingularMatrixError):
    """The normalization system has no unique solution."""


def _render(v) -> str:
    if isinstance(v, (int, Fraction, GaussRational)):
        return render_scalar(v)
    return str(v)


# ---------------------------------------------------------------------------
# g_k^perp
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerpConditions:
    """Coefficient tables ``{(row, col): c}`` of the four functionals."""

    k: int
    tables: Tuple[Tuple[Tuple[Tuple[int, int], int], ...], ...]

    def evaluate(self, M) -> list:
        n = self.k + 1
        if len(M) != n or any(len(r) != n for r in M):
            raise ValueError(f"expected a {n}x{n} matrix")
        out = []
        for table in self.tables:
            s = 0
            for (r, c), coef in table:
                v = M[r][c]
                if v != 0:
                    s = s + coef * v
            out.append(s)
        return out

    def as_matrices(self) -> List[List[List[int]]]:
        mats = []
        for table in self.tables:
            m = linalg.zeros(self.k + 1)
            for (r, c), coef in table:
                m[r][c] = coef
            mats.append(m)
        return mats


@lru_cache(maxsize=None)
def perp_conditions(k: int) -> PerpConditions:
    if k < 1:
        raise ValueError("k must be >= 1")
    n = k + 1
    t_sum = tuple(((i, i), 1) for i in range(n))
    t_weight = tuple(((i, i), k - 2 * i) for i in range(n) if k != 2 * i)
    t_up = tuple(((i, i + 1), k - i) for i in range(k))
    t_down = tuple(((i, i - 1), i) for i in range(1, n))
    return PerpConditions(k, (t_sum, t_weight, t_up, t_down))


def perp_values(k: int, M) -> list:
    """The four functionals ``(sum, weight, up, down)`` evaluated on ``M``."""
    return perp_conditions(k).evaluate(M)


def perp_test(k: int, M) -> bool:
    """True iff ``M`` lies in ``g_k^perp``."""
    return all(v == 0 for v in perp_values(k, M))


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionTensor:
    """A V[k]-valued 2-form; ``entries[(i, j, l)]`` with ``j < l`` is ``T^i_{jl}``."""

    k: int
    entries: Mapping[Tuple[int, int, int], object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j, l), v in dict(self.entries).items():
            for idx in (i, j, l):
                if not 0 <= idx <= self.k:
                    raise ValueError(f"index {idx} out of range 0..{self.k}")
            if j == l:
                if v != 0:
                    raise ValueError("diagonal entries of a 2-form must vanish")
                continue
            if j > l:
                j, l, v = l, j, -v
            if (i, j, l) in clean:
                v = clean[(i, j, l)] + v
            clean[(i, j, l)] = v
        object.__setattr__(self, "entries", {key: v for key, v in clean.items() if v != 0})

    @classmethod
    def zero(cls, k: int) -> "TorsionTensor":
        return cls(k, {})

    @classmethod
    def from_components(cls, k: int, comps) -> "TorsionTensor":
        """From a full nested list ``comps[i][j][l]`` (antisymmetry is checked)."""
        entries = {}
        for i in range(k + 1):
            for j in range(k + 1):
                for l in range(k + 1):
                    if comps[i][j][l] + comps[i][l][j] != 0:
                        raise ValueError("components are not antisymmetric")
                    if j < l:
                        entries[(i, j, l)] = comps[i][j][l]
        return cls(k, entries)

    def get(self, i: int, j: int, l: int):
        if j < l:
            return self.entries.get((i, j, l), 0)
        if j > l:
            return -self.entries.get((i, l, j), 0)
        return 0

    def contraction(self, j: int) -> List[list]:
        """The endomorphism ``Y -> Theta(X_j, Y)``: entry ``[i][l] = T^i_{jl}``."""
        n = self.k + 1
        return [[self.get(i, j, l) for l in range(n)] for i in range(n)]

    def components(self):
        n = self.k + 1
        return [[[self.get(i, j, l) for l in range(n)] for j in range(n)] for i in range(n)]

    def map(self, fn) -> "TorsionTensor":
        return TorsionTensor(self.k, {key: fn(v) for key, v in self.entries.items()})

    def __add__(self, other: "TorsionTensor") -> "TorsionTensor":
        if other.k != self.k:
            raise ValueError("degree mismatch")
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out[key] + v if key in out else v
        return TorsionTensor(self.k, out)

    def __neg__(self) -> "TorsionTensor":
        return self.map(lambda v: -v)

    def __sub__(self, other: "TorsionTensor") -> "TorsionTensor":
        return self + (-other)

    def scale(self, c) -> "TorsionTensor":
        return self.map(lambda v: c * v)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return isinstance(other, TorsionTensor) and other.k == self.k and (self - other).is_zero()

    def __hash__(self):
        return hash((self.k, len(self.entries)))

    def to_json(self) -> dict:
        return {
            "degree": self.k,
            "entries": [{"i": i, "j": j, "k": l, "value": _render(v)}
                        for (i, j, l), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TorsionTensor":
        from .parsing import parse_scalar
        k = int(data["degree"])
        entries = {}
        for e in data.get("entries", []):
            v = e["value"]
            v = parse_scalar(v) if isinstance(v, str) else to_gauss(Fraction(v))
            key = (int(e["i"]), int(e["j"]), int(e["k"]))
            if key[1] == key[2]:
                raise ValueError("diagonal entries of a 2-form must vanish")
            entries[key] = entries.get(key, 0) + v
        return cls(k, entries)


@dataclass(frozen=True)
class ConnectionCorrection:
    """``values[(ab, m)]`` is ``psi^a_b(X_m)`` with ``ab`` in ``PSI_NAMES``."""

    k: int
    values: Mapping[Tuple[str, int], object]

    @classmethod
    def zero(cls, k: int) -> "ConnectionCorrection":
        return cls(k, {(ab, m): GaussRational(0) for m in range(k + 1) for ab in PSI_NAMES})

    def at(self, m: int) -> Gl2Matrix:
        v = self.values
        return Gl2Matrix.from_phi(v[("11", m)], v[("21", m)], v[("12", m)], v[("22", m)])

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def __add__(self, other: "ConnectionCorrection") -> "ConnectionCorrection":
        return ConnectionCorrection(self.k, {key: v + other.values[key] for key, v in self.values.items()})

    @staticmethod
    def name(ab: str, m: int) -> str:
        return f"psi^{ab[0]}_{ab[1]}(X_{m})"

    def to_json(self) -> dict:
        return {
            "degree": self.k,
            "psi": {self.name(ab, m): _render(self.values[(ab, m)])
                    for m in range(self.k + 1) for ab in PSI_NAMES},
        }


def unknown_keys(k: int) -> List[Tuple[str, int]]:
    return [(ab, m) for m in range(k + 1) for ab in PSI_NAMES]


def _unit_gl2(ab: str) -> Gl2Matrix:
    return Gl2Matrix.from_phi(**{f"phi{ab}": 1})


def _rep_column(k: int, psi: "ConnectionCorrection", m: int, i: int) -> Dict[int, object]:
    """Nonzero entries ``r -> rep_algebra(k, psi(X_m))[r][i]`` over any coefficient ring."""
    v = psi.values
    a, b, c, d = v[("11", m)], v[("21", m)], v[("12", m)], v[("22", m)]
    col = {}
    diag = (k - i) * a + i * d
    if diag != 0:
        col[i] = diag
    if i < k and c != 0:
        col[i + 1] = (k - i) * c
    if i > 0 and b != 0:
        col[i - 1] = i * b
    return col


def apply_correction(theta: TorsionTensor, psi: ConnectionCorrection) -> TorsionTensor:
    """``Theta(X_i, X_l) + Psi(X_l) X_i - Psi(X_i) X_l`` for all ``i < l``.

    ``psi`` may hold numbers or rational functions.
    """
    if theta.k != psi.k:
        raise ValueError("degree mismatch")
    k = theta.k
    entries = dict(theta.entries)

    def bump(key, delta):
        entries[key] = entries[key] + delta if key in entries else delta

    for i in range(k + 1):
        for l in range(i + 1, k + 1):
            for r, v in _rep_column(k, psi, l, i).items():
                bump((r, i, l), v)
            for r, v in _rep_column(k, psi, i, l).items():
                bump((r, i, l), -v)
    return TorsionTensor(k, entries)


def contractions_in_perp(theta: TorsionTensor) -> bool:
    return all(perp_test(theta.k, theta.contraction(j)) for j in range(theta.k + 1))


# ---------------------------------------------------------------------------
# the linear system
# ---------------------------------------------------------------------------

def _equation_keys(k: int) -> List[Tuple[int, str]]:
    return [(i, f) for i in range(k + 1) for f in FUNCTIONAL_NAMES]


@lru_cache(maxsize=None)
def _system(k: int) -> Tuple[Tuple[Tuple[Fraction, ...], ...], ...]:
    """Coefficient matrix: row ``(i, f)``, column ``(ab, m)``.

    Column ``(ab, m)`` is obtained by applying the alteration with
    ``psi = unit(ab) omega^m`` to the zero torsion and reading off the four
    functionals of each contraction.
    """
    keys = unknown_keys(k)
    cols = []
    for ab, m in keys:
        values = {key: 0 for key in keys}
        values[(ab, m)] = 1
        altered = apply_correction(TorsionTensor.zero(k), ConnectionCorrection(k, values))
        col = []
        for i in range(k + 1):
            col += [to_gauss(v).re for v in perp_values(k, altered.contraction(i))]
        cols.append(col)
    return tuple(tuple(r) for r in linalg.transpose(cols))


@dataclass(frozen=True)
class NormalizationOperator:
    """The exact inverse of the normalization system for a fixed degree."""

    k: int
    matrix: Tuple[Tuple[Fraction, ...], ...]
    inverse: Tuple[Tuple[Fraction, ...], ...]

    def rhs(self, theta: TorsionTensor) -> list:
        b = []
        for i in range(self.k + 1):
            b += perp_values(self.k, theta.contraction(i))
        return b

    def solve(self, theta: TorsionTensor) -> ConnectionCorrection:
        """The unique ``psi`` whose alteration puts ``theta`` in normal form."""
        if theta.k != self.k:
            raise ValueError("degree mismatch")
        b = self.rhs(theta)
        u = linalg.matvec(self.inverse, b)
        return ConnectionCorrection(self.k, {key: -v for key, v in zip(unknown_keys(self.k), u)})

    __call__ = solve

    def normalize(self, theta: TorsionTensor) -> Tuple[TorsionTensor, ConnectionCorrection]:
        psi = self.solve(theta)
        return apply_correction(theta, psi), psi


@lru_cache(maxsize=None)
def build_normalization(k: int) -> NormalizationOperator:
    if k < 1:
        raise ValueError("k must be >= 1")
    A = _system(k)
    try:
        inv = linalg.inverse([list(r) for r in A])
    except linalg.SingularMatrixError as exc:
        raise SingularSystemError(f"normalization system for k={k} is singular: {exc}") from None
    return NormalizationOperator(k, A, tuple(tuple(r) for r in inv))


# ---------------------------------------------------------------------------
# block structure
# ---------------------------------------------------------------------------

def closed_form_determinant(k: int) -> Fraction:
    return Fraction((k - 2) * (k - 1) ** 2 * k ** 3 * (k + 2) * (k + 3) * (k + 4) * (k * k + k + 6), 216)


@dataclass
class BlockReport:
    k: int
    value: Optional[Fraction]
    interior: Dict[int, Fraction]
    boundary: List[dict]
    independent: bool
    full_determinant: Optional[Fraction] = None
    shape_note: str = ""

    def to_json(self) -> dict:
        return {
            "degree": self.k,
            "value": None if self.value is None else render_scalar(self.value),
            "independent_of_i": self.independent,
            "interior": {str(i): render_scalar(v) for i, v in sorted(self.interior.items())},
            "boundary": self.boundary,
            "full_determinant": None if self.full_determinant is None else render_scalar(self.full_determinant),
            "shape_note": self.shape_note,
        }


def _components(A) -> List[Tuple[List[int], List[int]]]:
    """Connected components of the row/column incidence graph of ``A``."""
    nrows, ncols = len(A), len(A[0])
    row_adj = [[c for c in range(ncols) if A[r][c] != 0] for r in range(nrows)]
    col_adj = [[r for r in range(nrows) if A[r][c] != 0] for c in range(ncols)]
    seen_r, seen_c = set(), set()
    comps = []
    for start in range(nrows):
        if start in seen_r:
            continue
        rows, cols = [], []
        queue = deque([("r", start)])
        seen_r.add(start)
        while queue:
            kind, x = queue.popleft()
            if kind == "r":
                rows.append(x)
                for c in row_adj[x]:
                    if c not in seen_c:
                        seen_c.add(c)
                        queue.append(("c", c))
            else:
                cols.append(x)
                for r in col_adj[x]:
                    if r not in seen_r:
                        seen_r.add(r)
                        queue.append(("r", r))
        comps.append((sorted(rows), sorted(cols)))
    for c in range(ncols):
        if c not in seen_c:
            comps.append(([], [c]))
    return comps


def _interior_layout(k: int, i: int):
    """Rows ``(i-1, up), (i, sum), (i, weight), (i+1, down)`` against columns
    ``psi^1_1(X_i), psi^2_1(X_{i-1}), psi^2_2(X_i), psi^1_2(X_{i+1})``.

    This ordering makes the determinant positive.
    """
    rows = [(i - 1, "up"), (i, "sum"), (i, "weight"), (i + 1, "down")]
    cols = [("11", i), ("21", i - 1), ("22", i), ("12", i + 1)]
    return rows, cols


def block_determinant(k: int) -> BlockReport:
    """Split the normalization system into decoupled blocks and compute their determinants.

    Interior blocks (one per ``i = 1..k-1``) are 4x4 in the layout of
    ``_interior_layout``; their common determinant is returned as ``value``.
    The ends ``i = 0`` and ``i = k`` give smaller blocks, listed in
    ``boundary``.  If the interior blocks do not have the expected shape the
    full determinant is computed instead and ``shape_note`` explains why.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    A = [list(r) for r in _system(k)]
    eq_keys = _equation_keys(k)
    un_keys = unknown_keys(k)
    eq_index = {key: n for n, key in enumerate(eq_keys)}
    un_index = {key: n for n, key in enumerate(un_keys)}

    interior: Dict[int, Fraction] = {}
    boundary: List[dict] = []
    notes = []
    expected = {}
    for i in range(1, k):
        rows, cols = _interior_layout(k, i)
        expected[(frozenset(eq_index[r] for r in rows), frozenset(un_index[c] for c in cols))] = i

    for rs, cs in _components(A):
        key = (frozenset(rs), frozenset(cs))
        if key in expected:
            i = expected.pop(key)
            rows, cols = _interior_layout(k, i)
            sub = [[A[eq_index[r]][un_index[c]] for c in cols] for r in rows]
            interior[i] = Fraction(linalg.det(sub))
            continue
        entry = {
            "equations": [f"{eq_keys[r][1]}@{eq_keys[r][0]}" for r in rs],
            "unknowns": [ConnectionCorrection.name(*un_keys[c]) for c in cs],
        }
        if len(rs) == len(cs):
            entry["determinant"] = render_scalar(linalg.det([[A[r][c] for c in cs] for r in rs]))
        else:
            entry["determinant"] = None
            notes.append(f"non-square block {len(rs)}x{len(cs)}")
        boundary.append(entry)

    if expected:
        notes.append("missing interior blocks for i=" + ",".join(str(i) for i in sorted(expected.values())))
    values = set(interior.values())
    independent = len(values) <= 1
    report = BlockReport(k, values.pop() if len(values) == 1 else None, interior, boundary, independent)
    if notes or not interior:
        report.full_determinant = Fraction(linalg.det(A))
        report.shape_note = "; ".join(notes) or "no interior 4x4 blocks for this k"
    return report


# ---------------------------------------------------------------------------
# Bryant torsion (k = 3)
# ---------------------------------------------------------------------------

# (tau index, coefficient, j, l) per component, component 0 = x^3
_BRYANT_ROWS = (
    ((0, 2520, 2, 3), (1, -720, 1, 3), (2, 360, 0, 3), (2, 120, 1, 2), (3, -144, 0, 2), (4, 72, 0, 1)),
    ((1, 1080, 2, 3), (2, -720, 1, 3), (3, 648, 0, 3), (3, 216, 1, 2), (4, -432, 0, 2), (5, 360, 0, 1)),
    ((2, 360, 2, 3), (3, -432, 1, 3), (4, 648, 0, 3), (4, 216, 1, 2), (5, -720, 0, 2), (6, 1080, 0, 1)),
    ((3, 72, 2, 3), (4, -144, 1, 3), (5, 360, 0, 3), (5, 120, 1, 2), (6, -720, 0, 2), (7, 2520, 0, 1)),
)


def bryant_torsion(tau: Sequence) -> TorsionTensor:
    """The k=3 torsion built from the coefficients ``tau_0..tau_7`` of a degree-7 binary form.

    ``tau`` may hold numbers or polynomials (for symbolic checks).
    """
    if len(tau) != 8:
        raise ValueError("bryant_torsion needs exactly 8 coefficients")
    entries = {}
    for i, row in enumerate(_BRYANT_ROWS):
        for t, coef, j, l in row:
            if tau[t] != 0:
                key = (i, j, l)
                term = coef * tau[t]
                entries[key] = entries[key] + term if key in entries else term
    return TorsionTensor(3, entries)
