"""End-to-end analysis of a GL(2)-structure given by a coframe on a patch.

The coframe entry ``eta^i`` is the coefficient of the monomial
``x^(k-i) y^i``, so the soldering form is ``omega = sum_i eta^i X_i``.  On
this section the pipeline is

1. raw torsion ``d omega`` from the structure functions (zero connection);
2. the normalization operator gives ``psi``; the canonical connection is
   ``phi = -psi`` and its torsion ``Theta = d omega + Phi ^ omega`` has all
   contractions in ``g_k^perp``;
3. curvature ``Omega = d phi + phi ^ phi``;
4. for odd k, the torsion and the curvature trace
   ``Omega_zeta = (Omega^1_2 + Omega^2_1) + i (Omega^2_2 - Omega^1_1)``
   are written in the ``(xi, xi_bar)`` coframe and split by type.

The matrix layout of ``phi`` is ``[[phi^1_1, phi^2_1], [phi^1_2, phi^2_2]]``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence

from . import linalg
from .binary_forms import BinaryForm, null_cone_root, root_multiplicity
from .complex_structure import complex_basis_change, to_complex_frame
from .forms import Coframe, DForm, Patch, SingularCoframeError, ext_d, structure_functions, wedge
from .normalization import (
    PSI_NAMES, ConnectionCorrection, TorsionTensor, apply_correction, build_normalization,
    contractions_in_perp,
)
from .poly import RatFunc
from .scalars import GaussRational, I, render_scalar, to_gauss

__all__ = [
    "Gl2Structure", "ConnectionOnSection", "CanonicalConnection", "ComplexBlocks", "AnalysisReport",
    "builtin_structure", "canonical_connection", "curvature", "bianchi_residual",
    "complex_decomposition", "integrability_report", "analyze", "veronese_null_check",
]

log = logging.getLogger(__name__)

PHI_LABELS = {"11": "phi^1_1", "21": "phi^2_1", "12": "phi^1_2", "22": "phi^2_2"}


@dataclass
class Gl2Structure:
    k: int
    coframe: Coframe
    name: str = "custom"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.coframe.n != self.k + 1:
            raise ValueError(f"a degree-{self.k} structure needs {self.k + 1} coframe entries, got {self.coframe.n}")

    @property
    def patch(self) -> Patch:
        return self.coframe.patch

    def to_json(self) -> dict:
        return {"name": self.name, "degree": self.k, "coframe": self.coframe.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "Gl2Structure":
        if "coframe" in data:
            coframe = Coframe.from_json(data["coframe"])
            name = data.get("name", "custom")
        else:
            coframe, name = Coframe.from_json(data), data.get("name", "custom")
        k = int(data.get("degree", coframe.n - 1))
        return cls(k, coframe, name)


# ---------------------------------------------------------------------------
# builtin structures
# ---------------------------------------------------------------------------

def _flat(k: int) -> Gl2Structure:
    return Gl2Structure(k, Coframe.flat(k + 1), f"flat({k})")


def _shear(k: int) -> Gl2Structure:
    if k < 2:
        raise ValueError("shear needs k >= 2")
    P = Patch.standard(k + 1)
    forms = [DForm.dp(P, a) for a in range(k + 1)]
    forms[0] = forms[0] + DForm.dp(P, 2).scale("p1")
    return Gl2Structure(k, Coframe(P, forms), f"shear({k})")


def _veronese(table: Sequence[Sequence]) -> Gl2Structure:
    """Coframe ``eta^i = omega_i`` from the 1-forms of a web ``omega(t) = sum t^i omega_i``.

    With this choice the null direction of ``omega(t), ..., omega^(k-1)(t)``
    is sent to ``(y - t x)^k``; ``veronese_null_check`` confirms it.
    """
    n = len(table)
    if n < 2 or any(len(r) != n for r in table):
        raise ValueError("veronese needs a square table of k+1 one-forms on k+1 coordinates")
    P = Patch.standard(n)
    coframe = Coframe.from_matrix(P, table)
    if linalg.det(coframe.matrix()) == 0:
        raise SingularCoframeError("the web forms omega_0..omega_k are linearly dependent")
    return Gl2Structure(n - 1, coframe, "veronese")


def builtin_structure(name: str, k: Optional[int] = None, table: Optional[Sequence[Sequence]] = None) -> Gl2Structure:
    """``flat``, ``shear`` (``eta^0 = dp0 + p1 dp2``) or ``veronese`` (needs ``table``)."""
    if name == "flat":
        return _flat(k)
    if name == "shear":
        return _shear(k)
    if name == "veronese":
        if table is None:
            table = [[1 if a == i else 0 for a in range(k + 1)] for i in range(k + 1)]
        return _veronese(table)
    raise ValueError(f"unknown builtin structure {name!r}")


def _cofactor_kernel(rows: List[list]) -> list:
    """Kernel vector of an ``n-1`` by ``n`` matrix via signed maximal minors."""
    n = len(rows[0])
    return [(-1) ** a * linalg.det([[r[b] for b in range(n) if b != a] for r in rows]) for a in range(n)]


def veronese_null_check(S: Gl2Structure, point: Sequence, ts: Sequence) -> List[bool]:
    """For each ``t``: the common kernel of ``omega^(s)(t)``, ``s < k``, at ``point`` maps to a perfect k-th power
    with root direction ``t``."""
    k = S.k
    pt = dict(zip(S.patch.names, point))
    A = [[c.evaluate(pt) for c in r] for r in S.coframe.matrix()]
    out = []
    for t in ts:
        t = to_gauss(t)
        rows = []
        for s in range(k):
            coeff = [GaussRational(0)] * (k + 1)
            for i in range(s, k + 1):
                w = comb(i, s) * t ** (i - s)
                coeff = [x + w * y for x, y in zip(coeff, A[i])]
            rows.append(coeff)
        v = _cofactor_kernel(rows)
        image = BinaryForm(linalg.matvec(A, v))
        ok = not image.is_zero() and root_multiplicity(image, 1, t) == k and null_cone_root(image) is not None
        out.append(ok)
    return out


# ---------------------------------------------------------------------------
# connection, torsion, curvature
# ---------------------------------------------------------------------------

@dataclass
class ConnectionOnSection:
    k: int
    patch: Patch
    phi: Dict[str, DForm]

    def matrix(self) -> List[List[DForm]]:
        return [[self.phi["11"], self.phi["21"]], [self.phi["12"], self.phi["22"]]]

    def rep_forms(self) -> List[List[DForm]]:
        """``Phi = rep_algebra(k, phi)`` as a matrix of 1-forms."""
        k, phi = self.k, self.phi
        zero = DForm.zero(self.patch, 1)
        M = [[zero] * (k + 1) for _ in range(k + 1)]
        for j in range(k + 1):
            M[j][j] = phi["11"].scale(k - j) + phi["22"].scale(j)
            if j < k:
                M[j + 1][j] = phi["12"].scale(k - j)
            if j > 0:
                M[j - 1][j] = phi["21"].scale(j)
        return M

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.phi.values())

    def to_json(self) -> dict:
        return {PHI_LABELS[ab]: self.phi[ab].to_json() for ab in PSI_NAMES}


@dataclass
class CanonicalConnection:
    connection: ConnectionOnSection
    raw_torsion: TorsionTensor
    psi: ConnectionCorrection
    torsion: TorsionTensor
    residual_zero: bool
    perp_identically: bool


def _torsion_forms(S: Gl2Structure, theta: TorsionTensor) -> List[DForm]:
    return [S.coframe.two_form({(j, l): v for (r, j, l), v in theta.entries.items() if r == i})
            for i in range(S.k + 1)]


def structure_equation_residual(S: Gl2Structure, conn: ConnectionOnSection, theta: TorsionTensor) -> List[DForm]:
    """``d omega + Phi ^ omega - Theta`` componentwise."""
    Phi = conn.rep_forms()
    eta = S.coframe.forms
    target = _torsion_forms(S, theta)
    out = []
    for r in range(S.k + 1):
        acc = ext_d(eta[r])
        for s in range(S.k + 1):
            if not Phi[r][s].is_zero():
                acc = acc + wedge(Phi[r][s], eta[s])
        out.append(acc - target[r])
    return out


def canonical_connection(S: Gl2Structure) -> CanonicalConnection:
    if S.k <= 2:
        raise ValueError("the canonical connection needs k >= 3")
    op = build_normalization(S.k)
    sf = structure_functions(S.coframe)
    raw = TorsionTensor(S.k, dict(sf.c))
    psi = op.solve(raw)
    torsion = apply_correction(raw, psi)
    phi = {ab: -S.coframe.combination([psi.values[(ab, m)] for m in range(S.k + 1)]) for ab in PSI_NAMES}
    conn = ConnectionOnSection(S.k, S.patch, phi)
    residual = structure_equation_residual(S, conn, torsion)
    return CanonicalConnection(
        connection=conn, raw_torsion=raw, psi=psi, torsion=torsion,
        residual_zero=all(f.is_zero() for f in residual),
        perp_identically=contractions_in_perp(torsion),
    )


def _matrix_wedge(A: List[List[DForm]], B: List[List[DForm]]) -> List[List[DForm]]:
    n = len(A)
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = None
            for s in range(n):
                w = wedge(A[r][s], B[s][c])
                acc = w if acc is None else acc + w
            row.append(acc)
        out.append(row)
    return out


def curvature(conn: ConnectionOnSection) -> Dict[str, DForm]:
    """``Omega = d phi + phi ^ phi`` keyed like ``phi``."""
    M = conn.matrix()
    sq = _matrix_wedge(M, M)
    keys = [["11", "21"], ["12", "22"]]
    return {keys[r][c]: ext_d(M[r][c]) + sq[r][c] for r in range(2) for c in range(2)}


def bianchi_residual(conn: ConnectionOnSection, omega: Mapping[str, DForm]) -> List[DForm]:
    """``d Omega - (Omega ^ phi - phi ^ Omega)`` entrywise; vanishes identically."""
    M = conn.matrix()
    W = [[omega["11"], omega["21"]], [omega["12"], omega["22"]]]
    a, b = _matrix_wedge(W, M), _matrix_wedge(M, W)
    return [ext_d(W[r][c]) - (a[r][c] - b[r][c]) for r in range(2) for c in range(2)]


# ---------------------------------------------------------------------------
# complex decomposition
# ---------------------------------------------------------------------------

def _split(mat, m: int):
    """(2,0), (1,1), (0,2) blocks of a matrix indexed by (xi_0..xi_{m-1}, xibar_0..)."""
    b20 = [[mat[a][b] for b in range(m)] for a in range(m)]
    b11 = [[mat[a][m + b] for b in range(m)] for a in range(m)]
    b02 = [[mat[m + a][m + b] for b in range(m)] for a in range(m)]
    return b20, b11, b02


def _swap(P: int, m: int) -> int:
    return P + m if P < m else P - m


def _conj(v):
    return v.conjugate() if hasattr(v, "conjugate") else v


def _is_zero(v) -> bool:
    return v == 0


@dataclass
class ComplexBlocks:
    """Type decomposition in the ``(xi, xi_bar)`` coframe.

    ``T20[j][a][b] = Theta^j(e_a, e_b)`` where ``Theta^j = xi^j(Theta)`` and
    ``e_a``, ``e_abar`` are dual to ``xi^a``, ``xi_bar^a``; likewise
    ``T11[j][a][b] = Theta^j(e_a, e_bbar)`` and ``T02[j][a][b] = Theta^j(e_abar, e_bbar)``.
    The C blocks are the same split of ``Omega_zeta``.
    """

    k: int
    T20: list
    T11: list
    T02: list
    C20: list
    C11: list
    C02: list
    torsion_reality: bool
    curvature_reality: bool

    def blocks(self) -> Dict[str, list]:
        return {"T20": self.T20, "T11": self.T11, "T02": self.T02,
                "C20": self.C20, "C11": self.C11, "C02": self.C02}

    def identically_zero(self) -> Dict[str, bool]:
        return {name: all(_is_zero(v) for v in _flatten(b)) for name, b in self.blocks().items()}

    def at_point(self, point) -> Dict[str, list]:
        pt = point

        def ev(x):
            if isinstance(x, list):
                return [ev(y) for y in x]
            return x.evaluate(pt) if isinstance(x, RatFunc) else to_gauss(x)
        return {name: ev(b) for name, b in self.blocks().items()}


def _flatten(x):
    if isinstance(x, list):
        for y in x:
            yield from _flatten(y)
    else:
        yield x


def zeta_trace(omega: Mapping[str, DForm], conjugate: bool = False) -> DForm:
    """``(Omega^1_2 + Omega^2_1) + i (Omega^2_2 - Omega^1_1)`` (``-i`` when ``conjugate``)."""
    unit = -I if conjugate else I
    return omega["12"] + omega["21"] + (omega["22"] - omega["11"]).scale(unit)


def complex_decomposition(S: Gl2Structure, theta: TorsionTensor, omega: Mapping[str, DForm]) -> ComplexBlocks:
    k = S.k
    if k % 2 == 0:
        raise ValueError("the complex decomposition needs odd k")
    B = complex_basis_change(k)
    m = B.m
    n = k + 1
    T = to_complex_frame(k, theta.components(), "vector2form", B)
    T20, T11, T02 = [], [], []
    for j in range(m):
        b20, b11, b02 = _split(T[j], m)
        T20.append(b20)
        T11.append(b11)
        T02.append(b02)
    # the xi_bar rows are computed on their own and compared with the conjugates
    t_real = all(T[m + j][P][Q] == _conj(T[j][_swap(P, m)][_swap(Q, m)])
                 for j in range(m) for P in range(n) for Q in range(n))

    W = to_complex_frame(k, S.coframe.components(zeta_trace(omega)), "2form", B)
    Wbar = to_complex_frame(k, S.coframe.components(zeta_trace(omega, conjugate=True)), "2form", B)
    C20, C11, C02 = _split(W, m)
    c_real = all(Wbar[P][Q] == _conj(W[_swap(P, m)][_swap(Q, m)]) for P in range(n) for Q in range(n))
    return ComplexBlocks(k, T20, T11, T02, C20, C11, C02, t_real, c_real)


def integrability_report(blocks: ComplexBlocks, patch: Patch, points: Sequence[Sequence]) -> List[dict]:
    """Per point: which obstructions vanish, the verdict and the T11 = T02 = 0 implies C02 = 0 guard."""
    out = []
    for point in points:
        entry = {"point": [render_scalar(to_gauss(c)) for c in point]}
        if len(point) != patch.n:
            entry["error"] = f"point needs {patch.n} coordinates"
            out.append(entry)
            continue
        try:
            vals = blocks.at_point(dict(zip(patch.names, point)))
        except ZeroDivisionError as exc:
            entry["error"] = str(exc)
            out.append(entry)
            continue
        zero = {name: all(v == 0 for v in _flatten(b)) for name, b in vals.items()}
        hypothesis = zero["T11"] and zero["T02"]
        entry.update({
            "T02_zero": zero["T02"],
            "C02_zero": zero["C02"],
            "T11_zero": zero["T11"],
            "integrable": zero["T02"] and zero["C02"],
            "guard_hypothesis": hypothesis,
            "guard_violation": hypothesis and not zero["C02"],
            "blocks": {name: _render_nested(b) for name, b in vals.items()},
        })
        out.append(entry)
    return out


def _render_nested(x):
    if isinstance(x, list):
        return [_render_nested(y) for y in x]
    if isinstance(x, RatFunc):
        return render_scalar(x.constant_value()) if x.is_constant() else str(x)
    return render_scalar(x)


# ---------------------------------------------------------------------------
# full analysis
# ---------------------------------------------------------------------------

@dataclass
class AnalysisReport:
    structure: Gl2Structure
    canonical: CanonicalConnection
    omega: Dict[str, DForm]
    bianchi_zero: bool
    blocks: Optional[ComplexBlocks]
    verdicts: List[dict] = field(default_factory=list)

    @property
    def integrable_at_all_points(self) -> bool:
        return bool(self.verdicts) and all(v.get("integrable") for v in self.verdicts)

    @property
    def guard_violations(self) -> int:
        return sum(1 for v in self.verdicts if v.get("guard_violation"))

    @property
    def curvature_zero(self) -> bool:
        return all(f.is_zero() for f in self.omega.values())

    def ok(self) -> bool:
        """All internal consistency checks hold."""
        c = self.canonical
        checks = [c.residual_zero, c.perp_identically, self.bianchi_zero, self.guard_violations == 0]
        if self.blocks is not None:
            checks += [self.blocks.torsion_reality, self.blocks.curvature_reality]
        return all(checks) and not any("error" in v for v in self.verdicts)

    def to_json(self) -> dict:
        c = self.canonical
        out = {
            "structure": self.structure.to_json(),
            "connection": {**c.connection.to_json(), "psi": c.psi.to_json(), "identically_zero": c.connection.is_zero()},
            "torsion": {
                "raw": c.raw_torsion.to_json(),
                "canonical": c.torsion.to_json(),
                "identically_zero": c.torsion.is_zero(),
                "contractions_in_perp": c.perp_identically,
                "structure_equation_residual_zero": c.residual_zero,
            },
            "curvature_blocks": {
                "Omega": {PHI_LABELS[ab].replace("phi", "Omega"): self.omega[ab].to_json() for ab in PSI_NAMES},
                "identically_zero": self.curvature_zero,
                "bianchi_residual_zero": self.bianchi_zero,
            },
            "complex_blocks": None,
            "verdicts": {
                "points": self.verdicts,
                "integrable_at_all_points": self.integrable_at_all_points,
                "guard_violations": self.guard_violations,
                "consistent": self.ok(),
            },
        }
        if self.blocks is not None:
            b = self.blocks
            out["complex_blocks"] = {
                **{name: _render_nested(v) for name, v in b.blocks().items() if name.startswith("T")},
                "identically_zero": {n: z for n, z in b.identically_zero().items() if n.startswith("T")},
                "reality": b.torsion_reality,
            }
            out["curvature_blocks"].update({
                **{name: _render_nested(v) for name, v in b.blocks().items() if name.startswith("C")},
                "C_identically_zero": {n: z for n, z in b.identically_zero().items() if n.startswith("C")},
                "reality": b.curvature_reality,
            })
            out["verdicts"]["identically_integrable"] = b.identically_zero()["T02"] and b.identically_zero()["C02"]
        return out


def analyze(S: Gl2Structure, points: Sequence[Sequence] = ()) -> AnalysisReport:
    log.debug("analyzing %s", S.name)
    canonical = canonical_connection(S)
    omega = curvature(canonical.connection)
    bianchi = all(f.is_zero() for f in bianchi_residual(canonical.connection, omega))
    blocks = None
    verdicts: List[dict] = []
    if S.k % 2 == 1:
        blocks = complex_decomposition(S, canonical.torsion, omega)
        verdicts = integrability_report(blocks, S.patch, points)
    return AnalysisReport(S, canonical, omega, bianchi, blocks, verdicts)
