"""Acceptance checks, shared by ``gl2struct selftest`` and the test suite.

Each check returns a ``CheckResult``; ``run_all`` runs them in order.  All
comparisons are exact.  Random inputs come from a seeded ``random.Random``
so a failing run can be replayed.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Dict, List, Optional, Tuple

from . import linalg
from .binary_forms import Gl2Matrix, act, w_polynomials, x_family
from .complex_structure import render_xi_row, xi_basis
from .forms import Coframe, DForm, Patch, ext_d, structure_functions, structure_residual, wedge
from .geometry import Gl2Structure, analyze, builtin_structure
from .normalization import (
    TorsionTensor, block_determinant, bryant_torsion, build_normalization, closed_form_determinant,
    contractions_in_perp,
)
from .poly import MultiPoly
from .rep import differential_check, rep_algebra, rep_group, xkj_action_decomposition, zeta_alpha
from .scalars import GaussRational, I

__all__ = ["CheckResult", "CHECKS", "run_all", "XI_REFERENCE", "load_oracle_golden", "random_rational"]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number:2d}. {self.name}"
        if self.detail:
            text += f" -- {self.detail}"
        return text

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "failures": self.failures[:20]}


def random_rational(rng: random.Random, size: int = 9, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, den))


def _random_gl2(rng) -> Gl2Matrix:
    return Gl2Matrix(*(random_rational(rng) for _ in range(4)))


def _random_co2(rng) -> Gl2Matrix:
    while True:
        u, v = random_rational(rng), random_rational(rng)
        if u or v:
            return Gl2Matrix.co2(u, v)


def load_oracle_golden() -> dict:
    text = resources.files("gl2struct").joinpath("data/oracle_golden.json").read_text()
    return json.loads(text)


# ---------------------------------------------------------------------------
# 1. xi rows against the reference rows
# ---------------------------------------------------------------------------

XI_REFERENCE: Dict[int, Dict[int, str]] = {
    1: {0: "ω^0+iω^1"},
    2: {0: "(1/2)(ω^0-ω^2+iω^1)"},
    3: {1: "(1/4)(3ω^0+ω^2+i(ω^1+3ω^3))", 0: "(1/4)(ω^0-ω^2+i(ω^1-ω^3))"},
    5: {
        2: "(1/76)(10ω^0+7ω^2+12ω^4+i(12ω^1+7ω^3+10ω^5))",
        1: "(1/76)(5ω^0-6ω^2-13ω^4+i(13ω^1+6ω^3-5ω^5))",
        0: "(1/76)(ω^0-5ω^2+5ω^4+i(5ω^1-5ω^3+ω^5))",
    },
}


def check_xi_golden(rng) -> CheckResult:
    failures = []
    for k, rows in XI_REFERENCE.items():
        xb = xi_basis(k)
        for j, expected in rows.items():
            got = render_xi_row(xb.rows[j])
            if got != expected:
                failures.append(f"k={k} j={j}: computed {got} but expected {expected}")
    ok_degrees = sorted(k for k in XI_REFERENCE if not any(f.startswith(f"k={k} ") for f in failures))
    detail = f"matched k in {ok_degrees}"
    if failures:
        detail += f"; {len(failures)} mismatching rows"
    return CheckResult(1, "xi basis golden rows (k=1,2,3,5)", not failures, detail, failures)


# ---------------------------------------------------------------------------
# 2. W-polynomials under CO(2)
# ---------------------------------------------------------------------------

def check_w_polynomials(rng, samples: int = 100) -> CheckResult:
    failures = []
    for _ in range(samples):
        g = _random_co2(rng)
        for i in range(1, 11):
            we, wo = w_polynomials(i)
            G = g ** i
            lhs = (act(we, g), act(wo, g))
            rhs = (we * G.a + wo * G.c, we * G.b + wo * G.d)
            if lhs != rhs:
                failures.append(f"i={i} g={g!r}")
    return CheckResult(2, "W-polynomials transform by g^i under CO(2)", not failures,
                       f"{samples} matrices x i=1..10", failures)


# ---------------------------------------------------------------------------
# 3. representation suite
# ---------------------------------------------------------------------------

def _commutator(A, B):
    return linalg.mat_sub(linalg.matmul(A, B), linalg.matmul(B, A))


def check_rep_suite(rng, pairs: int = 50) -> CheckResult:
    failures = []
    for k in range(1, 8):
        for _ in range(pairs):
            A, B = _random_gl2(rng), _random_gl2(rng)
            if rep_algebra(k, A.bracket(B)).rows() != _commutator(rep_algebra(k, A).rows(), rep_algebra(k, B).rows()):
                failures.append(f"bracket k={k}")
        for _ in range(pairs // 5):
            g, h = _random_gl2(rng), _random_gl2(rng)
            if not g.det() or not h.det():
                continue
            if (rep_group(k, h @ g).rows() != (rep_group(k, h) @ rep_group(k, g)).rows()):
                failures.append(f"composition k={k}")
            V = rep_group(k, g).apply(x_family(k, 0))
            if act(act(x_family(k, 0), g), h) != act(x_family(k, 0), h @ g) or V != act(x_family(k, 0), g):
                failures.append(f"action order k={k}")
        for phi in [Gl2Matrix.elementary(a, b) for a in (1, 2) for b in (1, 2)] + [_random_gl2(rng) for _ in range(5)]:
            if not differential_check(k, phi):
                failures.append(f"differential k={k} phi={phi!r}")
    return CheckResult(3, "representation: bracket, composition order, differential", not failures,
                       "k=1..7", failures)


# ---------------------------------------------------------------------------
# 4. reference three-term decomposition coefficients
# ---------------------------------------------------------------------------

def reference_xkj_coefficients(k: int, j: int, phi: Gl2Matrix):
    """``(-i j zeta, j alpha_bar + (k-j) alpha, i (k-j) zeta_bar)`` the reference coefficients checked against the expansion."""
    zeta, zeta_bar, alpha, alpha_bar = zeta_alpha(phi)
    return (-I * j * zeta, j * alpha_bar + (k - j) * alpha, I * (k - j) * zeta_bar)


def check_xkj_reference(rng) -> CheckResult:
    failures = []
    total = 0
    for k in (3, 5, 7):
        for a in (1, 2):
            for b in (1, 2):
                phi = Gl2Matrix.elementary(a, b)
                for j in range(k + 1):
                    total += 1
                    got = xkj_action_decomposition(k, j, phi)
                    want = reference_xkj_coefficients(k, j, phi)
                    # out-of-range neighbours carry a zero prefactor
                    want = (want[0] if j > 0 else 0, want[1], want[2] if j < k else 0)
                    if tuple(got) != tuple(want):
                        failures.append(f"k={k} j={j} E^{a}_{b}: computed {tuple(map(str, got))} "
                                        f"reference {tuple(map(str, want))}")
    return CheckResult(4, "three-term X_{k,j} decomposition with the reference coefficients", not failures,
                       f"{total - len(failures)}/{total} cases agree", failures)


# ---------------------------------------------------------------------------
# 5. determinant law
# ---------------------------------------------------------------------------

def check_determinants(rng) -> CheckResult:
    failures = []
    values = {}
    for k in range(3, 10):
        rep = block_determinant(k)
        values[k] = rep.value
        if not rep.independent:
            failures.append(f"k={k}: interior determinants differ {rep.interior}")
        if rep.value != closed_form_determinant(k):
            failures.append(f"k={k}: {rep.value} != {closed_form_determinant(k)}")
    if values.get(3) != 1890 or values.get(5) != 504000:
        failures.append(f"spot values k=3 -> {values.get(3)}, k=5 -> {values.get(5)}")
    return CheckResult(5, "block determinant closed form, k=3..9", not failures,
                       f"k=3: {values.get(3)}, k=5: {values.get(5)}", failures)


# ---------------------------------------------------------------------------
# 6. Bryant torsion
# ---------------------------------------------------------------------------

def check_bryant(rng) -> CheckResult:
    names = [f"tau{i}" for i in range(8)]
    tau = [MultiPoly.var(n, names) for n in names]
    theta = bryant_torsion(tau)
    failures = []
    if not contractions_in_perp(theta):
        failures.append("a contraction leaves g_3^perp")
    if not build_normalization(3).solve(theta).is_zero():
        failures.append("normalization gives nonzero psi")
    return CheckResult(6, "Bryant torsion is normal (symbolic in tau)", not failures, "", failures)


# ---------------------------------------------------------------------------
# 7. normalization solver
# ---------------------------------------------------------------------------

def random_torsion(rng, k: int, density: float = 1.0) -> TorsionTensor:
    entries = {}
    for i in range(k + 1):
        for j in range(k + 1):
            for l in range(j + 1, k + 1):
                if rng.random() < density:
                    entries[(i, j, l)] = GaussRational(random_rational(rng))
    return TorsionTensor(k, entries)


def check_solver(rng, samples: int = 50) -> CheckResult:
    failures = []
    for k in (3, 5):
        op = build_normalization(k)
        for s in range(samples):
            theta = random_torsion(rng, k)
            fixed, psi = op.normalize(theta)
            if not contractions_in_perp(fixed):
                failures.append(f"k={k} sample {s}: corrected torsion not normal")
            if not op.solve(fixed).is_zero():
                failures.append(f"k={k} sample {s}: re-solve not zero")
    return CheckResult(7, "normalization solver: residual and idempotence", not failures,
                       f"{samples} torsions for k=3 and k=5", failures)


# ---------------------------------------------------------------------------
# 8. exterior calculus
# ---------------------------------------------------------------------------

def random_poly(rng, names, max_deg: int = 3, terms: int = 3) -> MultiPoly:
    p = MultiPoly.constant(0, names)
    for _ in range(terms):
        exps = [0] * len(names)
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(len(names))] += 1
        p = p + MultiPoly(names, {tuple(exps): GaussRational(random_rational(rng))})
    return p


def random_form(rng, patch: Patch, degree: int, terms: int = 2) -> DForm:
    coeffs = {}
    for _ in range(terms):
        idx = tuple(sorted(rng.sample(range(patch.n), degree)))
        coeffs[idx] = random_poly(rng, patch.names)
    return DForm(patch, degree, coeffs)


def unipotent_coframe(rng, n: int) -> Coframe:
    """``eta^i = dp_i + sum_{a > i} f_{ia} dp_a`` with random polynomial ``f``."""
    patch = Patch.standard(n)
    rows = []
    for i in range(n):
        row = [0] * n
        row[i] = 1
        for a in range(i + 1, n):
            if rng.random() < 0.5:
                row[a] = random_poly(rng, patch.names, max_deg=2, terms=2)
        rows.append(row)
    return Coframe.from_matrix(patch, rows)


def check_exterior(rng, samples: int = 100) -> CheckResult:
    failures = []
    for s in range(samples):
        n = rng.randint(2, 6)
        P = Patch.standard(n)
        a_deg = rng.randint(0, min(3, n))
        b_deg = rng.randint(0, min(3, n - a_deg))
        alpha, beta = random_form(rng, P, a_deg), random_form(rng, P, b_deg)
        if not ext_d(ext_d(alpha)).is_zero():
            failures.append(f"d^2 sample {s}")
        lhs = ext_d(wedge(alpha, beta))
        rhs = wedge(ext_d(alpha), beta) + wedge(alpha, ext_d(beta)).scale((-1) ** a_deg)
        if lhs != rhs:
            failures.append(f"Leibniz sample {s}")
    coframes = [Coframe.flat(4), builtin_structure("shear", 3).coframe] + [unipotent_coframe(rng, n) for n in (3, 4, 5)]
    for eta in coframes:
        sf = structure_functions(eta)
        if not all(r.is_zero() for r in structure_residual(eta, sf)):
            failures.append(f"structure function round trip on {eta.to_json()}")
    return CheckResult(8, "exterior calculus: d^2=0, Leibniz, structure functions", not failures,
                       f"{samples} random forms, {len(coframes)} coframes", failures)


# ---------------------------------------------------------------------------
# 9-11. end-to-end analyses
# ---------------------------------------------------------------------------

_ANALYSES: Dict[str, object] = {}


def _analysis(name: str):
    if name not in _ANALYSES:
        if name == "poly3":
            case = load_oracle_golden()["cases"]["poly3"]
            S = Gl2Structure(3, Coframe.from_matrix(Patch(tuple(case["names"])),
                                                    [[c.replace("**", "^") for c in r] for r in case["rows"]]), "poly3")
            pts = [[Fraction(v) for v in r["point"]] for r in case["results"]]
        elif name == "shear3":
            S = builtin_structure("shear", 3)
            pts = [[Fraction(v) for v in r["point"]] for r in load_oracle_golden()["cases"]["shear3"]["results"]]
        else:
            kind, k = name[:-1], int(name[-1])
            S = builtin_structure(kind, k)
            pts = [[Fraction(c) for c in (0, 1, -2, Fraction(1, 2), 3, -1)[: k + 1]], [0] * (k + 1)]
        _ANALYSES[name] = analyze(S, pts)
    return _ANALYSES[name]


def check_flat(rng) -> CheckResult:
    failures = []
    for name in ("flat3", "flat5"):
        R = _analysis(name)
        c = R.canonical
        if not c.connection.is_zero():
            failures.append(f"{name}: phi not zero")
        if not c.torsion.is_zero():
            failures.append(f"{name}: torsion not zero")
        if not R.curvature_zero:
            failures.append(f"{name}: curvature not zero")
        if not R.integrable_at_all_points:
            failures.append(f"{name}: not integrable")
    return CheckResult(9, "flat structures k=3,5: phi=0, Theta=0, Omega=0, integrable", not failures, "", failures)


def _golden_value(pair) -> GaussRational:
    return GaussRational(Fraction(pair[0]), Fraction(pair[1]))


def _compare_blocks(computed, golden, path, failures):
    if isinstance(golden, list) and golden and isinstance(golden[0], str):
        if computed != _golden_value(golden):
            failures.append(f"{path}: computed {computed} oracle {_golden_value(golden)}")
        return
    if len(computed) != len(golden):
        failures.append(f"{path}: shape mismatch")
        return
    for i, (c, g) in enumerate(zip(computed, golden)):
        _compare_blocks(c, g, f"{path}[{i}]", failures)


def compare_with_oracle(name: str) -> List[str]:
    R = _analysis(name)
    failures = []
    case = load_oracle_golden()["cases"][name]
    if not R.canonical.residual_zero:
        failures.append("structure equation residual is not identically zero")
    if not R.canonical.perp_identically:
        failures.append("canonical torsion is not identically normal")
    for res in case["results"]:
        pt = [Fraction(v) for v in res["point"]]
        vals = R.blocks.at_point(dict(zip(R.structure.patch.names, pt)))
        for block, golden in res["blocks"].items():
            _compare_blocks(vals[block], golden, f"{res['point']} {block}", failures)
    return failures


def check_shear(rng) -> CheckResult:
    failures = compare_with_oracle("shear3")
    n = len(load_oracle_golden()["cases"]["shear3"]["results"])
    return CheckResult(10, "shear(3) against the independent oracle", not failures,
                       f"{n} sample points, T and C blocks", failures)


def check_reality_guard(rng) -> CheckResult:
    failures = []
    names = ("flat3", "flat5", "shear3", "shear5", "poly3")
    for name in names:
        R = _analysis(name)
        b = R.blocks
        if not b.torsion_reality:
            failures.append(f"{name}: torsion blocks fail conjugate symmetry")
        if not b.curvature_reality:
            failures.append(f"{name}: curvature blocks fail conjugate symmetry")
        if R.guard_violations:
            failures.append(f"{name}: {R.guard_violations} points with T11=T02=0 but C02!=0")
        for v in R.verdicts:
            if "error" in v:
                failures.append(f"{name}: {v['error']}")
    return CheckResult(11, "reality of conjugate blocks and the T11=T02=0 => C02=0 guard", not failures,
                       f"structures {', '.join(names)}", failures)


CHECKS: List[Tuple[int, Callable]] = [
    (1, check_xi_golden), (2, check_w_polynomials), (3, check_rep_suite), (4, check_xkj_reference),
    (5, check_determinants), (6, check_bryant), (7, check_solver), (8, check_exterior),
    (9, check_flat), (10, check_shear), (11, check_reality_guard),
]


def run_check(number: int, seed: int = 0) -> CheckResult:
    fn = dict(CHECKS)[number]
    rng = random.Random(seed * 1000 + number)
    start = time.perf_counter()
    try:
        result = fn(rng)
    except Exception as exc:  # a crash is a failed criterion, not a crashed run
        result = CheckResult(number, fn.__name__, False, f"raised {type(exc).__name__}: {exc}")
    result.seconds = time.perf_counter() - start
    return result


def run_all(seed: int = 0, only: Optional[List[int]] = None) -> List[CheckResult]:
    return [run_check(n, seed) for n, _ in CHECKS if only is None or n in only]
