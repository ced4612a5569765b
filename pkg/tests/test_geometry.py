from fractions import Fraction

import pytest

from gl2struct import linalg
from gl2struct.binary_forms import Gl2Matrix
from gl2struct.forms import Coframe, DForm, Patch
from gl2struct.geometry import (
    ConnectionOnSection, Gl2Structure, _torsion_forms, analyze, builtin_structure,
    canonical_connection, complex_decomposition, curvature, veronese_null_check,
)
from gl2struct.rep import rep_group
from gl2struct.scalars import I
from gl2struct.selftest import compare_with_oracle, load_oracle_golden

P4 = Patch.standard(4)


def dp(a):
    return DForm.dp(P4, a)


@pytest.fixture(scope="module")
def shear():
    return analyze(builtin_structure("shear", 3), [[0, 0, 0, 0], [1, 2, 3, 4]])


def test_shear_connection(shear):
    phi = shear.canonical.connection.phi
    assert phi["11"] == dp(3).scale(Fraction(-1, 7))
    assert phi["21"] == dp(2).scale(Fraction(6, 7))
    assert phi["22"] == dp(3).scale(Fraction(8, 7))
    assert phi["12"].is_zero()


def test_shear_curvature(shear):
    omega = shear.omega
    assert omega["21"] == (dp(2) ^ dp(3)).scale(Fraction(54, 49))
    assert all(omega[ab].is_zero() for ab in ("11", "12", "22"))
    assert shear.bianchi_zero


def test_shear_blocks(shear):
    b = shear.blocks
    assert b.T20[0] == [[0, I * Fraction(3, 56)], [-I * Fraction(3, 56), 0]]
    assert b.T02[0][0][1] == I * Fraction(3, 8)
    assert b.T02[1][0][1] == I * Fraction(27, 56)
    assert b.C20 == [[0, I * Fraction(27, 49)], [-I * Fraction(27, 49), 0]]
    assert b.C02[0][1] == -I * Fraction(27, 49)
    assert b.C11 == [[I * Fraction(81, 49), -I * Fraction(54, 49)], [-I * Fraction(54, 49), I * Fraction(27, 49)]]


def test_shear_verdicts(shear):
    assert not shear.integrable_at_all_points
    assert shear.guard_violations == 0
    assert shear.ok()


def test_polynomial_coframe_against_oracle():
    assert compare_with_oracle("poly3") == []


def test_oracle_file_has_both_cases():
    cases = load_oracle_golden()["cases"]
    assert len(cases["shear3"]["results"]) == 10
    assert len(cases["poly3"]["results"]) == 4


def test_rational_coframe_is_consistent():
    S = Gl2Structure(3, Coframe.from_matrix(P4, [[1, 0, "p1/(1+p3^2)", 0], [0, 1, 0, 0], [0, 0, 1, 0],
                                                  [0, "p2", 0, 1]]))
    R = analyze(S, [[0, 1, 2, 3]])
    assert R.canonical.residual_zero and R.canonical.perp_identically
    assert R.bianchi_zero
    assert R.blocks.torsion_reality and R.blocks.curvature_reality


@pytest.mark.parametrize("g", [Gl2Matrix(1, 2, 0, 1), Gl2Matrix(2, 0, 1, -1), Gl2Matrix.co2(1, 1)])
def test_constant_gauge_change_is_tensorial(g):
    S = builtin_structure("shear", 3)
    A = rep_group(3, g).rows()
    moved = Gl2Structure(3, Coframe(P4, [S.coframe.combination(row) for row in A]))
    c0, c1 = canonical_connection(S), canonical_connection(moved)
    assert c1.residual_zero and c1.perp_identically
    # Theta and Omega transform by A and by conjugation
    t0, t1 = _torsion_forms(S, c0.torsion), _torsion_forms(moved, c1.torsion)
    for i in range(4):
        expect = DForm.zero(P4, 2)
        for r in range(4):
            if A[i][r]:
                expect = expect + t0[r].scale(A[i][r])
        assert t1[i] == expect
    W0 = ConnectionOnSection(3, P4, curvature(c0.connection)).rep_forms()
    W1 = ConnectionOnSection(3, P4, curvature(c1.connection)).rep_forms()
    Ainv = linalg.inverse(A)
    for r in range(4):
        for s in range(4):
            expect = DForm.zero(P4, 2)
            for a in range(4):
                for b in range(4):
                    c = A[r][a] * Ainv[b][s]
                    if c and not W0[a][b].is_zero():
                        expect = expect + W0[a][b].scale(c)
            assert W1[r][s] == expect or (W1[r][s].is_zero() and expect.is_zero())


def test_flat_even_degree_has_no_blocks():
    R = analyze(builtin_structure("flat", 4), [[0] * 5])
    assert R.blocks is None and R.verdicts == []
    assert R.canonical.connection.is_zero()
    with pytest.raises(ValueError):
        complex_decomposition(builtin_structure("flat", 4), R.canonical.torsion, R.omega)


def test_low_degree_rejected():
    with pytest.raises(ValueError):
        canonical_connection(builtin_structure("flat", 2))


def test_singular_point_reported():
    S = Gl2Structure(3, Coframe.from_matrix(P4, [[1, 0, "1/p1", 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    R = analyze(S, [[0, 0, 0, 0], [0, 1, 0, 0]])
    assert "error" in R.verdicts[0]
    assert "error" not in R.verdicts[1]


def test_veronese_null_directions():
    table = [[1, 0, 0, 0], [0, 1, 0, "p0"], [0, 0, 1, 0], ["p2", 0, 0, 1]]
    S = builtin_structure("veronese", table=table)
    assert all(veronese_null_check(S, [1, 2, 0, 3], [0, 1, Fraction(-1, 2), 3]))
    assert all(veronese_null_check(builtin_structure("veronese", 3), [0, 0, 0, 0], [2, Fraction(1, 3)]))


def test_veronese_rejects_dependent_table():
    with pytest.raises(ArithmeticError):
        builtin_structure("veronese", table=[[1, 0], [2, 0]])


def test_structure_json_round_trip():
    S = builtin_structure("shear", 3)
    again = Gl2Structure.from_json(S.to_json())
    assert again.k == 3 and again.coframe.forms == S.coframe.forms


def test_report_json_sections(shear):
    data = shear.to_json()
    assert {"connection", "torsion", "complex_blocks", "curvature_blocks", "verdicts"} <= set(data)
    assert data["verdicts"]["points"][0]["point"] == ["0", "0", "0", "0"]


def test_live_oracle_on_fresh_coframe():
    import sys
    from pathlib import Path
    sys.path.insert(0, str(Path(__file__).parent / "oracles"))
    import gl2_oracle

    names = ["p0", "p1", "p2", "p3"]
    rows = [["1", "p3", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "p1"], ["0", "0", "0", "1"]]
    point = (2, -1, Fraction(1, 3), 5)
    golden = gl2_oracle.analyze(gl2_oracle._matrix(rows, names), names, 3, [point])[0]["blocks"]
    S = Gl2Structure(3, Coframe.from_matrix(P4, rows))
    R = analyze(S, [list(point)])
    vals = R.blocks.at_point(dict(zip(names, point)))
    assert any(v != 0 for b in vals.values() for v in _leaves(b))

    def flat(x):
        if isinstance(x, list) and x and isinstance(x[0], str):
            return [x]
        return [y for z in x for y in flat(z)]

    for block, g in golden.items():
        got = [[str(v.re), str(v.im)] for v in _leaves(vals[block])]
        assert got == flat(g), block


def _leaves(x):
    if isinstance(x, list):
        return [y for z in x for y in _leaves(z)]
    return [x]
