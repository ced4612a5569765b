"""Independent sympy recomputation of the canonical connection, torsion,
curvature and their (xi, xi_bar) type blocks for a coframe on R^(k+1).

Nothing from ``gl2struct`` is imported.  The formulation differs on purpose:

* the representation is obtained by differentiating ``V((x, y)(1 + t phi))``;
* ``g_k^perp`` is the literal trace form against the images of the four
  elementary matrices;
* the connection coefficients ``phi^a_b(e_m)`` are the unknowns, solved so
  that ``Theta = d omega + Phi ^ omega`` has all contractions in ``g_k^perp``;
* curvature is computed in the big representation as ``dPhi + Phi ^ Phi`` and
  the 2x2 entries are read off from it.

Run ``python tests/oracles/gl2_oracle.py`` to regenerate the golden file.
"""

from __future__ import annotations

import json
import pathlib
import sys

import sympy as sp

x, y, t = sp.symbols("x y t")


def rep(k, phi):
    """(k+1)x(k+1) matrix: column j = coefficients of d/dt chi_j((x, y)(1 + t phi)) at t = 0."""
    g = sp.eye(2) + t * phi
    X = x * g[0, 0] + y * g[1, 0]
    Y = x * g[0, 1] + y * g[1, 1]
    M = sp.zeros(k + 1)
    for j in range(k + 1):
        img = sp.expand(sp.diff(X ** (k - j) * Y ** j, t).subs(t, 0))
        P = sp.Poly(img, x, y)
        for i in range(k + 1):
            M[i, j] = P.coeff_monomial(x ** (k - i) * y ** i)
    return M


def elementary(a, b):
    # phi^a_b sits at row b-1, column a-1 of the matrix acting on the row (x, y)
    E = sp.zeros(2)
    E[b - 1, a - 1] = 1
    return E


def analyze(A, names, k, points):
    n = k + 1
    p = sp.symbols(names)
    E = A.inv()  # columns are the dual frame
    # d eta^i as antisymmetric matrices in dp
    dEta = [sp.Matrix(n, n, lambda a, b: sp.diff(A[i, b], p[a]) - sp.diff(A[i, a], p[b])) for i in range(n)]
    c = [[[sp.simplify((E[:, j].T * dEta[i] * E[:, l])[0]) for l in range(n)] for j in range(n)] for i in range(n)]

    u = {(a, b, m): sp.Symbol(f"u{a}{b}_{m}") for m in range(n) for a in (1, 2) for b in (1, 2)}

    def phi_at(m):
        M = sp.zeros(2)
        for a in (1, 2):
            for b in (1, 2):
                M += u[(a, b, m)] * elementary(a, b)
        return rep(k, M)

    Phis = [phi_at(m) for m in range(n)]

    def theta(r, j, l):
        # (Phi ^ omega)(e_j, e_l) = Phi(e_j) omega(e_l) - Phi(e_l) omega(e_j)
        return c[r][j][l] + Phis[j][r, l] - Phis[l][r, j]

    etas = [rep(k, elementary(a, b)) for a, b in ((1, 1), (2, 2), (1, 2), (2, 1))]
    eqs = []
    for j in range(n):
        Mj = sp.Matrix(n, n, lambda r, l: theta(r, j, l))
        eqs += [sp.expand((eta * Mj).trace()) for eta in etas]
    sol = sp.solve(eqs, list(u.values()), dict=True)
    assert len(sol) == 1, "normalization not unique"
    sol = sol[0]

    T = [[[sp.simplify(theta(r, j, l).subs(sol)) for l in range(n)] for j in range(n)] for r in range(n)]
    for j in range(n):
        Mj = sp.Matrix(n, n, lambda r, l: T[r][j][l])
        assert all(sp.simplify((eta * Mj).trace()) == 0 for eta in etas)

    # connection 1-forms in dp: phi^a_b = sum_m u_{ab,m} eta^m
    phi1 = {(a, b): [sp.simplify(sum(sol[u[(a, b, m)]] * A[m, q] for m in range(n))) for q in range(n)]
            for a in (1, 2) for b in (1, 2)}
    Phi1 = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (a, b), coeffs in phi1.items():
        R = rep(k, elementary(a, b))
        for r in range(n):
            for s in range(n):
                if R[r, s]:
                    for q in range(n):
                        Phi1[r][s][q] += R[r, s] * coeffs[q]

    def d1(alpha):
        return sp.Matrix(n, n, lambda a, b: sp.diff(alpha[b], p[a]) - sp.diff(alpha[a], p[b]))

    def w11(alpha, beta):
        return sp.Matrix(n, n, lambda a, b: alpha[a] * beta[b] - alpha[b] * beta[a])

    OmegaRep = [[d1(Phi1[r][s]) + sum((w11(Phi1[r][q], Phi1[q][s]) for q in range(n)), sp.zeros(n))
                 for s in range(n)] for r in range(n)]
    Om = {(1, 1): OmegaRep[0][0] / k, (1, 2): OmegaRep[1][0] / k,
          (2, 1): OmegaRep[0][1], (2, 2): OmegaRep[k][k] / k}
    # the big matrix must be the image of the 2x2 one
    for r in range(n):
        for s in range(n):
            expect = sp.zeros(n)
            for (a, b), W in Om.items():
                expect += rep(k, elementary(a, b))[r, s] * W
            assert (OmegaRep[r][s] - expect).applyfunc(sp.simplify) == sp.zeros(n)

    OmZeta = Om[(1, 2)] + Om[(2, 1)] + sp.I * (Om[(2, 2)] - Om[(1, 1)])

    # xi basis: dual of the V family, xi = xi_even + i xi_odd
    m = n // 2
    cols = []
    for j in range(m):
        xr, yr = sp.symbols("xr yr", real=True)
        zz = sp.expand((xr ** 2 + yr ** 2) ** j * (xr + sp.I * yr) ** (k - 2 * j))
        for part in (sp.re(zz), sp.im(zz)):
            P = sp.Poly(sp.expand(part), xr, yr)
            cols.append([P.coeff_monomial(xr ** (k - i) * yr ** i) for i in range(n)])
    Pm = sp.Matrix(cols).T
    D = Pm.inv()
    xi = [D[2 * j, :] + sp.I * D[2 * j + 1, :] for j in range(m)]
    S = sp.Matrix.vstack(*xi, *[r.conjugate() for r in xi])
    Sinv = S.inv()  # column P = dual vector in omega coordinates

    results = []
    for pt in points:
        sub = dict(zip(p, pt))
        Tn = [[[T[r][j][l].subs(sub) for l in range(n)] for j in range(n)] for r in range(n)]
        Wz = OmZeta.subs(sub)
        En = E.subs(sub)
        vec = [Sinv[:, P] for P in range(n)]
        dp_vec = [En * v for v in vec]
        blocks = {}
        TT = [[[sp.nsimplify(sp.expand(sum(xi[jj][r] * sum(Tn[r][a][b] * vec[P][a] * vec[Q][b]
                                                              for a in range(n) for b in range(n))
                                           for r in range(n))))
                for Q in range(n)] for P in range(n)] for jj in range(m)]
        # Wz[a][b] is Omega_zeta(d/dp_a, d/dp_b), so bilinearity gives the value directly
        CC = [[sp.expand((dp_vec[P].T * Wz * dp_vec[Q])[0]) for Q in range(n)] for P in range(n)]
        blocks["T20"] = [[[TT[jj][a][b] for b in range(m)] for a in range(m)] for jj in range(m)]
        blocks["T11"] = [[[TT[jj][a][m + b] for b in range(m)] for a in range(m)] for jj in range(m)]
        blocks["T02"] = [[[TT[jj][m + a][m + b] for b in range(m)] for a in range(m)] for jj in range(m)]
        blocks["C20"] = [[CC[a][b] for b in range(m)] for a in range(m)]
        blocks["C11"] = [[CC[a][m + b] for b in range(m)] for a in range(m)]
        blocks["C02"] = [[CC[m + a][m + b] for b in range(m)] for a in range(m)]
        results.append({"point": [str(sp.Rational(v)) for v in pt], "blocks": _encode(blocks)})
    return results


def _encode(obj):
    if isinstance(obj, dict):
        return {key: _encode(v) for key, v in obj.items()}
    if isinstance(obj, list):
        return [_encode(v) for v in obj]
    v = sp.nsimplify(sp.expand(obj))
    re, im = sp.re(v), sp.im(v)
    assert re.is_Rational and im.is_Rational, v
    return [str(re), str(im)]


def _matrix(rows, names):
    p = sp.symbols(names)
    loc = dict(zip(names, p))
    return sp.Matrix([[sp.sympify(c, locals=loc) for c in r] for r in rows])


CASES = {
    "shear3": {
        "names": ["p0", "p1", "p2", "p3"],
        "rows": [["1", "0", "p1", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
        "points": [(0, 0, 0, 0), (1, 2, 3, 4), (-1, sp.Rational(1, 2), 2, 0), (3, -2, sp.Rational(5, 7), 1),
                   (sp.Rational(-2, 3), 1, 1, 1), (0, 5, -5, 2), (7, 0, sp.Rational(1, 3), -3),
                   (sp.Rational(1, 2), sp.Rational(1, 2), sp.Rational(1, 2), sp.Rational(1, 2)), (2, -7, 4, 9),
                   (-3, sp.Rational(3, 4), 0, sp.Rational(-5, 2))],
    },
    "poly3": {
        "names": ["p0", "p1", "p2", "p3"],
        "rows": [["1", "0", "p1**2", "0"], ["0", "1", "0", "p0"], ["0", "0", "1", "0"], ["0", "0", "p2", "1"]],
        "points": [(0, 0, 0, 0), (1, 2, 3, 4), (-1, sp.Rational(1, 2), 2, 0), (sp.Rational(2, 3), -1, 1, 5)],
    },
}


def build_golden():
    out = {"note": "recomputed by tests/oracles/gl2_oracle.py with sympy; entries are [re, im] pairs",
           "cases": {}}
    for name, case in CASES.items():
        A = _matrix(case["rows"], case["names"])
        out["cases"][name] = {
            "names": case["names"],
            "rows": case["rows"],
            "results": analyze(A, case["names"], len(case["names"]) - 1, case["points"]),
        }
    return out


if __name__ == "__main__":
    target = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else (
        pathlib.Path(__file__).resolve().parents[2] / "src" / "gl2struct" / "data" / "oracle_golden.json")
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(build_golden(), indent=1) + "\n")
    print(f"wrote {target}")
