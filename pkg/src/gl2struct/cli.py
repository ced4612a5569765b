"""``gl2struct`` command line front end.

Every subcommand prints one JSON document (or a text rendering with
``--pretty``).  Exit codes: 0 success, 1 domain error, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence

from . import linalg
from .binary_forms import Gl2Matrix
from .complex_structure import jk_matrix, xi_basis
from .forms import SingularCoframeError
from .geometry import Gl2Structure, analyze, builtin_structure
from .normalization import (
    FUNCTIONAL_NAMES, TorsionTensor, block_determinant, bryant_torsion, build_normalization,
    closed_form_determinant, contractions_in_perp, perp_values,
)
from .parsing import ParseError, parse_scalar
from .poly import MultiPoly
from .rep import rep_algebra, rep_group
from .scalars import render_scalar
from . import selftest as _selftest

log = logging.getLogger(__name__)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Malformed or unreadable input; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; raise instead so main() can return the code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def load_json(source: str) -> Any:
    """Inline JSON (starts with ``{`` or ``[``), ``-`` for stdin, or a file path."""
    text = source.strip()
    if text.startswith(("{", "[")):
        where = "inline JSON"
    elif source == "-":
        text, where = sys.stdin.read(), "stdin"
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from exc
        where = source
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _decode(kind: str, fn: Callable, data):
    try:
        return fn(data)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        msg = f"missing key {exc}" if isinstance(exc, KeyError) else str(exc)
        raise InputError(f"invalid {kind} input: {msg}") from exc


def _scalar_list(text: str, what: str) -> list:
    try:
        return [parse_scalar(t) for t in text.split(",")]
    except ParseError as exc:
        raise InputError(f"bad {what}: {exc}") from exc


def parse_points(specs: Optional[List[str]]) -> List[list]:
    points = []
    for spec in specs or []:
        for chunk in spec.split(";"):
            if chunk.strip():
                points.append(_scalar_list(chunk, "point"))
    return points


def parse_k_range(text: str) -> List[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError as exc:
        raise InputError(f"bad k range {text!r}; expected e.g. 3..9") from exc


def _matrix_from_json(data) -> list:
    rows = data["matrix"] if isinstance(data, dict) else data
    if not isinstance(rows, list) or not rows or any(not isinstance(r, list) or len(r) != len(rows) for r in rows):
        raise ValueError("expected a square array of scalar strings")
    return [[parse_scalar(str(v)) for v in r] for r in rows]


def _torsion_from_json(data) -> TorsionTensor:
    if isinstance(data, dict) and "entries" not in data and "torsion" in data:
        data = data["torsion"]
        if "canonical" in data:
            data = data["canonical"]
    return TorsionTensor.from_json(data)


def _structure_from_json(data) -> Gl2Structure:
    if isinstance(data, dict) and "structure" in data:
        data = data["structure"]
    return Gl2Structure.from_json(data)


def _phi_from_text(text: str) -> Gl2Matrix:
    text = text.strip()
    if text.startswith("["):
        rows = load_json(text)
        vals = _decode("phi", lambda r: [parse_scalar(str(v)) for row in r for v in row], rows)
    else:
        vals = _scalar_list(text, "phi")
    if len(vals) != 4:
        raise InputError("phi needs four entries a,b,c,d for [[a,b],[c,d]]")
    return Gl2Matrix(*vals)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, pretty_text, exit_code)
# ---------------------------------------------------------------------------

def cmd_rep(args):
    phi = _phi_from_text(args.phi)
    M = rep_group(args.k, phi) if args.group else rep_algebra(args.k, phi)
    payload = {"degree": args.k, "kind": M.kind, "phi": [[render_scalar(v) for v in r] for r in phi.rows()],
               "matrix": M.to_json()}
    return payload, _grid(payload["matrix"]), EXIT_OK


def cmd_xi(args):
    xb = xi_basis(args.k)
    lines = xb.render()
    return {"degree": args.k, "rows": xb.to_json(), "rendered": lines}, "\n".join(lines), EXIT_OK


def cmd_jk(args):
    J = jk_matrix(args.k)
    payload = {"degree": args.k, "matrix": J.to_json(),
               "annihilated": None if J.annihilated is None else J.annihilated.to_json()}
    return payload, _grid(payload["matrix"]), EXIT_OK


def cmd_perp(args):
    M = _decode("matrix", _matrix_from_json, load_json(args.matrix))
    k = len(M) - 1
    if args.k is not None and args.k != k:
        raise InputError(f"--k {args.k} does not match a {len(M)}x{len(M)} matrix")
    vals = perp_values(k, M)
    payload = {"degree": k, "values": {n: render_scalar(v) for n, v in zip(FUNCTIONAL_NAMES, vals)},
               "in_perp": all(v == 0 for v in vals)}
    text = "\n".join(f"{n:>6} = {v}" for n, v in payload["values"].items()) + f"\nin g_{k}^perp: {payload['in_perp']}"
    return payload, text, EXIT_OK


def cmd_normalize(args):
    theta = _decode("torsion", _torsion_from_json, load_json(args.torsion))
    fixed, psi = build_normalization(theta.k).normalize(theta)
    payload = {"degree": theta.k, "input_in_perp": contractions_in_perp(theta), **psi.to_json(),
               "torsion": fixed.to_json(), "corrected_in_perp": contractions_in_perp(fixed)}
    text = "\n".join(f"{n} = {v}" for n, v in payload["psi"].items() if v != "0") or "psi = 0"
    return payload, text, EXIT_OK


def cmd_det(args):
    ks = parse_k_range(args.k_range) if args.k_range else [args.k]
    table = []
    for k in ks:
        row = block_determinant(k).to_json()
        closed = closed_form_determinant(k)
        row["closed_form"] = render_scalar(closed)
        row["matches_closed_form"] = row["value"] == row["closed_form"]
        table.append(row)
    text = "\n".join(f"k={r['degree']}: {r['value']}  closed form {r['closed_form']}  "
                     f"{'ok' if r['matches_closed_form'] else 'MISMATCH'}" for r in table)
    return {"table": table}, text, EXIT_OK


def cmd_bryant(args):
    names = [f"tau{i}" for i in range(8)]
    symbolic = bryant_torsion([MultiPoly.var(n, names) for n in names])
    payload = {
        "symbolic_in_perp": contractions_in_perp(symbolic),
        "symbolic_psi_zero": build_normalization(3).solve(symbolic).is_zero(),
        "symbolic_torsion": {"degree": 3, "entries": [{"i": i, "j": j, "k": l, "value": str(v)}
                                                      for (i, j, l), v in sorted(symbolic.entries.items())]},
    }
    if args.tau:
        tau = _scalar_list(args.tau, "tau")
        if len(tau) != 8:
            raise InputError("--tau needs 8 values")
        theta = bryant_torsion(tau)
        payload["torsion"] = theta.to_json()
        payload["in_perp"] = contractions_in_perp(theta)
    text = (f"contractions in g_3^perp for all tau: {payload['symbolic_in_perp']}\n"
            f"normalization correction is zero: {payload['symbolic_psi_zero']}")
    return payload, text, EXIT_OK


def cmd_analyze(args):
    if (args.input is None) == (args.builtin is None):
        raise InputError("analyze needs either an input file or --builtin")
    if args.builtin:
        if args.builtin != "veronese" and args.k is None:
            raise InputError(f"--builtin {args.builtin} needs --k")
        S = builtin_structure(args.builtin, args.k)
    else:
        S = _decode("coframe", _structure_from_json, load_json(args.input))
    points = parse_points(args.points)
    for p in points:
        if len(p) != S.k + 1:
            raise InputError(f"point {','.join(map(str, p))} needs {S.k + 1} coordinates")
    S.coframe.check_points(points)
    report = analyze(S, points)
    payload = report.to_json()
    return payload, _analysis_text(report), EXIT_OK


def cmd_selftest(args):
    results = _selftest.run_all(seed=args.seed, only=args.only)
    failed = [r.number for r in results if not r.passed]
    payload = {"criteria": [r.to_json() for r in results], "passed": len(results) - len(failed), "failed": failed}
    text = "\n".join(r.line() for r in results) + f"\n{len(results) - len(failed)}/{len(results)} passed"
    return payload, text, EXIT_OK if not failed else EXIT_DOMAIN


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _grid(rows) -> str:
    width = max((len(v) for r in rows for v in r), default=1)
    return "\n".join("  ".join(v.rjust(width) for v in r) for r in rows)


def _analysis_text(report) -> str:
    c = report.canonical
    lines = [f"structure {report.structure.name} (k={report.structure.k})",
             f"  connection zero: {c.connection.is_zero()}",
             f"  torsion zero: {c.torsion.is_zero()}  normal: {c.perp_identically}  "
             f"residual zero: {c.residual_zero}",
             f"  curvature zero: {report.curvature_zero}  Bianchi: {report.bianchi_zero}"]
    if report.blocks is None:
        lines.append("  even degree: no complex blocks")
    else:
        zero = report.blocks.identically_zero()
        lines.append("  identically zero blocks: " + (", ".join(n for n, z in zero.items() if z) or "none"))
        lines.append(f"  reality: torsion {report.blocks.torsion_reality}, curvature {report.blocks.curvature_reality}")
    for v in report.verdicts:
        pt = "(" + ", ".join(v["point"]) + ")"
        if "error" in v:
            lines.append(f"  at {pt}: error {v['error']}")
        else:
            lines.append(f"  at {pt}: {'integrable' if v['integrable'] else 'not integrable'}"
                         + ("  GUARD VIOLATION" if v["guard_violation"] else ""))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("-o", "--output", help="write the output here instead of stdout")

    p = _Parser(prog="gl2struct", description="Exact computations for GL(2)-structures.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("rep", parents=[common], help="representation matrix of a 2x2 matrix on V[k]")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--phi", required=True, help='"a,b,c,d" or JSON [[a,b],[c,d]]')
    s.add_argument("--group", action="store_true", help="group action instead of the Lie algebra one")
    s.set_defaults(func=cmd_rep)

    s = sub.add_parser("xi", parents=[common], help="(1,0)-coframe xi^{k,j}")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_xi)

    s = sub.add_parser("jk", parents=[common], help="complex structure J_k on V[k]")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_jk)

    s = sub.add_parser("perp", parents=[common], help="test a matrix against g_k^perp")
    s.add_argument("matrix", help="path, '-' or inline JSON square matrix")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_perp)

    s = sub.add_parser("normalize", parents=[common], help="normalize a torsion tensor")
    s.add_argument("torsion", help="path, '-' or inline JSON torsion")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("det", parents=[common], help="block determinants of the normalization system")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--k-range", help="e.g. 3..9")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("bryant", parents=[common], help="check the k=3 Bryant torsion")
    s.add_argument("--tau", help="8 comma separated values for a numeric instance")
    s.set_defaults(func=cmd_bryant)

    s = sub.add_parser("analyze", parents=[common], help="canonical connection and integrability of a coframe")
    s.add_argument("input", nargs="?", help="coframe JSON (path, '-' or inline)")
    s.add_argument("--builtin", choices=["flat", "shear", "veronese"])
    s.add_argument("--k", type=int)
    s.add_argument("--points", action="append", help='sample point "0,0,0,0"; repeat or separate with ";"')
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--only", type=int, action="append", help="run only this check number")
    s.set_defaults(func=cmd_selftest)
    return p


def _emit(text: str, output: Optional[str]):
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        payload, text, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, ValueError, linalg.SingularMatrixError, SingularCoframeError) as exc:
        # domain failures from the library are passed through verbatim
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        _emit(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}), None)
        return EXIT_DOMAIN
    _emit(text if args.pretty else json.dumps(payload, indent=1, ensure_ascii=False), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
