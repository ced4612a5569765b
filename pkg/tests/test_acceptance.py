"""One test per acceptance criterion.

Each test prints a PASS/FAIL line; the lines are repeated in the terminal
summary.  Run ``python3 tests/test_acceptance.py`` for the lines alone.
"""

import pytest

from gl2struct.selftest import CHECKS, run_check

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def _run(number):
    result = run_check(number)
    line = result.line()
    print(line)
    ACCEPTANCE_LINES.append((number, line))
    if not result.passed:
        pytest.fail("\n".join([line] + result.failures[:10]), pytrace=False)


def test_criterion_01_xi_golden_rows():
    _run(1)


def test_criterion_02_w_polynomials_under_co2():
    _run(2)


def test_criterion_03_representation_suite():
    _run(3)


def test_criterion_04_three_term_decomposition_reference_coefficients():
    _run(4)


def test_criterion_05_block_determinants():
    _run(5)


def test_criterion_06_bryant_torsion_normal():
    _run(6)


def test_criterion_07_normalization_solver():
    _run(7)


def test_criterion_08_exterior_calculus():
    _run(8)


def test_criterion_09_flat_structures():
    _run(9)


def test_criterion_10_shear_against_oracle():
    _run(10)


def test_criterion_11_reality_and_guard():
    _run(11)


def test_every_criterion_has_a_test():
    numbers = [n for n, _ in CHECKS]
    assert numbers == list(range(1, 12))


if __name__ == "__main__":
    for n, _ in CHECKS:
        print(run_check(n).line())
