import math

import numpy as np
import pytest
import sympy as sp
from numpy.polynomial import Polynomial

from qesdw.algebra import AlgebraicOperator, apply_operator, operator_matrix
from qesdw.errors import DegenerateParameterError
from qesdw.models import PotentialModel
from qesdw.recurrence import (
    RecurrenceSpec,
    critical_value,
    eigen_coefficients,
    generate_polynomials,
    proportionality_check,
    proportionality_defect,
    recurrence_self_test,
    refine_root,
)
from qesdw.spectra import real_roots


def _spec(family, j, **p):
    return RecurrenceSpec(PotentialModel.create(family, **p).constrained(j), j)


def _symbolic_matrix_eigs(cMM, cM, c0, cP, cId, j):
    """Exact eigenvalues of T on the monomial basis, from the generator actions."""
    M = sp.zeros(j + 1, j + 1)
    for m in range(j + 1):
        M[m, m] += c0 * (m - sp.Rational(j, 2)) + cId
        if m >= 1:
            M[m - 1, m] += cM * m
        if m >= 2:
            M[m - 2, m] += cMM * m * (m - 1)
        if m + 1 <= j:
            M[m + 1, m] += cP * (m - j)
    return M.eigenvals()


def test_oned1_j1_roots_match_exact_eigenvalues():
    # B = C = 1: T = -J-^2 - 6 J- - (2/3) J0 + J+
    eigs = _symbolic_matrix_eigs(-1, -6, sp.Rational(-2, 3), 1, 0, 1)
    exact = sorted(float(e) for e in eigs)
    assert exact == pytest.approx([-math.sqrt(55) / 3, math.sqrt(55) / 3], rel=1e-15)
    fam = generate_polynomials(_spec("oned1", 1, B=1.0, C=1.0))
    got = real_roots(fam.critical).real
    assert got == pytest.approx(exact, rel=1e-13)


@pytest.mark.parametrize("family,params", [
    ("oned1", {"B": 1.7, "C": 0.6}),
    ("oned2", {"B": 0.9, "C": 2.2}),
    ("twod1", {"A": 1.1, "B": -0.8, "C": 1.0}),
])
@pytest.mark.parametrize("j", range(6))
def test_critical_roots_equal_operator_matrix_eigenvalues(family, params, j):
    spec = _spec(family, j, **params)
    fam = generate_polynomials(spec)
    assert fam.critical.degree() == j + 1
    ev = np.linalg.eigvals(operator_matrix(spec.operator))
    real_ev = np.sort(ev[np.abs(ev.imag) < 1e-9 * (1 + np.abs(ev.real))].real)
    rs = real_roots(fam.critical)
    assert len(rs.real) == len(real_ev)
    assert np.allclose(rs.real, real_ev, rtol=1e-9, atol=1e-9)


def test_polynomial_degrees():
    fam = generate_polynomials(_spec("oned2", 4, B=1.0, C=1.0))
    assert [p.degree() for p in fam.polys] == [0, 1, 2, 3, 4]
    assert fam.j == 4


def test_oned2_j1_critical_is_proportional_to_2eps2_minus_4():
    fam = generate_polynomials(_spec("oned2", 1, B=2.0, C=1.0))
    ok, lam = proportionality_check(fam.critical, [-4.0, 0.0, 2.0])
    assert ok
    assert lam == pytest.approx(-1 / (2 * math.sqrt(2)), rel=1e-12)


def test_proportionality_examples():
    assert proportionality_check([-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]) == (True, 2.0)
    ok, _ = proportionality_check([1.0, 1.0], [1.0, 2.0])
    assert not ok
    assert proportionality_defect(Polynomial([3.0, 6.0]), [1.0, 2.0]) == pytest.approx(0.0, abs=1e-16)
    with pytest.raises(ValueError):
        proportionality_check([0.0, 0.0], [1.0])


def test_critical_value_matches_polynomial():
    spec = _spec("oned1", 3, B=1.2, C=0.9)
    crit = generate_polynomials(spec).critical
    for e in (-3.0, 0.4, 2.5):
        v, d = critical_value(spec, e)
        assert v == pytest.approx(crit(e), rel=1e-12)
        assert d == pytest.approx(crit.deriv()(e), rel=1e-12)


def test_refine_root_improves_on_a_perturbed_root():
    spec = _spec("oned1", 4, B=2.1, C=1.3)
    r = real_roots(generate_polynomials(spec).critical).real[0]
    refined = refine_root(spec, r * (1 + 1e-9))
    assert isinstance(refined, np.longdouble)
    assert abs(float(refined) - r) < 1e-12 * max(1.0, abs(r))


@pytest.mark.parametrize("j", range(7))
def test_eigen_coefficients_solve_the_matrix_problem(j):
    spec = _spec("oned2", j, B=1.4, C=0.7)
    T = spec.operator
    M = operator_matrix(T)
    for e in real_roots(generate_polynomials(spec).critical).real:
        u = eigen_coefficients(T, e).padded(j + 1)[: j + 1]
        assert np.max(np.abs(M @ u - e * u)) <= 1e-8 * np.max(np.abs(u)) * max(1.0, abs(e))


def test_eigen_coefficients_normalized_at_origin():
    spec = _spec("oned1", 2, B=1.0, C=1.0)
    e = real_roots(generate_polynomials(spec).critical).real[1]
    R = eigen_coefficients(spec.operator, e)
    assert float(R.coeffs[0]) == 1.0


def test_left_versus_right_eigenvector():
    """R = sum P_m(eps) x^m is not an eigenfunction; the downward recurrence is."""
    spec = _spec("oned1", 1, B=1.0, C=1.0)
    fam = generate_polynomials(spec)
    T = spec.operator
    e = math.sqrt(55) / 3
    naive = np.array([p(e) for p in fam.polys])
    assert np.max(np.abs(apply_operator(T, naive).padded(3)[:2] - e * naive)) > 1.0
    R = eigen_coefficients(T, e)
    assert (apply_operator(T, R) - R.scale(e)).max_abs() < 1e-13


def test_eigen_coefficients_degenerate_operator():
    with pytest.raises(DegenerateParameterError):
        eigen_coefficients(AlgebraicOperator(-1.0, 0.0, 1.0, 0.0, 0.0, 2), 1.0)


def test_recurrence_self_test_rejects_non_roots():
    spec = _spec("oned1", 1, B=1.0, C=1.0)
    with pytest.raises(ValueError):
        recurrence_self_test(spec, 1.0)
    assert recurrence_self_test(spec, math.sqrt(55) / 3) <= 1e-10


def test_spec_weights():
    spec = _spec("oned1", 2, B=1.0, C=1.0)
    w = spec.weights(1)
    assert w == pytest.approx((0.0, -9.0, 0.0, -1.0))
