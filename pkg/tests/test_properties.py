"""Property-based checks of the invariants, over random parameters."""

import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from qesdw.algebra import CoeffVector, GeneratorKind, apply_generator, apply_operator, build_operator
from qesdw.models import PotentialModel
from qesdw.oracle import GridSpec, discretize, lowest_eigenvalues, sturm_count
from qesdw.output import canonical, clean_float, to_json
from qesdw.recurrence import RecurrenceSpec, generate_polynomials, recurrence_self_test
from qesdw.separable2d import eval_1F1, hermite_q, solve_2d_model1, solve_2d_model2
from qesdw.spectra import full_spectrum, real_roots
from qesdw.wavefunction import gauge_consistency, schrodinger_residual, solve_levels

pos = st.floats(0.5, 3.0)
js = st.integers(0, 6)
coeffs = st.lists(st.floats(-10, 10), min_size=1, max_size=10)

P, Z, M = GeneratorKind.JPLUS, GeneratorKind.JZERO, GeneratorKind.JMINUS


def _comm(a, b, j, p):
    return apply_generator(a, j, apply_generator(b, j, p)) - apply_generator(b, j, apply_generator(a, j, p))


@given(st.integers(0, 8), coeffs)
def test_sl2_relations_on_random_polynomials(j, c):
    p = CoeffVector(c)
    scale = 1 + max(abs(v) for v in c) * (1 + j) ** 2 * 100
    assert (_comm(P, M, j, p) + apply_generator(Z, j, p).scale(2)).max_abs() <= 1e-12 * scale
    assert (_comm(Z, P, j, p) - apply_generator(P, j, p)).max_abs() <= 1e-12 * scale
    assert (_comm(Z, M, j, p) + apply_generator(M, j, p)).max_abs() <= 1e-12 * scale


@given(js, st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_operator_preserves_the_subspace(j, a, b, c, d, e):
    from qesdw.algebra import AlgebraicOperator
    T = AlgebraicOperator(a, b, c, d, e, j)
    out = apply_operator(T, CoeffVector(np.ones(j + 1)))
    assert out.degree <= j


@given(st.sampled_from(["oned1", "oned2"]), pos, pos, js)
def test_root_bookkeeping_and_self_test(family, B, C, j):
    s = full_spectrum(PotentialModel.create(family, B=B, C=C), j)
    assert sum(s.multiplicity) + s.complex_root_count == j + 1
    assert list(s.eps_roots) == sorted(s.eps_roots)
    assert max(s.self_test_residuals, default=0.0) <= 1e-10


@given(st.sampled_from(["oned1", "oned2"]), pos, pos, st.integers(0, 5))
def test_residual_and_perturbation(family, B, C, j):
    for sol in solve_levels(PotentialModel.create(family, B=B, C=C), j):
        assert sol.max_residual <= 1e-8
        assert schrodinger_residual(sol, energy=float(sol.energy) + 0.1).max_residual > 1e-3


@given(st.sampled_from(["oned1", "oned2"]), pos, pos, st.integers(0, 3))
def test_gauge_identity(family, B, C, j):
    assert gauge_consistency(PotentialModel.create(family, B=B, C=C), j).max_defect <= 1e-10


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6, unique=True))
def test_real_roots_recovers_separated_roots(roots):
    r = np.sort(roots)
    assume(np.all(np.diff(r) > 0.05))
    rs = real_roots(Polynomial.fromroots(r))
    assert rs.complex_count == 0
    assert np.allclose(rs.real, r, atol=1e-7)


@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(0.5, 2.0), st.integers(0, 3))
def test_twod1_energy_bookkeeping(A, B, C, j):
    assume(abs(A) > 0.1)
    s = solve_2d_model1(PotentialModel.create("twod1", A=A, B=B, C=C), j, k_max=2)
    assert len(s.x_block.roots) * 3 == len(s.levels)
    for L in s.levels:
        assert L.E_total == pytest.approx(s.E0 + L.c1 + L.eps_x, abs=1e-10)
        assert L.x_energy + L.y_energy == pytest.approx(L.E_total, abs=1e-10)
        assert max(L.x_residual, L.y_residual) <= 1e-8


@given(pos, pos, st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 2), st.integers(0, 2))
def test_twod2_axis_residuals(A1, A2, B1, B2, jx, jy):
    s = solve_2d_model2(PotentialModel.create("twod2", A1=A1, A2=A2, B1=B1, B2=B2), jx, jy)
    for L in s.levels:
        assert max(L.x_residual, L.y_residual) <= 1e-8


@given(st.floats(0.1, 5.0), st.integers(0, 10))
def test_hermite_q_solves_its_equation(c, k):
    Q = Polynomial(hermite_q(c, k).coeffs)
    y = Polynomial([0.0, 1.0])
    res = -Q.deriv(2) + 2 * c * y * Q.deriv() - 2 * c * k * Q
    assert np.max(np.abs(res.coef)) <= 1e-9 * max(1.0, np.max(np.abs(Q.coef))) * (1 + c * k)


@given(st.floats(-5, 5), st.floats(0.2, 5), st.floats(-30, 30))
def test_1F1_against_mpmath(a, b, z):
    want = float(mp.hyp1f1(a, b, z))
    assert eval_1F1(a, b, z) == pytest.approx(want, rel=1e-9, abs=1e-12 * max(1.0, math.exp(abs(z) / 2)))


@given(st.lists(st.floats(-50, 50), min_size=2, max_size=20))
def test_sturm_count_is_monotone(shifts):
    s = discretize(lambda x: x**4 - 2 * x * x, GridSpec(-4.0, 4.0, 60))
    sh = np.sort(np.asarray(shifts))
    cnt = sturm_count(s, sh)
    assert np.all(np.diff(cnt) >= 0)
    assert np.all((cnt >= 0) & (cnt <= 60))


@given(st.floats(0.5, 4.0))
def test_eigenvalues_sorted_and_distinct(C):
    ev = lowest_eigenvalues(discretize(lambda y: C * C * y * y, GridSpec(-12.0, 12.0, 400)), 6)
    assert np.all(np.diff(ev) > 1e-12)


@given(st.floats(allow_nan=True, allow_infinity=True))
def test_clean_float_idempotent(x):
    y = clean_float(x)
    if y is None:
        assert not math.isfinite(x)
    else:
        assert clean_float(y) == y
        assert json.loads(json.dumps(y)) == y


@given(st.dictionaries(st.text(max_size=5), st.lists(st.floats(allow_nan=False), max_size=4), max_size=4))
def test_json_is_deterministic(doc):
    assert to_json(doc) == to_json(json.loads(to_json(doc)))
    assert canonical(doc) == canonical(canonical(doc))


@given(st.sampled_from(["oned1", "oned2"]), pos, pos, js)
def test_recurrence_self_test_over_roots(family, B, C, j):
    m = PotentialModel.create(family, B=B, C=C).constrained(j)
    spec = RecurrenceSpec(m, j)
    for r in real_roots(generate_polynomials(spec).critical).real:
        assert recurrence_self_test(spec, r) <= 1e-10
