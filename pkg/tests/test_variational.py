from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gaugedirac import connections as cn
from gaugedirac import dirac as dr
from gaugedirac import liealg
from gaugedirac import variational as vr
from gaugedirac.polyforms import BULK, MatForm, Poly, dexter, mat_const, restrict
from gaugedirac.scalars import NormScalar

seeds = st.integers(0, 2**32 - 1)
x1 = Poly.var(1)


def affine_sample(rng, n, like):
    """A constant part plus position-weighted adjoint terms."""
    xi, eta = liealg.sample_su(n, rng), liealg.sample_su(n, rng)
    p = cn.random_poly(rng, BULK.variables, 1)
    const = cn.random_tangent(rng, n, boundary=not isinstance(like, MatForm))
    return vr.AffineField(const, vr.AffineField.ad(p, xi) + vr.AffineField.ad(Poly.constant(Fraction(1, 2)), eta))


def test_field_evaluation_examples():
    rng = np.random.default_rng(0)
    a = cn.random_tangent(rng, 2)
    A = cn.random_tangent(rng, 2)
    assert vr.eval_field(vr.constant_field(a), A) == a
    xi, eta = liealg.sample_su(2, 1), liealg.sample_su(2, 2)
    zero = MatForm.zero(BULK, 1, 2)
    assert vr.fundamental_field(xi, zero).eval(zero).is_zero()
    A = MatForm(BULK, 1, 2, {(2,): tuple(tuple(e * x1 for e in row) for row in mat_const(eta.matrix))})
    comm = liealg.bracket(eta, xi).matrix
    want = MatForm(BULK, 1, 2, {(2,): tuple(tuple(e * x1 for e in row) for row in mat_const(comm))})
    assert vr.fundamental_field(xi, A).eval(A) == want


def test_directional_derivative_examples():
    rng = np.random.default_rng(1)
    A, a = cn.random_tangent(rng, 3), cn.random_tangent(rng, 3)
    assert vr.dir_deriv(lambda B: B, A, a) == a
    assert vr.dir_deriv(cn.curvature, A, a) == dexter(a) + (a ^ A) + (A ^ a)
    assert vr.dir_deriv(lambda B: a, A, a).is_zero()


@given(seeds, st.integers(2, 3))
def test_affine_derivative_is_a_difference(seed, n):
    rng = np.random.default_rng(seed)
    A, c = cn.random_tangent(rng, n), cn.random_tangent(rng, n)
    V = affine_sample(rng, n, A)
    assert V.deriv(A, c) == V.eval(A + c) - V.eval(A)


@given(seeds, st.integers(2, 3))
def test_bracket_against_difference_oracle(seed, n):
    rng = np.random.default_rng(seed)
    A = cn.random_tangent(rng, n)
    V, W = affine_sample(rng, n, A), affine_sample(rng, n, A)
    v, w = V.eval(A), W.eval(A)
    oracle = (W.eval(A + v) - W.eval(A)) - (V.eval(A + w) - V.eval(A))
    assert vr.bracket_fields(V, W).eval(A) == oracle
    assert vr.BracketField(V, W).eval(A) == oracle


@settings(max_examples=5)
@given(seeds)
def test_bracket_antisymmetry_and_jacobi(seed):
    rng = np.random.default_rng(seed)
    A = cn.random_tangent(rng, 2)
    U, V, W = (affine_sample(rng, 2, A) for _ in range(3))
    br = vr.bracket_fields
    assert (br(V, W).eval(A) + br(W, V).eval(A)).is_zero()
    assert br(V, V).eval(A).is_zero()
    jac = br(U, br(V, W)).eval(A) + br(V, br(W, U)).eval(A) + br(W, br(U, V)).eval(A)
    assert jac.is_zero()


def test_constant_fields_commute():
    rng = np.random.default_rng(2)
    a, b, A = (cn.random_tangent(rng, 2) for _ in range(3))
    assert vr.bracket_fields(vr.constant_field(a), vr.constant_field(b)).eval(A).is_zero()


@given(seeds, st.integers(2, 3))
def test_fundamental_fields_close_with_plus_sign(seed, n):
    rng = np.random.default_rng(seed)
    A = cn.random_tangent(rng, n)
    xi, eta = liealg.sample_su(n, rng), liealg.sample_su(n, rng)
    lhs = vr.bracket_fields(vr.fundamental_field(xi, A), vr.fundamental_field(eta, A)).eval(A)
    assert lhs == vr.fundamental_field(liealg.bracket(xi, eta), A).eval(A)


def test_const_covector_is_closed():
    rng = np.random.default_rng(3)
    A, a, b = (cn.random_tangent(rng, 2) for _ in range(3))
    theta = vr.ConstCovector(cn.Cotangent(cn.random_lie_form(rng, BULK, 3, 2), cn.X_NORM))
    assert vr.dtilde1_eval(theta, vr.constant_field(a), vr.constant_field(b), A) == 0
    assert vr.lie1_eval(vr.constant_field(a), theta, vr.constant_field(b), A) == 0


def test_chern_simons_differential_is_Omega():
    rng = np.random.default_rng(4)
    A, a, b = (cn.random_tangent(rng, 3) for _ in range(3))
    lhs = vr.dtilde1_eval(dr.CS_COVECTOR, vr.constant_field(a), vr.constant_field(b), A)
    assert lhs == dr.Omega_eval(A, a, b)


@given(seeds)
def test_dtilde_omega_is_cartan(seed):
    rng = np.random.default_rng(seed)
    A, a, b, c = (cn.random_tangent(rng, 3, boundary=True) for _ in range(4))
    assert vr.dtilde2_const(dr.boundary_omega_eval, a, b, c, A) == dr.cartan3_M(a, b, c)
    C = [vr.constant_field(x) for x in (a, b, c)]
    assert vr.dtilde2_eval(dr.boundary_omega_eval, *C, A) == dr.cartan3_M(a, b, c)
    assert vr.dtilde2_const(dr.boundary_omega_eval, a, a, c, A) == 0


@settings(max_examples=5)
@given(seeds)
def test_dtilde_squared_vanishes_on_general_fields(seed):
    rng = np.random.default_rng(seed)
    A = cn.random_tangent(rng, 2)
    theta = vr.GraphCovector(dr.phi_map, affine_sample(rng, 2, A))
    X, Y, Z = (affine_sample(rng, 2, A) for _ in range(3))
    phi = lambda B, p, q: vr.dtilde1_const(theta, p, q, B)  # noqa: E731
    assert vr.dtilde2_eval(phi, X, Y, Z, A) == 0


@settings(max_examples=5)
@given(seeds)
def test_cartan_formula_and_evaluation_rule(seed):
    rng = np.random.default_rng(seed)
    A, c = cn.random_tangent(rng, 3), cn.random_tangent(rng, 3)
    V, W = affine_sample(rng, 3, A), affine_sample(rng, 3, A)
    theta = vr.GraphCovector(dr.phi_map, affine_sample(rng, 3, A))
    assert vr.lie1_eval(V, theta, W, A) == vr.lie1_cartan(V, theta, W, A)
    lhs, rhs = vr.evaluation_rule(theta, W, A, c)
    assert lhs == rhs


def test_general_and_constant_dtilde_agree():
    rng = np.random.default_rng(5)
    A, a, b = (cn.random_tangent(rng, 3) for _ in range(3))
    theta = vr.GraphCovector(dr.gamma_prime_map, vr.fundamental_field(liealg.sample_su(3, rng), A))
    assert vr.dtilde1_eval(theta, vr.constant_field(a), vr.constant_field(b), A) == vr.dtilde1_const(theta, a, b, A)


def test_lie_derivative_along_zero_field():
    rng = np.random.default_rng(6)
    A, a, b = (cn.random_tangent(rng, 2, boundary=True) for _ in range(3))
    Z = vr.constant_field(A * 0)
    assert vr.lie2_eval(Z, dr.boundary_omega_eval, vr.constant_field(a), vr.constant_field(b), A) == 0


def test_lie_derivative_of_omega_at_flat_point():
    rng = np.random.default_rng(7)
    A = restrict(cn.flat_sample("abelian", rng, 3))
    xi, eta, zeta = (liealg.sample_su(3, rng) for _ in range(3))
    V, W1, W2 = (vr.fundamental_field(g, A) for g in (xi, eta, zeta))
    assert vr.lie2_eval(V, dr.boundary_omega_eval, W1, W2, A) == NormScalar(0)


def test_covector_algebra():
    rng = np.random.default_rng(8)
    A, c = cn.random_tangent(rng, 2), cn.random_tangent(rng, 2)
    theta = vr.FunctionalCovector(cn.cs_covector)
    assert (theta - theta).pair(A, c) == 0
    assert (theta + theta).pair(A, c) == vr.ScaledCovector(2, theta).pair(A, c)
    assert vr.ZeroCovector().pair(A, c) == 0
