from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaugedirac import connections as cn
from gaugedirac import liealg
from gaugedirac.polyforms import BULK, MatForm, Poly, dexter, mat_const, restrict
from gaugedirac.scalars import NormScalar, directional

seeds = st.integers(0, 2**32 - 1)
x1, x2, x3 = (Poly.var(i) for i in range(1, 4))


def const_form(xi, idx, p=None):
    m = mat_const(xi.matrix)
    if p is not None:
        m = tuple(tuple(e * p for e in row) for row in m)
    return MatForm(BULK, 1, xi.n, {idx: m}) if len(idx) == 1 else MatForm(BULK, 2, xi.n, {idx: m})


def test_curvature_examples():
    xi = liealg.sample_su(2, 3)
    assert cn.curvature(MatForm.zero(BULK, 1, 2)).is_zero()
    A = const_form(xi, (2,), x1)
    assert cn.curvature(A) == const_form(xi, (1, 2))
    assert not cn.is_flat(A)
    assert cn.is_flat(cn.abelian_flat(xi, x1 * x2 + x3 * x3))


@given(seeds, st.sampled_from(cn.FLAT_KINDS), st.integers(2, 3))
def test_flat_samples_are_flat(seed, kind, n):
    A = cn.flat_sample(kind, np.random.default_rng(seed), n)
    assert cn.is_flat(A)
    assert cn.degree(restrict(A)) == 0


@given(seeds)
def test_directional_curvature_matches_jets(seed):
    rng = np.random.default_rng(seed)
    A, a = cn.random_tangent(rng, 3), cn.random_tangent(rng, 3)
    assert directional(cn.curvature, A, a) == cn.dir_curvature(A, a)
    assert cn.covariant_d(A, a) == cn.dir_curvature(A, a)


@given(seeds)
def test_bianchi(seed):
    rng = np.random.default_rng(seed)
    A = cn.random_tangent(rng, 3)
    assert cn.covariant_d(A, cn.curvature(A)).is_zero()
    Am = restrict(A)
    assert cn.covariant_d(Am, cn.curvature(Am)).is_zero()


def test_covariant_d_of_constant_at_zero():
    xi = liealg.sample_su(2, 1)
    assert cn.covariant_d(MatForm.zero(BULK, 1, 2), MatForm.function(BULK, xi.matrix)).is_zero()


@given(seeds)
def test_covariant_d_squared_is_curvature_commutator(seed):
    rng = np.random.default_rng(seed)
    A = cn.random_tangent(rng, 2)
    f = cn.random_lie_form(rng, BULK, 0, 2, 2)
    F = cn.curvature(A)
    assert cn.covariant_d(A, cn.covariant_d(A, f)) == (F ^ f) - (f ^ F)


def test_trivial_zeros():
    rng = np.random.default_rng(0)
    zero = MatForm.zero(BULK, 1, 2)
    a = cn.random_tangent(rng, 2)
    assert cn.cs_covector(zero).form.is_zero()
    for t in (Fraction(-1), Fraction(7, 3)):
        assert cn.theta_t(zero, a, t) == NormScalar(0)
    assert cn.degree(restrict(zero)) == 0


def test_degree_of_abelian_restriction():
    A = restrict(cn.abelian_flat(liealg.sample_su(3, 2), x1 * x2 * x3 + x2))
    assert cn.degree(A) == 0


def test_degree_needs_boundary():
    with pytest.raises(ValueError):
        cn.degree(MatForm.zero(BULK, 1, 2))


def test_theta_one_is_chern_simons():
    rng = np.random.default_rng(1)
    A, a = cn.random_tangent(rng, 3), cn.random_tangent(rng, 3)
    assert cn.theta_t(A, a, 1) == cn.cs_covector(A).pair(a)


def test_connection_validation():
    rng = np.random.default_rng(2)
    A = cn.Connection(cn.random_tangent(rng, 2))
    assert A.n == 2 and not A.on_boundary
    assert cn.Connection(restrict(A.form)).on_boundary
    with pytest.raises(ValueError):
        cn.Connection(MatForm.function(BULK, liealg.identity(2)))
    with pytest.raises(ValueError):
        cn.Connection(MatForm(BULK, 1, 2, {(1,): mat_const(liealg.identity(2))}))
    cn.Connection(cn.unipotent_flat(rng, 3), algebra="sl")


def test_gauge_identity_and_constant():
    rng = np.random.default_rng(3)
    A = cn.random_tangent(rng, 2)
    xi = liealg.sample_su(2, rng)
    ident = cn.GaugeData(xi, Poly.constant(0), "exact", unitary=liealg.identity(2))
    assert cn.gauge_transform(A, ident) == A
    g = liealg.cayley_unitary(xi)
    assert cn.gauge_transform(MatForm.zero(BULK, 1, 2), cn.GaugeData(xi, Poly(), "exact", unitary=g)).is_zero()
    with pytest.raises(ValueError):
        cn.GaugeData(xi, x1, "exact", unitary=g)
    with pytest.raises(ValueError):
        cn.GaugeData(xi, Poly(), "exact", unitary=((1, 1), (0, 1)))


def test_numeric_gauge_transform_agrees_with_exact_for_zero_profile():
    rng = np.random.default_rng(4)
    A = cn.random_tangent(rng, 2)
    nc = cn.gauge_transform(A, cn.GaugeData(liealg.sample_su(2, rng), Poly(), "quad", 3))
    assert np.max(np.abs(nc.components - cn.evaluate_form(A, nc.nodes))) < 1e-12
    assert np.max(np.abs(nc.curvature - cn.evaluate_form(cn.curvature(A), nc.nodes))) < 1e-12


@given(seeds)
def test_numeric_curvature_is_conjugated(seed):
    rng = np.random.default_rng(seed)
    A = cn.random_tangent(rng, 3)
    g = cn.GaugeData(liealg.sample_su(3, rng), cn.random_profile(rng), "quad", 3)
    nc = cn.gauge_transform(A, g)
    want = nc.conjugate(cn.evaluate_form(cn.curvature(A), nc.nodes))
    assert np.max(np.abs(nc.curvature - want)) < 1e-10


def test_quadrature_weights():
    nodes, weights = cn.gauss_legendre(4)
    assert nodes.shape == (256, 4)
    assert abs(weights.sum() - 1) < 1e-14


@given(seeds)
def test_connection_text_round_trip(seed):
    rng = np.random.default_rng(seed)
    for A in (cn.random_tangent(rng, 3), cn.random_tangent(rng, 2, boundary=True)):
        text = cn.connection_to_text(A)
        assert "su-coordinates n=" in text
        assert cn.connection_from_text(text) == A


def test_cotangent_pairing_is_weighted():
    rng = np.random.default_rng(5)
    b = cn.random_lie_form(rng, BULK, 3, 2)
    a = cn.random_tangent(rng, 2)
    from gaugedirac.polyforms import integral_trace_wedge

    assert cn.Cotangent(b, cn.X_NORM).pair(a) == NormScalar(integral_trace_wedge(b, a) * cn.X_NORM)
    assert (cn.Cotangent(b, 1) + cn.Cotangent(b, 1)).pair(a) == cn.Cotangent(b, 1).scale(2).pair(a)


def test_fundamental_tangent_is_covariant_derivative():
    rng = np.random.default_rng(6)
    A = cn.random_tangent(rng, 3)
    xi = liealg.sample_su(3, rng)
    assert cn.fundamental_tangent(A, xi) == cn.covariant_d(A, MatForm.function(BULK, xi.matrix))
    assert dexter(MatForm.function(BULK, xi.matrix)).is_zero()
