"""Connections, curvature, Chern-Simons data, flat samples and gauge transforms.

All functions here take plain forms (a bulk :class:`MatForm` or a boundary
:class:`BoundaryForm`), or jets of them, so that each one can be
differentiated in the connection exactly.  :class:`Connection` is a
validating wrapper used at the edges (sampling, serialization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import liealg
from .liealg import LieElement, is_su_matrix
from .polyforms import (
    BULK,
    FACETS,
    NVARS,
    BoundaryForm,
    MatForm,
    Poly,
    Region,
    check_degree,
    dexter,
    form_base,
    from_text,
    integral_trace_wedge,
    left_mul,
    restrict,
    right_mul,
    to_text,
)
from .scalars import GaussRational, Jet, NormScalar, linear, rational

CS_NORM = Fraction(1, 24)  # q, in units of pi^-3
X_NORM = Fraction(1, 8)


def degree_of(x) -> int:
    return form_base(x).degree


def commutator(x, y):
    """Graded commutator ``x ^ y - (-1)**(jk) y ^ x``."""
    sign = (-1) ** (degree_of(x) * degree_of(y))
    return x ^ y - y ^ x if sign > 0 else x ^ y + y ^ x


# ---------------------------------------------------------------- cotangents


@dataclass
class Cotangent:
    """A covector ``weight * form`` pairing against tangents by ``weight * int tr(form ^ a)``."""

    form: Any
    weight: Fraction

    def pair(self, a) -> NormScalar:
        return _to_norm(integral_trace_wedge(self.form, a)) * self.weight

    def __add__(self, other: "Cotangent") -> "Cotangent":
        if other.weight == self.weight:
            return Cotangent(self.form + other.form, self.weight)
        return Cotangent(self.form + other.form * (other.weight / self.weight), self.weight)

    def __neg__(self):
        return Cotangent(-self.form, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Cotangent":
        return Cotangent(self.form, self.weight * rational(c))


@linear
def _to_norm(v):
    return NormScalar(v)


# ---------------------------------------------------------------- validation


def is_su_form(form) -> bool:
    form = form_base(form)
    facets = form.facets if isinstance(form, BoundaryForm) else (form,)
    for f in facets:
        for m in f.comps.values():
            n = f.n
            # entries are polynomials; check skew-Hermitian / traceless coefficientwise
            trace = m[0][0]
            for i in range(1, n):
                trace = trace + m[i][i]
            if not trace.is_zero():
                return False
            for i in range(n):
                for j in range(n):
                    if not (m[i][j] + m[j][i].conj()).is_zero():
                        return False
    return True


@dataclass
class Connection:
    """A validated su(n)-valued 1-form on the bulk or the boundary."""

    form: Any
    algebra: str = "su"

    def __post_init__(self):
        base = form_base(self.form)
        if base.degree != 1:
            raise ValueError("a connection is a 1-form")
        if self.algebra == "su" and not is_su_form(base):
            raise ValueError("connection coefficients are not in su(n)")

    @property
    def n(self) -> int:
        return form_base(self.form).n

    @property
    def on_boundary(self) -> bool:
        return isinstance(form_base(self.form), BoundaryForm)


Tangent = Connection


# ---------------------------------------------------------------- curvature & friends


def curvature(A):
    """``dA + A ^ A``."""
    return dexter(A) + (A ^ A)


def dir_curvature(A, a):
    """Closed-form directional derivative ``da + a ^ A + A ^ a``."""
    return dexter(a) + (a ^ A) + (A ^ a)


def covariant_d(A, alpha):
    """``d alpha + A ^ alpha - (-1)**k alpha ^ A``."""
    k = degree_of(alpha)
    return dexter(alpha) + (A ^ alpha) - (alpha ^ A) * (-1) ** k


def cs_form(A):
    F = curvature(A)
    return (A ^ F) + (F ^ A) - ((A ^ A) ^ A) * Fraction(1, 2)


def cs_covector(A) -> Cotangent:
    """The Chern-Simons covector ``q (AF + FA - A^3/2)`` with ``q = 1/24``."""
    return Cotangent(cs_form(A), CS_NORM)


def theta_t_form(A, t):
    t = rational(t)
    F = curvature(A)
    return (A ^ F) + (F ^ A) - ((A ^ A) ^ A) * (t / 2)


def theta_t(A, a, t) -> NormScalar:
    """``q int_X tr[(AF + FA - (t/2) A^3) a]``."""
    return Cotangent(theta_t_form(A, t), CS_NORM).pair(a)


def degree(A) -> GaussRational:
    """Raw boundary integral ``int_M tr(A^3)``."""
    if not isinstance(form_base(A), BoundaryForm):
        raise ValueError("degree is defined for boundary connections")
    return integral_trace_wedge(A ^ A, A)


def is_flat(A) -> bool:
    return curvature(A).is_zero()


def fundamental_tangent(A, xi):
    """``d_A xi = A xi - xi A`` for a constant generator (or a 0-form)."""
    if isinstance(xi, LieElement):
        return right_mul(A, xi) - left_mul(A, xi)
    return covariant_d(A, xi)


# ---------------------------------------------------------------- samplers


def random_poly(rng: np.random.Generator, variables: Sequence[int], max_deg: int, *,
                terms: int = 3, bound: int = 3, denominators: Sequence[int] = (1, 2, 3),
                min_deg: int = 0) -> Poly:
    """Sparse polynomial with rational coefficients in the given variables."""
    out = {}
    for _ in range(terms):
        deg = int(rng.integers(min_deg, max_deg + 1))
        exps = [0] * NVARS
        for _ in range(deg):
            exps[variables[int(rng.integers(len(variables)))] - 1] += 1
        num = int(rng.integers(-bound, bound + 1)) or 1
        c = Fraction(num, int(rng.choice(denominators)))
        key = tuple(exps)
        out[key] = out.get(key, 0) + c
    return Poly.from_terms(out)


def random_lie_form(rng: np.random.Generator, region: Region, k: int, n: int, max_deg: int = 2, *,
                    density: float = 0.5, terms: int = 2, bound: int = 3) -> MatForm:
    """Random su(n)-valued k-form: per component a few basis elements times real polynomials."""
    from itertools import combinations

    basis = liealg.su_basis(n)
    comps = {}
    for idx in combinations(region.variables, k):
        acc = None
        for b in basis:
            if rng.random() >= density:
                continue
            p = random_poly(rng, region.variables, max_deg, terms=terms, bound=bound)
            m = tuple(tuple(Poly.constant(e) * p for e in row) for row in b.matrix)
            acc = m if acc is None else tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(acc, m))
        if acc is not None:
            comps[idx] = acc
    return MatForm(region, k, n, comps)


def random_tangent(rng: np.random.Generator, n: int, max_deg: int = 2, *, boundary: bool = False,
                   nonzero: bool = True, **kw):
    """Random su(n) 1-form on X, or the restriction of one to M."""
    while True:
        a = random_lie_form(rng, BULK, 1, n, max_deg, **kw)
        if not nonzero or not a.is_zero():
            break
    return restrict(a) if boundary else a


def random_profile(rng: np.random.Generator, max_deg: int = 2) -> Poly:
    return random_poly(rng, BULK.variables, max_deg, terms=3, min_deg=1)


# ---------------------------------------------------------------- flat connections


def abelian_flat(xi: LieElement, f: Poly) -> MatForm:
    """``xi * df``: always flat."""
    df = dexter(MatForm.scalar(BULK, 0, {(): f}))
    comps = {}
    for key, m in df.comps.items():
        p = m[0][0]
        comps[key] = tuple(tuple(Poly.constant(e) * p for e in row) for row in xi.matrix)
    return MatForm(BULK, 1, xi.n, comps)


def unipotent_flat(rng: np.random.Generator, n: int, max_deg: int = 1) -> MatForm:
    """Pure gauge ``g^{-1} dg`` with ``g = 1 + N`` and ``N`` strictly upper triangular.

    The result is traceless (sl(n)-valued, not su(n)) and generically has
    ``A ^ A != 0``, which exercises the quadratic terms of the flat-sector
    identities.
    """
    zero = Poly()
    N = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            N[i][j] = random_poly(rng, BULK.variables, max_deg + 1, terms=2, min_deg=1)
    g = MatForm.function(BULK, tuple(tuple((Poly.constant(1) if i == j else zero) + N[i][j] for j in range(n)) for i in range(n)))
    # g^{-1} = sum_k (-N)^k, finite since N is nilpotent
    Nf = MatForm.function(BULK, tuple(tuple(N[i][j] for j in range(n)) for i in range(n)))
    ginv = MatForm.function(BULK, liealg.identity(n))
    power = ginv
    for _ in range(1, n):
        power = power ^ (-Nf)
        ginv = ginv + power
    return ginv ^ dexter(g)


def flat_sample(kind: str, rng: np.random.Generator, n: int, max_deg: int = 2) -> MatForm:
    """A flat bulk connection of the requested kind (``zero``, ``abelian``, ``unipotent``)."""
    if kind == "zero":
        return MatForm.zero(BULK, 1, n)
    if kind == "abelian":
        xi = liealg.sample_su(n, rng)
        f = random_poly(rng, BULK.variables, max_deg + 1, terms=3, min_deg=1)
        return abelian_flat(xi, f)
    if kind == "unipotent":
        return unipotent_flat(rng, n, max(1, max_deg - 1))
    raise ValueError(f"unknown flat kind {kind!r}")


FLAT_KINDS = ("zero", "abelian", "unipotent")


# ---------------------------------------------------------------- gauge transformations


@dataclass
class GaugeData:
    """A gauge transformation ``g = exp(f xi)``.

    ``backend="exact"`` needs a constant profile and an explicitly supplied
    unitary with Gaussian-rational entries (``unitary``); ``backend="quad"``
    evaluates ``g`` at Gauss-Legendre nodes of the given order.
    """

    generator: LieElement
    profile: Poly
    backend: str = "quad"
    order: int = 8
    unitary: Any = None

    def __post_init__(self):
        if self.backend not in ("exact", "quad"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "exact":
            if self.profile.total_degree() > 0:
                raise ValueError("the exact backend needs a constant profile")
            if self.unitary is None:
                raise ValueError("the exact backend needs an explicit unitary matrix")
            if not liealg.is_unitary(self.unitary):
                raise ValueError("supplied constant gauge transformation is not unitary")


@linear
def conjugate_form(alpha, g):
    """``g^{-1} alpha g`` for a constant unitary ``g``."""
    return right_mul(left_mul(alpha, liealg.adjoint(g)), g)


def gauss_legendre(order: int, dim: int = NVARS) -> tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre nodes ``(N, dim)`` and weights on ``[0, 1]^dim``."""
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = (x + 1) / 2, w / 2
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return nodes, weights


def evaluate_form(alpha: MatForm, nodes: np.ndarray) -> np.ndarray:
    """Dense antisymmetric component tensor of a bulk form at the nodes.

    Degree 0 gives ``(N, n, n)``, degree 1 ``(N, 4, n, n)``, degree 2
    ``(N, 4, 4, n, n)`` with ``alpha = sum_{mu<nu} T[mu, nu] dx_mu dx_nu``.
    """
    N, n, k = nodes.shape[0], alpha.n, alpha.degree
    out = np.zeros((N,) + (NVARS,) * k + (n, n), dtype=complex)
    for key, m in alpha.comps.items():
        vals = np.stack([np.stack([m[i][j].evaluate(nodes) for j in range(n)], axis=-1) for i in range(n)], axis=-2)
        idx = tuple(v - 1 for v in key)
        if k == 0:
            out += vals
        elif k == 1:
            out[:, idx[0]] += vals
        elif k == 2:
            out[:, idx[0], idx[1]] += vals
            out[:, idx[1], idx[0]] -= vals
        else:
            raise ValueError("dense evaluation supports degree <= 2")
    return out


@dataclass
class NumericConnection:
    """A gauge-transformed bulk connection sampled at quadrature nodes."""

    nodes: np.ndarray
    weights: np.ndarray
    g: np.ndarray  # (N, n, n)
    components: np.ndarray  # (N, 4, n, n)
    curvature: np.ndarray  # (N, 4, 4, n, n)
    order: int = field(default=8)

    def conjugate(self, tensor: np.ndarray) -> np.ndarray:
        """``g^{-1} T g`` nodewise for any component tensor."""
        gi = np.conj(np.swapaxes(self.g, -1, -2))
        extra = tensor.ndim - 3
        shape = (gi.shape[0],) + (1,) * extra + gi.shape[1:]
        return gi.reshape(shape) @ tensor @ self.g.reshape(shape)


def _profile_values(f: Poly, nodes: np.ndarray):
    vals = f.evaluate(nodes).real
    grads = np.stack([f.derivative(mu + 1).evaluate(nodes).real for mu in range(NVARS)], axis=1)
    return vals, grads


def gauge_transform(A, g: GaugeData):
    """``g^{-1} dg + g^{-1} A g``.

    Exact backend: returns a form.  Quadrature backend: returns a
    :class:`NumericConnection` whose curvature is assembled from the
    transformed components and their analytic derivatives (it does not use
    the conjugation identity it is later compared with).
    """
    if g.backend == "exact":
        return conjugate_form(A, g.unitary)
    A = form_base(A)
    if not isinstance(A, MatForm) or not A.region.is_bulk:
        raise ValueError("the quadrature backend works on bulk connections")
    nodes, weights = gauss_legendre(g.order)
    xi = g.generator.to_complex()
    fval, fgrad = _profile_values(g.profile, nodes)
    gmat = np.stack([liealg.numeric_exp(xi, s) for s in fval])
    gi = np.conj(np.swapaxes(gmat, -1, -2))
    if np.max(np.abs(gi @ gmat - np.eye(A.n))) > 1e-10:
        raise ValueError("numeric gauge transformation is not unitary")
    Avals = evaluate_form(A, nodes)
    B = gi[:, None] @ Avals @ gmat[:, None]  # g^{-1} A_mu g
    comps = fgrad[:, :, None, None] * xi + B
    dA = evaluate_form(dexter(A), nodes)  # (dA)_{mu nu} = d_mu A_nu - d_nu A_mu
    F = gi[:, None, None] @ dA @ gmat[:, None, None]
    comm_B = B @ xi - xi @ B  # [B_mu, xi]
    F = F + fgrad[:, :, None, None, None] * comm_B[:, None] - fgrad[:, None, :, None, None] * comm_B[:, :, None]
    F = F + comps[:, :, None] @ comps[:, None, :] - comps[:, None, :] @ comps[:, :, None]
    return NumericConnection(nodes, weights, gmat, comps, F, g.order)


# ---------------------------------------------------------------- serialization


def connection_to_text(A) -> str:
    """Polyform text followed by su-basis coordinates per component and monomial."""
    base = form_base(A)
    lines = [to_text(base).rstrip("\n")]
    facets = base.facets if isinstance(base, BoundaryForm) else (base,)
    lines.append(f"su-coordinates n={base.n}")
    for f in facets:
        for key in sorted(f.comps):
            m = f.comps[key]
            monos = sorted({e for row in m for p in row for e in p.terms()})
            for e in monos:
                mat = tuple(tuple(m[i][j].terms().get(e, GaussRational(0)) for j in range(f.n)) for i in range(f.n))
                if not is_su_matrix(mat):
                    continue
                coords = liealg.su_coordinates(LieElement(mat))
                lines.append(
                    f"s {f.region} {','.join(map(str, key))} {','.join(map(str, e))} "
                    + " ".join(f"{c.numerator}/{c.denominator}" for c in coords)
                )
    return "\n".join(lines) + "\n"


def connection_from_text(text: str):
    """Inverse of :func:`connection_to_text` (the coordinate listing is informative)."""
    body = text.split("su-coordinates", 1)[0]
    return from_text(body)


__all__ = [
    "CS_NORM",
    "X_NORM",
    "Connection",
    "Cotangent",
    "FLAT_KINDS",
    "GaugeData",
    "NumericConnection",
    "abelian_flat",
    "commutator",
    "connection_from_text",
    "connection_to_text",
    "covariant_d",
    "cs_covector",
    "curvature",
    "degree",
    "dir_curvature",
    "evaluate_form",
    "flat_sample",
    "fundamental_tangent",
    "gauge_transform",
    "gauss_legendre",
    "is_flat",
    "is_su_form",
    "random_lie_form",
    "random_poly",
    "random_profile",
    "random_tangent",
    "theta_t_form",
    "cs_form",
    "degree_of",
    "conjugate_form",
    "unipotent_flat",
    "theta_t",
]
