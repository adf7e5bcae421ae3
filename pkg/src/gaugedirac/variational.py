"""Calculus on the affine space of connections.

Vector fields are maps ``A -> tangent``; covector fields expose
``pair(A, c)``, the value of the covector at ``A`` on a tangent ``c``.  Every
evaluation accepts jets for ``A``, so directional derivatives (including
second derivatives, for ``d~ d~ = 0``) are exact.

Conventions:

* ``[V, W](A) = dW(A)[V(A)] - dV(A)[W(A)]``.
* ``(d~theta)(V, W) = V<theta|W> - W<theta|V> - <theta|[V, W]>``.
* ``(L_V theta)(W) = V<theta|W> - <theta|[V, W]>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .liealg import LieElement, identity
from .polyforms import (
    BULK,
    BoundaryForm,
    MatForm,
    Poly,
    dexter,
    form_base,
    left_mul,
    mat_const,
    mat_mul,
    poly_mul,
    right_mul,
    scale,
)
from .scalars import NormScalar, directional

# ---------------------------------------------------------------- vector fields


class VectorField:
    """Base class: subclasses implement :meth:`eval`."""

    def eval(self, A):
        raise NotImplementedError

    def deriv(self, A, c):
        """Directional derivative of the field at ``A`` along ``c``."""
        return directional(self.eval, A, c)

    def __call__(self, A):
        return self.eval(A)


@dataclass(frozen=True)
class Sandwich:
    """The linear map ``c -> p * L c R`` (``L``, ``R`` polynomial matrices)."""

    p: Poly
    L: tuple
    R: tuple

    def apply(self, c):
        out = right_mul(left_mul(c, self.L), self.R)
        if self.p == Poly.constant(1):
            return out
        return poly_mul(out, self.p)

    def then(self, other: "Sandwich") -> "Sandwich":
        """``other`` applied after ``self``."""
        return Sandwich(self.p * other.p, mat_mul(other.L, self.L), mat_mul(self.R, other.R))


def _as_mat(m) -> tuple:
    return mat_const(getattr(m, "matrix", m))


class AffineField(VectorField):
    """``V(A) = const + sum_k p_k L_k A R_k``."""

    def __init__(self, const, terms: Sequence[Sandwich] = ()):
        self.const = const
        self.terms = tuple(terms)

    # constructors mirroring the usual one-sided terms
    @staticmethod
    def left(p: Poly, L) -> Sandwich:
        n = len(_as_mat(L))
        return Sandwich(p, _as_mat(L), mat_const(identity(n)))

    @staticmethod
    def right(p: Poly, R) -> Sandwich:
        n = len(_as_mat(R))
        return Sandwich(p, mat_const(identity(n)), _as_mat(R))

    @staticmethod
    def ad(p: Poly, L) -> tuple[Sandwich, Sandwich]:
        """Terms of ``A -> p (A L - L A)``."""
        return (AffineField.right(p, L), AffineField.left(-p, L))

    def linear(self, c):
        out = None
        for t in self.terms:
            v = t.apply(c)
            out = v if out is None else out + v
        return out if out is not None else c * 0

    def eval(self, A):
        if not self.terms:
            return self.const
        return self.const + self.linear(A)

    def deriv(self, A, c):
        return self.linear(c)

    def is_constant(self) -> bool:
        return not self.terms

    def __add__(self, other: "AffineField") -> "AffineField":
        return AffineField(self.const + other.const, self.terms + other.terms)

    def __neg__(self) -> "AffineField":
        return AffineField(-self.const, tuple(Sandwich(-t.p, t.L, t.R) for t in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return f"AffineField(terms={len(self.terms)})"


def constant_field(a) -> AffineField:
    return AffineField(a)


def fundamental_field(xi, like) -> AffineField:
    """The infinitesimal gauge field ``A -> d_A xi``.

    ``xi`` is a :class:`LieElement` or a matrix of polynomials (a
    position-dependent generator); ``like`` is any 1-form fixing region and
    size, used for the zero constant part.
    """
    like = form_base(like)
    m = _as_mat(xi)
    if isinstance(xi, LieElement):
        const = like * 0
    else:
        from .polyforms import function_like

        const = dexter(function_like(like, m))
    one = Poly.constant(1)
    return AffineField(const, AffineField.ad(one, m))


def _compose(outer: AffineField, inner: AffineField) -> list[Sandwich]:
    return [ti.then(to) for to in outer.terms for ti in inner.terms]


def bracket_fields(V: VectorField, W: VectorField) -> VectorField:
    """``[V, W] = dW[V] - dV[W]``; closed form on affine fields."""
    if isinstance(V, AffineField) and isinstance(W, AffineField):
        const = W.linear(V.const) - V.linear(W.const)
        minus = [Sandwich(-t.p, t.L, t.R) for t in _compose(V, W)]
        return AffineField(const, _compose(W, V) + minus)
    return BracketField(V, W)


@dataclass
class BracketField(VectorField):
    """``[V, W]`` evaluated pointwise through jets."""

    V: VectorField
    W: VectorField

    def eval(self, A):
        return self.W.deriv(A, self.V.eval(A)) - self.V.deriv(A, self.W.eval(A))


@dataclass
class ScaledField(VectorField):
    """``f(A) V(A)`` for a scalar functional ``f`` returning a Gaussian rational."""

    f: Callable
    V: VectorField

    def eval(self, A):
        return scale(self.f(A), self.V.eval(A))


@dataclass
class SumField(VectorField):
    fields: tuple

    def eval(self, A):
        vals = [f.eval(A) for f in self.fields]
        out = vals[0]
        for v in vals[1:]:
            out = out + v
        return out


def eval_field(V: VectorField, A):
    return V.eval(A)


def dir_deriv(H: Callable, A, a):
    """Exact coefficient of ``t`` in ``H(A + t a)``."""
    return directional(H, A, a)


# ---------------------------------------------------------------- covector fields


class CovectorField:
    """A 1-form on the space of connections."""

    def pair(self, A, c) -> NormScalar:
        raise NotImplementedError

    def __add__(self, other: "CovectorField") -> "CovectorField":
        return SumCovector((self, other))

    def __neg__(self):
        return ScaledCovector(-1, self)

    def __sub__(self, other):
        return SumCovector((self, -other))


@dataclass
class ConstCovector(CovectorField):
    cot: Any  # Cotangent

    def pair(self, A, c):
        return self.cot.pair(c)


@dataclass
class FunctionalCovector(CovectorField):
    """``A -> fn(A)`` for a cotangent-valued function (Chern-Simons, theta^t)."""

    fn: Callable
    name: str = "functional"

    def value(self, A):
        return self.fn(A)

    def pair(self, A, c):
        return self.fn(A).pair(c)


@dataclass
class GraphCovector(CovectorField):
    """``A -> map(A, V(A))`` for a bundle map."""

    map: Callable
    field: VectorField
    name: str = "graph"

    def value(self, A):
        return self.map(A, self.field.eval(A))

    def pair(self, A, c):
        return self.value(A).pair(c)


@dataclass
class ContractedTwoForm(CovectorField):
    """``c -> Phi_A(V(A), c)`` for a pointwise 2-form ``Phi(A, a, b)``."""

    twoform: Callable
    field: VectorField

    def pair(self, A, c):
        return self.twoform(A, self.field.eval(A), c)


@dataclass
class ContractedThreeForm(CovectorField):
    """``c -> K_A(V(A), W(A), c)``; with ``K`` the Cartan form this is ``i_{V^W} K``."""

    threeform: Callable
    V: VectorField
    W: VectorField

    def pair(self, A, c):
        return self.threeform(A, self.V.eval(A), self.W.eval(A), c)


@dataclass
class LieDerivativeCovector(CovectorField):
    """``L_V theta``: ``c -> d<theta|c>[V] + <theta|dV[c]>``."""

    V: VectorField
    theta: CovectorField

    def pair(self, A, c):
        v = self.V.eval(A)
        first = directional(lambda B: self.theta.pair(B, c), A, v)
        return first + self.theta.pair(A, self.V.deriv(A, c))


@dataclass
class ContractedDifferential(CovectorField):
    """``i_W d~theta``: ``c -> d<theta|c>[W] - d<theta|W(A)>[c]``."""

    theta: CovectorField
    W: VectorField

    def pair(self, A, c):
        w = self.W.eval(A)
        first = directional(lambda B: self.theta.pair(B, c), A, w)
        second = directional(lambda B: self.theta.pair(B, w), A, c)
        return first - second


@dataclass
class DifferentialCovector(CovectorField):
    """``d~f`` for a scalar functional ``f`` (NormScalar valued)."""

    f: Callable

    def pair(self, A, c):
        return directional(self.f, A, c)


@dataclass
class SumCovector(CovectorField):
    parts: tuple

    def pair(self, A, c):
        out = self.parts[0].pair(A, c)
        for p in self.parts[1:]:
            out = out + p.pair(A, c)
        return out


@dataclass
class ScaledCovector(CovectorField):
    factor: Any
    theta: CovectorField

    def pair(self, A, c):
        return self.theta.pair(A, c) * self.factor


@dataclass
class ZeroCovector(CovectorField):
    def pair(self, A, c):
        return NormScalar(0)


@dataclass
class FunctionScaledCovector(CovectorField):
    """``f(A) * theta`` for a Gaussian-rational functional ``f``."""

    f: Callable
    theta: CovectorField

    def pair(self, A, c):
        return scale(self.f(A), self.theta.pair(A, c))


# ---------------------------------------------------------------- d~ and Lie derivatives


def pair_field(theta: CovectorField, V: VectorField, A):
    """``<theta|V>`` at ``A``."""
    return theta.pair(A, V.eval(A))


def dtilde1_eval(theta: CovectorField, V: VectorField, W: VectorField, A) -> NormScalar:
    """``V<theta|W> - W<theta|V> - <theta|[V, W]>`` at ``A`` (general fields)."""
    vA, wA = V.eval(A), W.eval(A)
    first = directional(lambda B: theta.pair(B, W.eval(B)), A, vA)
    second = directional(lambda B: theta.pair(B, V.eval(B)), A, wA)
    third = theta.pair(A, bracket_fields(V, W).eval(A))
    return first - second - third


def dtilde1_const(theta: CovectorField, a, b, A) -> NormScalar:
    """Constant-field shortcut ``<d_a theta|b> - <d_b theta|a>``."""
    first = directional(lambda B: theta.pair(B, b), A, a)
    second = directional(lambda B: theta.pair(B, a), A, b)
    return first - second


def dtilde_twoform(theta: CovectorField) -> Callable:
    """The pointwise 2-form ``(A, a, b) -> (d~theta)_A(a, b)``."""
    return lambda A, a, b: dtilde1_const(theta, a, b, A)


def dtilde2_eval(phi: Callable, X: VectorField, Y: VectorField, Z: VectorField, A) -> NormScalar:
    """Full alternating-sum ``d~`` of a pointwise 2-form ``phi(A, a, b)``."""

    def along(U: VectorField, P: VectorField, Q: VectorField):
        return directional(lambda B: phi(B, P.eval(B), Q.eval(B)), A, U.eval(A))

    def at(P, Q):
        return phi(A, P.eval(A), Q.eval(A))

    return (
        along(X, Y, Z)
        - along(Y, X, Z)
        + along(Z, X, Y)
        - at(bracket_fields(X, Y), Z)
        + at(bracket_fields(X, Z), Y)
        - at(bracket_fields(Y, Z), X)
    )


def dtilde2_const(phi: Callable, a, b, c, A) -> NormScalar:
    """Constant-field shortcut ``d_a phi(b,c) - d_b phi(a,c) + d_c phi(a,b)``."""
    return (
        directional(lambda B: phi(B, b, c), A, a)
        - directional(lambda B: phi(B, a, c), A, b)
        + directional(lambda B: phi(B, a, b), A, c)
    )


def lie1_eval(V: VectorField, theta: CovectorField, W: VectorField, A) -> NormScalar:
    """``(L_V theta)(W) = V<theta|W> - <theta|[V, W]>``."""
    first = directional(lambda B: theta.pair(B, W.eval(B)), A, V.eval(A))
    return first - theta.pair(A, bracket_fields(V, W).eval(A))


def lie1_cartan(V: VectorField, theta: CovectorField, W: VectorField, A) -> NormScalar:
    """The same quantity by Cartan's formula ``i_V d~theta + d~(i_V theta)`` on ``W``."""
    contracted = dtilde_twoform(theta)(A, V.eval(A), W.eval(A))
    exact = directional(lambda B: theta.pair(B, V.eval(B)), A, W.eval(A))
    return contracted + exact


def lie2_eval(V: VectorField, phi: Callable, W1: VectorField, W2: VectorField, A) -> NormScalar:
    """``V(phi(W1, W2)) - phi([V, W1], W2) - phi(W1, [V, W2])``."""
    first = directional(lambda B: phi(B, W1.eval(B), W2.eval(B)), A, V.eval(A))
    b1 = bracket_fields(V, W1).eval(A)
    b2 = bracket_fields(V, W2).eval(A)
    return first - phi(A, b1, W2.eval(A)) - phi(A, W1.eval(A), b2)


def evaluation_rule(theta: CovectorField, V: VectorField, A, x) -> tuple[NormScalar, NormScalar]:
    """Both sides of ``d<theta|V>[x] = <d_x theta|V> + <theta|d_x V>``."""
    lhs = directional(lambda B: theta.pair(B, V.eval(B)), A, x)
    vA = V.eval(A)
    rhs = directional(lambda B: theta.pair(B, vA), A, x) + theta.pair(A, V.deriv(A, x))
    return lhs, rhs


__all__ = [
    "AffineField",
    "BracketField",
    "ConstCovector",
    "ContractedDifferential",
    "ContractedThreeForm",
    "ContractedTwoForm",
    "CovectorField",
    "DifferentialCovector",
    "FunctionScaledCovector",
    "FunctionalCovector",
    "GraphCovector",
    "LieDerivativeCovector",
    "Sandwich",
    "ScaledCovector",
    "ScaledField",
    "SumCovector",
    "SumField",
    "VectorField",
    "ZeroCovector",
    "bracket_fields",
    "constant_field",
    "dir_deriv",
    "dtilde1_const",
    "dtilde1_eval",
    "dtilde2_const",
    "dtilde2_eval",
    "dtilde_twoform",
    "eval_field",
    "evaluation_rule",
    "fundamental_field",
    "lie1_cartan",
    "lie1_eval",
    "lie2_eval",
    "pair_field",
]
