"""Matrix-valued polynomial differential forms on the unit 4-cube and its boundary.

The bulk region ``X = [0,1]^4`` uses coordinates ``x1 < x2 < x3 < x4``.  The
boundary ``M`` is the union of the eight facets ``x_i = s``; a facet form keeps
the ambient variable names and simply never mentions ``x_i``.  Facet
``(i, s)`` carries orientation sign ``(-1)**(i-1) * (2s-1)``, which is the
sign making ``integrate_X(dexter(g)) == integrate_M(restrict(g))`` exact.

Coefficients are :class:`Poly` objects over Q(i); the real and imaginary
parts are sparse rational polynomials (python-flint ``fmpq_mpoly``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Iterable, Mapping, Sequence

import flint
import numpy as np

from .scalars import GaussRational, bilinear, format_rational, linear, rational

NVARS = 4
_CTX = flint.fmpq_mpoly_ctx.get(("x", NVARS), "lex")
_GENS = _CTX.gens()
_ZERO = _CTX.from_dict({})
_VARNAMES = tuple(f"x{j}" for j in range(NVARS))

DEGREE_CAP = 6


class DegreeCapError(ValueError):
    """An input polynomial exceeds the configured degree cap."""


class RegionError(ValueError):
    """Operands live on different regions, sizes, or degrees."""


def _fq(x) -> flint.fmpq:
    x = rational(x)
    return flint.fmpq(x.numerator, x.denominator)


def _frac(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Poly:
    """Polynomial in x1..x4 with Gaussian-rational coefficients."""

    __slots__ = ("re", "im")

    def __init__(self, re=None, im=None):
        self.re = _ZERO if re is None else re
        self.im = _ZERO if im is None else im

    # construction
    @classmethod
    def constant(cls, c: Any) -> "Poly":
        c = GaussRational.coerce(c)
        return cls(_CTX.constant(_fq(c.re)), _CTX.constant(_fq(c.im)))

    @classmethod
    def var(cls, i: int) -> "Poly":
        """The coordinate ``x_i`` (1-based)."""
        return cls(_GENS[i - 1])

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Any = 1) -> "Poly":
        return cls.from_terms({tuple(exps): coeff})

    @classmethod
    def from_terms(cls, terms: Mapping[Sequence[int], Any]) -> "Poly":
        re, im = {}, {}
        for e, c in terms.items():
            c = GaussRational.coerce(c)
            e = tuple(int(k) for k in e)
            if len(e) != NVARS:
                raise ValueError(f"exponent vector must have {NVARS} entries")
            if c.re:
                re[e] = _fq(c.re)
            if c.im:
                im[e] = _fq(c.im)
        return cls(_CTX.from_dict(re), _CTX.from_dict(im))

    # ring operations
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return Poly(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return Poly(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Poly.constant(other) - self

    def __neg__(self):
        return Poly(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, Poly):
            ar, ai, br, bi = self.re, self.im, other.re, other.im
            a_r, a_i, b_r, b_i = not ar.is_zero(), not ai.is_zero(), not br.is_zero(), not bi.is_zero()
            re = im = _ZERO
            if a_r and b_r:
                re = ar * br
            if a_i and b_i:
                re = re - ai * bi
            if a_r and b_i:
                im = ar * bi
            if a_i and b_r:
                im = im + ai * br
            return Poly(re, im)
        c = GaussRational.coerce(other)
        cr, ci = _fq(c.re), _fq(c.im)
        re = self.re * cr - self.im * ci if ci else self.re * cr
        im = self.re * ci + self.im * cr if ci else self.im * cr
        return Poly(re, im)

    __rmul__ = __mul__

    def conj(self) -> "Poly":
        return Poly(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.constant(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    __hash__ = None

    # calculus
    def derivative(self, i: int) -> "Poly":
        name = _VARNAMES[i - 1]
        return Poly(self.re.derivative(name), self.im.derivative(name))

    def subs(self, i: int, value: Any) -> "Poly":
        """Substitute a rational value for ``x_i``."""
        s = {_VARNAMES[i - 1]: _fq(value)}
        return Poly(self.re.subs(s), self.im.subs(s))

    def total_degree(self) -> int:
        degs = [p.total_degree() for p in (self.re, self.im) if not p.is_zero()]
        return max(degs, default=0)

    def degree_in(self, i: int) -> int:
        degs = [p.degrees()[i - 1] for p in (self.re, self.im) if not p.is_zero()]
        return max(degs, default=0)

    def terms(self) -> dict[tuple[int, ...], GaussRational]:
        out: dict[tuple[int, ...], list] = {}
        for e, c in self.re.terms():
            out.setdefault(tuple(e), [Fraction(0), Fraction(0)])[0] = _frac(c)
        for e, c in self.im.terms():
            out.setdefault(tuple(e), [Fraction(0), Fraction(0)])[1] = _frac(c)
        return {e: GaussRational(*v) for e, v in sorted(out.items())}

    def integrate_unit(self) -> GaussRational:
        """Integral over the unit cube in every variable (absent ones give 1)."""
        return GaussRational(_cube_integral(self.re), _cube_integral(self.im))

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Complex floating-point values at an ``(N, 4)`` array of points."""
        pts = np.asarray(points, dtype=float)
        out = np.zeros(pts.shape[0], dtype=complex)
        for e, c in self.terms().items():
            m = np.ones(pts.shape[0])
            for j, k in enumerate(e):
                if k:
                    m = m * pts[:, j] ** int(k)
            out += complex(float(c.re), float(c.im)) * m
        return out

    def to_text(self) -> str:
        parts = []
        for e, c in self.terms().items():
            parts.append(f"({c})*x^{','.join(map(str, e))}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Poly({self.to_text()})"


def _cube_integral(p) -> Fraction:
    total = flint.fmpq(0)
    for e, c in p.terms():
        w = 1
        for k in e:
            w *= k + 1
        total += c / w
    return _frac(total)


POLY_ZERO = Poly()
POLY_ONE = Poly.constant(1)

Mat = tuple  # n x n tuple of tuples of Poly


def mat_zero(n: int) -> Mat:
    return tuple(tuple(POLY_ZERO for _ in range(n)) for _ in range(n))


def mat_const(entries: Sequence[Sequence[Any]]) -> Mat:
    return tuple(tuple(e if isinstance(e, Poly) else Poly.constant(e) for e in row) for row in entries)


def mat_is_zero(m: Mat) -> bool:
    return all(e.is_zero() for row in m for e in row)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Mat) -> Mat:
    return tuple(tuple(-x for x in r) for r in a)


def mat_scale(a: Mat, c: Any) -> Mat:
    return tuple(tuple(x * c for x in r) for r in a)


def mat_mul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    cols = [[b[k][j] for k in range(n)] for j in range(n)]
    out = []
    for i in range(n):
        row = a[i]
        nz = [(k, row[k]) for k in range(n) if not row[k].is_zero()]
        new = []
        for j in range(n):
            col = cols[j]
            acc = None
            for k, x in nz:
                y = col[k]
                if y.is_zero():
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            new.append(POLY_ZERO if acc is None else acc)
        out.append(tuple(new))
    return tuple(out)


def mat_trace_product(a: Mat, b: Mat) -> Poly:
    """``tr(a @ b)`` without forming the product."""
    n = len(a)
    acc = None
    for i in range(n):
        for k in range(n):
            x, y = a[i][k], b[k][i]
            if x.is_zero() or y.is_zero():
                continue
            t = x * y
            acc = t if acc is None else acc + t
    return POLY_ZERO if acc is None else acc


def mat_map(a: Mat, f) -> Mat:
    return tuple(tuple(f(x) for x in r) for r in a)


def mat_adjoint(a: Mat) -> Mat:
    n = len(a)
    return tuple(tuple(a[j][i].conj() for j in range(n)) for i in range(n))


# ---------------------------------------------------------------- regions


@dataclass(frozen=True)
class Region:
    """The bulk cube (``axis is None``) or the facet ``x_axis = side``."""

    axis: int | None = None
    side: int = 0

    @property
    def is_bulk(self) -> bool:
        return self.axis is None

    @property
    def variables(self) -> tuple[int, ...]:
        if self.axis is None:
            return tuple(range(1, NVARS + 1))
        return tuple(j for j in range(1, NVARS + 1) if j != self.axis)

    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def orientation_sign(self) -> int:
        if self.axis is None:
            return 1
        return (-1) ** (self.axis - 1) * (2 * self.side - 1)

    def __str__(self):
        return "X" if self.axis is None else f"F{self.axis}{self.side}"


BULK = Region()
FACETS = tuple(Region(axis, side) for axis in range(1, NVARS + 1) for side in (0, 1))


@lru_cache(maxsize=None)
def _merge(i: tuple, j: tuple):
    """Sorted union of disjoint index tuples and its shuffle sign (or None)."""
    if set(i) & set(j):
        return None
    seq = list(i + j)
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return tuple(sorted(seq)), (-1) ** inversions


# ---------------------------------------------------------------- forms


class MatForm:
    """A degree-k form on one region with n x n polynomial matrix coefficients."""

    __slots__ = ("region", "degree", "n", "comps")

    def __init__(self, region: Region, degree: int, n: int, comps: Mapping[tuple, Mat] | None = None):
        if degree < 0 or degree > region.dim:
            raise RegionError(f"degree {degree} not allowed on {region}")
        self.region = region
        self.degree = degree
        self.n = n
        clean = {}
        for key, m in (comps or {}).items():
            key = tuple(key)
            if len(key) != degree or list(key) != sorted(set(key)):
                raise RegionError(f"bad component index {key} for degree {degree}")
            if any(v not in region.variables for v in key):
                raise RegionError(f"index {key} not tangent to {region}")
            if len(m) != n or any(len(r) != n for r in m):
                raise RegionError("matrix size mismatch")
            if not mat_is_zero(m):
                clean[key] = m
        self.comps = clean

    # constructors
    @classmethod
    def zero(cls, region: Region, degree: int, n: int) -> "MatForm":
        return cls(region, degree, n, {})

    @classmethod
    def function(cls, region: Region, matrix: Mat) -> "MatForm":
        """A matrix-valued 0-form."""
        matrix = mat_const(matrix)
        return cls(region, 0, len(matrix), {(): matrix})

    @classmethod
    def scalar(cls, region: Region, degree: int, comps: Mapping[tuple, Any]) -> "MatForm":
        """A 1 x 1 (scalar-valued) form from component polynomials."""
        return cls(region, degree, 1, {k: ((v if isinstance(v, Poly) else Poly.constant(v),),) for k, v in comps.items()})

    def zero_like(self) -> "MatForm":
        return MatForm(self.region, self.degree, self.n, {})

    def _check(self, other: "MatForm"):
        if not isinstance(other, MatForm):
            raise RegionError(f"expected MatForm, got {type(other).__name__}")
        if other.region != self.region or other.n != self.n:
            raise RegionError(f"region/size mismatch: {self.region}/{self.n} vs {other.region}/{other.n}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, MatForm):
            return NotImplemented
        self._check(other)
        if other.degree != self.degree:
            raise RegionError("cannot add forms of different degree")
        comps = dict(self.comps)
        for k, m in other.comps.items():
            comps[k] = mat_add(comps[k], m) if k in comps else m
        return MatForm(self.region, self.degree, self.n, comps)

    __radd__ = __add__

    def __neg__(self):
        return MatForm(self.region, self.degree, self.n, {k: mat_neg(m) for k, m in self.comps.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self + (-other)

    def __mul__(self, c):
        """Multiply by an exact number or a scalar polynomial."""
        if isinstance(c, (int, Fraction, GaussRational, Poly)):
            return MatForm(self.region, self.degree, self.n, {k: mat_scale(m, c) for k, m in self.comps.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __xor__(self, other):
        if not isinstance(other, MatForm):
            return NotImplemented
        self._check(other)
        deg = self.degree + other.degree
        if deg > self.region.dim:
            raise RegionError(f"wedge degree {deg} exceeds dimension of {self.region}")
        comps: dict[tuple, Mat] = {}
        for i, a in self.comps.items():
            for j, b in other.comps.items():
                merged = _merge(i, j)
                if merged is None:
                    continue
                key, sign = merged
                prod = mat_mul(a, b)
                if sign < 0:
                    prod = mat_neg(prod)
                comps[key] = mat_add(comps[key], prod) if key in comps else prod
        return MatForm(self.region, deg, self.n, comps)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, MatForm):
            return NotImplemented
        if (self.region, self.degree, self.n) != (other.region, other.degree, other.n):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def max_degree(self) -> int:
        return max((e.total_degree() for m in self.comps.values() for r in m for e in r), default=0)

    def map_entries(self, f) -> "MatForm":
        return MatForm(self.region, self.degree, self.n, {k: mat_map(m, f) for k, m in self.comps.items()})

    def __repr__(self):
        return f"MatForm({self.region}, deg={self.degree}, n={self.n}, comps={len(self.comps)})"


class BoundaryForm:
    """Eight facet forms of a common degree and size, in :data:`FACETS` order."""

    __slots__ = ("facets",)

    def __init__(self, facets: Sequence[MatForm]):
        facets = tuple(facets)
        if len(facets) != len(FACETS):
            raise RegionError("a boundary form needs one form per facet")
        for f, r in zip(facets, FACETS):
            if f.region != r:
                raise RegionError(f"facet form on {f.region} placed at {r}")
        if len({(f.degree, f.n) for f in facets}) != 1:
            raise RegionError("facet forms disagree in degree or size")
        self.facets = facets

    @classmethod
    def zero(cls, degree: int, n: int) -> "BoundaryForm":
        return cls([MatForm.zero(r, degree, n) for r in FACETS])

    @property
    def degree(self) -> int:
        return self.facets[0].degree

    @property
    def n(self) -> int:
        return self.facets[0].n

    def zero_like(self) -> "BoundaryForm":
        return BoundaryForm([f.zero_like() for f in self.facets])

    def _zip(self, other, op):
        if not isinstance(other, BoundaryForm):
            raise RegionError(f"expected BoundaryForm, got {type(other).__name__}")
        return BoundaryForm([op(a, b) for a, b in zip(self.facets, other.facets)])

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, BoundaryForm):
            return NotImplemented
        return self._zip(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return BoundaryForm([-f for f in self.facets])

    def __mul__(self, c):
        if isinstance(c, Poly):
            return BoundaryForm([f * _restrict_poly(c, r) for f, r in zip(self.facets, FACETS)])
        if isinstance(c, (int, Fraction, GaussRational)):
            return BoundaryForm([f * c for f in self.facets])
        return NotImplemented

    __rmul__ = __mul__

    def __xor__(self, other):
        if not isinstance(other, BoundaryForm):
            return NotImplemented
        return self._zip(other, lambda a, b: a ^ b)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.facets)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, BoundaryForm):
            return NotImplemented
        return all(a == b for a, b in zip(self.facets, other.facets))

    __hash__ = None

    def max_degree(self) -> int:
        return max(f.max_degree() for f in self.facets)

    def map_entries(self, f) -> "BoundaryForm":
        return BoundaryForm([g.map_entries(f) for g in self.facets])

    def __repr__(self):
        return f"BoundaryForm(deg={self.degree}, n={self.n})"


AnyForm = MatForm | BoundaryForm


def _restrict_poly(p: Poly, region: Region) -> Poly:
    if region.axis is None:
        return p
    return p.subs(region.axis, region.side)


# ---------------------------------------------------------------- operations


@bilinear
def wedge(alpha, beta):
    """Exterior product with matrix multiplication of coefficients."""
    return alpha ^ beta


@bilinear
def scale(s, alpha):
    """``s * alpha`` for an exact scalar ``s`` (a jet of scalars is allowed)."""
    return alpha * s


def _d_matform(alpha: MatForm) -> MatForm:
    if alpha.degree >= alpha.region.dim:
        raise RegionError(f"d of a top-degree form on {alpha.region}")
    comps: dict[tuple, Mat] = {}
    for key, m in alpha.comps.items():
        for j in alpha.region.variables:
            if j in key:
                continue
            dm = mat_map(m, lambda p: p.derivative(j))
            if mat_is_zero(dm):
                continue
            new, sign = _merge((j,), key)
            if sign < 0:
                dm = mat_neg(dm)
            comps[new] = mat_add(comps[new], dm) if new in comps else dm
    return MatForm(alpha.region, alpha.degree + 1, alpha.n, comps)


@linear
def dexter(alpha):
    """Exterior derivative (componentwise on matrix entries)."""
    if isinstance(alpha, BoundaryForm):
        return BoundaryForm([_d_matform(f) for f in alpha.facets])
    return _d_matform(alpha)


def _restrict_to(alpha: MatForm, region: Region) -> MatForm:
    comps = {}
    for key, m in alpha.comps.items():
        if region.axis in key:
            continue
        comps[key] = mat_map(m, lambda p: p.subs(region.axis, region.side))
    return MatForm(region, alpha.degree, alpha.n, comps)


@linear
def restrict(alpha):
    """Pull a bulk form back to every facet of the boundary."""
    if not isinstance(alpha, MatForm) or not alpha.region.is_bulk:
        raise RegionError("restrict expects a bulk form")
    if alpha.degree > NVARS - 1:
        raise RegionError("no 4-forms on the boundary complex")
    return BoundaryForm([_restrict_to(alpha, r) for r in FACETS])


def _trace_matform(alpha: MatForm) -> MatForm:
    comps = {}
    for key, m in alpha.comps.items():
        t = POLY_ZERO
        for i in range(alpha.n):
            t = t + m[i][i]
        comps[key] = ((t,),)
    return MatForm(alpha.region, alpha.degree, 1, comps)


@linear
def trace_form(alpha):
    """Componentwise matrix trace (a 1 x 1 form)."""
    if isinstance(alpha, BoundaryForm):
        return BoundaryForm([_trace_matform(f) for f in alpha.facets])
    return _trace_matform(alpha)


def _top_integral(alpha: MatForm) -> GaussRational:
    if alpha.degree != alpha.region.dim:
        raise RegionError(f"integrand of degree {alpha.degree} is not top degree on {alpha.region}")
    if alpha.n != 1:
        raise RegionError("integrate a scalar form; apply trace_form first")
    total = GaussRational(0)
    for m in alpha.comps.values():
        total = total + m[0][0].integrate_unit()
    return total


@linear
def integrate_X(alpha):
    """Exact integral of a scalar 4-form over the unit cube."""
    if not isinstance(alpha, MatForm) or not alpha.region.is_bulk:
        raise RegionError("integrate_X expects a bulk form")
    return _top_integral(alpha)


@linear
def integrate_M(alpha):
    """Oriented sum of facet integrals of a scalar boundary 3-form."""
    if not isinstance(alpha, BoundaryForm):
        raise RegionError("integrate_M expects a BoundaryForm")
    total = GaussRational(0)
    for f in alpha.facets:
        v = _top_integral(f)
        total = total + v if f.region.orientation_sign > 0 else total - v
    return total


def _pair_matform(alpha: MatForm, beta: MatForm) -> GaussRational:
    alpha._check(beta)
    if alpha.degree + beta.degree != alpha.region.dim:
        raise RegionError("degrees are not complementary")
    acc = None
    for i, a in alpha.comps.items():
        for j, b in beta.comps.items():
            merged = _merge(i, j)
            if merged is None:
                continue
            t = mat_trace_product(a, b)
            if merged[1] < 0:
                t = -t
            acc = t if acc is None else acc + t
    return GaussRational(0) if acc is None else acc.integrate_unit()


@bilinear
def integral_trace_wedge(alpha, beta):
    """``integral tr(alpha ^ beta)`` over the region of the operands.

    Equivalent to ``integrate_X(trace_form(wedge(alpha, beta)))`` (or the
    boundary version) but only forms the traced top-degree part.
    """
    if isinstance(alpha, BoundaryForm):
        if not isinstance(beta, BoundaryForm):
            raise RegionError("mixed bulk/boundary operands")
        total = GaussRational(0)
        for fa, fb in zip(alpha.facets, beta.facets):
            v = _pair_matform(fa, fb)
            total = total + v if fa.region.orientation_sign > 0 else total - v
        return total
    if not alpha.region.is_bulk:
        raise RegionError("single-facet integrals are not supported; use BoundaryForm")
    return _pair_matform(alpha, beta)


def _restrict_mat(m: Mat, region: Region) -> Mat:
    return mat_map(m, lambda p: _restrict_poly(p, region))


def _const_matrix(m) -> Mat:
    m = getattr(m, "matrix", m)
    return mat_const(m)


@linear
def left_mul(alpha, m):
    """``m . alpha`` for a constant (or polynomial) matrix ``m``."""
    m = _const_matrix(m)
    if isinstance(alpha, BoundaryForm):
        return BoundaryForm([left_mul(f, _restrict_mat(m, f.region)) for f in alpha.facets])
    return MatForm(alpha.region, alpha.degree, alpha.n, {k: mat_mul(m, v) for k, v in alpha.comps.items()})


@linear
def right_mul(alpha, m):
    """``alpha . m`` for a constant (or polynomial) matrix ``m``."""
    m = _const_matrix(m)
    if isinstance(alpha, BoundaryForm):
        return BoundaryForm([right_mul(f, _restrict_mat(m, f.region)) for f in alpha.facets])
    return MatForm(alpha.region, alpha.degree, alpha.n, {k: mat_mul(v, m) for k, v in alpha.comps.items()})


@linear
def poly_mul(alpha, p: Poly):
    """Multiply every coefficient by the scalar polynomial ``p``."""
    return alpha * p


def form_base(x):
    """The underlying form of a (possibly nested) jet."""
    while hasattr(x, "tag") and hasattr(x, "val"):
        x = x.val
    return x


def function_like(like, m) -> AnyForm:
    """The constant matrix-valued 0-form ``m`` on the region of ``like``."""
    base = form_base(like)
    m = _const_matrix(m)
    if isinstance(base, BoundaryForm):
        return BoundaryForm([MatForm.function(r, _restrict_mat(m, r)) for r in FACETS])
    return MatForm.function(base.region, m)


def check_degree(alpha: AnyForm, cap: int | None = None) -> None:
    cap = DEGREE_CAP if cap is None else cap
    if alpha.max_degree() > cap:
        raise DegreeCapError(f"polynomial degree {alpha.max_degree()} exceeds cap {cap}")


def coordinate_form(i: int) -> MatForm:
    """The scalar bulk 1-form ``dx_i``."""
    return MatForm.scalar(BULK, 1, {(i,): 1})


# ---------------------------------------------------------------- text format

FORMAT_VERSION = 1


def _form_lines(f: MatForm) -> list[str]:
    lines = []
    for key in sorted(f.comps):
        m = f.comps[key]
        for r in range(f.n):
            for c in range(f.n):
                for e, coef in m[r][c].terms().items():
                    idx = ",".join(map(str, key)) or "-"
                    lines.append(
                        f"c {idx} {r} {c} {','.join(map(str, e))} "
                        f"{format_rational(coef.re)} {format_rational(coef.im)}"
                    )
    return lines


def to_text(alpha: AnyForm) -> str:
    """Canonical, diffable text for a form (sorted components and monomials)."""
    if isinstance(alpha, BoundaryForm):
        out = [f"boundaryform v{FORMAT_VERSION} degree={alpha.degree} n={alpha.n}"]
        for f in alpha.facets:
            out.append(f"facet axis={f.region.axis} side={f.region.side}")
            out.extend(_form_lines(f))
        return "\n".join(out) + "\n"
    out = [f"matform v{FORMAT_VERSION} region={alpha.region} degree={alpha.degree} n={alpha.n}"]
    out.extend(_form_lines(alpha))
    return "\n".join(out) + "\n"


def _parse_header(line: str) -> dict[str, str]:
    return dict(tok.split("=", 1) for tok in line.split()[2:])


def _region_from_name(name: str) -> Region:
    if name == "X":
        return BULK
    return Region(int(name[1]), int(name[2]))


def _build(region: Region, degree: int, n: int, rows: Iterable[str]) -> MatForm:
    terms: dict[tuple, dict] = {}
    for line in rows:
        _, idx, r, c, e, re, im = line.split()
        key = () if idx == "-" else tuple(int(k) for k in idx.split(","))
        cell = terms.setdefault(key, {}).setdefault((int(r), int(c)), {})
        cell[tuple(int(k) for k in e.split(","))] = GaussRational(Fraction(re), Fraction(im))
    comps = {}
    for key, cells in terms.items():
        comps[key] = tuple(
            tuple(Poly.from_terms(cells.get((r, c), {})) for c in range(n)) for r in range(n)
        )
    return MatForm(region, degree, n, comps)


def from_text(text: str) -> AnyForm:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0]
    kind = head.split()[0]
    meta = _parse_header(head)
    if head.split()[1] != f"v{FORMAT_VERSION}":
        raise ValueError(f"unsupported form format {head.split()[1]}")
    degree, n = int(meta["degree"]), int(meta["n"])
    if kind == "matform":
        return _build(_region_from_name(meta["region"]), degree, n, lines[1:])
    if kind != "boundaryform":
        raise ValueError(f"unknown form kind {kind!r}")
    facets, current, rows = [], None, []
    for ln in lines[1:] + ["facet end"]:
        if ln.startswith("facet"):
            if current is not None:
                facets.append(_build(current, degree, n, rows))
            if ln != "facet end":
                m = _parse_header("_ _ " + ln.split(" ", 1)[1])
                current, rows = Region(int(m["axis"]), int(m["side"])), []
        else:
            rows.append(ln)
    return BoundaryForm(facets)


__all__ = [
    "BULK",
    "FACETS",
    "BoundaryForm",
    "DegreeCapError",
    "MatForm",
    "Poly",
    "Region",
    "RegionError",
    "check_degree",
    "coordinate_form",
    "dexter",
    "from_text",
    "integral_trace_wedge",
    "integrate_M",
    "integrate_X",
    "left_mul",
    "poly_mul",
    "right_mul",
    "function_like",
    "form_base",
    "restrict",
    "scale",
    "to_text",
    "trace_form",
    "wedge",
]
