"""The Lie algebra su(n) with Gaussian-rational entries.

The basis is the usual Gell-Mann pattern with irrational normalisations
dropped: antisymmetric real generators ``e_jk - e_kj``, symmetric imaginary
generators ``i(e_jk + e_kj)`` and diagonal generators
``i * diag(1, ..., 1, -l, 0, ..., 0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np
import scipy.linalg

from .scalars import GaussRational, I

Matrix = tuple  # tuple of tuples of GaussRational


def _coerce_matrix(entries: Sequence[Sequence[Any]]) -> Matrix:
    rows = tuple(tuple(GaussRational.coerce(e) for e in row) for row in entries)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("expected a square matrix")
    return rows


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    zero = GaussRational(0)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                x, y = a[i][k], b[k][j]
                if x and y:
                    acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def adjoint(a: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(a[j][i].conj() for j in range(n)) for i in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(GaussRational(1 if i == j else 0) for j in range(n)) for i in range(n))


def is_unitary(g: Matrix) -> bool:
    g = _coerce_matrix(g)
    return matmul(adjoint(g), g) == identity(len(g))


def inverse(a: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination over Q(i)."""
    n = len(a)
    m = [list(a[i]) + list(identity(n)[i]) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


@dataclass(frozen=True)
class LieElement:
    """A skew-Hermitian traceless matrix over Q(i)."""

    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", _coerce_matrix(self.matrix))
        if not is_su_matrix(self.matrix):
            raise ValueError("matrix is not skew-Hermitian and traceless")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def zero(cls, n: int) -> "LieElement":
        return cls(tuple(tuple(0 for _ in range(n)) for _ in range(n)))

    def __add__(self, other: "LieElement") -> "LieElement":
        return LieElement(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __sub__(self, other: "LieElement") -> "LieElement":
        return LieElement(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __neg__(self) -> "LieElement":
        return LieElement(tuple(tuple(-x for x in r) for r in self.matrix))

    def scale(self, c: Any) -> "LieElement":
        c = Fraction(c) if not isinstance(c, Fraction) else c
        return LieElement(tuple(tuple(x * c for x in r) for r in self.matrix))

    def is_zero(self) -> bool:
        return not any(x for r in self.matrix for x in r)

    def to_complex(self) -> np.ndarray:
        return np.array([[complex(float(x.re), float(x.im)) for x in r] for r in self.matrix])


def is_su_matrix(m: Matrix) -> bool:
    n = len(m)
    trace = sum((m[i][i] for i in range(n)), GaussRational(0))
    if trace:
        return False
    return all(m[i][j] == -m[j][i].conj() for i in range(n) for j in range(n))


def is_su(x: Any) -> bool:
    if isinstance(x, LieElement):
        return is_su_matrix(x.matrix)
    return is_su_matrix(_coerce_matrix(x))


def bracket(x: LieElement, y: LieElement) -> LieElement:
    if x.n != y.n:
        raise ValueError(f"size mismatch: {x.n} vs {y.n}")
    xy, yx = matmul(x.matrix, y.matrix), matmul(y.matrix, x.matrix)
    return LieElement(tuple(tuple(p - q for p, q in zip(r, s)) for r, s in zip(xy, yx)))


def trace_product(*elements: LieElement) -> GaussRational:
    """``tr(x1 x2 ... xk)``."""
    m = elements[0].matrix
    for e in elements[1:]:
        m = matmul(m, e.matrix)
    return sum((m[i][i] for i in range(len(m))), GaussRational(0))


def su_basis(n: int) -> tuple[LieElement, ...]:
    if n < 2:
        raise ValueError("su(n) needs n >= 2")

    def unit(entries):
        m = [[GaussRational(0)] * n for _ in range(n)]
        for (i, j), v in entries.items():
            m[i][j] = v
        return LieElement(tuple(tuple(r) for r in m))

    basis = []
    for level in range(1, n):
        diag = {(k, k): I for k in range(level)}
        diag[(level, level)] = I * (-level)
        basis.append(unit(diag))
    for j in range(n):
        for k in range(j + 1, n):
            basis.append(unit({(j, k): GaussRational(1), (k, j): GaussRational(-1)}))
            basis.append(unit({(j, k): I, (k, j): I}))
    return tuple(basis)


def su_coordinates(x: LieElement) -> tuple[Fraction, ...]:
    """Real coefficients of ``x`` in :func:`su_basis` order."""
    n, m = x.n, x.matrix
    coords = []
    # diagonal: solve the triangular system from the last level down
    diag = [m[k][k].im for k in range(n)]
    levels = [Fraction(0)] * (n - 1)
    for level in range(n - 1, 0, -1):
        # entry (level, level) gets -level * c_level + sum_{l > level} c_l
        tail = sum(levels[level:], Fraction(0))
        levels[level - 1] = (tail - diag[level]) / level
    coords.extend(levels)
    for j in range(n):
        for k in range(j + 1, n):
            coords.append(m[j][k].re)
            coords.append(m[j][k].im)
    return tuple(coords)


def from_coordinates(n: int, coords: Sequence[Any]) -> LieElement:
    basis = su_basis(n)
    if len(coords) != len(basis):
        raise ValueError("wrong number of coordinates")
    out = LieElement.zero(n)
    for c, b in zip(coords, basis):
        if c:
            out = out + b.scale(c)
    return out


def _draw_rational(rng: np.random.Generator, bound: int, denominators: Sequence[int]) -> Fraction:
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.choice(denominators)))


def sample_su(n: int, seed: Any, coeff_bound: int = 3, denominators: Sequence[int] = (1, 2, 3),
              density: float = 0.6) -> LieElement:
    """Random rational combination of :func:`su_basis`; never the zero element.

    ``seed`` may be an int, a ``numpy.random.Generator`` or a SeedSequence.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    basis = su_basis(n)
    while True:
        coords = [
            _draw_rational(rng, coeff_bound, denominators) if rng.random() < density else Fraction(0)
            for _ in basis
        ]
        if any(coords):
            return from_coordinates(n, coords)


def cayley_unitary(x: LieElement) -> Matrix:
    """``(1 - x)(1 + x)^{-1}``: an exactly unitary matrix with Q(i) entries."""
    n = x.n
    one = identity(n)
    plus = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(one, x.matrix))
    minus = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(one, x.matrix))
    return matmul(minus, inverse(plus))


def numeric_exp(x: LieElement | np.ndarray, scale: float = 1.0) -> np.ndarray:
    """``expm(scale * x)`` in double precision."""
    m = x.to_complex() if isinstance(x, LieElement) else np.asarray(x, dtype=complex)
    return scipy.linalg.expm(scale * m)


def adjoint_action(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``g^{-1} x g`` for a unitary float matrix."""
    return g.conj().T @ x @ g
