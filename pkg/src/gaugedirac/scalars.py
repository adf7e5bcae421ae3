"""Exact scalars and first-order jets.

Everything here is immutable.  ``Rational`` is :class:`fractions.Fraction`;
complex values live in :class:`GaussRational`, and every pairing or form
integral that carries a ``pi**-3`` normalisation is a :class:`NormScalar`.

:class:`Jet` is a first-order jet ``val + t*der`` over any ring-like value
(forms, matrices, scalars, or other jets).  Each jet carries a tag; a jet
built on top of values that already contain jets always receives a larger
tag, which is how nested (second-order) derivatives stay unambiguous.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import total_ordering
from typing import Any, Callable

Rational = Fraction


def rational(x: Any) -> Fraction:
    """Coerce ints, strings like ``"7/3"``, Fractions and flint fmpq values."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "p") and hasattr(x, "q"):  # flint.fmpq
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class GaussRational:
    """An element ``re + i*im`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        object.__setattr__(self, "re", rational(re))
        object.__setattr__(self, "im", rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    @classmethod
    def coerce(cls, x: Any) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, complex):
            raise TypeError("complex floats are not exact")
        return cls(x, 0)

    def __add__(self, other):
        o = _gr_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _gr_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _gr_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __mul__(self, other):
        o = _gr_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _gr_or_none(other)
        if o is None:
            return NotImplemented
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussRational(o.re / n, -o.im / n)

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _gr_or_none(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRational({self})"

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        return f"{format_rational(self.re)}{'+' if self.im >= 0 else '-'}{format_rational(abs(self.im))}i"

    @classmethod
    def parse(cls, text: str) -> "GaussRational":
        text = text.strip()
        if not text.endswith("i"):
            return cls(Fraction(text))
        body = text[:-1]
        # split at the sign that separates real and imaginary parts
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] != "/":
                return cls(Fraction(body[:pos]), Fraction(body[pos:]))
        return cls(0, Fraction(body))


I = GaussRational(0, 1)


def _gr_or_none(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRational(x)
    return None


def gr_arith(x: GaussRational, y: GaussRational | None, op: str) -> GaussRational:
    """Field arithmetic on Q(i) by operation name (``add``, ``mul``, ``conj``)."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "conj":
        return x.conj()
    raise ValueError(f"unknown operation {op!r}")


@total_ordering
class NormScalar:
    """A value ``value * pi**-3`` with ``value`` in Q(i).

    Only NormScalars add to NormScalars; multiplication by an exact number
    keeps the unit.  ``0`` is accepted in sums so ``sum()`` works.
    """

    __slots__ = ("value",)

    def __init__(self, value: Any = 0):
        object.__setattr__(self, "value", GaussRational.coerce(value))

    def __setattr__(self, name, value):
        raise AttributeError("NormScalar is immutable")

    def __add__(self, other):
        if isinstance(other, NormScalar):
            return NormScalar(self.value + other.value)
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, NormScalar):
            return NormScalar(self.value - other.value)
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int) and other == 0:
            return -self
        return NotImplemented

    def __neg__(self):
        return NormScalar(-self.value)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return NormScalar(self.value * other)
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, NormScalar):
            return self.value == other.value
        if isinstance(other, int) and other == 0:
            return not self.value
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, NormScalar):
            return NotImplemented
        if self.value.im or other.value.im:
            raise TypeError("complex NormScalars are unordered")
        return self.value.re < other.value.re

    def __hash__(self):
        return hash(("norm", self.value))

    def __repr__(self):
        return f"NormScalar({self.value} pi^-3)"

    def __str__(self):
        return str(self.value)

    def zero_like(self):
        return NormScalar(0)


# ---------------------------------------------------------------- jets

_tags = itertools.count(1)


class Jet:
    """First-order jet ``val + t*der``; ``der is None`` encodes an exact zero."""

    __slots__ = ("tag", "val", "der")

    def __init__(self, tag: int, val: Any, der: Any = None):
        self.tag = tag
        self.val = val
        self.der = der

    # arithmetic delegates to the components; mixed tags nest by recency
    def __add__(self, other):
        return _jet_add(self, other)

    def __radd__(self, other):
        return _jet_add(other, self)

    def __sub__(self, other):
        return _jet_add(self, -other)

    def __rsub__(self, other):
        return _jet_add(other, -self)

    def __neg__(self):
        return Jet(self.tag, -self.val, None if self.der is None else -self.der)

    def __mul__(self, other):
        return bilinear(_mul)(self, other)

    def __rmul__(self, other):
        return bilinear(_mul)(other, self)

    def __xor__(self, other):
        return bilinear(_xor)(self, other)

    def __rxor__(self, other):
        return bilinear(_xor)(other, self)

    def __matmul__(self, other):
        return bilinear(_matmul)(self, other)

    def __rmatmul__(self, other):
        return bilinear(_matmul)(other, self)

    def __repr__(self):
        return f"Jet(tag={self.tag}, val={self.val!r}, der={self.der!r})"


def _mul(x, y):
    return x * y


def _xor(x, y):
    return x ^ y


def _matmul(x, y):
    return x @ y


def _top_tag(*xs) -> int:
    return max((x.tag for x in xs if isinstance(x, Jet)), default=0)


def _split(x, tag):
    """Components of ``x`` relative to ``tag`` (constants have zero der)."""
    if isinstance(x, Jet) and x.tag == tag:
        return x.val, x.der
    return x, None


def _jet_add(x, y):
    tag = _top_tag(x, y)
    xv, xd = _split(x, tag)
    yv, yd = _split(y, tag)
    if xd is None:
        der = yd
    elif yd is None:
        der = xd
    else:
        der = xd + yd
    return Jet(tag, xv + yv, der)


def linear(f: Callable) -> Callable:
    """Lift a function linear in its first argument to act on jets."""

    def lifted(x, *args, **kwargs):
        if isinstance(x, Jet):
            val = lifted(x.val, *args, **kwargs)
            der = None if x.der is None else lifted(x.der, *args, **kwargs)
            return Jet(x.tag, val, der)
        return f(x, *args, **kwargs)

    lifted.__name__ = f.__name__
    lifted.__doc__ = f.__doc__
    lifted.__wrapped__ = f
    return lifted


def bilinear(f: Callable) -> Callable:
    """Lift a bilinear function of two arguments to act on jets (Leibniz rule)."""

    def lifted(x, y, *args, **kwargs):
        if not (isinstance(x, Jet) or isinstance(y, Jet)):
            return f(x, y, *args, **kwargs)
        tag = _top_tag(x, y)
        xv, xd = _split(x, tag)
        yv, yd = _split(y, tag)
        val = lifted(xv, yv, *args, **kwargs)
        der = None
        if yd is not None:
            der = lifted(xv, yd, *args, **kwargs)
        if xd is not None:
            t = lifted(xd, yv, *args, **kwargs)
            der = t if der is None else der + t
        return Jet(tag, val, der)

    lifted.__name__ = f.__name__
    lifted.__doc__ = f.__doc__
    lifted.__wrapped__ = f
    return lifted


def jet_lift(r: Any) -> Jet:
    """``(r, 0)`` under a fresh tag."""
    return Jet(next(_tags), r, None)


def jet_var(r: Any, d: Any) -> Jet:
    """``(r, d)`` under a fresh tag, newer than any tag inside r or d."""
    return Jet(next(_tags), r, d)


def zero_like(x: Any) -> Any:
    while isinstance(x, Jet):
        x = x.val
    if hasattr(x, "zero_like"):
        return x.zero_like()
    if isinstance(x, GaussRational):
        return GaussRational(0)
    return 0 * x


def derivative(result: Any, var: Jet) -> Any:
    """The coefficient of ``t`` in ``result`` for the jet variable ``var``."""
    if isinstance(result, Jet) and result.tag == var.tag:
        return zero_like(result.val) if result.der is None else result.der
    return zero_like(result)


def value(result: Any, var: Jet) -> Any:
    """The ``t = 0`` part of ``result`` for the jet variable ``var``."""
    if isinstance(result, Jet) and result.tag == var.tag:
        return result.val
    return result


def directional(f: Callable[[Any], Any], x: Any, d: Any) -> Any:
    """Exact derivative of ``f`` at ``x`` along ``d``."""
    v = jet_var(x, d)
    return derivative(f(v), v)
