"""Exact truncated power series in one variable over the rationals.

A :class:`TruncSeries` of truncation ``T`` stores the coefficients of
``z^0 .. z^T``; everything beyond is unknown, so binary operations keep the
smaller truncation of their operands.  Coefficients are always
:class:`fractions.Fraction`; no floating point value is ever stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import (
    BadConstantTerm,
    NonzeroInnerConstant,
    NotReversible,
    ZeroConstantTerm,
)

_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (optionally with a leading ``-``)."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    value = Fraction(s)
    return value


def format_rational(x: Fraction) -> str:
    return str(x)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or not isinstance(x, Rational):
        raise TypeError(f"exact rational expected, got {type(x).__name__}")
    return Fraction(x)


@dataclass(frozen=True)
class TruncSeries:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(_as_fraction(c) for c in self.coeffs))

    # construction helpers

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, truncation: int) -> TruncSeries:
        """Build a series of the given truncation, padding with zeros or cutting."""
        cs = list(coeffs)[: truncation + 1]
        cs += [0] * (truncation + 1 - len(cs))
        return cls(tuple(cs))

    @classmethod
    def constant(cls, c, truncation: int) -> TruncSeries:
        return cls.from_coeffs([c], truncation)

    @classmethod
    def zero(cls, truncation: int) -> TruncSeries:
        return cls.from_coeffs([], truncation)

    @classmethod
    def one(cls, truncation: int) -> TruncSeries:
        return cls.from_coeffs([1], truncation)

    @classmethod
    def variable(cls, truncation: int) -> TruncSeries:
        """The series ``z``."""
        return cls.from_coeffs([0, 1], truncation)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, truncation: int) -> TruncSeries:
        if truncation > self.truncation:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(self.coeffs[: truncation + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    # arithmetic

    def _coerce(self, other) -> TruncSeries | None:
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, Rational) and not isinstance(other, bool):
            return TruncSeries.constant(other, self.truncation)
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        t = min(self.truncation, b.truncation)
        return TruncSeries(tuple(self.coeffs[k] + b.coeffs[k] for k in range(t + 1)))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        if isinstance(other, Rational) and not isinstance(other, bool):
            c = Fraction(other)
            return TruncSeries(tuple(c * x for x in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, series_inv(other))
        if isinstance(other, Rational) and not isinstance(other, bool):
            c = Fraction(other)
            return TruncSeries(tuple(x / c for x in self.coeffs))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = TruncSeries.one(self.truncation)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __call__(self, inner: TruncSeries) -> TruncSeries:
        return series_compose(self, inner)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            terms.append((c < 0, body))
        tail = f"O(z^{self.truncation + 1})"
        if not terms:
            return tail
        neg, body = terms[0]
        out = ("-" if neg else "") + body
        for neg, body in terms[1:]:
            out += (" - " if neg else " + ") + body
        return f"{out} + {tail}"


def _mul_lists(a: Sequence[Fraction], b: Sequence[Fraction], t: int) -> list[Fraction]:
    out = [Fraction(0)] * (t + 1)
    for i, ai in enumerate(a[: t + 1]):
        if not ai:
            continue
        for j in range(min(len(b), t + 1 - i)):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    t = min(a.truncation, b.truncation)
    return TruncSeries(tuple(_mul_lists(a.coeffs, b.coeffs, t)))


def series_inv(a: TruncSeries) -> TruncSeries:
    a0 = a[0]
    if a0 == 0:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    t = a.truncation
    out = [Fraction(0)] * (t + 1)
    out[0] = 1 / a0
    for k in range(1, t + 1):
        s = sum((a[j] * out[k - j] for j in range(1, k + 1) if a[j]), Fraction(0))
        out[k] = -s / a0
    return TruncSeries(tuple(out))


def series_compose(outer: TruncSeries, inner: TruncSeries) -> TruncSeries:
    """``outer(inner(z))``; requires ``inner(0) == 0``."""
    if inner[0] != 0:
        raise NonzeroInnerConstant("inner series must have zero constant term")
    t = min(outer.truncation, inner.truncation)
    acc = [Fraction(0)] * (t + 1)
    for c in reversed(outer.coeffs[: t + 1]):
        acc = _mul_lists(acc, inner.coeffs, t)
        acc[0] += c
    return TruncSeries(tuple(acc))


def theta_derive(a: TruncSeries) -> TruncSeries:
    """Apply ``z d/dz``."""
    return TruncSeries(tuple(k * c for k, c in enumerate(a.coeffs)))


def series_exp(a: TruncSeries) -> TruncSeries:
    if a[0] != 0:
        raise BadConstantTerm("exp needs a series with zero constant term")
    t = a.truncation
    # theta(e) = theta(a) * e
    out = [Fraction(0)] * (t + 1)
    out[0] = Fraction(1)
    for k in range(1, t + 1):
        s = sum((j * a[j] * out[k - j] for j in range(1, k + 1) if a[j]), Fraction(0))
        out[k] = s / k
    return TruncSeries(tuple(out))


def series_log(a: TruncSeries) -> TruncSeries:
    if a[0] != 1:
        raise BadConstantTerm("log needs a series with constant term 1")
    ratio = theta_derive(a) * series_inv(a)
    return TruncSeries((Fraction(0),) + tuple(ratio[k] / k for k in range(1, a.truncation + 1)))


def series_revert(a: TruncSeries) -> TruncSeries:
    """Compositional inverse: ``b`` with ``a(b(z)) = z = b(a(z))``.

    Newton iteration on ``a(b) - z = 0``; each pass doubles the number of
    correct coefficients.
    """
    t = a.truncation
    if a[0] != 0 or t < 1 or a[1] == 0:
        raise NotReversible("reversion needs a(0) = 0 and a'(0) != 0")
    z = TruncSeries.variable(t)
    deriv = TruncSeries.from_coeffs([k * a[k] for k in range(1, t + 1)], t)
    b = z * (1 / a[1])
    prec = 1
    while prec < t:
        prec = min(2 * prec, t)
        residual = series_compose(a, b) - z
        slope = series_compose(deriv, b)
        b = b - residual * series_inv(slope)
    return b


@dataclass(frozen=True)
class LogSeries:
    """``sum_j parts[j](z) * (log z)^j / j!`` for ``j = 0..3``."""

    parts: tuple[TruncSeries, TruncSeries, TruncSeries, TruncSeries]

    def __post_init__(self):
        parts = tuple(self.parts)
        if len(parts) != 4:
            raise ValueError("a LogSeries has exactly four parts")
        if len({p.truncation for p in parts}) != 1:
            raise ValueError("all parts of a LogSeries must share one truncation")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_parts(cls, parts: Sequence[TruncSeries]) -> LogSeries:
        """Pad ``parts`` with zero series up to four log powers."""
        parts = list(parts)
        t = min(p.truncation for p in parts)
        parts = [p.truncate(t) for p in parts]
        parts += [TruncSeries.zero(t)] * (4 - len(parts))
        return cls(tuple(parts))

    @property
    def truncation(self) -> int:
        return self.parts[0].truncation

    def theta(self) -> LogSeries:
        # theta(f L^j/j!) = theta(f) L^j/j! + f L^(j-1)/(j-1)!
        t = self.truncation
        shifted = list(self.parts[1:]) + [TruncSeries.zero(t)]
        return LogSeries(tuple(theta_derive(p) + s for p, s in zip(self.parts, shifted)))

    def __add__(self, other: LogSeries) -> LogSeries:
        return LogSeries(tuple(a + b for a, b in zip(self.parts, other.parts)))

    def scale(self, factor: TruncSeries) -> LogSeries:
        return LogSeries(tuple(factor * p for p in self.parts))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)
