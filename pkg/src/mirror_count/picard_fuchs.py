"""Order-4 Picard-Fuchs operators in theta form and their Frobenius basis.

An operator is ``L = sum_i P_i(z) theta^i`` with ``theta = z d/dz`` and
polynomial coefficients ``P_0 .. P_4``.  Only a maximally unipotent point
at ``z = 0`` is supported: the indicial polynomial must be ``P_4(0) s^4``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import IndicialDegeneracy, NotMUM, ParseError
from .series import LogSeries, TruncSeries, parse_rational

ORDER = 4
JET = 4  # sigma-jets are kept modulo sigma^4

Poly = tuple[Fraction, ...]


def _trim(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(a: Sequence, b: Sequence) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


@dataclass(frozen=True)
class ThetaOperator:
    """``coeff_polys[i]`` is ``P_i(z)``, low-to-high in ``z``."""

    coeff_polys: tuple[Poly, Poly, Poly, Poly, Poly]

    def __post_init__(self):
        polys = tuple(_trim(p) for p in self.coeff_polys)
        if len(polys) != ORDER + 1:
            raise ValueError("a theta operator needs exactly five coefficient polynomials")
        if not polys[ORDER]:
            raise ValueError("the theta^4 coefficient must be nonzero")
        object.__setattr__(self, "coeff_polys", polys)

    @classmethod
    def from_theta_polys(cls, by_z_power: Sequence[Sequence]) -> ThetaOperator:
        """Build from ``Q_m(theta)`` polynomials, so that ``L = sum_m z^m Q_m(theta)``.

        ``by_z_power[m][i]`` is the coefficient of ``z^m theta^i``.
        """
        polys = [[Fraction(0)] * len(by_z_power) for _ in range(ORDER + 1)]
        for m, q in enumerate(by_z_power):
            if len(_trim(q)) > ORDER + 1:
                raise ValueError("theta degree above 4")
            for i, c in enumerate(q):
                polys[i][m] = Fraction(c)
        return cls(tuple(tuple(p) for p in polys))

    @property
    def z_degree(self) -> int:
        return max(len(p) for p in self.coeff_polys) - 1

    def theta_poly(self, m: int) -> Poly:
        """``Q_m(s)``: the coefficient of ``z^m`` as a polynomial in theta."""
        return tuple(p[m] if m < len(p) else Fraction(0) for p in self.coeff_polys)

    def P(self, i: int) -> Poly:
        return self.coeff_polys[i]

    def to_text(self) -> str:
        lines = []
        for i, p in enumerate(self.coeff_polys):
            if p:
                lines.append(f"theta{i} : " + ", ".join(str(c) for c in p))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> ThetaOperator:
        """Parse ``theta<i> : c0, c1, ...`` lines (blank lines and ``#`` comments ignored)."""
        polys: dict[int, Poly] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            power, coeffs = parse_operator_line(line, lineno)
            if power in polys:
                raise ParseError(f"duplicate theta{power} line", lineno)
            polys[power] = coeffs
        return operator_from_lines(polys)


_OP_LINE = re.compile(r"^theta(\d+)\s*:(.*)$")


def parse_operator_line(line: str, lineno: int | None = None, offset: int = 0) -> tuple[int, Poly]:
    m = _OP_LINE.match(line)
    if not m:
        raise ParseError(f"expected 'theta<i> : c0, c1, ...', got {line!r}", lineno, offset + 1)
    power = int(m.group(1))
    if power > ORDER:
        raise ParseError(f"theta{power}: operators of order above {ORDER} are unsupported", lineno, offset + 6)
    body = m.group(2)
    coeffs = []
    col = offset + m.start(2) + 1
    for piece in body.split(","):
        try:
            coeffs.append(parse_rational(piece))
        except ValueError:
            raise ParseError(f"bad rational literal {piece.strip()!r}", lineno, col) from None
        col += len(piece) + 1
    return power, tuple(coeffs)


def operator_from_lines(polys: dict[int, Poly]) -> ThetaOperator:
    if not _trim(polys.get(ORDER, ())):
        raise ParseError(f"operator needs a nonzero theta{ORDER} line")
    return ThetaOperator(tuple(polys.get(i, ()) for i in range(ORDER + 1)))


def theta4_operator() -> ThetaOperator:
    """The constant-coefficient operator ``theta^4``."""
    return ThetaOperator(((), (), (), (), (1,)))


def quintic_operator() -> ThetaOperator:
    """``theta^4 - 5 z (5 theta + 1)(5 theta + 2)(5 theta + 3)(5 theta + 4)``."""
    q1: Poly = (Fraction(1),)
    for k in range(1, 5):
        q1 = poly_mul(q1, (k, 5))
    q1 = tuple(-5 * c for c in q1)
    return ThetaOperator.from_theta_polys([(0, 0, 0, 0, 1), q1])


def check_mum_at_origin(op: ThetaOperator) -> bool:
    polys = op.coeff_polys
    return all(not p or p[0] == 0 for p in polys[:ORDER]) and bool(polys[ORDER]) and polys[ORDER][0] != 0


# sigma-jets: lists of length JET holding the Taylor coefficients in sigma


def _jet_mul(a, b):
    out = [Fraction(0)] * JET
    for i in range(JET):
        if a[i]:
            for j in range(JET - i):
                out[i + j] += a[i] * b[j]
    return out


def _jet_inv(a):
    out = [Fraction(0)] * JET
    out[0] = 1 / a[0]
    for k in range(1, JET):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, k + 1)) / a[0]
    return out


def _eval_shifted(q: Poly, n: int):
    """Jet of ``q(n + sigma)``."""
    out = [Fraction(0)] * JET
    for i, c in enumerate(q):
        if not c:
            continue
        for j in range(min(i, JET - 1) + 1):
            out[j] += c * comb(i, j) * Fraction(n) ** (i - j)
    return out


@dataclass(frozen=True)
class FrobeniusBasis:
    f0: TruncSeries
    f1: TruncSeries
    f2: TruncSeries
    f3: TruncSeries

    @property
    def truncation(self) -> int:
        return self.f0.truncation

    def parts(self) -> tuple[TruncSeries, ...]:
        return (self.f0, self.f1, self.f2, self.f3)

    def log_solution(self, k: int) -> LogSeries:
        """``y_k = sum_{j<=k} (log z)^j / j! * f_{k-j}``."""
        fs = self.parts()
        return LogSeries.from_parts([fs[k - j] for j in range(k + 1)])

    def log_solutions(self) -> list[LogSeries]:
        return [self.log_solution(k) for k in range(ORDER)]


def frobenius_mum(op: ThetaOperator, T: int) -> FrobeniusBasis:
    """Frobenius basis at the maximally unipotent point ``z = 0``.

    Solves ``L[sum a_n(sigma) z^(n+sigma)] = 0`` for ``n >= 1`` with
    ``a_0 = 1``, working with jets of ``a_n`` modulo ``sigma^4``;
    ``f_j`` collects the ``sigma^j`` coefficients.
    """
    if not check_mum_at_origin(op):
        raise NotMUM("operator is not maximally unipotent at z = 0")
    if T < 1:
        raise ValueError("truncation must be at least 1")
    qs = [op.theta_poly(m) for m in range(op.z_degree + 1)]
    a = [[Fraction(1), Fraction(0), Fraction(0), Fraction(0)]]
    for n in range(1, T + 1):
        denom = _eval_shifted(qs[0], n)
        if denom[0] == 0:
            raise IndicialDegeneracy(f"indicial polynomial vanishes at n = {n}")
        acc = [Fraction(0)] * JET
        for m in range(1, min(n, len(qs) - 1) + 1):
            term = _jet_mul(_eval_shifted(qs[m], n - m), a[n - m])
            acc = [x + y for x, y in zip(acc, term)]
        a.append([-x for x in _jet_mul(acc, _jet_inv(denom))])
    fs = [TruncSeries(tuple(a[n][j] for n in range(T + 1))) for j in range(JET)]
    return FrobeniusBasis(*fs)


def _poly_series(p: Poly, t: int) -> TruncSeries:
    return TruncSeries.from_coeffs(p, t)


def apply_operator(op: ThetaOperator, y: LogSeries) -> LogSeries:
    t = y.truncation
    total = None
    power = y
    for i in range(ORDER + 1):
        if i:
            power = power.theta()
        p = op.P(i)
        if not p:
            continue
        term = power.scale(_poly_series(p, t))
        total = term if total is None else total + term
    return total


def verify_annihilates(op: ThetaOperator, y: LogSeries) -> bool:
    return apply_operator(op, y).is_zero()
