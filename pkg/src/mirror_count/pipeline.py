"""Mirror map, canonical Yukawa coupling and instanton extraction (one modulus).

All factors of ``2 pi i`` are absorbed into the coordinate ``q`` and the
derivation ``theta_q = q d/dq``, so every coefficient stays rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import NonIntegralInstanton, NotMUM, SingularYukawaODE
from .picard_fuchs import FrobeniusBasis, ThetaOperator, check_mum_at_origin, frobenius_mum
from .series import (
    TruncSeries,
    series_compose,
    series_exp,
    series_inv,
    series_revert,
    theta_derive,
)


@dataclass(frozen=True)
class MirrorMap:
    """``q = z * q_of_z(z)`` and ``z = q * z_of_q(q)``."""

    q_of_z: TruncSeries
    z_of_q: TruncSeries

    @property
    def truncation(self) -> int:
        return self.q_of_z.truncation

    def q_series(self) -> TruncSeries:
        """``q(z)`` itself, known through ``z^(T+1)``."""
        return _shift(self.q_of_z)

    def z_series(self) -> TruncSeries:
        return _shift(self.z_of_q)


def _shift(g: TruncSeries) -> TruncSeries:
    return TruncSeries((Fraction(0),) + g.coeffs)


def _unshift(s: TruncSeries) -> TruncSeries:
    return TruncSeries(s.coeffs[1:])


def build_mirror_map(basis: FrobeniusBasis, q_rescale=1) -> MirrorMap:
    """``q = c * z * exp(f1/f0)``, with ``c = q_rescale`` (normally 1)."""
    c = Fraction(q_rescale)
    if c == 0:
        raise ValueError("q_rescale must be nonzero")
    g = series_exp(basis.f1 * series_inv(basis.f0)) * c
    z_full = series_revert(_shift(g))
    return MirrorMap(g, _unshift(z_full))


@dataclass(frozen=True)
class CouplingSeries:
    """``K(q) = kappa + corrections(q)``."""

    kappa: Fraction
    corrections: TruncSeries

    def __post_init__(self):
        object.__setattr__(self, "kappa", Fraction(self.kappa))
        if self.corrections[0] != 0:
            raise ValueError("corrections must have zero constant term")

    @property
    def truncation(self) -> int:
        return self.corrections.truncation

    def series(self) -> TruncSeries:
        return self.corrections + self.kappa

    @classmethod
    def from_series(cls, k: TruncSeries) -> CouplingSeries:
        return cls(k[0], k - k[0])


def algebraic_yukawa(op: ThetaOperator, T: int) -> TruncSeries:
    """Normalized Yukawa coupling ``What(z)`` in the algebraic gauge.

    In ``d/dz`` form the operator has ``a_4 = z^4 P_4`` and
    ``a_3 = z^3 (P_3 + 6 P_4)``; ``W' = -(a_3 / 2 a_4) W`` then gives
    ``W = z^-3 What`` with ``theta(What) / What = -P_3 / (2 P_4)``.
    """
    if not check_mum_at_origin(op):
        raise NotMUM("operator is not maximally unipotent at z = 0")
    p4 = TruncSeries.from_coeffs(op.P(4), T)
    p3 = TruncSeries.from_coeffs(op.P(3), T)
    if p4[0] == 0:
        raise SingularYukawaODE("P_4(0) = 0: leading coefficient degenerates at z = 0")
    rate = -(p3 * series_inv(p4)) / 2
    if rate[0] != 0:
        raise SingularYukawaODE("P_3(0) != 0: Yukawa ODE has a non-integrable pole")
    # What = exp(integral of rate dz/z)
    log_w = TruncSeries((Fraction(0),) + tuple(rate[k] / k for k in range(1, T + 1)))
    return series_exp(log_w)


def canonical_coupling(
    op: ThetaOperator,
    basis: FrobeniusBasis,
    mmap: MirrorMap,
    kappa,
    T: int,
) -> CouplingSeries:
    """Yukawa coupling in the canonical coordinate and gauge.

    ``K(q) = kappa * What(z) / (f0(z)^2 * (1 + theta(f1/f0))^3)`` at
    ``z = z(q)``; the denominator factor equals ``(theta_q z / z)^-3``.
    """
    kappa = Fraction(kappa)
    if kappa == 0:
        raise ValueError("kappa must be nonzero")
    T = min(T, basis.truncation, mmap.truncation)
    f0 = basis.f0.truncate(T)
    f1 = basis.f1.truncate(T)
    w_hat = algebraic_yukawa(op, T)
    dlogq = theta_derive(f1 * series_inv(f0)) + 1
    bracket = w_hat * series_inv(f0 * f0 * dlogq**3)
    z_q = mmap.z_series().truncate(T)
    k = series_compose(bracket, z_q) * kappa
    return CouplingSeries.from_series(k)


@dataclass(frozen=True)
class PredictionTable:
    """Instanton numbers ``n_d`` for ``d = 1 .. max_degree``.

    When every ``n_d`` vanishes the entry list is empty.  Entries whose
    value is not an integer are kept as fractions and listed in
    ``diagnostics``.
    """

    kappa: Fraction
    entries: tuple[tuple[int, int | Fraction], ...]
    max_degree: int
    diagnostics: tuple[NonIntegralInstanton, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "kappa", Fraction(self.kappa))
        entries = tuple((int(d), _normalize(n)) for d, n in self.entries)
        degrees = [d for d, _ in entries]
        if degrees and degrees != list(range(1, len(degrees) + 1)):
            raise ValueError("degrees must run 1, 2, 3, ...")
        object.__setattr__(self, "entries", entries)
        if not self.diagnostics:
            diags = tuple(
                NonIntegralInstanton(d, n) for d, n in entries if isinstance(n, Fraction)
            )
            object.__setattr__(self, "diagnostics", diags)

    @classmethod
    def from_values(cls, kappa, values: dict[int, object] | Iterable, max_degree: int | None = None):
        """Build from ``{d: n_d}``; missing degrees count as zero."""
        values = dict(values)
        top = max(values, default=0) if max_degree is None else max_degree
        entries = [(d, values.get(d, 0)) for d in range(1, top + 1)]
        if all(n == 0 for _, n in entries):
            entries = []
        return cls(kappa, tuple(entries), top)

    @property
    def integral(self) -> bool:
        return not self.diagnostics

    def n(self, d: int):
        for deg, val in self.entries:
            if deg == d:
                return val
        return 0

    def as_dict(self) -> dict[int, int | Fraction]:
        return dict(self.entries)


def _normalize(n):
    n = Fraction(n)
    return n.numerator if n.denominator == 1 else n


def multiple_cover_sum(table: PredictionTable, T: int) -> CouplingSeries:
    """``kappa + sum_d n_d d^3 q^d / (1 - q^d)`` through ``q^T``."""
    coeffs = [Fraction(0)] * (T + 1)
    for d, n in table.entries:
        if not n:
            continue
        weight = Fraction(n) * d**3
        for k in range(d, T + 1, d):
            coeffs[k] += weight
    return CouplingSeries(table.kappa, TruncSeries(tuple(coeffs)))


def extract_instantons(k: CouplingSeries, max_degree: int) -> PredictionTable:
    """Invert the multiple cover formula degree by degree."""
    if max_degree > k.truncation:
        raise ValueError(f"max_degree {max_degree} exceeds truncation {k.truncation}")
    n: dict[int, Fraction] = {}
    for d in range(1, max_degree + 1):
        c = k.corrections[d]
        covered = sum((e**3 * n[e] for e in range(1, d) if d % e == 0), Fraction(0))
        n[d] = (c - covered) / d**3
    return PredictionTable.from_values(k.kappa, n, max_degree)


def predict(op: ThetaOperator, kappa, truncation: int, max_degree: int, q_rescale=1) -> PredictionTable:
    """The whole recipe: periods, mirror map, coupling, instanton numbers."""
    basis = frobenius_mum(op, truncation)
    mmap = build_mirror_map(basis, q_rescale)
    coupling = canonical_coupling(op, basis, mmap, kappa, truncation)
    return extract_instantons(coupling, max_degree)
