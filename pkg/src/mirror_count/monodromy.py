"""Integral monodromy laboratory.

Reproduces the one-parameter monodromy computations: conjugating a
monodromy matrix into normal form, the monodromy around infinity, its
nilpotent logarithm, the cube test for the triple intersection number,
and the general maximally-unipotent classifier for several commuting
nilpotent logarithms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    MatrixError,
    NotNilpotent,
    NotUnimodular,
    NotUnipotent,
    ParseError,
    WrongShape,
)
from .linalg import IntMatrix, RatMatrix

# identity plus a single 1 at row 2, column 4
T_FIXED = IntMatrix.of([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]])


def _require_unimodular(m: RatMatrix, what: str):
    if not m.is_integral() or abs(m.det()) != 1:
        raise NotUnimodular(f"{what} is not invertible over the integers")


def conjugate(a: RatMatrix, m_prime: RatMatrix) -> IntMatrix:
    """``m' A m'^-1``."""
    _require_unimodular(m_prime, "m'")
    return (m_prime @ a @ m_prime.inverse()).to_int()


def normal_form(lam: int, mu: int) -> IntMatrix:
    """The conjugated monodromy ``A'`` in terms of ``(lambda, mu)``."""
    return IntMatrix.of(
        [
            [1, -1, 0, 1],
            [0, 1, 0, -1],
            [-lam, 0, 1, 0],
            [-lam, mu, 1, 1 - mu],
        ]
    )


def infinity_normal_form(lam: int, mu: int) -> IntMatrix:
    """Closed form of the monodromy around infinity for given ``(lambda, mu)``."""
    return IntMatrix.of(
        [
            [1, 1, 0, 0],
            [0, 1, 0, 0],
            [lam, lam, 1, 0],
            [0, -mu, -1, 1],
        ]
    )


def match_normal_form(a_prime: RatMatrix) -> tuple[int, int] | None:
    """Read ``(lambda, mu)`` off ``A'`` if it has the normal form shape."""
    if not a_prime.is_integral():
        return None
    lam = -int(a_prime[2, 0])
    mu = int(a_prime[3, 1])
    if a_prime == normal_form(lam, mu):
        return lam, mu
    return None


def monodromy_at_infinity(a_prime: RatMatrix) -> IntMatrix:
    """``T^-1 A'^-1``."""
    _require_unimodular(a_prime, "A'")
    return (T_FIXED.inverse() @ a_prime.inverse()).to_int()


def is_unipotent(m: RatMatrix) -> bool:
    return ((m - RatMatrix.identity(m.n)) ** m.n).is_zero()


def is_nilpotent(m: RatMatrix) -> bool:
    return (m ** m.n).is_zero()


def nilpotent_log(m: RatMatrix) -> RatMatrix:
    """``N = -log m``, an exact finite sum for unipotent ``m``."""
    if not is_unipotent(m):
        raise NotUnipotent("matrix is not unipotent")
    n = m.n
    x = m - RatMatrix.identity(n)
    log = RatMatrix.zero(n)
    power = RatMatrix.identity(n)
    for k in range(1, n):
        power = power @ x
        log = log + power.scale(Fraction((-1) ** (k + 1), k))
    return -log


def unipotent_exp(n_mat: RatMatrix) -> RatMatrix:
    """``exp(-N)`` for nilpotent ``N``; inverse of :func:`nilpotent_log`."""
    if not is_nilpotent(n_mat):
        raise NotNilpotent("matrix is not nilpotent")
    size = n_mat.n
    x = -n_mat
    out = RatMatrix.identity(size)
    power = RatMatrix.identity(size)
    fact = 1
    for k in range(1, size):
        power = power @ x
        fact *= k
        out = out + power.scale(Fraction(1, fact))
    return out


def lambda_check(n_mat: RatMatrix) -> Fraction:
    """Return ``lambda`` when ``N^3 = lambda E_{4,2}`` with ``lambda != 0``."""
    if not is_nilpotent(n_mat):
        raise NotNilpotent("matrix is not nilpotent")
    cube = n_mat**3
    if n_mat.n < 4:
        raise WrongShape(cube, "need at least a 4x4 matrix")
    lam = cube[3, 1]
    if lam == 0 or cube != RatMatrix.unit(n_mat.n, 3, 1, lam):
        raise WrongShape(cube)
    return lam


def primitivity_check(m: RatMatrix) -> bool:
    """True iff ``m`` is integral, of rank one and has entries with gcd 1."""
    if not m.is_integral() or m.rank() != 1:
        return False
    return linalg.content(x for r in m.rows for x in r) == 1


# maximally unipotent classification


@dataclass(frozen=True)
class MUMReport:
    dim_w0: int
    dim_w1: int
    dim_w2: int
    m_matrix: RatMatrix | None
    invertible: bool
    invertible_over_Z: bool
    is_mum: bool
    w0: tuple = field(default=(), compare=False, repr=False)
    w2: tuple = field(default=(), compare=False, repr=False)
    basis: tuple = field(default=(), compare=False, repr=False)

    def verdict(self) -> tuple:
        return (self.dim_w0, self.dim_w1, self.dim_w2, self.invertible, self.invertible_over_Z, self.is_mum)


def monodromy_weight_spaces(n_mat: RatMatrix):
    """``W_0``, ``W_1``, ``W_2`` of a single nilpotent ``N``."""
    dim = n_mat.n
    n2 = n_mat @ n_mat
    n3 = n2 @ n_mat
    ker1 = linalg.kernel(n_mat)
    ker2 = linalg.kernel(n2)
    im1 = linalg.image(n_mat)
    im2 = linalg.image(n2)
    w0 = linalg.image(n3)
    w1 = linalg.intersect(im2, ker1, dim)
    w2 = linalg.subspace_sum(linalg.intersect(im1, ker1, dim), linalg.intersect(im2, ker2, dim))
    return w0, w1, w2


def _check_basis_change(change: RatMatrix, r: int):
    if change.n != r + 1:
        raise DimensionMismatch(f"basis change must be {r + 1}x{r + 1}")
    _require_unimodular(change, "basis change")
    if any(change[0, j] for j in range(1, r + 1)):
        raise MatrixError("basis change must keep g^0 a multiple of itself")


def mum_classify(
    nilpotents: Sequence[RatMatrix],
    weights: Sequence | None = None,
    basis_change: RatMatrix | None = None,
) -> MUMReport:
    """Decide whether commuting nilpotent logarithms define a maximally unipotent point.

    The classes ``g^0 .. g^r`` are taken from the lattice ``W_2 cap Z^n``
    with ``g^0`` the primitive generator of ``W_0 cap Z^n``, so the
    integrality verdict refers to an integral basis.  ``basis_change``
    (rows give ``g'^k`` in terms of ``g^l``) re-runs the last step in
    another such basis.
    """
    if not nilpotents:
        raise DimensionMismatch("need at least one matrix")
    r = len(nilpotents)
    dim = nilpotents[0].n
    if any(m.n != dim for m in nilpotents):
        raise DimensionMismatch("all matrices must have the same size")
    for m in nilpotents:
        if not is_nilpotent(m):
            raise NotNilpotent("input matrix is not nilpotent")
    if weights is None:
        weights = [1] * r
    weights = [Fraction(w) for w in weights]
    if len(weights) != r:
        raise DimensionMismatch(f"{r} matrices but {len(weights)} weights")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")

    total = RatMatrix.zero(dim)
    for w, m in zip(weights, nilpotents):
        total = total + m.scale(w)
    w0, w1, w2 = monodromy_weight_spaces(total)
    dims = (len(w0), len(w1), len(w2))

    m_matrix = None
    basis: list[tuple[int, ...]] = []
    if dims[0] == 1 and dims[2] == r + 1 and linalg.contains(w2, w0[0]):
        g0 = linalg.primitive(w0[0])
        lattice = linalg.lattice_basis(w2, dim)
        coords = linalg.coordinates(lattice, g0)
        completion = linalg.complete_to_unimodular([int(c) for c in coords])
        basis = [
            tuple(sum(lattice[i][a] * completion[i][k] for i in range(len(lattice))) for a in range(dim))
            for k in range(r + 1)
        ]
        if basis_change is not None:
            _check_basis_change(basis_change, r)
            basis = [
                tuple(sum(int(basis_change[k, l]) * basis[l][a] for l in range(r + 1)) for a in range(dim))
                for k in range(r + 1)
            ]
        m_matrix = _m_matrix(nilpotents, basis)

    invertible = m_matrix is not None and m_matrix.det() != 0
    over_z = invertible and m_matrix.is_integral() and abs(m_matrix.det()) == 1
    is_mum = dims[0] == 1 and dims[1] == 1 and dims[2] == 1 + r and invertible
    return MUMReport(
        dims[0], dims[1], dims[2], m_matrix, invertible, over_z, is_mum,
        w0=tuple(w0), w2=tuple(w2), basis=tuple(basis),
    )


def _m_matrix(nilpotents: Sequence[RatMatrix], basis) -> RatMatrix | None:
    """Solve ``N^(j) g^k = m^{jk} g^0``; ``None`` if some image is not a multiple of ``g^0``."""
    g0 = basis[0]
    pivot = next(i for i, x in enumerate(g0) if x)
    rows = []
    for nj in nilpotents:
        row = []
        for gk in basis[1:]:
            img = nj.apply(gk)
            coeff = img[pivot] / g0[pivot]
            if any(img[i] != coeff * g0[i] for i in range(len(g0))):
                return None
            row.append(coeff)
        rows.append(row)
    return RatMatrix.of(rows)


def random_basis_change(r: int, rng: random.Random, bound: int = 5) -> IntMatrix:
    """Random unimodular lower-triangular-in-``g^0`` change of the ``W_2`` basis."""
    size = r + 1
    while True:
        rows = [[0] * size for _ in range(size)]
        rows[0][0] = rng.choice((-1, 1))
        for k in range(1, size):
            rows[k][0] = rng.randint(-bound, bound)
        # unimodular block on g^1..g^r: product of random elementary matrices
        block = RatMatrix.identity(r)
        for _ in range(3 * r):
            i, j = rng.randrange(r), rng.randrange(r)
            if i != j:
                e = RatMatrix.identity(r) + RatMatrix.unit(r, i, j, rng.randint(-bound, bound))
                block = block @ e
            if rng.random() < 0.3:
                block = block @ RatMatrix.of(
                    [[-1 if (a == b == i) else int(a == b) for b in range(r)] for a in range(r)]
                )
        for a in range(r):
            for b in range(r):
                rows[a + 1][b + 1] = int(block[a, b])
        m = IntMatrix.of(rows)
        if abs(m.det()) == 1:
            return m


# one-parameter table rows


@dataclass(frozen=True)
class TableRow:
    k: int
    a: IntMatrix
    m_prime: IntMatrix
    a_prime: IntMatrix
    lambda_mu: tuple[int, int]


@dataclass(frozen=True)
class RowResult:
    k: int
    ok: bool
    stage: str | None = None
    message: str = ""
    lam: Fraction | None = None
    mu: int | None = None
    t_infinity: IntMatrix | None = None
    n_cube: RatMatrix | None = None


STAGES = ("conjugate", "normal_form", "infinity", "unipotent", "log", "lambda", "primitivity")


def verify_table_row(
    a: RatMatrix,
    m_prime: RatMatrix,
    expected_a_prime: RatMatrix,
    expected_lambda_mu: tuple[int, int],
    k: int = 0,
) -> RowResult:
    """Run every stage of the check; stop at the first mismatch."""
    lam_exp, mu_exp = expected_lambda_mu

    def fail(stage, message, **kw):
        return RowResult(k, False, stage, message, **kw)

    try:
        a_prime = conjugate(a, m_prime)
    except NotUnimodular as exc:
        return fail("conjugate", str(exc))
    if a_prime != expected_a_prime:
        return fail("conjugate", f"m' A m'^-1 =\n{a_prime}\ndiffers from the expected A'")
    shape = match_normal_form(a_prime)
    if shape is None:
        return fail("normal_form", "A' does not have the (lambda, mu) normal form")
    if shape != (lam_exp, mu_exp):
        return fail("normal_form", f"A' has (lambda, mu) = {shape}, expected {(lam_exp, mu_exp)}")
    t_inf = monodromy_at_infinity(a_prime)
    if t_inf != infinity_normal_form(lam_exp, mu_exp):
        return fail("infinity", f"T_inf =\n{t_inf}\ndiffers from the closed form", t_infinity=t_inf)
    if not is_unipotent(t_inf):
        return fail("unipotent", "T_inf is not unipotent", t_infinity=t_inf)
    n_mat = nilpotent_log(t_inf)
    if unipotent_exp(n_mat) != t_inf:
        return fail("log", "exp(-N) does not reproduce T_inf", t_infinity=t_inf)
    try:
        lam = lambda_check(n_mat)
    except WrongShape as exc:
        return fail("lambda", str(exc), t_infinity=t_inf, n_cube=exc.cube)
    cube = n_mat**3
    if lam != lam_exp:
        return fail("lambda", f"(-log T_inf)^3 gives lambda = {lam}, expected {lam_exp}",
                    lam=lam, t_infinity=t_inf, n_cube=cube)
    if not primitivity_check(cube.scale(Fraction(1, lam_exp))):
        return fail("primitivity", "N^3 / lambda is not a primitive integral matrix",
                    lam=lam, t_infinity=t_inf, n_cube=cube)
    return RowResult(k, True, None, "ok", lam=lam, mu=mu_exp, t_infinity=t_inf, n_cube=cube)


def parse_table(text: str) -> list[TableRow]:
    """Parse a monodromy table fixture.

    Each row is introduced by ``row <k>``, followed by a
    ``lambda_mu <lambda> <mu>`` line and the three matrix blocks
    ``A``, ``m_prime`` and ``A_prime`` (each a label line followed by a
    matrix in the plain format).
    """
    lines = linalg.content_lines(text)
    rows = []
    i = 0
    while i < len(lines):
        lineno, line = lines[i]
        parts = line.split()
        if parts[0] != "row" or len(parts) != 2:
            raise ParseError(f"expected 'row <k>', got {line!r}", lineno, 1)
        try:
            k = int(parts[1])
        except ValueError:
            raise ParseError(f"bad row label {parts[1]!r}", lineno, 5) from None
        i += 1
        fields: dict[str, object] = {}
        while i < len(lines) and not lines[i][1].startswith("row"):
            lineno, line = lines[i]
            parts = line.split()
            key = parts[0]
            if key == "lambda_mu":
                if len(parts) != 3:
                    raise ParseError("expected 'lambda_mu <lambda> <mu>'", lineno, 1)
                try:
                    fields[key] = (int(parts[1]), int(parts[2]))
                except ValueError:
                    raise ParseError("lambda and mu must be integers", lineno, 11) from None
                i += 1
            elif key in ("A", "m_prime", "A_prime") and len(parts) == 1:
                mat, used = linalg.parse_matrix_lines(lines[i + 1 :])
                if not mat.is_integral():
                    raise ParseError(f"{key} must be an integer matrix", lineno, 1)
                fields[key] = mat.to_int()
                i += 1 + used
            else:
                raise ParseError(f"unknown entry {key!r} in row {k}", lineno, 1)
        missing = [f for f in ("A", "m_prime", "A_prime", "lambda_mu") if f not in fields]
        if missing:
            raise ParseError(f"row {k} is missing {', '.join(missing)}", lineno)
        rows.append(TableRow(k, fields["A"], fields["m_prime"], fields["A_prime"], fields["lambda_mu"]))
    return rows
