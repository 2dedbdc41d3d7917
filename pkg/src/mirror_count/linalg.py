"""Exact square matrices and subspace/lattice computations over Q and Z.

Vectors are tuples of Fractions.  Subspaces are represented by a list of
basis vectors in reduced row echelon form, which makes them canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch, MatrixError, ParseError
from .series import parse_rational

Vector = tuple[Fraction, ...]


@dataclass(frozen=True, eq=False)
class RatMatrix:
    rows: tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Iterable]):
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int):
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int):
        return cls.of([[0] * n for _ in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int, value=1):
        """``value`` at (i, j), zero elsewhere (0-based indices)."""
        return cls.of([[value if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    # IntMatrix and RatMatrix with equal entries compare equal
    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.n)]

    def transpose(self):
        return RatMatrix(tuple(self.columns()))

    def _check(self, other: RatMatrix):
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")

    def __add__(self, other: RatMatrix) -> RatMatrix:
        self._check(other)
        return RatMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> RatMatrix:
        return RatMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        return self + (-other)

    def scale(self, c) -> RatMatrix:
        c = Fraction(c)
        return RatMatrix(tuple(tuple(c * a for a in r) for r in self.rows))

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        self._check(other)
        cols = other.columns()
        return RatMatrix(tuple(tuple(_dot(r, c) for c in cols) for r in self.rows))

    def apply(self, v: Sequence) -> Vector:
        return tuple(_dot(r, v) for r in self.rows)

    def __pow__(self, k: int) -> RatMatrix:
        out = RatMatrix.identity(self.n)
        for _ in range(k):
            out = out @ self
        return out

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def to_int(self) -> IntMatrix:
        if not self.is_integral():
            raise MatrixError("matrix has non-integral entries")
        return IntMatrix(self.rows)

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def det(self) -> Fraction:
        m = [list(r) for r in self.rows]
        n = self.n
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                det = -det
            det *= m[c][c]
            for r in range(c + 1, n):
                f = m[r][c] / m[c][c]
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return det

    def rank(self) -> int:
        return len(row_reduce(self.rows))

    def inverse(self) -> RatMatrix:
        n = self.n
        m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
            if p is None:
                raise MatrixError("matrix is singular")
            m[c], m[p] = m[p], m[c]
            piv = m[c][c]
            m[c] = [a / piv for a in m[c]]
            for r in range(n):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return RatMatrix(tuple(tuple(r[n:]) for r in m))

    def __str__(self):
        cells = [[str(x) for x in r] for r in self.rows]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in cells)

    def to_text(self) -> str:
        return f"{self.n}\n" + "\n".join(" ".join(str(x) for x in r) for r in self.rows)


class IntMatrix(RatMatrix):
    """A :class:`RatMatrix` whose entries are all integers."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_integral():
            raise MatrixError("IntMatrix entries must be integers")

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j].numerator


def _dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


# subspaces


def row_reduce(rows: Iterable[Sequence]) -> list[Vector]:
    """Nonzero rows of the reduced row echelon form."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [a / piv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    out = [tuple(row) for row in m[:r]]
    return out


def span(vectors: Iterable[Sequence]) -> list[Vector]:
    return row_reduce(vectors)


def image(m: RatMatrix) -> list[Vector]:
    return span(m.columns())


def kernel_of_rows(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : r . x = 0 for every r in rows}``."""
    red = row_reduce(rows)
    pivots = []
    for r in red:
        pivots.append(next(j for j, x in enumerate(r) if x != 0))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            v[p] = -r[f]
        basis.append(tuple(v))
    return span(basis)


def kernel(m: RatMatrix) -> list[Vector]:
    return kernel_of_rows(m.rows, m.n)


def intersect(u: Sequence[Vector], v: Sequence[Vector], dim: int) -> list[Vector]:
    if not u or not v:
        return []
    # annihilators: U cap V = ker([ann U; ann V])
    ann = kernel_of_rows(u, dim) + kernel_of_rows(v, dim)
    return kernel_of_rows(ann, dim)


def subspace_sum(u: Sequence[Vector], v: Sequence[Vector]) -> list[Vector]:
    return span(list(u) + list(v))


def contains(space: Sequence[Vector], vec: Sequence) -> bool:
    return len(span(list(space) + [tuple(vec)])) == len(space)


def coordinates(basis: Sequence[Vector], vec: Sequence) -> list[Fraction] | None:
    """Solve ``sum c_i basis[i] = vec``; ``None`` if ``vec`` is not in the span."""
    k = len(basis)
    dim = len(vec)
    # augmented system with unknowns c_i: rows are coordinates j
    rows = [[basis[i][j] for i in range(k)] + [Fraction(vec[j])] for j in range(dim)]
    red = row_reduce(rows)
    sol = [Fraction(0)] * k
    for r in red:
        p = next(j for j, x in enumerate(r) if x != 0)
        if p == k:
            return None
        sol[p] = r[k]
    return sol


# integer lattices


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer one, first nonzero entry positive."""
    vec = [Fraction(x) for x in vec]
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = gcd(*ints)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def content(values: Iterable) -> Fraction:
    """gcd of rational numbers (0 for all zeros)."""
    vals = [Fraction(x) for x in values]
    num = gcd(*(x.numerator for x in vals))
    den = lcm(*(x.denominator for x in vals)) if vals else 1
    return Fraction(num, den)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _column_reduce(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], int]:
    """Unimodular column operations bringing ``rows`` to column echelon form.

    Returns the transform ``U`` (as a list of columns) and the number of
    pivot columns; columns ``pivots..`` of ``U`` span the integer kernel.
    """
    a = [list(r) for r in rows]
    u = [[int(i == j) for i in range(ncols)] for j in range(ncols)]  # u[j] is column j
    pc = 0
    for row in a:
        if pc == ncols:
            break
        for j in range(pc + 1, ncols):
            if row[j] == 0:
                continue
            x, y = row[pc], row[j]
            g, s, t = _egcd(x, y)
            # (col_pc, col_j) <- (s col_pc + t col_j, -y/g col_pc + x/g col_j)
            p, q = -y // g, x // g
            for r in a:
                r[pc], r[j] = s * r[pc] + t * r[j], p * r[pc] + q * r[j]
            cp, cj = u[pc], u[j]
            u[pc] = [s * e + t * f for e, f in zip(cp, cj)]
            u[j] = [p * e + q * f for e, f in zip(cp, cj)]
        if row[pc] != 0:
            pc += 1
    return u, pc


def integer_kernel(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Z-basis of ``{x in Z^n : r . x = 0}`` for rational rows ``r``."""
    int_rows = []
    for r in rows:
        r = [Fraction(x) for x in r]
        if any(r):
            den = lcm(*(x.denominator for x in r))
            int_rows.append([int(x * den) for x in r])
    u, pc = _column_reduce(int_rows, ncols)
    return [tuple(c) for c in u[pc:]]


def lattice_basis(space: Sequence[Vector], dim: int) -> list[tuple[int, ...]]:
    """Z-basis of the saturated lattice ``space cap Z^dim``."""
    return integer_kernel(kernel_of_rows(space, dim), dim)


def complete_to_unimodular(c: Sequence[int]) -> list[list[int]]:
    """Integer matrix with determinant +-1 whose first column is the primitive vector ``c``."""
    k = len(c)
    u, _ = _column_reduce([list(c)], k)
    lead = sum(x * y for x, y in zip(c, u[0]))
    if lead != 1:
        raise MatrixError(f"vector {tuple(c)} is not primitive")
    # c^T U = e_1^T, so (U^-1)^T has first column c
    um = RatMatrix.of([[u[j][i] for j in range(k)] for i in range(k)])
    w = um.inverse().transpose()
    return [[int(x) for x in row] for row in w.rows]


# text format


def parse_matrix_lines(lines: Sequence[tuple[int, str]]) -> tuple[RatMatrix, int]:
    """Parse one matrix block from ``(lineno, text)`` pairs.

    Returns the matrix and the number of lines consumed.
    """
    if not lines:
        raise ParseError("expected matrix dimension")
    lineno, head = lines[0]
    try:
        n = int(head.strip())
    except ValueError:
        raise ParseError(f"expected matrix dimension, got {head.strip()!r}", lineno, 1) from None
    if n < 1:
        raise ParseError("matrix dimension must be positive", lineno, 1)
    if len(lines) < n + 1:
        raise ParseError(f"matrix needs {n} rows", lines[-1][0])
    rows = []
    for lineno, text in lines[1 : n + 1]:
        cells = text.split()
        if len(cells) != n:
            raise ParseError(f"expected {n} entries, got {len(cells)}", lineno)
        row = []
        for cell in cells:
            try:
                row.append(parse_rational(cell))
            except ValueError:
                raise ParseError(f"bad matrix entry {cell!r}", lineno, text.find(cell) + 1) from None
        rows.append(row)
    return RatMatrix.of(rows), n + 1


def content_lines(text: str) -> list[tuple[int, str]]:
    """Non-blank lines with ``#`` comments removed, tagged with 1-based line numbers."""
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line))
    return out


def parse_matrices(text: str) -> list[RatMatrix]:
    """A sequence of matrix blocks (``n`` then ``n`` rows), one after another."""
    lines = content_lines(text)
    out = []
    while lines:
        m, used = parse_matrix_lines(lines)
        out.append(m)
        lines = lines[used:]
    return out
