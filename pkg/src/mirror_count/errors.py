"""Exception hierarchy shared by every module of the package."""

from fractions import Fraction


class MirrorCountError(Exception):
    """Base class for all package errors."""


class SeriesError(MirrorCountError, ArithmeticError):
    pass


class ZeroConstantTerm(SeriesError):
    pass


class NonzeroInnerConstant(SeriesError):
    pass


class NotReversible(SeriesError):
    pass


class BadConstantTerm(SeriesError):
    pass


class NotMUM(MirrorCountError):
    """The operator does not have a maximally unipotent point at z = 0."""


class IndicialDegeneracy(MirrorCountError):
    pass


class SingularYukawaODE(MirrorCountError):
    pass


class NonIntegralInstanton(MirrorCountError):
    """An extracted instanton number is not an integer.

    Normally stored on a :class:`PredictionTable` as a diagnostic, and only
    raised in strict mode.
    """

    def __init__(self, degree: int, value: Fraction):
        self.degree = degree
        self.value = value
        super().__init__(f"instanton number n_{degree} = {value} is not an integer")

    def __eq__(self, other):
        if not isinstance(other, NonIntegralInstanton):
            return NotImplemented
        return (self.degree, self.value) == (other.degree, other.value)

    def __hash__(self):
        return hash((self.degree, self.value))


class MatrixError(MirrorCountError):
    pass


class NotUnimodular(MatrixError):
    pass


class NotUnipotent(MatrixError):
    pass


class NotNilpotent(MatrixError):
    pass


class DimensionMismatch(MatrixError):
    pass


class WrongShape(MatrixError):
    """The cube of a nilpotent logarithm is not lambda times E_{4,2}."""

    def __init__(self, cube, message: str = "cube does not have the single-entry (4,2) shape"):
        self.cube = cube
        super().__init__(f"{message}:\n{cube}")


class RationalWalls(MirrorCountError):
    pass


class ParseError(MirrorCountError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class SemanticError(MirrorCountError):
    pass
