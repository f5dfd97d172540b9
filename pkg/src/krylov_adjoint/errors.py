"""Exception hierarchy shared by every module of the package."""


class KrylovAdjointError(Exception):
    """Base class for all errors raised by this package."""


class NotInvertible(KrylovAdjointError, ArithmeticError):
    """A ring element without multiplicative inverse was inverted."""


class NonUnitConstantTerm(NotInvertible):
    """Series reciprocal requested for a series whose constant term is not a unit."""


class IndexOutOfRange(KrylovAdjointError, IndexError):
    pass


class DimensionMismatch(KrylovAdjointError, ValueError):
    pass


class NoUnitPivot(KrylovAdjointError, ArithmeticError):
    """Elimination over a non-field ring found a column with no unit entry."""


class SingularMatrix(KrylovAdjointError, ArithmeticError):
    pass


class SingularHankel(KrylovAdjointError, ArithmeticError):
    """The Hankel matrix of the projected Krylov sequence is not invertible."""


class DegenerateMinimalPolynomial(SingularHankel):
    """Every random projection produced a singular Hankel matrix.

    This is what happens for derogatory matrices (minimal polynomial of degree < n),
    which the randomized field-mode algorithm can never handle.
    """


class NonInvertibleHA(KrylovAdjointError, ArithmeticError):
    """The shifted Hankel matrix is singular, i.e. det A = 0 in field mode."""


class WatermarkViolation(KrylovAdjointError):
    """A reverse-pass stage read a series coefficient that had been collapsed."""


class SingularLeadingMatrix(KrylovAdjointError, ArithmeticError):
    """A polynomial matrix A(z) with A(0) singular cannot be inverted as a series."""


class CheckMismatch(KrylovAdjointError):
    """Two independent computations disagreed. Always a bug."""


class ParseError(KrylovAdjointError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class DimensionError(ParseError):
    pass
