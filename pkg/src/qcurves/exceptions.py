"""Exception hierarchy shared by all qcurves modules."""


class QCurveError(Exception):
    """Base class for errors raised by this package."""


# number fields
class NotMonic(QCurveError, ValueError):
    pass


class Reducible(QCurveError, ValueError):
    pass


class RamifiedOrNonMaximal(QCurveError, ValueError):
    """The prime divides the polynomial discriminant; local tests must skip it."""


class PrecisionExhausted(QCurveError, ArithmeticError):
    pass


class ZeroElement(QCurveError, ValueError):
    pass


# curves and finite fields
class SingularCurve(QCurveError, ValueError):
    pass


SingularModel = SingularCurve


class FieldTooLarge(QCurveError):
    pass


# data files
class ParseError(QCurveError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingLevel(QCurveError, LookupError):
    pass


# CM, isogeny classes, certificates
class Undecided(QCurveError):
    """CM status cannot be settled with the bundled class polynomial data."""

    def __init__(self, degree, max_degree):
        self.degree = degree
        self.max_degree = max_degree
        super().__init__(
            f"minimal polynomial of degree {degree} exceeds bundled CM data (h <= {max_degree})"
        )


class HeightExceeded(QCurveError):
    pass


class Truncated(QCurveError):
    pass


class Disconnected(QCurveError):
    pass


class NoCentralClassFound(QCurveError):
    pass


class PropertyViolation(QCurveError, AssertionError):
    def __init__(self, clause, detail=""):
        self.clause = clause
        super().__init__(f"{clause}: {detail}" if detail else clause)


class UnsupportedField(QCurveError, ValueError):
    pass


# LMFDB access
class NotFound(QCurveError, LookupError):
    pass


class NetworkDisabled(QCurveError):
    pass
