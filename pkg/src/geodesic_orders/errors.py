"""Exception hierarchy shared by every module of the package."""


class GeodesicOrdersError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(GeodesicOrdersError, ValueError):
    pass


class PrecisionExhausted(GeodesicOrdersError):
    """Root isolation failed at the maximum working precision."""


class NotAField(GeodesicOrdersError, ValueError):
    pass


class UnsupportedDegree(GeodesicOrdersError, ValueError):
    pass


class PreconditionViolated(GeodesicOrdersError, ValueError):
    pass


class FieldNotInC(GeodesicOrdersError, ValueError):
    """Some prime of the active set decomposes in the field."""


class InvalidS(GeodesicOrdersError, ValueError):
    """The prime set is empty or has odd cardinality."""


class SearchBudgetExhausted(GeodesicOrdersError):
    """A lattice search hit its budget before it could certify a result.

    ``best`` carries the best candidate found so far (or None) and
    ``lower_bound`` a certified lower bound for the quantity searched.
    """

    def __init__(self, message, best=None, lower_bound=None):
        super().__init__(message)
        self.best = best
        self.lower_bound = lower_bound


class NumericInconsistency(GeodesicOrdersError):
    pass


class Inconclusive(GeodesicOrdersError):
    """A class-group computation could not certify its answer.

    ``multiple_of_h`` is the order of the current relation quotient, which the
    true class number divides.
    """

    def __init__(self, message, multiple_of_h=None):
        super().__init__(message)
        self.multiple_of_h = multiple_of_h


class NotAGeodesic(GeodesicOrdersError, ValueError):
    pass


class ShapeViolation(GeodesicOrdersError):
    pass


class CorrespondenceViolation(GeodesicOrdersError):
    def __init__(self, identity, message):
        super().__init__(f"{identity}: {message}")
        self.identity = identity


class InternalError(GeodesicOrdersError):
    pass


class ParseError(GeodesicOrdersError, ValueError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DataConflict(GeodesicOrdersError):
    def __init__(self, field_key, column, message=""):
        super().__init__(f"{field_key} column {column}: {message}".rstrip(": "))
        self.field_key = field_key
        self.column = column
