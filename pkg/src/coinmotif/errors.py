"""Exception hierarchy. The CLI maps each family onto an exit code."""


class MotifError(Exception):
    """Base class for all library errors."""


class ConfigError(MotifError, ValueError):
    """Invalid parameters; reported before any work starts."""


class DataError(MotifError):
    """Problems with the input series or files."""


class ZeroVariance(DataError):
    """The series is constant and carries no shape information."""


class WindowTooLong(DataError):
    """The window is longer than the series."""


class NoSeries(DataError):
    """The pipeline was given nothing to work on."""


class EmptyFile(DataError):
    pass


class MissingColumn(DataError):
    def __init__(self, path, column):
        super().__init__(f"{path}: no column named {column!r}")
        self.path = path
        self.column = column


class ParseError(DataError):
    def __init__(self, path, row, column, text):
        super().__init__(f"{path}: row {row}, column {column!r}: cannot parse {text!r} as a number")
        self.path = path
        self.row = row
        self.column = column


class SpecInfeasible(MotifError, ValueError):
    """Planted injections cannot be placed without overlap."""


class TooLarge(MotifError, ValueError):
    """Input exceeds the size cap of a quadratic reference routine."""


class InvariantViolation(MotifError, AssertionError):
    """An internal invariant was broken; this is a bug."""


class RadiusViolation(InvariantViolation):
    """A point was inserted into a cluster whose centroid is farther than R."""
