"""Exception types shared across the package."""


class PcxError(Exception):
    """Base class for all pcx errors."""


class NonPositiveEntry(PcxError):
    """A matrix entry or judgment value is not a finite positive number."""


class NonPositiveParameter(PcxError):
    """A parameter that must be positive (e.g. the scale parameter a) is not."""


class DimensionMismatch(PcxError):
    """Array sizes do not match the declared matrix dimension."""


class TooSmall(PcxError):
    """Fewer than two alternatives."""


class SingularSystem(PcxError):
    """A linear system required by a solver is numerically singular."""


class UnsupportedSize(PcxError):
    """The brute-force oracle only handles small matrices."""


class OutOfScale(PcxError):
    """A judgment value lies outside the admissible range of a scale."""


class MatrixFormatError(PcxError):
    """A matrix file could not be parsed or violates its format invariants.

    ``line`` and ``column`` are 1-based positions of the offending cell when
    known, else None.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class ConfigError(PcxError):
    """Invalid simulation or solver configuration."""
