"""Exception hierarchy.

Two branches matter to callers: DataError (bad or insufficient input,
CLI exit code 2) and NumericalError (estimation or simulation failure,
CLI exit code 3).
"""

from __future__ import annotations


class VolroughError(Exception):
    """Base class for all library errors."""


class DataError(VolroughError):
    """Bad or insufficient input data."""


class SchemaError(DataError):
    """A required column is missing from an input file."""


class InsufficientDataError(DataError):
    """Fewer valid observations than the operation needs."""


class DuplicateDateError(DataError):
    """Dates are not strictly increasing after sorting."""


class DomainError(DataError, ValueError):
    """An input value lies outside the operation's domain."""


class SizeError(DataError, ValueError):
    """An input has the wrong length or shape."""


class LagError(DataError, ValueError):
    """A requested lag is not smaller than the series length."""


class EmptyContinuationError(DataError, ValueError):
    """Conditional continuation requested over an empty index range."""


class NumericalError(VolroughError):
    """Numerical failure during estimation or simulation."""


class DegenerateBlockError(NumericalError):
    """A coarse block has zero fine variation (repeated identical values)."""

    def __init__(self, block: int, window_start: int = 0):
        self.block = block
        self.window_start = window_start
        super().__init__(
            f"coarse block {block} (window start {window_start}) is constant: "
            "the fine-increment sum vanishes"
        )


class NoRootError(NumericalError):
    """The variation-order equation has no root inside the search bracket."""

    def __init__(self, p_lo: float, p_hi: float, w_lo: float, w_hi: float, target: float):
        self.p_lo, self.p_hi = p_lo, p_hi
        self.w_lo, self.w_hi = w_lo, w_hi
        self.target = target
        super().__init__(
            f"no sign change of W(p) - T over [{p_lo:g}, {p_hi:g}]: "
            f"W({p_lo:g}) = {w_lo:.6g}, W({p_hi:g}) = {w_hi:.6g}, T = {target:.6g}"
        )


class DegenerateMomentError(NumericalError):
    """A scaling moment is exactly zero, so its log-regression is undefined."""


class FactorizationError(NumericalError):
    """Cholesky factorization of the covariance matrix failed."""

    def __init__(self, pivot: int, message: str = ""):
        self.pivot = pivot
        detail = f": {message}" if message else ""
        super().__init__(f"covariance factorization failed at pivot {pivot}{detail}")


class InversionError(NumericalError):
    """An average option price cannot be inverted to an implied volatility."""

    def __init__(self, price: float, se: float = float("nan")):
        self.price = price
        self.se = se
        super().__init__(
            f"average price {price:.6g} (standard error {se:.2g}) is outside (0, 1)"
        )


class EmptySummaryError(NumericalError):
    """Every window of a sliding estimate failed."""
