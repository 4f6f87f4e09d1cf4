"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from warpiso.schemas import IsoperimetricReport


class WarpisoError(Exception):
    """Base class for all errors raised by warpiso."""


class ExpressionError(WarpisoError):
    """Problem with a warping-function expression at a given byte offset."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExpressionSyntaxError(ExpressionError):
    """Malformed expression or unparsed remainder."""


class UnknownIdentifierError(ExpressionError):
    """Identifier that is neither `t` nor a supported function."""


class ArityError(ExpressionError):
    """Function called with the wrong number of arguments."""


class DomainError(WarpisoError):
    """Evaluation left the domain of a subexpression (log of nonpositive, 1/0)."""

    def __init__(self, message: str, subexpression: str) -> None:
        super().__init__(f"{message}: {subexpression}")
        self.subexpression = subexpression


class RangeError(WarpisoError):
    """Argument outside the working interval [0, domain_max]."""


class QuadratureConvergenceError(WarpisoError):
    """Adaptive quadrature exhausted its subdivision budget."""

    def __init__(self, message: str, achieved_error: float) -> None:
        super().__init__(f"{message} (achieved error estimate {achieved_error:.3e})")
        self.achieved_error = achieved_error


class UnsupportedModeError(WarpisoError):
    """Requested area mode is not defined for this floor or ceiling."""


class InequalityViolationError(WarpisoError):
    """The verified inequality failed by more than the verification tolerance."""

    def __init__(self, report: IsoperimetricReport) -> None:
        super().__init__(
            f"Vol(S) exceeds Vol(C) by {-report.margin:.3e} "
            f"(H={report.H:.17g}, vol_S={report.vol_S:.17g})"
        )
        self.report = report


class PreconditionError(WarpisoError):
    """Mathematical precondition not met (e.g. f bounded on the window)."""


class NoSolutionError(WarpisoError):
    """Equation has no solution on the working interval."""


class DegenerateEquationError(WarpisoError):
    """Equation is satisfied on a whole interval (constant left-hand side)."""


class ConfigError(WarpisoError):
    """Invalid or incomplete run configuration."""
