"""Warping functions: parsing, exact derivatives and log-convexity certification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from warpiso.constants import (
    DEFAULT_CERTIFY_GRID,
    DEFAULT_DOMAIN_MAX,
    DEFAULT_TOL_LOGCONVEX,
    DEFAULT_TOL_STRICT,
)
from warpiso.errors import DomainError, RangeError
from warpiso.schemas import CertificationReport
from warpiso.warpfn.ast import (
    Add,
    Call,
    Div,
    Mul,
    Neg,
    Node,
    Num,
    Pow,
    Sub,
    Var,
    is_constant,
    unparse,
)
from warpiso.warpfn.jet import UNARY, Jet, Real
from warpiso.warpfn.parser import parse_expression

# Slack on the window check so that grid endpoints computed in floating point
# (e.g. b + h with h = domain_max - b) are accepted.
_WINDOW_SLACK = 1e-12


def evaluate(node: Node, t: Jet) -> Jet:
    """Evaluate a tree on a jet, checking the domain of every subexpression.

    Raises:
        DomainError: log of a nonpositive value, division by zero, or a power
            outside its real domain; carries the offending subexpression.
    """

    match node:
        case Num(value):
            return Jet.constant(value)
        case Var():
            return t
        case Neg(operand):
            return -evaluate(operand, t)
        case Add(left, right):
            return evaluate(left, t) + evaluate(right, t)
        case Sub(left, right):
            return evaluate(left, t) - evaluate(right, t)
        case Mul(left, right):
            return evaluate(left, t) * evaluate(right, t)
        case Div(left, right):
            numerator = evaluate(left, t)
            denominator = evaluate(right, t)
            if np.any(np.asarray(denominator.value) == 0.0):
                raise DomainError("division by zero", unparse(node))
            return numerator / denominator
        case Pow(base, exponent):
            return _evaluate_power(node, evaluate(base, t), exponent, t)
        case Call(func, arg):
            inner = evaluate(arg, t)
            if func == "log" and np.any(np.asarray(inner.value) <= 0.0):
                raise DomainError("log of nonpositive value", unparse(node))
            return UNARY[func](inner)
    raise TypeError(f"Unknown node type: {type(node).__name__}")


def _evaluate_power(node: Pow, base: Jet, exponent: Node, t: Jet) -> Jet:
    values = np.asarray(base.value)
    if is_constant(exponent):
        c = float(np.asarray(evaluate(exponent, t).value))
        if c.is_integer():
            if c < 0 and np.any(values == 0.0):
                raise DomainError("division by zero", unparse(node))
        elif np.any(values < 0.0) or (c < 0 and np.any(values == 0.0)):
            raise DomainError("non-integer power of nonpositive value", unparse(node))
        return base.power_const(c)
    if np.any(values <= 0.0):
        raise DomainError("variable power of nonpositive value", unparse(node))
    return base.power(evaluate(exponent, t))


@dataclass(frozen=True)
class WarpingFunction:
    """Parsed warping function f on the working interval [0, domain_max].

    Immutable after construction; evaluation is a pure function of its input,
    so instances may be shared freely between threads.

    Attributes:
        source: Expression text as supplied by the user.
        ast: Parsed expression tree.
        domain_max: Right end of the working interval.
        declared_limit: Optional user-declared value of lim n f'/f.
    """

    source: str
    ast: Node
    domain_max: float = DEFAULT_DOMAIN_MAX
    declared_limit: float | None = None

    def __post_init__(self) -> None:
        if not self.domain_max > 0.0:
            raise RangeError(f"domain_max must be positive, got {self.domain_max}")

    def _check_window(self, t: Real) -> None:
        arr = np.asarray(t)
        if np.any(arr < -_WINDOW_SLACK) or np.any(arr > self.domain_max + _WINDOW_SLACK):
            raise RangeError(
                f"Evaluation point outside working interval [0, {self.domain_max}]"
            )

    def jet(self, t: Real) -> Jet:
        """Return the jet (f, f', f'') at `t` (scalar or array)."""

        self._check_window(t)
        with np.errstate(over="ignore"):
            result = evaluate(self.ast, Jet.variable(t))
        if np.ndim(t) == 0:
            return result
        shape = np.shape(t)
        return Jet(
            np.broadcast_to(result.value, shape).astype(float),
            np.broadcast_to(result.d1, shape).astype(float),
            np.broadcast_to(result.d2, shape).astype(float),
        )

    def eval2(self, t: float) -> tuple[float, float, float]:
        """Return (f(t), f'(t), f''(t)) from exact forward-mode derivatives."""

        result = self.jet(float(t))
        return float(result.value), float(result.d1), float(result.d2)

    def eval2_array(
        self, ts: NDArray[np.float64]
    ) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        """Vectorized `eval2` over an array of points."""

        result = self.jet(np.asarray(ts, dtype=float))
        return (
            np.asarray(result.value, dtype=float),
            np.asarray(result.d1, dtype=float),
            np.asarray(result.d2, dtype=float),
        )

    def value(self, t: Real) -> Real:
        return self.jet(t).value

    def log_derivative(self, t: Real) -> Real:
        """f'/f at `t`."""

        result = self.jet(t)
        return result.d1 / result.value

    def unparse(self) -> str:
        return unparse(self.ast)

    def certify(
        self,
        grid_points: int = DEFAULT_CERTIFY_GRID,
        *,
        lo: float = 0.0,
        hi: float | None = None,
        tol_logconvex: float = DEFAULT_TOL_LOGCONVEX,
        tol_strict: float = DEFAULT_TOL_STRICT,
    ) -> CertificationReport:
        """Check f > 0 and (log f)'' >= -tol on a uniform grid.

        Failures are reported as verdicts; this method never raises for a
        badly behaved f.

        Args:
            grid_points: Number of grid points (at least 2).
            lo: Left end of the certified window.
            hi: Right end of the certified window (defaults to domain_max).
            tol_logconvex: Allowed negative excursion of (log f)''.
            tol_strict: Threshold above which (log f)'' counts as strictly positive.

        Returns:
            A `CertificationReport`.
        """

        if grid_points < 2:
            raise ValueError(f"grid_points must be at least 2, got {grid_points}")
        hi = self.domain_max if hi is None else hi
        grid = np.linspace(lo, hi, grid_points)
        try:
            f, f1, f2 = self.eval2_array(grid)
        except DomainError as exc:
            return CertificationReport(
                grid_points=grid_points,
                lo=lo,
                hi=hi,
                min_f=float("nan"),
                min_log_second=float("nan"),
                argmin_log_second=float("nan"),
                positive=False,
                log_convex=False,
                strictly_log_convex=False,
                error=str(exc),
            )

        min_f = float(np.min(f))
        positive = bool(np.all(f > 0.0)) and bool(np.all(np.isfinite(f)))
        if not positive:
            return CertificationReport(
                grid_points=grid_points,
                lo=lo,
                hi=hi,
                min_f=min_f,
                min_log_second=float("nan"),
                argmin_log_second=float("nan"),
                positive=False,
                log_convex=False,
                strictly_log_convex=False,
            )

        log_second = (f * f2 - f1 * f1) / (f * f)
        index = int(np.argmin(log_second))
        min_log_second = float(log_second[index])
        return CertificationReport(
            grid_points=grid_points,
            lo=lo,
            hi=hi,
            min_f=min_f,
            min_log_second=min_log_second,
            argmin_log_second=float(grid[index]),
            positive=True,
            log_convex=min_log_second >= -tol_logconvex,
            strictly_log_convex=min_log_second > tol_strict,
        )


def parse(
    source: str,
    *,
    domain_max: float = DEFAULT_DOMAIN_MAX,
    declared_limit: float | None = None,
) -> WarpingFunction:
    """Parse `source` into a `WarpingFunction` on [0, domain_max]."""

    if not source.strip():
        raise ValueError("Warping-function source must be nonempty.")
    return WarpingFunction(
        source=source,
        ast=parse_expression(source),
        domain_max=domain_max,
        declared_limit=declared_limit,
    )


def density_warping(u: str, v: str, n: int) -> str:
    """Warping function f = e^{v/n + u} matching a radial density e^v.

    A metric dr^2 + e^{2u} dTheta^2 on [0, inf) x S^n with radial density e^v
    has the same volume and area calculus as the warped product with this f,
    and f is log-convex exactly when n u'' + v'' >= 0.

    Args:
        u: Expression for the log of the radial metric factor.
        v: Expression for the log of the density.
        n: Dimension of the sphere factor.

    Returns:
        Expression source for f, validated against the grammar.
    """

    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    parse_expression(u)
    parse_expression(v)
    source = f"exp(({v})/{n} + ({u}))"
    parse_expression(source)
    return source
