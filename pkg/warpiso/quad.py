"""Adaptive quadrature of mu(t) = f(b + t)^k and inversion of I(h).

Scalar integrals go through QUADPACK (`scipy.integrate.quad`). Batches of
panels are mapped onto [0, 1] and integrated together with
`scipy.integrate.quad_vec`, so tabulating I on thousands of points costs a
handful of vectorized passes through the expression tree. Both accept a
result once the error estimate is below `tol` or below QUAD_REL_FLOOR times
the result, which is the round-off floor for densities like e^{t^2}.
"""

from __future__ import annotations

import threading
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad, quad_vec
from scipy.optimize import brentq, root_scalar

from warpiso.constants import (
    DEFAULT_TOL_QUAD,
    INVERT_MAX_ITERATIONS,
    QUAD_LIMIT,
    QUAD_REL_FLOOR,
    QUAD_TABLE_KNOTS,
    ROOT_REL_TOL,
    ROOT_XTOL,
)
from warpiso.errors import QuadratureConvergenceError, RangeError
from warpiso.warpfn import Jet, WarpingFunction
from warpiso.warpfn.jet import Real

type ArrayFunc = Callable[[NDArray[np.float64]], NDArray[np.float64]]
type ScalarFunc = Callable[[float], float]


def integrate_batch(
    func: ArrayFunc,
    lo: NDArray[np.float64],
    hi: NDArray[np.float64],
    tol: float = DEFAULT_TOL_QUAD,
) -> NDArray[np.float64]:
    """Integrate a vectorized `func` over every panel [lo[i], hi[i]].

    Panel i is mapped onto [0, 1] by t = lo[i] + s (hi[i] - lo[i]); quad_vec
    then refines one partition of [0, 1] for the whole batch and measures
    the error in the max norm over panels.

    Args:
        func: Vectorized integrand accepting an array of shape (m,).
        lo: Left panel ends, shape (m,).
        hi: Right panel ends, shape (m,).
        tol: Absolute tolerance per panel.

    Returns:
        Integral over each panel, shape (m,). Reversed panels integrate to
        the negative value; empty panels to exactly 0.

    Raises:
        QuadratureConvergenceError: If quad_vec stops before reaching `tol`.
    """

    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    width = hi - lo
    if not np.any(width != 0.0):
        return np.zeros(lo.shape)

    def integrand(s: float) -> NDArray[np.float64]:
        return np.asarray(func(lo + s * width), dtype=float) * width

    values, error, info = quad_vec(
        integrand,
        0.0,
        1.0,
        epsabs=tol,
        epsrel=QUAD_REL_FLOOR,
        norm="max",
        limit=QUAD_LIMIT,
        full_output=True,
    )
    if not info.success:
        raise QuadratureConvergenceError(
            f"Quadrature tolerance not reached: {info.message}", float(error)
        )
    return np.where(width == 0.0, 0.0, np.asarray(values, dtype=float))


def integrate(func: ScalarFunc, a: float, b: float, tol: float = DEFAULT_TOL_QUAD) -> float:
    """QUADPACK integral of a scalar function over [a, b] (either orientation).

    Raises:
        QuadratureConvergenceError: If QUADPACK reports a failure and its
            error estimate exceeds the tolerance.
    """

    if b == a:
        return 0.0
    value, error, _, *message = quad(
        func, a, b, epsabs=tol, epsrel=QUAD_REL_FLOOR, limit=QUAD_LIMIT, full_output=1
    )
    if message and error > max(tol, QUAD_REL_FLOOR * abs(value)):
        raise QuadratureConvergenceError(
            f"Quadrature tolerance not reached on [{a}, {b}]: {message[0]}", float(error)
        )
    return float(value)


class MuIntegral:
    """The density mu(t) = (f(b + t) / f(b))^k and its primitive I(h) = int_0^h mu.

    Floor weights already carry the factor f(b)^k, so mu is normalized by the
    same factor; with b = 0 and f(0) = 1 it is exactly f(t)^k. The table of
    (knot, I(knot)) pairs is built once under a lock and then only read.

    Attributes:
        wf: Warping function.
        k: Fiber dimension (exponent of f).
        base: Base height b of the floor.
        tol_quad: Absolute quadrature tolerance for I.
        height_max: Largest admissible height, domain_max - b.
        fiber_scale: f(b)^k, the area factor of the fiber at the base.
    """

    def __init__(
        self,
        wf: WarpingFunction,
        k: int,
        *,
        base: float = 0.0,
        tol_quad: float = DEFAULT_TOL_QUAD,
        table_knots: int = QUAD_TABLE_KNOTS,
    ) -> None:
        if k < 1 or int(k) != k:
            raise ValueError(f"Fiber dimension must be a positive integer, got {k}")
        if not 0.0 <= base < wf.domain_max:
            raise RangeError(f"Base height {base} outside [0, {wf.domain_max})")
        if tol_quad <= 0.0:
            raise ValueError(f"tol_quad must be positive, got {tol_quad}")
        self.wf = wf
        self.k = int(k)
        self.base = float(base)
        self.tol_quad = float(tol_quad)
        self.height_max = wf.domain_max - self.base
        self.fiber_scale = float(np.power(wf.eval2(self.base)[0], self.k))
        if not self.fiber_scale > 0.0:
            raise RangeError(f"f must be positive at the base height {base}")
        self._table_knots = table_knots
        self._table: tuple[NDArray[np.float64], NDArray[np.float64]] | None = None
        self._lock = threading.Lock()

    def _check_height(self, h: Real) -> None:
        arr = np.asarray(h)
        if np.any(arr < 0.0) or np.any(arr > self.height_max * (1.0 + 1e-15)):
            raise RangeError(
                f"Height outside the working interval [0, {self.height_max}]"
            )

    def mu_jet(self, t: Real) -> Jet:
        """Jet of mu at height t (relative to the base)."""

        power = self.wf.jet(self.base + np.asarray(t, dtype=float)).power_const(float(self.k))
        s = self.fiber_scale
        return Jet(power.value / s, power.d1 / s, power.d2 / s)

    def mu(self, t: Real) -> Real:
        """mu(t), the k-th power of the evaluated f over the fiber scale."""

        f = self.wf.value(self.base + np.asarray(t, dtype=float))
        value = np.power(f, self.k) / self.fiber_scale
        return float(value) if np.ndim(value) == 0 else value

    def div_density(self, t: Real) -> Real:
        """k (log f)'(b + t) mu(t) = mu'(t), the divergence of X times mu."""

        value = self.mu_jet(t).d1
        return float(value) if np.ndim(value) == 0 else value

    def inverse_curvature(self, h: Real) -> Real:
        """Second derivative of mu o I^{-1} at x = I(h): (mu mu'' - mu'^2) / mu^3."""

        m = self.mu_jet(h)
        value = (m.value * m.d2 - m.d1 * m.d1) / (m.value**3)
        return float(value) if np.ndim(value) == 0 else value

    def _integrand(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(self.mu(points), dtype=float)

    def table(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Monotone (knot, I(knot)) table over [0, height_max], built once."""

        table = self._table
        if table is not None:
            return table
        with self._lock:
            if self._table is None:
                knots = np.linspace(0.0, self.height_max, self._table_knots + 1)
                pieces = integrate_batch(
                    self._integrand, knots[:-1], knots[1:], 0.5 * self.tol_quad
                )
                cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
                knots.setflags(write=False)
                cumulative.setflags(write=False)
                self._table = (knots, cumulative)
            return self._table

    @property
    def capacity(self) -> float:
        """I(height_max), the largest room volume per unit floor."""

        return float(self.table()[1][-1])

    def integrate(self, a: float, b: float) -> float:
        """int_a^b mu(t) dt with absolute error at most tol_quad."""

        self._check_height(np.array([a, b]))
        return integrate(self.mu, a, b, self.tol_quad)

    def I_many(self, hs: NDArray[np.float64]) -> NDArray[np.float64]:
        """Vectorized I(h); I(0) is exactly 0."""

        hs = np.asarray(hs, dtype=float)
        self._check_height(hs)
        knots, cumulative = self.table()
        flat = hs.ravel()
        index = np.clip(np.searchsorted(knots, flat, side="right") - 1, 0, len(knots) - 1)
        tails = integrate_batch(
            self._integrand, knots[index], np.maximum(flat, knots[index]), 0.5 * self.tol_quad
        )
        return (cumulative[index] + tails).reshape(hs.shape)

    def I(self, h: float) -> float:  # noqa: E743
        """I(h) = int_0^h mu(t) dt with absolute error at most tol_quad."""

        if h == 0.0:
            return 0.0
        return float(self.I_many(np.array([h], dtype=float))[0])

    def invert(self, target: float) -> float:
        """Return h with I(h) = target.

        The table supplies a monotone bracket [knot_j, knot_j+1] and a linear
        starting guess. Newton steps with derivative I' = mu > 0 refine it;
        if Newton leaves the bracket or stalls, Brent's method on the bracket
        takes over.

        Raises:
            RangeError: If target is negative or exceeds I(height_max).
            QuadratureConvergenceError: If the residual tolerance is not met.
        """

        if target < 0.0:
            raise RangeError(f"Target {target} is negative")
        if target == 0.0:
            return 0.0
        knots, cumulative = self.table()
        top = float(cumulative[-1])
        tolerance = self.tol_quad * (1.0 + abs(target))
        if target > top + tolerance:
            raise RangeError(
                f"Target {target:.17g} exceeds I(domain_max) = {top:.17g}: "
                "room too large for the working interval"
            )
        if target >= top:
            return float(self.height_max)
        j = int(np.searchsorted(cumulative, target, side="right")) - 1
        j = min(max(j, 0), len(knots) - 2)
        lo, hi = float(knots[j]), float(knots[j + 1])

        def clamp(x: float) -> float:
            return min(max(x, 0.0), self.height_max)

        def residual(x: float) -> float:
            return self.I(clamp(x)) - target

        piece = float(cumulative[j + 1] - cumulative[j])
        x0 = lo + (target - float(cumulative[j])) / piece * (hi - lo) if piece > 0.0 else lo
        newton = root_scalar(
            residual,
            x0=x0,
            fprime=lambda x: self.mu(clamp(x)),
            method="newton",
            xtol=ROOT_XTOL,
            rtol=ROOT_REL_TOL,
            maxiter=INVERT_MAX_ITERATIONS,
        )
        h = float(newton.root)
        if not (newton.converged and lo <= h <= hi):
            h = float(
                brentq(
                    residual,
                    lo,
                    hi,
                    xtol=ROOT_XTOL,
                    rtol=ROOT_REL_TOL,
                    maxiter=INVERT_MAX_ITERATIONS,
                )
            )
        error = abs(residual(h))
        if error > tolerance:
            raise QuadratureConvergenceError(
                f"Inversion of I did not reach the residual tolerance for target {target:.17g}",
                error,
            )
        return h
