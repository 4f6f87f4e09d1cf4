"""Isoperimetric profile, its lower bound omega, and the Dido volume problem.

The profile I_prof(h) = mu(h) / I(h) = d/dh log I(h) is the ratio of ceiling
area to room volume for the constant-height room B(h) over a unit floor. Its
critical points satisfy I_prof = n f'/f; the smallest one's value (or, with
no critical points, lim n f'/f for unbounded f) is a lower bound omega, and
Vol(R) <= Vol(C) / omega for every room.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import brentq

from warpiso.constants import (
    CRIT_MERGE_DISTANCE,
    DEFAULT_CRIT_GRID,
    DEFAULT_PROFILE_SAMPLES,
    DEFAULT_TOL_CRIT,
    DEFAULT_TOL_GROWTH,
    DEFAULT_TOL_VERIFY,
    DEGENERATE_RELATIVE_SPREAD,
    DIDO_SCAN_POINTS,
    GROWTH_RATIO,
    GROWTH_TAIL_FRACTION,
    MINIMUM_REL_TOL,
    ROOT_MAX_ITERATIONS,
    ROOT_REL_TOL,
    ROOT_XTOL,
)
from warpiso.errors import (
    DegenerateEquationError,
    NoSolutionError,
    PreconditionError,
    QuadratureConvergenceError,
    RangeError,
)
from warpiso.geom import Ceiling, Floor, ceiling_area, floor_volume, room_volume
from warpiso.quad import MuIntegral, ScalarFunc
from warpiso.schemas import (
    AreaMode,
    CriticalPoint,
    DidoProfile,
    DidoSolution,
    GrowthVerdict,
    OmegaResult,
    OmegaSource,
    VolumeBound,
)


def _check_window(mu: MuIntegral, h_min: float, h_max: float) -> None:
    if not 0.0 < h_min < h_max <= mu.height_max:
        raise RangeError(
            f"Profile window must satisfy 0 < h_min < h_max <= {mu.height_max}, "
            f"got [{h_min}, {h_max}]"
        )


def default_h_min(mu: MuIntegral, grid: int = DEFAULT_CRIT_GRID) -> float:
    """Left end of the default window: one grid spacing above the base."""

    return mu.height_max / grid


def isoperimetric_profile(mu: MuIntegral, hs: NDArray[np.float64]) -> NDArray[np.float64]:
    """mu(h) / I(h) at each h > 0."""

    hs = np.asarray(hs, dtype=float)
    return np.asarray(mu.mu(hs), dtype=float) / mu.I_many(hs)


def companion(mu: MuIntegral, hs: NDArray[np.float64]) -> NDArray[np.float64]:
    """n f'/f at b + h, with n the fiber dimension."""

    hs = np.asarray(hs, dtype=float)
    return mu.k * np.asarray(mu.wf.log_derivative(mu.base + hs), dtype=float)


def profile(
    mu: MuIntegral,
    h_min: float,
    h_max: float,
    samples: int = DEFAULT_PROFILE_SAMPLES,
) -> DidoProfile:
    """Sample the profile and its companion curve on a uniform grid.

    Raises:
        RangeError: If the window is not inside (0, domain_max - b].
        QuadratureConvergenceError: If I cannot be resolved.
    """

    _check_window(mu, h_min, h_max)
    if samples < 2:
        raise ValueError(f"samples must be at least 2, got {samples}")
    hs = np.linspace(h_min, h_max, samples)
    values = isoperimetric_profile(mu, hs)
    return DidoProfile(
        n=mu.k,
        h=hs.tolist(),
        profile=values.tolist(),
        companion=companion(mu, hs).tolist(),
        sampled_min=float(np.min(values)),
    )


def sampled_minima(values: NDArray[np.float64]) -> NDArray[np.intp]:
    """Indices of local minima of a sampled curve, window ends included.

    A flat run counts once, at its last sample.
    """

    values = np.asarray(values, dtype=float)
    padded = np.concatenate([[np.inf], values, [np.inf]])
    return np.flatnonzero((values <= padded[:-2]) & (values < padded[2:]))


def has_unique_minimum(values: NDArray[np.float64], rel_tol: float = MINIMUM_REL_TOL) -> bool:
    """Exactly one sampled local minimum lies within rel_tol of the global minimum."""

    lows = np.asarray(values, dtype=float)[sampled_minima(values)]
    lowest = float(np.min(lows))
    return int(np.sum(lows <= lowest + rel_tol * max(1.0, abs(lowest)))) == 1


def _refine_root(func: ScalarFunc, lo: float, hi: float, rel_tol: float) -> float:
    """Brent's method on a grid cell where sampled values changed sign.

    The scalar re-evaluation may round the other way at a root sitting on
    a grid point; the endpoint closer to zero is returned then.
    """

    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        return lo if abs(f_lo) <= abs(f_hi) else hi
    return float(
        brentq(func, lo, hi, xtol=ROOT_XTOL, rtol=rel_tol, maxiter=ROOT_MAX_ITERATIONS)
    )


def critical_points(
    mu: MuIntegral,
    h_min: float,
    h_max: float,
    *,
    grid: int = DEFAULT_CRIT_GRID,
    rel_tol: float = ROOT_REL_TOL,
    tol_crit: float = DEFAULT_TOL_CRIT,
) -> list[CriticalPoint]:
    """Roots of d(h) = n f'/f - I_prof(h) on [h_min, h_max], sorted by h.

    Roots are bracketed by sign changes of d on a uniform grid and refined
    with Brent's method; roots closer than the merge distance are reported
    once.

    Raises:
        QuadratureConvergenceError: If a refined root leaves
            |I_prof(h*) - n f'/f(h*)| above tol_crit * max(1, |n f'/f(h*)|).
    """

    _check_window(mu, h_min, h_max)
    hs = np.linspace(h_min, h_max, grid)
    d = companion(mu, hs) - isoperimetric_profile(mu, hs)

    def gap(h: float) -> float:
        return float(mu.k * mu.wf.log_derivative(mu.base + h)) - float(mu.mu(h)) / mu.I(h)

    roots: list[float] = []
    for i in range(grid):
        if d[i] == 0.0:
            roots.append(float(hs[i]))
        elif i + 1 < grid and d[i] * d[i + 1] < 0.0:
            roots.append(_refine_root(gap, float(hs[i]), float(hs[i + 1]), rel_tol))

    points: list[CriticalPoint] = []
    for root in roots:
        if points and root - points[-1].h <= CRIT_MERGE_DISTANCE:
            continue
        slope = float(mu.k * mu.wf.log_derivative(mu.base + root))
        value = float(mu.mu(root)) / mu.I(root)
        residual = abs(value - slope)
        if residual > tol_crit * max(1.0, abs(slope)):
            raise QuadratureConvergenceError(
                f"Critical point at h={root:.17g} misses the condition "
                f"I_prof = n f'/f by {residual:.3e}",
                residual,
            )
        points.append(CriticalPoint(h=root, value=value, residual=residual))
    return points


def growth_verdict(
    mu: MuIntegral,
    *,
    tol_growth: float = DEFAULT_TOL_GROWTH,
    declared_limit: float | None = None,
    samples: int = DEFAULT_PROFILE_SAMPLES,
) -> GrowthVerdict:
    """Finite-window proxy for "f is unbounded".

    f counts as unbounded when n f'/f >= tol_growth on the last decile of the
    window and f grows by more than a factor GROWTH_RATIO across it.
    """

    top = mu.height_max
    tail = np.linspace(top * (1.0 - GROWTH_TAIL_FRACTION), top, samples)
    min_tail_growth = float(np.min(companion(mu, tail)))
    f_base = float(mu.wf.value(mu.base))
    f_top = float(mu.wf.value(mu.base + top))
    ratio = f_top / f_base
    return GrowthVerdict(
        unbounded=min_tail_growth >= tol_growth and ratio > GROWTH_RATIO,
        min_tail_growth=min_tail_growth,
        growth_ratio=ratio,
        declared=declared_limit is not None,
    )


def omega(
    mu: MuIntegral,
    declared_limit: float | None = None,
    *,
    h_min: float | None = None,
    grid: int = DEFAULT_CRIT_GRID,
    tol_growth: float = DEFAULT_TOL_GROWTH,
) -> OmegaResult:
    """Positive lower bound omega for the profile.

    Uses the first critical value when critical points exist in the window;
    otherwise the declared limit of n f'/f, or its value at the right end of
    the window flagged as an estimate.

    Args:
        mu: Density integral with exponent n.
        declared_limit: User-declared lim n f'/f; falls back to the warping
            function's own declared limit.
        h_min: Left end of the search window (defaults to one grid spacing).
        grid: Grid size for the critical-point search.
        tol_growth: Threshold for the unboundedness proxy.

    Returns:
        The `OmegaResult`.

    Raises:
        PreconditionError: If f is bounded on the window and no limit was
            declared, or if the resulting omega is not positive.
    """

    if declared_limit is None:
        declared_limit = mu.wf.declared_limit
    growth = growth_verdict(mu, tol_growth=tol_growth, declared_limit=declared_limit)
    if not growth.unbounded and declared_limit is None:
        raise PreconditionError(
            "f is not increasing without bound on the working interval "
            f"(min tail n f'/f = {growth.min_tail_growth:.3e}, "
            f"growth ratio = {growth.growth_ratio:.3e}); the profile has no positive lower bound"
        )

    h_min = default_h_min(mu, grid) if h_min is None else h_min
    points = critical_points(mu, h_min, mu.height_max, grid=grid)
    hs = np.linspace(h_min, mu.height_max, grid)
    sampled_min = float(np.min(isoperimetric_profile(mu, hs)))

    if points:
        value, source, estimate = points[0].value, OmegaSource.FIRST_CRITICAL_VALUE, False
    elif declared_limit is not None:
        value, source, estimate = float(declared_limit), OmegaSource.LIMIT_NF_OVER_F, False
    else:
        plateau = float(companion(mu, np.array([mu.height_max]))[0])
        value, source, estimate = plateau, OmegaSource.LIMIT_NF_OVER_F, True

    if not value > 0.0:
        raise PreconditionError(f"omega must be positive, got {value:.17g}")
    return OmegaResult(
        omega=value,
        source=source,
        is_estimate=estimate,
        critical_points=tuple(points),
        growth=growth,
        sampled_min=sampled_min,
    )


def volume_bound_check(
    floor: Floor,
    ceiling: Ceiling,
    mu: MuIntegral,
    omega_value: float,
    *,
    tol_verify: float = DEFAULT_TOL_VERIFY,
) -> VolumeBound:
    """Check Vol(R) <= Vol_C_vertical / omega."""

    if not omega_value > 0.0:
        raise ValueError(f"omega must be positive, got {omega_value}")
    vol_R = room_volume(floor, ceiling, mu)
    vol_C = ceiling_area(floor, ceiling, mu, AreaMode.VERTICAL)
    bound = vol_C / omega_value
    return VolumeBound(
        vol_R=vol_R,
        vol_C=vol_C,
        bound=bound,
        ok=vol_R <= bound + tol_verify * max(1.0, abs(bound)),
    )


def dido_solve(floor: Floor, mu: MuIntegral, area: float) -> DidoSolution:
    """Constant ceilings of n-volume `area` and the one with the larger room.

    Solves Vol(F) mu(h) = area for h in [0, domain_max - b]. For convex f there
    are one or two solutions; the one whose room Vol(F) I(h) is larger is
    chosen.

    Raises:
        DegenerateEquationError: If mu is constant on the window.
        NoSolutionError: If `area` lies outside the range of Vol(F) mu.
    """

    vol_floor = floor_volume(floor)
    hs = np.linspace(0.0, mu.height_max, DIDO_SCAN_POINTS)
    values = vol_floor * np.asarray(mu.mu(hs), dtype=float)
    spread = float(np.max(values) - np.min(values))
    if spread <= DEGENERATE_RELATIVE_SPREAD * float(np.max(np.abs(values))):
        raise DegenerateEquationError(
            "Vol(F) f(h)^n is constant on the working interval; every height solves "
            "the equation or none does"
        )

    def residual(h: float) -> float:
        return vol_floor * float(mu.mu(h)) - area

    r = values - area
    solutions: list[float] = []
    for i in range(hs.size):
        if r[i] == 0.0:
            solutions.append(float(hs[i]))
        elif i + 1 < hs.size and r[i] * r[i + 1] < 0.0:
            solutions.append(_refine_root(residual, float(hs[i]), float(hs[i + 1]), ROOT_REL_TOL))
    if not solutions:
        j = int(np.argmin(np.abs(r)))
        if abs(r[j]) <= DEFAULT_TOL_VERIFY * max(1.0, abs(area)):
            solutions.append(float(hs[j]))
    if not solutions:
        raise NoSolutionError(
            f"Target area {area:.17g} outside [{np.min(values):.17g}, {np.max(values):.17g}], "
            "the range of Vol(F) f(h)^n on the working interval"
        )

    rooms = vol_floor * mu.I_many(np.array(solutions))
    best = int(np.argmax(rooms))
    return DidoSolution(
        h_solutions=tuple(solutions),
        chosen_h=solutions[best],
        vol_room=float(rooms[best]),
    )
