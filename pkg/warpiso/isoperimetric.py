"""Equal-volume constant ceilings and the relative isoperimetric comparison.

For a floor F and ceiling C the constant height H solves
Vol(F) * I(H) = Vol(R). When f is log-convex, mu o I^{-1} is convex and
Jensen's inequality gives Vol(S) = Vol(F) mu(H) <= int_F mu(l) dV, i.e. the
constant ceiling S has no more vertical area than C.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from warpiso.constants import (
    CALIBRATION_CHAIN_SLACK,
    DEFAULT_CERTIFY_GRID,
    DEFAULT_TOL_LOGCONVEX,
    DEFAULT_TOL_STRICT,
    DEFAULT_TOL_VERIFY,
    EQUALITY_HEIGHT_TOL,
)
from warpiso.errors import InequalityViolationError
from warpiso.geom import Ceiling, Floor, ceiling_area, floor_volume, room_volume
from warpiso.quad import MuIntegral, integrate, integrate_batch
from warpiso.schemas import (
    AreaMode,
    CalibrationResult,
    CertificationReport,
    Equality,
    IsoperimetricReport,
)

NOT_LOG_CONVEX_WARNING = "warping function is not log-convex; inequality not asserted"


def _scaled(tol: float, magnitude: float) -> float:
    # Absolute below unit magnitude, relative above it.
    return tol * max(1.0, abs(magnitude))


def solve_constant_height(floor: Floor, ceiling: Ceiling, mu: MuIntegral) -> float:
    """Height H of the constant ceiling enclosing the same volume as C.

    Raises:
        RangeError: If the room is too tall for the working interval.
    """

    return mu.invert(room_volume(floor, ceiling, mu) / floor_volume(floor))


def partition_height(pieces: list[tuple[float, float]], mu: MuIntegral) -> float:
    """H from the finite partition form sum_i Vol(F_i) I(h_i) = Vol(F) I(H).

    Args:
        pieces: (Vol_k(F_i), h_i) pairs as returned by `Ceiling.partition`.
        mu: The density integral.

    Returns:
        The equal-volume constant height.
    """

    if not pieces:
        raise ValueError("Partition must have at least one piece.")
    volumes = np.array([v for v, _ in pieces], dtype=float)
    heights = np.array([h for _, h in pieces], dtype=float)
    total = float(np.sum(volumes))
    return mu.invert(float(np.sum(volumes * mu.I_many(heights))) / total)


def diagnose_equality(
    report: IsoperimetricReport,
    ceiling: Ceiling,
    certification: CertificationReport,
    mu: MuIntegral,
    *,
    tol_verify: float = DEFAULT_TOL_VERIFY,
    tol_strict: float = DEFAULT_TOL_STRICT,
) -> Equality:
    """Classify the equality case of Vol(S) <= Vol(C).

    A ceiling whose heights all equal H is the constant ceiling itself. A tight
    margin with f log-convex but not strictly log-convex on the ceiling's
    height range is the log-linear equality case. Anything else is strict.
    """

    if np.all(np.abs(ceiling.heights - report.H) <= EQUALITY_HEIGHT_TOL * (1.0 + report.H)):
        return Equality.EXACT_CONSTANT
    if not certification.log_convex or report.margin > _scaled(tol_verify, report.vol_S):
        return Equality.NONE
    on_range = mu.wf.certify(
        certification.grid_points,
        lo=mu.base + ceiling.min_height,
        hi=mu.base + ceiling.max_height,
        tol_strict=tol_strict,
    )
    if on_range.positive and not on_range.strictly_log_convex:
        return Equality.LOG_LINEAR_EQUALITY
    return Equality.NONE


def verify(
    floor: Floor,
    ceiling: Ceiling,
    mu: MuIntegral,
    *,
    tol_verify: float = DEFAULT_TOL_VERIFY,
    certify_grid: int = DEFAULT_CERTIFY_GRID,
    tol_logconvex: float = DEFAULT_TOL_LOGCONVEX,
    tol_strict: float = DEFAULT_TOL_STRICT,
    seed: int | None = None,
) -> IsoperimetricReport:
    """Compare C against its equal-volume constant ceiling S.

    The margin is measured against the vertical area of C. When f is not
    log-convex on the working interval the report carries a warning and the
    inequality is not asserted.

    Args:
        floor: Floor of the room.
        ceiling: Ceiling over `floor`.
        mu: Density integral with the floor's dimension and base.
        tol_verify: Allowed negative margin before declaring a violation.
        certify_grid: Grid size for the log-convexity certificate.
        tol_logconvex: Tolerance of the log-convexity certificate.
        tol_strict: Threshold for strict log-convexity.
        seed: Seed that generated the instance, recorded in the report.

    Returns:
        The `IsoperimetricReport`.

    Raises:
        InequalityViolationError: If f is log-convex and the margin is below
            -tol_verify.
        RangeError: If the room does not fit in the working interval.
        QuadratureConvergenceError: If an integral cannot be resolved.
    """

    certification = mu.wf.certify(
        certify_grid,
        lo=mu.base,
        tol_logconvex=tol_logconvex,
        tol_strict=tol_strict,
    )
    warnings: list[str] = []
    if certification.error is not None:
        warnings.append(f"certification failed: {certification.error}")
    if not certification.log_convex:
        warnings.append(NOT_LOG_CONVEX_WARNING)

    vol_floor = floor_volume(floor)
    vol_room = room_volume(floor, ceiling, mu)
    H = mu.invert(vol_room / vol_floor)
    mu_of_H = float(mu.mu(H))
    vol_S = vol_floor * mu_of_H
    vol_C_vertical = ceiling_area(floor, ceiling, mu, AreaMode.VERTICAL)
    vol_C_full = ceiling_area(floor, ceiling, mu, AreaMode.FULL) if floor.is_grid else None

    report = IsoperimetricReport(
        vol_room=vol_room,
        vol_floor=vol_floor,
        H=H,
        vol_S=vol_S,
        vol_C_vertical=vol_C_vertical,
        vol_C_full=vol_C_full,
        margin=vol_C_vertical - vol_S,
        equality=Equality.NONE,
        strict_f=certification.strictly_log_convex,
        log_convex=certification.log_convex,
        mu_of_H=mu_of_H,
        mean_mu=vol_C_vertical / vol_floor,
        asserted=certification.log_convex,
        seed=seed,
        warnings=tuple(warnings),
    )
    equality = diagnose_equality(
        report, ceiling, certification, mu, tol_verify=tol_verify, tol_strict=tol_strict
    )
    report = replace(report, equality=equality)
    if report.asserted and report.margin < -_scaled(tol_verify, vol_S):
        raise InequalityViolationError(report)
    return report


def calibration_check(floor: Floor, ceiling: Ceiling, mu: MuIntegral) -> CalibrationResult:
    """Divergence-theorem identity for the unit horizontal field X.

    With div X = k (log f)', the flux of X through the constant room B is
    int_F int_0^H k (log f)' mu dt dV = Vol(S) - Vol(F). The same integral over
    R equals Vol_C_vertical - Vol(F); log-convexity makes div X nondecreasing
    in t, which yields the chain flux_B <= flux_R.

    Each flux is computed by quadrature of div X mu, independently of the
    closed-form area differences it is compared against.
    """

    vol_floor = floor_volume(floor)
    H = solve_constant_height(floor, ceiling, mu)
    flux_B = vol_floor * integrate(mu.div_density, 0.0, H, mu.tol_quad)
    area_gap_B = vol_floor * float(mu.mu(H)) - vol_floor

    heights, weights, _ = ceiling.samples()
    columns = integrate_batch(mu.div_density, np.zeros_like(heights), heights, mu.tol_quad)
    flux_R = float(np.sum(weights * columns))
    area_gap_R = ceiling_area(floor, ceiling, mu, AreaMode.VERTICAL) - vol_floor

    return CalibrationResult(
        flux_B=flux_B,
        area_gap_B=area_gap_B,
        gap=abs(flux_B - area_gap_B),
        flux_R=flux_R,
        area_gap_R=area_gap_R,
        gap_R=abs(flux_R - area_gap_R),
        chain_ok=flux_B <= flux_R + CALIBRATION_CHAIN_SLACK * max(1.0, abs(flux_R)),
    )
