"""Typed value objects for certification, verification and profile reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class FloorKind(str, Enum):
    """Supported fiber geometries for a floor."""

    INTERVAL = "interval"
    RECTANGLE = "rectangle"
    CIRCLE = "circle"
    WEIGHTED_CELLS = "weighted_cells"


class Interpolation(str, Enum):
    """How ceiling heights are interpreted between samples."""

    STEP = "step"
    LINEAR = "linear"


class AreaMode(str, Enum):
    """Which part of the ceiling area to measure."""

    VERTICAL = "vertical"
    FULL = "full"


class Equality(str, Enum):
    """Equality-case classification for Vol(S) <= Vol(C)."""

    NONE = "none"
    EXACT_CONSTANT = "exact_constant"
    LOG_LINEAR_EQUALITY = "log_linear_equality"


class OmegaSource(str, Enum):
    """Where the lower bound omega of the isoperimetric profile came from."""

    FIRST_CRITICAL_VALUE = "first_critical_value"
    LIMIT_NF_OVER_F = "limit_nf_over_f"
    UNAVAILABLE = "unavailable"


@dataclass(frozen=True)
class CertificationReport:
    """Grid certification of positivity and log-convexity of f.

    Attributes:
        grid_points: Number of grid points on [lo, hi].
        lo: Left end of the certified window.
        hi: Right end of the certified window.
        min_f: Smallest sampled value of f.
        min_log_second: Smallest sampled (log f)''; NaN when f is not positive.
        argmin_log_second: Grid point attaining ``min_log_second``.
        positive: f > 0 at every grid point.
        log_convex: (log f)'' >= -tol_logconvex at every grid point.
        strictly_log_convex: (log f)'' > tol_strict at every grid point.
        error: Evaluation failure message, if the expression left its domain.
    """

    grid_points: int
    lo: float
    hi: float
    min_f: float
    min_log_second: float
    argmin_log_second: float
    positive: bool
    log_convex: bool
    strictly_log_convex: bool
    error: str | None = None


@dataclass(frozen=True)
class IsoperimetricReport:
    """Outcome of comparing a ceiling against its equal-volume constant ceiling."""

    vol_room: float
    vol_floor: float
    H: float
    vol_S: float
    vol_C_vertical: float
    vol_C_full: float | None
    margin: float
    equality: Equality
    strict_f: bool
    log_convex: bool
    mu_of_H: float
    mean_mu: float
    asserted: bool = True
    seed: int | None = None
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class CalibrationResult:
    """Divergence-theorem identity for the constant room B and the room R.

    Attributes:
        flux_B: Integral of div X over B.
        area_gap_B: Vol(S) - Vol(F).
        gap: |flux_B - area_gap_B|.
        flux_R: Integral of div X over R.
        area_gap_R: Vol_C_vertical - Vol(F).
        gap_R: |flux_R - area_gap_R|.
        chain_ok: flux_B <= flux_R + slack.
    """

    flux_B: float
    area_gap_B: float
    gap: float
    flux_R: float
    area_gap_R: float
    gap_R: float
    chain_ok: bool


@dataclass(frozen=True)
class CriticalPoint:
    """Root of n f'/f - I_profile with its critical value.

    Attributes:
        h: Height h* of the critical point.
        value: I_profile(h*).
        residual: |I_profile(h*) - n f'/f(h*)| after refinement.
    """

    h: float
    value: float
    residual: float = 0.0


@dataclass(frozen=True)
class GrowthVerdict:
    """Finite-window approximation of "f is unbounded on [0, inf)"."""

    unbounded: bool
    min_tail_growth: float
    growth_ratio: float
    declared: bool = False


@dataclass
class DidoProfile:
    """Samples of the isoperimetric profile and derived quantities."""

    n: int
    h: list[float]
    profile: list[float]
    companion: list[float]
    critical_points: list[CriticalPoint] = field(default_factory=list)
    omega: float | None = None
    omega_source: OmegaSource = OmegaSource.UNAVAILABLE
    omega_is_estimate: bool = False
    unbounded_f: GrowthVerdict | None = None
    sampled_min: float | None = None


@dataclass(frozen=True)
class OmegaResult:
    """Positive lower bound for the isoperimetric profile."""

    omega: float
    source: OmegaSource
    is_estimate: bool
    critical_points: tuple[CriticalPoint, ...]
    growth: GrowthVerdict
    sampled_min: float


@dataclass(frozen=True)
class VolumeBound:
    """Check of Vol(R) <= Vol(C) / omega."""

    vol_R: float
    vol_C: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class DidoSolution:
    """Solutions of Vol(F) f(h)^n = A and the chosen maximal room."""

    h_solutions: tuple[float, ...]
    chosen_h: float
    vol_room: float


@dataclass(frozen=True)
class ReproResult:
    """Outcome of reproducing one of the named profile examples."""

    name: str
    passed: bool
    checks: dict[str, bool]
    details: dict[str, float | int | str]
