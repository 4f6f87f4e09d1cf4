"""Command bodies for the warpiso CLI.

Each command builds its objects from a `RunConfig`, runs the library, prints
its report as ``key=value`` lines and returns a process exit code. Library
exceptions propagate; `exit_code_for` maps them onto the exit-code contract.
"""

from __future__ import annotations

import asyncio
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from warpiso.config import (
    RunConfig,
    build_ceiling,
    build_floor,
    build_mu,
    build_warping,
    get_config,
)
from warpiso.constants import (
    EXIT_CERTIFICATION,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    EXIT_VIOLATION,
    SWEEP_A_RANGE,
    SWEEP_B_RANGE,
    SWEEP_DOMAIN_MAX,
    SWEEP_MAX_STEPS,
)
from warpiso.dido import (
    critical_points,
    default_h_min,
    dido_solve,
    has_unique_minimum,
    omega,
    profile,
    volume_bound_check,
)
from warpiso.errors import (
    ConfigError,
    InequalityViolationError,
    PreconditionError,
    WarpisoError,
)
from warpiso.geom import Ceiling, Floor, default_random_height
from warpiso.isoperimetric import calibration_check, verify
from warpiso.quad import MuIntegral
from warpiso.report import (
    append_csv_row,
    format_number,
    format_value,
    render_key_values,
    write_csv,
)
from warpiso.schemas import IsoperimetricReport, OmegaResult, OmegaSource, ReproResult
from warpiso.trace import TraceLogger
from warpiso.warpfn import parse

REPRO_NAMES = ("ex1", "ex2", "ex3", "ex4")
PLATEAU_TOL = 1e-3

type Emit = Callable[[str], None]


def exit_code_for(exc: BaseException) -> int:
    """Exit code for an exception escaping a command."""

    match exc:
        case InequalityViolationError():
            return EXIT_VIOLATION
        case PreconditionError():
            return EXIT_PRECONDITION
    return EXIT_USAGE


def _render_omega(result: OmegaResult) -> str:
    data = asdict(result)
    data.pop("critical_points")
    data["critical_point_count"] = len(result.critical_points)
    return render_key_values(data)


class Runtime:
    """Runs one command against one configuration and traces its stages."""

    def __init__(
        self,
        config: RunConfig,
        *,
        trace_path: Path | None = None,
        output: Path | None = None,
        csv_append: Path | None = None,
        emit: Emit = print,
    ) -> None:
        self.config = config
        self.output = output
        self.csv_append = csv_append
        self.emit = emit
        self.trace = TraceLogger(trace_path)

    def run(self, command: str) -> int:
        """Dispatch `command`, closing the trace with the resulting exit code."""

        handler = {
            "check": self.check,
            "verify": self.verify,
            "omega": self.omega,
            "profile": self.profile,
            "dido": self.dido,
        }[command]
        self.trace.run_start(command, self.config.name)
        code = EXIT_USAGE
        try:
            code = handler()
        except WarpisoError as exc:
            code = exit_code_for(exc)
            self.trace.warning(str(exc))
            raise
        finally:
            self.trace.run_end(code)
            self.trace.close()
        return code

    def _space(self, mu: MuIntegral | None = None) -> tuple[MuIntegral, Floor, Ceiling]:
        mu = build_mu(self.config) if mu is None else mu
        floor = build_floor(self.config, mu)
        ceiling = build_ceiling(self.config, floor, mu, np.random.default_rng(self.config.seed))
        self.trace.stage(
            "space",
            {"k": mu.k, "base": mu.base, "cells": floor.cell_count, "capacity": mu.capacity},
        )
        return mu, floor, ceiling

    def check(self) -> int:
        wf = build_warping(self.config)
        tolerances = self.config.tolerances
        report = wf.certify(
            tolerances.certify_grid,
            lo=self.config.warping.base,
            tol_logconvex=tolerances.tol_logconvex,
            tol_strict=tolerances.tol_strict,
        )
        self.trace.stage("certify", {"report": report})
        self.emit(f"expression={wf.unparse()}")
        self.emit(render_key_values(report))
        return EXIT_OK if report.log_convex else EXIT_CERTIFICATION

    def verify(self) -> int:
        mu, floor, ceiling = self._space()
        tolerances = self.config.tolerances
        code = EXIT_OK
        try:
            report = verify(
                floor,
                ceiling,
                mu,
                tol_verify=tolerances.tol_verify,
                certify_grid=tolerances.certify_grid,
                tol_logconvex=tolerances.tol_logconvex,
                tol_strict=tolerances.tol_strict,
                seed=self.config.seed,
            )
        except InequalityViolationError as exc:
            report, code = exc.report, EXIT_VIOLATION
            self.trace.warning(str(exc))
        self.trace.stage("verify", {"report": report})
        for message in report.warnings:
            self.trace.warning(message)
        calibration = calibration_check(floor, ceiling, mu)
        self.trace.stage("calibration", {"result": calibration})

        self.emit(render_key_values(report))
        self.emit(render_key_values(calibration, "calibration."))
        if self.csv_append is not None:
            append_csv_row(self.csv_append, report)
        return code

    def omega(self) -> int:
        mu = build_mu(self.config)
        result = omega(
            mu,
            self.config.warping.declared_limit,
            h_min=self.config.window.h_min,
            grid=self.config.tolerances.crit_grid,
            tol_growth=self.config.tolerances.tol_growth,
        )
        self.trace.stage("omega", {"result": result})
        self.emit(_render_omega(result))
        if self.output is not None:
            write_csv(
                self.output,
                ("h_star", "crit_value"),
                [(p.h, p.value) for p in result.critical_points],
            )

        _, floor, ceiling = self._space(mu)
        bound = volume_bound_check(
            floor, ceiling, mu, result.omega, tol_verify=self.config.tolerances.tol_verify
        )
        self.trace.stage("volume_bound", {"result": bound})
        self.emit(render_key_values(bound, "bound."))
        return EXIT_OK if bound.ok else EXIT_VIOLATION

    def profile(self) -> int:
        mu = build_mu(self.config)
        window = self.config.window
        grid = self.config.tolerances.crit_grid
        h_min = default_h_min(mu, grid) if window.h_min is None else window.h_min
        h_max = mu.height_max if window.h_max is None else window.h_max
        samples = profile(mu, h_min, h_max, window.samples)
        samples.critical_points = critical_points(mu, h_min, h_max, grid=grid)
        try:
            result = omega(mu, self.config.warping.declared_limit, h_min=h_min, grid=grid)
        except PreconditionError as exc:
            self.trace.warning(str(exc))
        else:
            samples.omega = result.omega
            samples.omega_source = result.source
            samples.omega_is_estimate = result.is_estimate
            samples.unbounded_f = result.growth
        self.trace.stage(
            "profile",
            {
                "samples": len(samples.h),
                "critical_points": samples.critical_points,
                "omega": samples.omega,
            },
        )

        rows = list(zip(samples.h, samples.profile, samples.companion))
        if self.output is None:
            self.emit("h,Iprofile,nfprime_over_f")
            for row in rows:
                self.emit(",".join(format_number(v) for v in row))
            return EXIT_OK
        write_csv(self.output, ("h", "Iprofile", "nfprime_over_f"), rows)
        self.emit(f"samples={len(rows)}")
        self.emit(f"critical_point_count={len(samples.critical_points)}")
        self.emit(f"sampled_min={format_number(samples.sampled_min or 0.0)}")
        self.emit(
            "omega=none" if samples.omega is None else f"omega={format_number(samples.omega)}"
        )
        self.emit(f"omega_source={samples.omega_source.value}")
        return EXIT_OK

    def dido(self) -> int:
        area = self.config.area
        if area is None:
            raise ConfigError("The dido command needs run.area (target ceiling n-volume).")
        mu = build_mu(self.config)
        floor = build_floor(self.config, mu)
        solution = dido_solve(floor, mu, area)
        self.trace.stage("dido", {"solution": solution})
        self.emit(render_key_values(solution))
        return EXIT_OK


def run_command(
    command: str,
    config: RunConfig,
    *,
    trace_path: Path | None = None,
    output: Path | None = None,
    csv_append: Path | None = None,
    emit: Emit = print,
) -> int:
    """Entry point used by the CLI for the single-configuration commands."""

    runtime = Runtime(
        config, trace_path=trace_path, output=output, csv_append=csv_append, emit=emit
    )
    return runtime.run(command)


def _plateau(mu: MuIntegral) -> float:
    return float(mu.k * mu.wf.log_derivative(mu.base + mu.height_max))


def _repro_omega(config: RunConfig) -> tuple[MuIntegral, OmegaResult]:
    mu = build_mu(config)
    return mu, omega(mu, config.warping.declared_limit, grid=config.tolerances.crit_grid)


def _repro_profile_values(mu: MuIntegral, config: RunConfig) -> np.ndarray:
    grid = config.tolerances.crit_grid
    samples = profile(mu, default_h_min(mu, grid), mu.height_max, config.window.samples)
    return np.asarray(samples.profile)


def repro(name: str) -> ReproResult:
    """Reproduce the qualitative signature of one of the named profile examples.

    Raises:
        ConfigError: Unknown example name.
    """

    if name not in REPRO_NAMES:
        raise ConfigError(f"Unknown example '{name}'. Available: {', '.join(REPRO_NAMES)}")
    config = get_config(name)
    checks: dict[str, bool] = {}
    details: dict[str, float | int | str] = {}

    if name == "ex4":
        for variant in ("ex4", "ex4_hyperbolic"):
            variant_config = get_config(variant)
            try:
                _repro_omega(variant_config)
            except PreconditionError as exc:
                checks[f"{variant}_precondition_failure"] = True
                details[f"{variant}_reason"] = str(exc)
            else:
                checks[f"{variant}_precondition_failure"] = False
        details["omega_source"] = OmegaSource.UNAVAILABLE.value
        return ReproResult(name, all(checks.values()), checks, details)

    mu, result = _repro_omega(config)
    values = _repro_profile_values(mu, config)
    crit_values = [p.value for p in result.critical_points]
    plateau = _plateau(mu)
    details.update(
        critical_point_count=len(result.critical_points),
        omega=result.omega,
        omega_source=result.source.value,
        plateau=plateau,
        sampled_min=float(np.min(values)),
    )

    match name:
        case "ex1":
            checks["at_least_three_critical_points"] = len(crit_values) >= 3
            checks["unique_sampled_minimum"] = has_unique_minimum(values)
            checks["critical_values_nondecreasing"] = all(
                b >= a - 1e-9 for a, b in zip(crit_values, crit_values[1:])
            )
        case "ex2":
            checks["one_critical_point"] = len(crit_values) == 1
            checks["omega_below_limit"] = result.omega < 2.0
            checks["plateau_near_two"] = abs(plateau - 2.0) <= PLATEAU_TOL
        case "ex3":
            checks["no_critical_points"] = not crit_values
            checks["plateau_near_one"] = abs(plateau - 1.0) <= PLATEAU_TOL
            checks["strictly_decreasing"] = bool(np.all(np.diff(values) < 0.0))
    return ReproResult(name, all(checks.values()), checks, details)


def cmd_repro(name: str, *, trace_path: Path | None = None, emit: Emit = print) -> int:
    trace = TraceLogger(trace_path)
    trace.run_start("repro", name)
    code = EXIT_USAGE
    try:
        result = repro(name)
        trace.stage("repro", {"result": result})
        emit(f"name={result.name}")
        emit(f"passed={'true' if result.passed else 'false'}")
        for key, ok in result.checks.items():
            emit(f"check.{key}={'true' if ok else 'false'}")
        emit(render_key_values(result.details, "detail."))
        code = EXIT_OK if result.passed else EXIT_VIOLATION
        return code
    finally:
        trace.run_end(code)
        trace.close()


@dataclass(frozen=True)
class SweepOutcome:
    """One random instance of the log-convex family e^{a t^2 + b t}."""

    index: int
    a: float
    b: float
    report: IsoperimetricReport
    violated: bool


def sweep_instance(index: int, seed: int, tol_verify: float) -> SweepOutcome:
    """Build and verify the `index`-th random instance for `seed`.

    Every instance draws from its own child of the seed sequence, so results do
    not depend on scheduling.
    """

    rng = np.random.default_rng([seed, index])
    a = float(rng.uniform(*SWEEP_A_RANGE))
    b = float(rng.uniform(*SWEEP_B_RANGE))
    wf = parse(f"exp({a!r}*t^2 + ({b!r})*t)", domain_max=SWEEP_DOMAIN_MAX)
    mu = MuIntegral(wf, 1)
    floor = Floor.random_weighted(rng, int(rng.integers(1, 2 * SWEEP_MAX_STEPS + 1)), 1)
    steps = int(rng.integers(1, SWEEP_MAX_STEPS + 1))
    ceiling = Ceiling.random_step(floor, rng, default_random_height(mu), values=steps)
    try:
        report = verify(floor, ceiling, mu, tol_verify=tol_verify, seed=seed)
    except InequalityViolationError as exc:
        return SweepOutcome(index, a, b, exc.report, True)
    return SweepOutcome(index, a, b, report, False)


async def sweep(instances: int, seed: int, tol_verify: float) -> list[SweepOutcome]:
    """Verify `instances` random instances concurrently, in index order."""

    tasks = [
        asyncio.to_thread(sweep_instance, index, seed, tol_verify) for index in range(instances)
    ]
    return list(await asyncio.gather(*tasks))


def cmd_sweep(
    instances: int,
    seed: int,
    *,
    tol_verify: float,
    output: Path | None = None,
    trace_path: Path | None = None,
    emit: Emit = print,
) -> int:
    trace = TraceLogger(trace_path)
    trace.run_start("sweep", f"seed={seed}")
    code = EXIT_USAGE
    try:
        outcomes = asyncio.run(sweep(instances, seed, tol_verify))
        rows = [
            (
                o.index,
                o.a,
                o.b,
                o.report.H,
                o.report.vol_S,
                o.report.vol_C_vertical,
                o.report.margin,
            )
            for o in outcomes
        ]
        header = ("index", "a", "b", "H", "vol_S", "vol_C_vertical", "margin")
        if output is not None:
            write_csv(output, header, rows)
        else:
            emit(",".join(header))
            for row in rows:
                emit(",".join(format_value(v) for v in row))
        violations = [o.index for o in outcomes if o.violated]
        for index in violations:
            trace.warning(f"instance {index} violates the inequality")
        min_margin = min(o.report.margin for o in outcomes) if outcomes else 0.0
        trace.stage(
            "sweep",
            {"instances": instances, "violations": violations, "min_margin": min_margin},
        )
        code = EXIT_VIOLATION if violations else EXIT_OK
        return code
    finally:
        trace.run_end(code)
        trace.close()
