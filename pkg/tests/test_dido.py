"""Isoperimetric profile, critical points, omega and the Dido problem."""

from __future__ import annotations

import math

import numpy as np
import pytest

from warpiso.config import build_floor, build_mu, get_config
from warpiso.dido import (
    companion,
    critical_points,
    default_h_min,
    dido_solve,
    growth_verdict,
    has_unique_minimum,
    isoperimetric_profile,
    omega,
    profile,
    sampled_minima,
    volume_bound_check,
)
from warpiso.errors import (
    DegenerateEquationError,
    NoSolutionError,
    PreconditionError,
    QuadratureConvergenceError,
    RangeError,
)
from warpiso.geom import Ceiling, Floor, default_random_height
from warpiso.isoperimetric import verify
from warpiso.quad import MuIntegral
from warpiso.schemas import OmegaSource
from warpiso.warpfn import parse
from tests.oracles import central_difference


def test_profile_closed_forms(mu_cosh, mu_unit, mu_exp) -> None:
    hs = np.array([0.5, 1.0, 3.0])
    assert isoperimetric_profile(mu_cosh, hs) == pytest.approx(1.0 / np.tanh(hs), rel=1e-9)
    assert isoperimetric_profile(mu_cosh, np.array([1.0]))[0] == pytest.approx(1.3130, abs=1e-4)
    assert isoperimetric_profile(mu_unit, hs) == pytest.approx(1.0 / hs, rel=1e-9)
    assert isoperimetric_profile(mu_exp, hs) == pytest.approx(
        np.exp(hs) / np.expm1(hs), rel=1e-9
    )


def test_profile_samples_the_window(mu_cosh) -> None:
    samples = profile(mu_cosh, 0.5, 5.0, samples=10)
    assert samples.n == 1
    assert samples.h[0] == 0.5 and samples.h[-1] == 5.0
    assert len(samples.profile) == len(samples.companion) == 10
    assert samples.companion == pytest.approx(np.tanh(samples.h).tolist(), rel=1e-12)
    assert samples.sampled_min == min(samples.profile)
    assert samples.critical_points == [] and samples.omega is None


def test_profile_rejects_bad_windows(mu_cosh) -> None:
    with pytest.raises(RangeError):
        profile(mu_cosh, 0.0, 1.0)
    with pytest.raises(RangeError):
        profile(mu_cosh, 2.0, 1.0)
    with pytest.raises(RangeError):
        profile(mu_cosh, 1.0, 10.5)
    with pytest.raises(ValueError):
        profile(mu_cosh, 1.0, 2.0, samples=1)


@pytest.mark.parametrize("name", ["mu_cosh", "mu_exp", "mu_ex1"])
def test_profile_is_the_log_derivative_of_I(
    name: str, request: pytest.FixtureRequest, rng
) -> None:
    mu = request.getfixturevalue(name)
    for h in rng.uniform(0.5, 9.5, size=100):
        slope, _ = central_difference(lambda x: math.log(mu.I(x)), float(h), step=1e-4)
        assert isoperimetric_profile(mu, np.array([h]))[0] == pytest.approx(slope, abs=1e-6)


@pytest.mark.parametrize("h", [1e-2, 1e-3, 1e-4])
def test_profile_behaves_like_one_over_h_near_the_floor(mu_cosh, mu_ex1, h: float) -> None:
    hs = np.array([h])
    assert abs(h * isoperimetric_profile(mu_cosh, hs)[0] - 1.0) <= h
    # f'(0) = -2 for ex1, so h * profile = 1 - h + O(h^2).
    assert abs(h * isoperimetric_profile(mu_ex1, hs)[0] - (1.0 - h)) <= 5.0 * h * h


def test_no_critical_points_for_the_hyperbolic_plane(mu_cosh) -> None:
    h_min = default_h_min(mu_cosh)
    assert critical_points(mu_cosh, h_min, mu_cosh.height_max) == []


def test_one_critical_point_for_hyperbolic_space(mu_cosh2) -> None:
    points = critical_points(mu_cosh2, default_h_min(mu_cosh2), mu_cosh2.height_max)
    assert len(points) == 1
    (point,) = points
    assert 2.0 * math.tanh(point.h) == pytest.approx(point.value, rel=1e-8)
    assert point.value < 2.0


def test_ex1_has_several_increasing_critical_values(mu_ex1) -> None:
    points = critical_points(mu_ex1, default_h_min(mu_ex1), mu_ex1.height_max)
    assert len(points) >= 3
    hs = [p.h for p in points]
    assert hs == sorted(hs)
    values = [p.value for p in points]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))


def test_omega_plateau_estimate_for_cosh(mu_cosh) -> None:
    result = omega(mu_cosh)
    assert result.source is OmegaSource.LIMIT_NF_OVER_F
    assert result.is_estimate
    assert result.omega == pytest.approx(1.0, abs=1e-6)
    assert result.growth.unbounded and not result.growth.declared
    assert result.sampled_min >= result.omega - 1e-6

    declared = omega(mu_cosh, 1.0)
    assert declared.omega == 1.0 and not declared.is_estimate
    assert declared.growth.declared


def test_omega_first_critical_value_for_cosh_squared(mu_cosh2) -> None:
    result = omega(mu_cosh2)
    assert result.source is OmegaSource.FIRST_CRITICAL_VALUE
    assert not result.is_estimate
    assert 0.0 < result.omega < 2.0
    assert result.omega == result.critical_points[0].value
    assert result.sampled_min >= result.omega - 1e-9


def test_omega_uses_the_declared_limit_of_the_expression() -> None:
    mu = MuIntegral(parse("cosh(t)", declared_limit=1.0), 1)
    result = omega(mu)
    assert result.omega == 1.0
    assert result.source is OmegaSource.LIMIT_NF_OVER_F and not result.is_estimate


@pytest.mark.parametrize("source", ["exp(-t)", "1"])
def test_omega_needs_unbounded_growth(source: str) -> None:
    mu = MuIntegral(parse(source), 1)
    assert not growth_verdict(mu).unbounded
    with pytest.raises(PreconditionError):
        omega(mu)


def test_omega_must_be_positive() -> None:
    with pytest.raises(PreconditionError):
        omega(MuIntegral(parse("1"), 1), declared_limit=0.0)


@pytest.mark.parametrize("source", ["exp(t)", "cosh(t)"])
def test_volume_bound_holds_for_random_rooms(source: str, rng) -> None:
    mu = MuIntegral(parse(source), 1)
    bound_omega = omega(mu).omega
    for _ in range(20):
        floor = Floor.random_weighted(rng, 6, 1)
        ceiling = Ceiling.random_step(floor, rng, 8.0)
        bound = volume_bound_check(floor, ceiling, mu, bound_omega)
        assert bound.ok
        assert bound.bound == pytest.approx(bound.vol_C / bound_omega)
    with pytest.raises(ValueError):
        volume_bound_check(floor, ceiling, mu, 0.0)


def test_profile_at_H_is_at_most_area_over_volume(mu_cosh2, rng) -> None:
    floor = Floor.rectangle(1.0, 1.0, (3, 3), mu=mu_cosh2)
    for _ in range(10):
        ceiling = Ceiling.random_step(floor, rng, 5.0)
        report = verify(floor, ceiling, mu_cosh2)
        at_H = isoperimetric_profile(mu_cosh2, np.array([report.H]))[0]
        assert at_H <= report.vol_C_vertical / report.vol_room * (1.0 + 1e-9)


def test_dido_for_cosh(mu_cosh) -> None:
    floor = Floor.interval(1.0, mu=mu_cosh)
    solution = dido_solve(floor, mu_cosh, math.cosh(1.0))
    assert solution.h_solutions == pytest.approx((1.0,), abs=1e-10)
    assert solution.chosen_h == pytest.approx(1.0, abs=1e-10)
    assert solution.vol_room == pytest.approx(math.sinh(1.0), abs=1e-9)


def test_dido_for_ex1_picks_the_larger_room(mu_ex1) -> None:
    floor = Floor.interval(1.0, mu=mu_ex1)
    solution = dido_solve(floor, mu_ex1, 1.0)
    assert len(solution.h_solutions) == 2
    low, high = solution.h_solutions
    assert low == 0.0
    assert 1.3 < high < 1.5
    assert high * high == pytest.approx(2.0 * math.sin(high), abs=1e-9)
    assert solution.chosen_h == high
    assert solution.vol_room == pytest.approx(mu_ex1.I(high))


def test_dido_failures(mu_unit, mu_cosh) -> None:
    with pytest.raises(DegenerateEquationError):
        dido_solve(Floor.interval(1.0, mu=mu_unit), mu_unit, 1.0)
    floor = Floor.interval(1.0, mu=mu_cosh)
    with pytest.raises(NoSolutionError):
        dido_solve(floor, mu_cosh, 0.5)
    with pytest.raises(NoSolutionError):
        dido_solve(floor, mu_cosh, 2.0 * math.cosh(10.0))


def test_critical_points_satisfy_the_critical_condition(mu_cosh2, mu_ex1) -> None:
    for mu in (mu_cosh2, mu_ex1):
        for point in critical_points(mu, default_h_min(mu), mu.height_max):
            slope = companion(mu, np.array([point.h]))[0]
            assert point.residual == pytest.approx(abs(point.value - slope))
            assert point.residual <= 1e-9 * max(1.0, abs(slope))


def test_unresolved_critical_point_is_an_error(mu_cosh2) -> None:
    with pytest.raises(QuadratureConvergenceError):
        critical_points(mu_cosh2, default_h_min(mu_cosh2), mu_cosh2.height_max, tol_crit=-1.0)


@pytest.mark.parametrize("name", ["mu_cosh2", "mu_ex1"])
def test_first_critical_value_is_below_the_growth_plateau(
    name: str, request: pytest.FixtureRequest
) -> None:
    mu = request.getfixturevalue(name)
    first = critical_points(mu, default_h_min(mu), mu.height_max)[0]
    assert first.value <= companion(mu, np.array([mu.height_max]))[0]


@pytest.mark.parametrize(("source", "k"), [("cosh(t)", 1), ("cosh(t)", 2), ("exp(t)", 1)])
def test_profile_approaches_the_growth_rate_at_the_window_end(source: str, k: int) -> None:
    """|I_prof - n f'/f| at the right end shrinks as the window grows."""

    gaps = []
    for top in (4.0, 7.0, 10.0):
        mu = MuIntegral(parse(source, domain_max=top), k)
        end = np.array([top])
        gaps.append(abs(isoperimetric_profile(mu, end)[0] - companion(mu, end)[0]))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-2 * gaps[0]


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
def test_volume_bound_holds_for_random_ceilings_on_presets(name: str, rng) -> None:
    config = get_config(name)
    mu = build_mu(config)
    floor = build_floor(config, mu)
    bound_omega = omega(mu).omega
    top = default_random_height(mu)
    for _ in range(100):
        bound = volume_bound_check(floor, Ceiling.random_step(floor, rng, top), mu, bound_omega)
        assert bound.ok, f"{name}: Vol(R)={bound.vol_R:.17g} > {bound.bound:.17g}"


def test_unique_sampled_minimum() -> None:
    one_dip = np.array([3.0, 1.0, 2.0, 1.5, 2.5])
    assert has_unique_minimum(one_dip)
    two_dips = np.array([3.0, 1.0, 2.0, 1.0, 2.5])
    assert not has_unique_minimum(two_dips)
    near_tie = np.array([3.0, 1.0, 2.0, 1.0 + 1e-9, 2.5])
    assert not has_unique_minimum(near_tie)
    assert has_unique_minimum(np.array([1.0, 2.0, 3.0]))
    assert sampled_minima(np.array([2.0, 1.0, 1.0, 3.0])).tolist() == [2]
