"""Floors, ceilings, room volumes and ceiling areas."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from warpiso.errors import RangeError, UnsupportedModeError
from warpiso.geom import Ceiling, Floor, ceiling_area, floor_volume, room_volume
from warpiso.quad import MuIntegral
from warpiso.schemas import AreaMode, FloorKind
from warpiso.warpfn import parse


def test_floor_volumes() -> None:
    assert floor_volume(Floor.interval(2.0, 4)) == pytest.approx(2.0)
    assert floor_volume(Floor.rectangle(1.0, 3.0, (2, 3))) == pytest.approx(3.0)
    assert floor_volume(Floor.weighted_cells([0.5, 1.5], 3, cell_ids=["a", "b"])) == 2.0


def test_grid_weights_carry_the_fiber_scale(wf_cosh) -> None:
    mu = MuIntegral(wf_cosh, 1, base=1.0)
    floor = Floor.interval(2.0, 2, mu=mu)
    assert floor.base == 1.0
    assert floor_volume(floor) == pytest.approx(2.0 * math.cosh(1.0))


def test_floor_validation(mu_cosh2) -> None:
    with pytest.raises(ValueError):
        Floor.weighted_cells([1.0, 0.0], 1)
    with pytest.raises(ValueError):
        Floor.weighted_cells([], 1)
    with pytest.raises(ValueError):
        Floor.interval(-1.0)
    with pytest.raises(ValueError):
        Floor.interval(1.0, mu=mu_cosh2)


def test_room_volume_closed_forms(mu_unit, mu_exp, mu_cosh) -> None:
    unit_floor = Floor.interval(1.0, mu=mu_unit)
    assert room_volume(unit_floor, Ceiling.constant(unit_floor, 2.0), mu_unit) == pytest.approx(
        2.0, abs=1e-12
    )

    exp_floor = Floor.interval(1.0, mu=mu_exp)
    assert room_volume(exp_floor, Ceiling.constant(exp_floor, 1.0), mu_exp) == pytest.approx(
        math.e - 1.0, abs=1e-10
    )

    cosh_floor = Floor.interval(2.0, 2, mu=mu_cosh)
    half = Ceiling.step(cosh_floor, [1.0, 0.0])
    assert room_volume(cosh_floor, half, mu_cosh) == pytest.approx(math.sinh(1.0), abs=1e-10)


def test_ceiling_area_closed_forms(mu_unit, mu_exp) -> None:
    unit_floor = Floor.interval(3.0, 3, mu=mu_unit)
    steps = Ceiling.step(unit_floor, [0.5, 2.0, 1.0])
    assert ceiling_area(unit_floor, steps, mu_unit) == pytest.approx(3.0)

    exp_floor = Floor.interval(1.0, mu=mu_exp)
    for h in (0.0, 0.5, 2.0):
        area = ceiling_area(exp_floor, Ceiling.constant(exp_floor, h), mu_exp)
        assert area == pytest.approx(math.exp(h), rel=1e-14)

    ramp_floor = Floor.interval(1.0, 4, mu=mu_unit)
    ramp = Ceiling.linear(ramp_floor, np.linspace(0.0, 1.0, 5))
    assert ceiling_area(ramp_floor, ramp, mu_unit, AreaMode.FULL) == pytest.approx(
        math.sqrt(2.0), rel=1e-12
    )
    assert ceiling_area(ramp_floor, ramp, mu_unit, AreaMode.VERTICAL) == pytest.approx(1.0)


def test_linear_ceilings_integrate_exactly_enough(mu_cosh, mu_unit) -> None:
    floor = Floor.interval(1.0, 4, mu=mu_cosh)
    ramp = Ceiling.linear(floor, np.linspace(0.0, 1.0, 5))
    assert room_volume(floor, ramp, mu_cosh) == pytest.approx(math.cosh(1.0) - 1.0, abs=1e-10)
    assert ceiling_area(floor, ramp, mu_cosh) == pytest.approx(math.sinh(1.0), abs=1e-10)

    rect = Floor.rectangle(1.0, 1.0, (2, 2))
    xs = np.linspace(0.0, 1.0, 3)
    plane = Ceiling.linear(rect, (xs[:, None] + xs[None, :]).ravel())
    mu_unit2 = MuIntegral(mu_unit.wf, 2)
    assert room_volume(rect, plane, mu_unit2) == pytest.approx(1.0, abs=1e-12)
    assert ceiling_area(rect, plane, mu_unit2, AreaMode.FULL) == pytest.approx(
        math.sqrt(3.0), rel=1e-12
    )


def test_full_area_dominates_vertical_area(rng) -> None:
    mu1 = MuIntegral(parse("cosh(t)", domain_max=4.0), 1)
    mu2 = MuIntegral(parse("cosh(t)", domain_max=4.0), 2)
    for _ in range(20):
        interval = Floor.interval(1.5, 6, mu=mu1)
        circle = Floor.circle(2.0, 7, mu=mu1)
        rect = Floor.rectangle(1.0, 2.0, (3, 4), mu=mu2)
        for floor, mu in ((interval, mu1), (circle, mu1), (rect, mu2)):
            ceiling = Ceiling.linear(floor, rng.uniform(0.0, 3.0, size=floor.vertex_count))
            vertical = ceiling_area(floor, ceiling, mu, AreaMode.VERTICAL)
            full = ceiling_area(floor, ceiling, mu, AreaMode.FULL)
            assert full >= vertical - 1e-12

            steps = Ceiling.random_step(floor, rng, 3.0)
            assert ceiling_area(floor, steps, mu, AreaMode.FULL) == ceiling_area(
                floor, steps, mu, AreaMode.VERTICAL
            )


def test_room_volume_is_monotone_in_heights(mu_cosh, rng) -> None:
    floor = Floor.random_weighted(rng, 8, 1)
    heights = rng.uniform(0.0, 5.0, size=8)
    base = room_volume(floor, Ceiling.step(floor, heights), mu_cosh)
    for i in range(8):
        raised = heights.copy()
        raised[i] += 0.25
        assert room_volume(floor, Ceiling.step(floor, raised), mu_cosh) > base


def test_room_volume_vanishes_only_for_the_floor(mu_cosh) -> None:
    floor = Floor.interval(1.0, 3, mu=mu_cosh)
    assert room_volume(floor, Ceiling.constant(floor, 0.0), mu_cosh) == 0.0
    assert room_volume(floor, Ceiling.step(floor, [0.0, 0.0, 1e-6]), mu_cosh) > 0.0


def test_step_room_volume_matches_partition_and_cell_loop(mu_ex1, rng) -> None:
    floor = Floor.random_weighted(rng, 12, 1)
    ceiling = Ceiling.random_step(floor, rng, 4.0, values=4)
    volume = room_volume(floor, ceiling, mu_ex1)

    by_cell = sum(w * mu_ex1.I(float(h)) for w, h in zip(floor.weights, ceiling.heights))
    by_piece = sum(v * mu_ex1.I(h) for v, h in ceiling.partition())
    assert volume == pytest.approx(by_cell, rel=1e-12)
    assert volume == pytest.approx(by_piece, rel=1e-12)


def test_unit_warping_recovers_euclidean_values(mu_unit, rng) -> None:
    floor = Floor.random_weighted(rng, 10, 1)
    ceiling = Ceiling.random_step(floor, rng, 8.0)
    assert room_volume(floor, ceiling, mu_unit) == pytest.approx(
        float(np.sum(floor.weights * ceiling.heights)), abs=1e-10
    )
    assert ceiling_area(floor, ceiling, mu_unit) == pytest.approx(floor_volume(floor))


def test_partition_groups_equal_heights() -> None:
    floor = Floor.interval(2.0, 4)
    ceiling = Ceiling.step(floor, [1.0, 0.0, 1.0, 2.0])
    assert ceiling.partition() == [(0.5, 0.0), (1.0, 1.0), (0.5, 2.0)]
    with pytest.raises(UnsupportedModeError):
        Ceiling.linear(floor, [0.0] * 5).partition()


def test_random_step_is_reproducible() -> None:
    floor = Floor.interval(1.0, 16)
    first = Ceiling.random_step(floor, np.random.default_rng(7), 8.0, values=3)
    second = Ceiling.random_step(floor, np.random.default_rng(7), 8.0, values=3)
    assert np.array_equal(first.heights, second.heights)
    assert len(np.unique(first.heights)) <= 3
    assert first.max_height <= 8.0


def test_ceiling_validation(mu_cosh) -> None:
    floor = Floor.interval(1.0, 2, mu=mu_cosh)
    with pytest.raises(RangeError):
        Ceiling.step(floor, [-0.1, 1.0])
    with pytest.raises(ValueError):
        Ceiling.step(floor, [1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        Ceiling.linear(floor, [1.0, 1.0])

    cells = Floor.weighted_cells([1.0, 2.0], 1)
    assert cells.kind is FloorKind.WEIGHTED_CELLS
    with pytest.raises(UnsupportedModeError):
        Ceiling.linear(cells, [1.0, 1.0])
    with pytest.raises(UnsupportedModeError):
        ceiling_area(cells, Ceiling.constant(cells, 1.0), mu_cosh, AreaMode.FULL)

    too_tall = Ceiling.constant(floor, 10.5)
    with pytest.raises(RangeError):
        room_volume(floor, too_tall, mu_cosh)


def test_kinked_linear_ceilings_keep_their_cell_slopes(mu_unit) -> None:
    """Each cell of a linear ceiling carries its own slope, kinks included."""

    interval = Floor.interval(2.0, 2, mu=mu_unit)
    tent = Ceiling.linear(interval, [0.0, 1.0, 0.0])
    assert ceiling_area(interval, tent, mu_unit, AreaMode.FULL) == pytest.approx(
        2.0 * math.sqrt(2.0), rel=1e-12
    )

    zigzag_floor = Floor.interval(6.0, 6, mu=mu_unit)
    zigzag = Ceiling.linear(zigzag_floor, [0.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0])
    assert ceiling_area(zigzag_floor, zigzag, mu_unit, AreaMode.FULL) == pytest.approx(
        6.0 * math.sqrt(5.0), rel=1e-12
    )
    assert ceiling_area(zigzag_floor, zigzag, mu_unit, AreaMode.VERTICAL) == pytest.approx(6.0)


def test_circle_ceiling_wraps_around(mu_unit) -> None:
    circle = Floor.circle(4.0, 4, mu=mu_unit)
    tent = Ceiling.linear(circle, [0.0, 1.0, 0.0, 1.0])
    full = ceiling_area(circle, tent, mu_unit, AreaMode.FULL)
    assert full == pytest.approx(4.0 * math.sqrt(2.0), rel=1e-12)
    assert room_volume(circle, tent, mu_unit) == pytest.approx(2.0, abs=1e-12)

    # The closing cell runs from the last vertex back to vertex 0.
    ramp = Ceiling.linear(circle, [0.0, 1.0, 2.0, 3.0])
    expected = 3.0 * math.sqrt(2.0) + math.sqrt(10.0)
    assert ceiling_area(circle, ramp, mu_unit, AreaMode.FULL) == pytest.approx(expected, rel=1e-12)


def test_bilinear_ceiling_uses_the_exact_gradient(mu_unit) -> None:
    mu_unit2 = MuIntegral(mu_unit.wf, 2)
    rect = Floor.rectangle(1.0, 1.0, (4, 4))
    xs = np.linspace(0.0, 1.0, 5)
    saddle = Ceiling.linear(rect, (xs[:, None] * xs[None, :]).ravel())
    expected, _ = dblquad(
        lambda y, x: math.sqrt(1.0 + x * x + y * y), 0.0, 1.0, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13
    )
    assert ceiling_area(rect, saddle, mu_unit2, AreaMode.FULL) == pytest.approx(expected, rel=1e-9)
    assert room_volume(rect, saddle, mu_unit2) == pytest.approx(0.25, abs=1e-12)
