"""Closed forms and dense-scan oracles that do not go through `warpiso.quad`."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.typing import NDArray

DENSE_POINTS = 1_000_000

# Equal-volume height for cosh over two equal cells with heights {0, 1}.
COSH_TWO_CELL_H = math.asinh(math.sinh(1.0) / 2.0)
COSH_TWO_CELL_VOL_S = math.cosh(COSH_TWO_CELL_H)
COSH_TWO_CELL_VOL_C = (1.0 + math.cosh(1.0)) / 2.0


def exp_two_cell_H(h: float) -> float:
    """f = e^t over two equal cells with heights {0, h}."""

    return math.log((1.0 + math.exp(h)) / 2.0)


def dense_primitive(
    mu: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    top: float,
    points: int = DENSE_POINTS,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Cumulative trapezoid table of int_0^h mu on a dense uniform grid."""

    grid = np.linspace(0.0, top, points)
    values = mu(grid)
    steps = 0.5 * (values[1:] + values[:-1]) * np.diff(grid)
    return grid, np.concatenate([[0.0], np.cumsum(steps)])


def dense_scan_height(
    mu: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    pieces: list[tuple[float, float]],
    top: float,
) -> float:
    """Solve sum Vol(F_i) I(h_i) = Vol(F) I(H) by scanning a dense table of I."""

    grid, primitive = dense_primitive(mu, top)
    volumes = np.array([v for v, _ in pieces])
    heights = np.array([h for _, h in pieces])
    target = float(np.sum(volumes * np.interp(heights, grid, primitive)) / np.sum(volumes))
    return float(np.interp(target, primitive, grid))


def exp_quadratic(a: float, b: float) -> Callable[[NDArray[np.float64]], NDArray[np.float64]]:
    """mu for f = e^{a t^2 + b t} with k = 1."""

    return lambda t: np.exp(a * t * t + b * t)


def central_difference(
    func: Callable[[float], float], t: float, step: float = 1e-5
) -> tuple[float, float]:
    """First and second central differences of `func` at `t`."""

    plus, mid, minus = func(t + step), func(t), func(t - step)
    return (plus - minus) / (2.0 * step), (plus - 2.0 * mid + minus) / (step * step)
