"""Floors, ceilings and rooms: volumes and ceiling areas.

A floor is a finite set of cells in the fiber {b} x N, each carrying its
k-volume (the flat cell measure times f(b)^k). A ceiling assigns heights to
the floor, either one value per cell (a step function) or one value per grid
vertex with linear/bilinear interpolation. The room between them has volume
int_F I(l(q)) dV, and the ceiling's vertical area is int_F mu(l(q)) dV.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from warpiso.constants import CELL_RULE_POINTS, RANDOM_HEIGHT_FRACTION
from warpiso.errors import RangeError, UnsupportedModeError
from warpiso.quad import MuIntegral
from warpiso.schemas import AreaMode, FloorKind, Interpolation

_GRID_KINDS = (FloorKind.INTERVAL, FloorKind.RECTANGLE, FloorKind.CIRCLE)
_LEGENDRE_NODES, _LEGENDRE_WEIGHTS = np.polynomial.legendre.leggauss(CELL_RULE_POINTS)
# Nodes and weights on [0, 1].
_UNIT_NODES = 0.5 * (_LEGENDRE_NODES + 1.0)
_UNIT_WEIGHTS = 0.5 * _LEGENDRE_WEIGHTS


def _frozen(values: Sequence[float] | NDArray[np.float64]) -> NDArray[np.float64]:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Floor:
    """k-dimensional floor region made of weighted cells.

    Attributes:
        kind: Fiber geometry.
        k: Dimension of the floor.
        weights: k-volume of each cell (flat measure times f(b)^k for grid kinds).
        base: Base height b.
        lengths: Side lengths (interval/rectangle) or circumference (circle).
        resolution: Cells per axis for grid kinds.
        cell_ids: Labels of weighted cells.
    """

    kind: FloorKind
    k: int
    weights: NDArray[np.float64]
    base: float = 0.0
    lengths: tuple[float, ...] = ()
    resolution: tuple[int, ...] = ()
    cell_ids: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.weights.ndim != 1 or self.weights.size == 0:
            raise ValueError("A floor needs at least one cell.")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0.0):
            raise ValueError("Cell weights must be finite and strictly positive.")
        if self.k < 1:
            raise ValueError(f"Floor dimension must be positive, got {self.k}")

    @classmethod
    def _grid(
        cls,
        kind: FloorKind,
        k: int,
        lengths: tuple[float, ...],
        resolution: tuple[int, ...],
        mu: MuIntegral | None,
    ) -> Floor:
        if any(length <= 0.0 for length in lengths):
            raise ValueError(f"Floor lengths must be positive, got {lengths}")
        if any(n < 1 for n in resolution):
            raise ValueError(f"Floor resolution must be positive, got {resolution}")
        if mu is not None and mu.k != k:
            raise ValueError(f"A {kind.value} floor is {k}-dimensional but mu has k={mu.k}")
        scale = 1.0 if mu is None else mu.fiber_scale
        cell_measure = float(np.prod([L / n for L, n in zip(lengths, resolution)]))
        cells = int(np.prod(resolution))
        return cls(
            kind=kind,
            k=k,
            weights=_frozen(np.full(cells, cell_measure * scale)),
            base=0.0 if mu is None else mu.base,
            lengths=lengths,
            resolution=resolution,
        )

    @classmethod
    def interval(cls, length: float, resolution: int = 1, *, mu: MuIntegral | None = None) -> Floor:
        return cls._grid(FloorKind.INTERVAL, 1, (float(length),), (int(resolution),), mu)

    @classmethod
    def circle(cls, circumference: float, resolution: int = 1, *, mu: MuIntegral | None = None) -> Floor:
        return cls._grid(FloorKind.CIRCLE, 1, (float(circumference),), (int(resolution),), mu)

    @classmethod
    def rectangle(
        cls,
        width: float,
        height: float,
        resolution: tuple[int, int] = (1, 1),
        *,
        mu: MuIntegral | None = None,
    ) -> Floor:
        return cls._grid(
            FloorKind.RECTANGLE,
            2,
            (float(width), float(height)),
            (int(resolution[0]), int(resolution[1])),
            mu,
        )

    @classmethod
    def weighted_cells(
        cls,
        weights: Sequence[float] | NDArray[np.float64],
        k: int,
        *,
        cell_ids: Sequence[str] | None = None,
        base: float = 0.0,
    ) -> Floor:
        """Abstract floor; weights are taken as the cells' k-volumes as given."""

        array = _frozen(weights)
        ids = tuple(cell_ids) if cell_ids is not None else tuple(str(i) for i in range(array.size))
        if len(ids) != array.size:
            raise ValueError("cell_ids and weights must have the same length.")
        return cls(kind=FloorKind.WEIGHTED_CELLS, k=int(k), weights=array, base=base, cell_ids=ids)

    @classmethod
    def random_weighted(
        cls,
        rng: np.random.Generator,
        cells: int,
        k: int,
        *,
        low: float = 0.1,
        high: float = 1.0,
    ) -> Floor:
        return cls.weighted_cells(rng.uniform(low, high, size=cells), k)

    @property
    def is_grid(self) -> bool:
        return self.kind in _GRID_KINDS

    @property
    def cell_count(self) -> int:
        return int(self.weights.size)

    @property
    def vertex_count(self) -> int:
        """Number of height samples a linear ceiling over this floor needs."""

        match self.kind:
            case FloorKind.INTERVAL:
                return self.resolution[0] + 1
            case FloorKind.CIRCLE:
                return self.resolution[0]
            case FloorKind.RECTANGLE:
                return (self.resolution[0] + 1) * (self.resolution[1] + 1)
        raise UnsupportedModeError("Weighted-cell floors have no vertex grid.")

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.lengths, self.resolution))


@dataclass(frozen=True, eq=False)
class Ceiling:
    """Nonnegative height field over a floor.

    Attributes:
        floor: The floor the heights live on.
        heights: Per-cell heights (step) or per-vertex heights (linear).
        interpolation: Step or linear.
    """

    floor: Floor
    heights: NDArray[np.float64]
    interpolation: Interpolation = Interpolation.STEP

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.heights)) or np.any(self.heights < 0.0):
            raise RangeError("Ceiling heights must be finite and nonnegative.")
        if self.interpolation is Interpolation.STEP:
            expected = self.floor.cell_count
        else:
            if not self.floor.is_grid:
                raise UnsupportedModeError("Linear ceilings need a grid floor.")
            expected = self.floor.vertex_count
        if self.heights.shape != (expected,):
            raise ValueError(
                f"{self.interpolation.value} ceiling over this floor needs {expected} "
                f"heights, got {self.heights.size}"
            )

    @classmethod
    def step(cls, floor: Floor, heights: Sequence[float] | NDArray[np.float64]) -> Ceiling:
        return cls(floor, _frozen(heights), Interpolation.STEP)

    @classmethod
    def linear(cls, floor: Floor, heights: Sequence[float] | NDArray[np.float64]) -> Ceiling:
        return cls(floor, _frozen(np.ravel(heights)), Interpolation.LINEAR)

    @classmethod
    def constant(cls, floor: Floor, height: float) -> Ceiling:
        return cls.step(floor, np.full(floor.cell_count, float(height)))

    @classmethod
    def random_step(
        cls,
        floor: Floor,
        rng: np.random.Generator,
        max_height: float,
        *,
        values: int | None = None,
    ) -> Ceiling:
        """Step ceiling with heights i.i.d. uniform on [0, max_height].

        With `values` set, at most that many distinct heights are drawn and
        assigned to cells at random.
        """

        if values is None:
            return cls.step(floor, rng.uniform(0.0, max_height, size=floor.cell_count))
        levels = rng.uniform(0.0, max_height, size=values)
        return cls.step(floor, levels[rng.integers(0, values, size=floor.cell_count)])

    @property
    def max_height(self) -> float:
        return float(np.max(self.heights))

    @property
    def min_height(self) -> float:
        return float(np.min(self.heights))

    def partition(self) -> list[tuple[float, float]]:
        """Group a step ceiling into pieces (Vol_k(F_i), h_i), sorted by h_i."""

        if self.interpolation is not Interpolation.STEP:
            raise UnsupportedModeError("Only step ceilings have a finite partition.")
        levels, inverse = np.unique(self.heights, return_inverse=True)
        volumes = np.bincount(inverse, weights=self.floor.weights, minlength=levels.size)
        return [(float(v), float(h)) for v, h in zip(volumes, levels)]

    def samples(self) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        """Quadrature samples (heights, weights, |grad l|^2) covering the floor.

        Step ceilings give one sample per cell with zero gradient. Linear
        ceilings use a Gauss-Legendre product rule in each cell with the exact
        gradient of the interpolant: the cell slope on intervals and circles
        (the last circle cell wraps to vertex 0), the bilinear gradient at each
        node on rectangles.
        """

        floor = self.floor
        if self.interpolation is Interpolation.STEP:
            return self.heights, floor.weights, np.zeros_like(self.heights)
        match floor.kind:
            case FloorKind.INTERVAL | FloorKind.CIRCLE:
                return self._samples_1d()
            case FloorKind.RECTANGLE:
                return self._samples_2d()
        raise UnsupportedModeError("Linear ceilings need a grid floor.")

    def _samples_1d(self) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        floor = self.floor
        (dx,) = floor.spacing
        v = self.heights
        if floor.kind is FloorKind.CIRCLE:
            left, right = v, np.roll(v, -1)
        else:
            left, right = v[:-1], v[1:]
        slope = (right - left) / dx
        s = _UNIT_NODES[None, :]
        heights = left[:, None] * (1.0 - s) + right[:, None] * s
        grad_sq = np.broadcast_to((slope**2)[:, None], heights.shape)
        weights = floor.weights[:, None] * _UNIT_WEIGHTS[None, :]
        return heights.ravel(), weights.ravel(), grad_sq.ravel()

    def _samples_2d(self) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        floor = self.floor
        n1, n2 = floor.resolution
        dx, dy = floor.spacing
        grid = self.heights.reshape(n1 + 1, n2 + 1)
        c00, c10 = grid[:-1, :-1, None, None], grid[1:, :-1, None, None]
        c01, c11 = grid[:-1, 1:, None, None], grid[1:, 1:, None, None]

        # s runs along the first axis, u along the second.
        s = _UNIT_NODES[:, None]
        u = _UNIT_NODES[None, :]
        shape = (n1, n2, CELL_RULE_POINTS, CELL_RULE_POINTS)
        heights = (1.0 - u) * ((1.0 - s) * c00 + s * c10) + u * ((1.0 - s) * c01 + s * c11)
        gx = np.broadcast_to(((1.0 - u) * (c10 - c00) + u * (c11 - c01)) / dx, shape)
        gy = np.broadcast_to(((1.0 - s) * (c01 - c00) + s * (c11 - c10)) / dy, shape)
        grad_sq = (gx**2 + gy**2).reshape(n1 * n2, -1)
        rule = np.outer(_UNIT_WEIGHTS, _UNIT_WEIGHTS).ravel()
        weights = floor.weights[:, None] * rule[None, :]
        return heights.reshape(n1 * n2, -1).ravel(), weights.ravel(), grad_sq.ravel()


def _check_space(floor: Floor, ceiling: Ceiling, mu: MuIntegral) -> None:
    if ceiling.floor is not floor:
        raise ValueError("Ceiling is defined over a different floor.")
    if floor.k != mu.k:
        raise ValueError(f"Floor is {floor.k}-dimensional but mu has k={mu.k}")
    if floor.base != mu.base:
        raise ValueError(f"Floor base {floor.base} differs from mu base {mu.base}")
    if ceiling.max_height > mu.height_max:
        raise RangeError(
            f"Ceiling height {ceiling.max_height:.17g} exceeds the working interval "
            f"[0, {mu.height_max}]"
        )


def floor_volume(floor: Floor) -> float:
    """Vol_k(F), the sum of the cell weights."""

    return float(np.sum(floor.weights))


def room_volume(floor: Floor, ceiling: Ceiling, mu: MuIntegral) -> float:
    """Vol_{k+1}(R) = int_F I(l(q)) dV.

    Raises:
        RangeError: If a height exceeds the working interval.
    """

    _check_space(floor, ceiling, mu)
    heights, weights, _ = ceiling.samples()
    return float(np.sum(weights * mu.I_many(heights)))


def ceiling_area(
    floor: Floor,
    ceiling: Ceiling,
    mu: MuIntegral,
    mode: AreaMode = AreaMode.VERTICAL,
) -> float:
    """Vol_k(C) in vertical mode (int_F mu(l) dV) or full mode.

    Full mode uses the induced area element
    mu(l) * sqrt(1 + |grad l|^2 / f(b + l)^2) in flat fiber coordinates. A step
    ceiling's graph has zero gradient almost everywhere, so both modes agree
    for step ceilings over grid floors.

    Raises:
        UnsupportedModeError: Full mode over a weighted-cell floor.
    """

    _check_space(floor, ceiling, mu)
    heights, weights, grad_sq = ceiling.samples()
    density = np.asarray(mu.mu(heights), dtype=float)
    if mode is AreaMode.VERTICAL:
        return float(np.sum(weights * density))
    if not floor.is_grid:
        raise UnsupportedModeError("Full ceiling area needs a grid floor.")
    f = np.asarray(mu.wf.value(mu.base + heights), dtype=float)
    return float(np.sum(weights * density * np.sqrt(1.0 + grad_sq / (f * f))))


def default_random_height(mu: MuIntegral) -> float:
    """Upper end of the random-height range: 0.8 of the working interval."""

    return RANDOM_HEIGHT_FRACTION * mu.height_max
