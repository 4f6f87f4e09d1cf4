"""Configuration registry, config files and dataclasses for warpiso runs."""

from __future__ import annotations

import configparser
import math
import types
import typing
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Protocol

import numpy as np

from warpiso.constants import (
    DEFAULT_CERTIFY_GRID,
    DEFAULT_CRIT_GRID,
    DEFAULT_DOMAIN_MAX,
    DEFAULT_PROFILE_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOL_GROWTH,
    DEFAULT_TOL_LOGCONVEX,
    DEFAULT_TOL_QUAD,
    DEFAULT_TOL_STRICT,
    DEFAULT_TOL_VERIFY,
)
from warpiso.errors import ConfigError, WarpisoError
from warpiso.geom import Ceiling, Floor, default_random_height
from warpiso.quad import MuIntegral
from warpiso.schemas import FloorKind, Interpolation
from warpiso.warpfn import WarpingFunction, density_warping, parse


@dataclass
class WarpingConfig:
    """Warping function and the fiber it acts on."""

    expression: str = "cosh(t)"
    k: int = 1
    domain_max: float = DEFAULT_DOMAIN_MAX
    base: float = 0.0
    declared_limit: float | None = None


@dataclass
class FloorConfig:
    """Floor geometry.

    Grid kinds use `lengths` and `resolution`; weighted cells use `weights`.
    """

    kind: FloorKind = FloorKind.INTERVAL
    lengths: tuple[float, ...] = (1.0,)
    resolution: tuple[int, ...] = (1,)
    weights: tuple[float, ...] = ()


@dataclass
class CeilingConfig:
    """Ceiling heights.

    `heights` is a comma-separated list, ``constant <h>`` or ``random``;
    `csv` points to a file with header ``cell_index,height`` and wins over
    `heights` when set.
    """

    interpolation: Interpolation = Interpolation.STEP
    heights: str = "constant 1"
    csv: Path | None = None


@dataclass
class ToleranceConfig:
    """Numeric tolerances and grid sizes."""

    tol_quad: float = DEFAULT_TOL_QUAD
    tol_verify: float = DEFAULT_TOL_VERIFY
    tol_logconvex: float = DEFAULT_TOL_LOGCONVEX
    tol_strict: float = DEFAULT_TOL_STRICT
    tol_growth: float = DEFAULT_TOL_GROWTH
    certify_grid: int = DEFAULT_CERTIFY_GRID
    crit_grid: int = DEFAULT_CRIT_GRID


@dataclass
class WindowConfig:
    """Height window for profiles and critical points (defaults to the full window)."""

    h_min: float | None = None
    h_max: float | None = None
    samples: int = DEFAULT_PROFILE_SAMPLES


@dataclass
class RunConfig:
    """Top-level run configuration."""

    name: str
    warping: WarpingConfig = field(default_factory=WarpingConfig)
    floor: FloorConfig = field(default_factory=FloorConfig)
    ceiling: CeilingConfig = field(default_factory=CeilingConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    window: WindowConfig = field(default_factory=WindowConfig)
    area: float | None = None
    seed: int = DEFAULT_SEED


class ConfigFactory(Protocol):
    """Callable that constructs a RunConfig."""

    __name__: str

    def __call__(self) -> RunConfig: ...


_CONFIG_REGISTRY: dict[str, ConfigFactory] = {}


def register_config(func: ConfigFactory) -> ConfigFactory:
    """Decorator to register a config factory by function name."""

    _CONFIG_REGISTRY[func.__name__] = func
    return func


def get_config(name: str) -> RunConfig:
    """Retrieve a configuration by name."""

    if name not in _CONFIG_REGISTRY:
        available = ", ".join(sorted(_CONFIG_REGISTRY))
        raise ConfigError(f"Config '{name}' not found. Available: {available}")
    return _CONFIG_REGISTRY[name]()


def list_configs() -> list[str]:
    """List available configuration names."""

    return sorted(_CONFIG_REGISTRY)


# Sections of a config file and the objects their keys may address, in order.
# `None` stands for the RunConfig itself.
_SECTIONS: dict[str, tuple[str | None, ...]] = {
    "warping": ("warping",),
    "floor": ("floor",),
    "ceiling": ("ceiling",),
    "tolerances": ("tolerances",),
    "window": ("window",),
    "run": (None, "tolerances", "window"),
}

_TRUE = {"1", "true", "yes", "on"}
_NONE = {"", "none", "null"}


def _coerce(hint: Any, raw: str) -> Any:
    text = raw.strip()
    origin = typing.get_origin(hint)
    if origin in (types.UnionType, typing.Union):
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        if text.lower() in _NONE:
            return None
        return _coerce(args[0], text)
    if origin is tuple:
        (item, *_) = typing.get_args(hint)
        return tuple(_coerce(item, part) for part in text.split(",") if part.strip())
    if isinstance(hint, type) and issubclass(hint, Enum):
        return hint(text)
    if hint is bool:
        return text.lower() in _TRUE
    if hint is int:
        return int(text)
    if hint is float:
        return float(text)
    if hint is Path:
        return Path(text)
    return text


def set_value(config: RunConfig, section: str, key: str, raw: str) -> None:
    """Assign a raw string to ``section.key``, converting to the field's type.

    Raises:
        ConfigError: Unknown section or key, or a value of the wrong type.
    """

    targets = _SECTIONS.get(section)
    if targets is None:
        raise ConfigError(f"Unknown config section '{section}'. Known: {', '.join(_SECTIONS)}")
    for target in targets:
        obj = config if target is None else getattr(config, target)
        names = {f.name for f in fields(obj)}
        if key not in names or (target is None and key in _SECTIONS):
            continue
        hint = typing.get_type_hints(type(obj))[key]
        try:
            setattr(obj, key, _coerce(hint, raw))
        except ValueError as exc:
            raise ConfigError(f"Invalid value for {section}.{key}: {raw!r} ({exc})") from exc
        return
    raise ConfigError(f"Unknown key '{key}' in section '{section}'")


def apply_overrides(config: RunConfig, overrides: list[str]) -> RunConfig:
    """Apply ``section.key=value`` overrides in order."""

    for item in overrides:
        dotted, sep, value = item.partition("=")
        section, dot, key = dotted.strip().partition(".")
        if not sep or not dot or not key:
            raise ConfigError(f"Override must look like section.key=value, got {item!r}")
        set_value(config, section, key.strip(), value)
    return config


def load_config(path: Path) -> RunConfig:
    """Read an INI-style config file with [warping], [floor], [ceiling], [run] sections.

    Relative ceiling CSV paths are resolved against the config file's directory.
    """

    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"Malformed config file {path}: {exc}") from exc
    config = RunConfig(name=path.stem)
    for section in parser.sections():
        for key, value in parser.items(section):
            set_value(config, section, key, value)
    csv_path = config.ceiling.csv
    if csv_path is not None and not csv_path.is_absolute():
        config.ceiling.csv = path.parent / csv_path
    return config


def resolve_config(name_or_path: str) -> RunConfig:
    """A registered preset by name, or a config file by path."""

    if name_or_path in _CONFIG_REGISTRY:
        return get_config(name_or_path)
    return load_config(Path(name_or_path))


def build_warping(config: RunConfig) -> WarpingFunction:
    warping = config.warping
    return parse(
        warping.expression,
        domain_max=warping.domain_max,
        declared_limit=warping.declared_limit,
    )


def build_mu(config: RunConfig, wf: WarpingFunction | None = None) -> MuIntegral:
    wf = build_warping(config) if wf is None else wf
    return MuIntegral(
        wf,
        config.warping.k,
        base=config.warping.base,
        tol_quad=config.tolerances.tol_quad,
    )


def build_floor(config: RunConfig, mu: MuIntegral) -> Floor:
    """Floor described by the config, with weights scaled by f(b)^k.

    Raises:
        ConfigError: Inconsistent dimensions or shapes.
    """

    spec = config.floor
    try:
        match spec.kind:
            case FloorKind.INTERVAL:
                return Floor.interval(spec.lengths[0], spec.resolution[0], mu=mu)
            case FloorKind.CIRCLE:
                return Floor.circle(spec.lengths[0], spec.resolution[0], mu=mu)
            case FloorKind.RECTANGLE:
                width, height = spec.lengths
                resolution = spec.resolution if len(spec.resolution) == 2 else spec.resolution * 2
                return Floor.rectangle(width, height, (resolution[0], resolution[1]), mu=mu)
            case FloorKind.WEIGHTED_CELLS:
                return Floor.weighted_cells(spec.weights, mu.k, base=mu.base)
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"Invalid floor for config '{config.name}': {exc}") from exc
    raise ConfigError(f"Unsupported floor kind {spec.kind}")


def _read_heights_csv(path: Path, count: int) -> np.ndarray:
    if not path.is_file():
        raise ConfigError(f"Ceiling CSV not found: {path}")
    try:
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise ConfigError(f"Malformed ceiling CSV {path}: {exc}") from exc
    indices = table[:, 0].astype(int)
    if table.shape[1] != 2 or sorted(indices.tolist()) != list(range(count)):
        raise ConfigError(
            f"Ceiling CSV {path} must list each of the {count} cell indices exactly once"
        )
    heights = np.empty(count)
    heights[indices] = table[:, 1]
    return heights


def build_ceiling(
    config: RunConfig,
    floor: Floor,
    mu: MuIntegral,
    rng: np.random.Generator | None = None,
) -> Ceiling:
    """Ceiling described by the config.

    Raises:
        ConfigError: Missing file, malformed heights or a height count that
            does not match the floor.
    """

    spec = config.ceiling
    linear = spec.interpolation is Interpolation.LINEAR
    try:
        count = floor.vertex_count if linear else floor.cell_count
        text = spec.heights.strip()
        if spec.csv is not None:
            heights = _read_heights_csv(spec.csv, count)
        elif text.startswith("constant"):
            heights = np.full(count, float(text.removeprefix("constant")))
        elif text == "random":
            rng = np.random.default_rng(config.seed) if rng is None else rng
            heights = rng.uniform(0.0, default_random_height(mu), size=count)
        else:
            heights = np.array([float(v) for v in text.split(",") if v.strip()])
        if heights.size != count:
            raise ConfigError(
                f"{spec.interpolation.value} ceiling over this floor needs {count} "
                f"heights, got {heights.size}"
            )
        return Ceiling.linear(floor, heights) if linear else Ceiling.step(floor, heights)
    except ConfigError:
        raise
    except (ValueError, WarpisoError) as exc:
        raise ConfigError(f"Invalid ceiling for config '{config.name}': {exc}") from exc


@register_config
def default() -> RunConfig:
    """cosh warping over an interval of length 2 with step heights {0, 1}."""

    return RunConfig(
        name="default",
        warping=WarpingConfig(expression="cosh(t)", k=1),
        floor=FloorConfig(kind=FloorKind.INTERVAL, lengths=(2.0,), resolution=(2,)),
        ceiling=CeilingConfig(heights="0, 1"),
        area=2.0 * math.cosh(1.0),
    )


@register_config
def ex1() -> RunConfig:
    """f = e^{t^2 - 2 sin t}: several critical points, one global minimum."""

    return RunConfig(
        name="ex1",
        warping=WarpingConfig(expression="exp(t^2 - 2*sin(t))", k=1),
        floor=FloorConfig(kind=FloorKind.INTERVAL, lengths=(1.0,), resolution=(8,)),
        ceiling=CeilingConfig(heights="random"),
        area=1.0,
    )


@register_config
def ex2() -> RunConfig:
    """Hyperbolic 3-space as R x_cosh H^2: one critical point, limit 2."""

    return RunConfig(
        name="ex2",
        warping=WarpingConfig(expression="cosh(t)", k=2),
        floor=FloorConfig(kind=FloorKind.RECTANGLE, lengths=(1.0, 1.0), resolution=(4, 4)),
        ceiling=CeilingConfig(heights="random"),
    )


@register_config
def ex3() -> RunConfig:
    """Hyperbolic plane as R x_cosh R: profile decreases to a positive constant."""

    return RunConfig(
        name="ex3",
        warping=WarpingConfig(expression="cosh(t)", k=1),
        floor=FloorConfig(kind=FloorKind.INTERVAL, lengths=(1.0,), resolution=(8,)),
        ceiling=CeilingConfig(heights="random"),
        window=WindowConfig(samples=256),
        area=math.cosh(1.0),
    )


@register_config
def ex4() -> RunConfig:
    """Euclidean plane, f = 1: the profile decreases to zero."""

    return RunConfig(
        name="ex4",
        warping=WarpingConfig(expression="1", k=1),
        floor=FloorConfig(kind=FloorKind.INTERVAL, lengths=(1.0,), resolution=(4,)),
        ceiling=CeilingConfig(heights="random"),
    )


@register_config
def ex4_hyperbolic() -> RunConfig:
    """Hyperbolic plane around a horocycle on the shrinking side, f = e^{-t}."""

    return RunConfig(
        name="ex4_hyperbolic",
        warping=WarpingConfig(expression="exp(-t)", k=1),
        floor=FloorConfig(kind=FloorKind.INTERVAL, lengths=(1.0,), resolution=(4,)),
        ceiling=CeilingConfig(heights="random"),
    )


@register_config
def horosphere() -> RunConfig:
    """f = e^t: log-linear warping where every step ceiling is an equality case."""

    return RunConfig(
        name="horosphere",
        warping=WarpingConfig(expression="exp(t)", k=1),
        floor=FloorConfig(kind=FloorKind.INTERVAL, lengths=(1.0,), resolution=(2,)),
        ceiling=CeilingConfig(heights="0, 1"),
        area=math.e,
    )


@register_config
def radial_density() -> RunConfig:
    """Radial density e^{t^2} with metric factor e^t on a 2-dimensional fiber."""

    return RunConfig(
        name="radial_density",
        warping=WarpingConfig(expression=density_warping("t", "t^2", 2), k=2, domain_max=3.0),
        floor=FloorConfig(kind=FloorKind.RECTANGLE, lengths=(1.0, 1.0), resolution=(2, 2)),
        ceiling=CeilingConfig(heights="0.5, 1, 1.5, 2"),
    )
