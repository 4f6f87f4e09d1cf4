"""Numerical relative isoperimetric inequality for warped products R x_f N."""

from warpiso.config import (
    CeilingConfig,
    FloorConfig,
    RunConfig,
    ToleranceConfig,
    WarpingConfig,
    WindowConfig,
    get_config,
    list_configs,
    load_config,
)
from warpiso.dido import critical_points, dido_solve, omega, profile, volume_bound_check
from warpiso.geom import Ceiling, Floor, ceiling_area, floor_volume, room_volume
from warpiso.isoperimetric import (
    calibration_check,
    diagnose_equality,
    partition_height,
    solve_constant_height,
    verify,
)
from warpiso.quad import MuIntegral
from warpiso.warpfn import WarpingFunction, parse

__all__ = [
    "Ceiling",
    "CeilingConfig",
    "Floor",
    "FloorConfig",
    "MuIntegral",
    "RunConfig",
    "ToleranceConfig",
    "WarpingConfig",
    "WarpingFunction",
    "WindowConfig",
    "calibration_check",
    "ceiling_area",
    "critical_points",
    "diagnose_equality",
    "dido_solve",
    "floor_volume",
    "get_config",
    "list_configs",
    "load_config",
    "omega",
    "parse",
    "partition_height",
    "profile",
    "room_volume",
    "solve_constant_height",
    "verify",
    "volume_bound_check",
]
