"""Project-wide constants and default tolerances.

This module centralizes numeric limits so that code stays readable and avoids
"magic numbers" sprinkled across the codebase.
"""

from __future__ import annotations

# Working interval
DEFAULT_DOMAIN_MAX: float = 10.0

# Certification of the warping function
DEFAULT_TOL_LOGCONVEX: float = 1e-9
DEFAULT_TOL_STRICT: float = 1e-9
DEFAULT_CERTIFY_GRID: int = 4096

# Quadrature
DEFAULT_TOL_QUAD: float = 1e-10
QUAD_REL_FLOOR: float = 1e-12
QUAD_LIMIT: int = 2000
QUAD_TABLE_KNOTS: int = 256
INVERT_MAX_ITERATIONS: int = 200

# Cell product rule for linear ceilings
CELL_RULE_POINTS: int = 5

# Verification
DEFAULT_TOL_VERIFY: float = 1e-8
CALIBRATION_CHAIN_SLACK: float = 1e-10
EQUALITY_HEIGHT_TOL: float = 1e-9

# Dido profile and critical points
DEFAULT_TOL_CRIT: float = 1e-9
DEFAULT_CRIT_GRID: int = 4096
CRIT_MERGE_DISTANCE: float = 1e-7
MINIMUM_REL_TOL: float = 1e-6
DEFAULT_PROFILE_SAMPLES: int = 512
DEFAULT_TOL_GROWTH: float = 1e-6
GROWTH_RATIO: float = 10.0
GROWTH_TAIL_FRACTION: float = 0.1
DIDO_SCAN_POINTS: int = 4096
DEGENERATE_RELATIVE_SPREAD: float = 1e-12

# Scalar root finding
ROOT_REL_TOL: float = 1e-13
ROOT_XTOL: float = 1e-15
ROOT_MAX_ITERATIONS: int = 200

# Random ceilings
RANDOM_HEIGHT_FRACTION: float = 0.8
DEFAULT_SEED: int = 0

# Sweep over the log-convex family e^{a t^2 + b t}
SWEEP_A_RANGE: tuple[float, float] = (0.0, 1.0)
SWEEP_B_RANGE: tuple[float, float] = (-1.0, 2.0)
SWEEP_MAX_STEPS: int = 16
SWEEP_DOMAIN_MAX: float = 3.0

# Output formatting
CSV_SIGNIFICANT_DIGITS: int = 17

# CLI exit codes
EXIT_OK: int = 0
EXIT_USAGE: int = 1
EXIT_CERTIFICATION: int = 2
EXIT_VIOLATION: int = 3
EXIT_PRECONDITION: int = 4
