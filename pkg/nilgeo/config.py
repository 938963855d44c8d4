"""
Configuration for nilgeo.

Numeric tolerances live here as module constants. Runtime settings are read
from the environment (a .env file is loaded by the CLI) with safe fallbacks.
"""

import logging
import os
from typing import Optional

logger = logging.getLogger(__name__)

# Relative tolerances for the algebra axioms
ANTISYMMETRY_TOL = 1e-12
JACOBI_TOL = 1e-12
SPD_TOL = 1e-12

# Kernel / rank decisions, relative to the largest singular value
RANK_TOL = 1e-10

# Plane and flag nondegeneracy (gram-determinant test)
DEGENERACY_TOL = 1e-12

# Parallelism test, scaled by (1 + |gamma|) * |x|
PARALLEL_TOL = 1e-10

# Orthonormality check for the closed-form curvature formulas
ORTHONORMAL_TOL = 1e-10

# Containment of the derived algebra in the center
CONTAINMENT_TOL = 1e-10

# Flag curvature values below this magnitude count as zero in sign scans
NEAR_ZERO_TOL = 1e-9

# Finite-difference step: default factor and floor, both times (1 + |y|)
FD_STEP_FACTOR = 1e-4
FD_STEP_FLOOR = 1e-12

DEFAULT_SEED = 0
DEFAULT_WORKERS = 4
DEFAULT_LOG_LEVEL = 'WARNING'


def _env_int(name: str, default: int, minimum: int) -> int:
    """
    Read an integer environment variable.

    Args:
        name: Environment variable name
        default: Value used when unset or invalid
        minimum: Smallest accepted value

    Returns:
        Parsed integer or default
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value < minimum:
        logger.warning(f"Ignoring {name}={value}: must be >= {minimum}, using {default}")
        return default
    return value


def get_default_seed() -> int:
    """Scan seed from NILGEO_SEED (default 0)."""
    return _env_int('NILGEO_SEED', DEFAULT_SEED, 0)


def get_worker_count() -> int:
    """Worker threads from NILGEO_WORKERS (default 4)."""
    return _env_int('NILGEO_WORKERS', DEFAULT_WORKERS, 1)


def get_log_level(override: Optional[str] = None) -> int:
    """
    Resolve the logging level.

    Args:
        override: Level name taking precedence over NILGEO_LOG_LEVEL

    Returns:
        Numeric logging level
    """
    name = override or os.getenv('NILGEO_LOG_LEVEL') or DEFAULT_LOG_LEVEL
    level = logging.getLevelName(name.strip().upper())
    if not isinstance(level, int):
        logger.warning(f"Unknown log level {name!r}, using {DEFAULT_LOG_LEVEL}")
        return logging.getLevelName(DEFAULT_LOG_LEVEL)
    return level
