"""
Utility functions for the cubature toolkit.
Contains parsing, formatting and environment helpers shared by the CLI and core.
"""

import os
from typing import Optional, Sequence, Tuple

from ..core.errors import ConfigError, StructureError

WORKERS_ENV = "U3CUBATURE_WORKERS"

_SUPERSCRIPTS = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")
_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def default_workers(config_value: Optional[int] = None) -> int:
    """
    Resolve the number of solver worker threads.

    Args:
        config_value: Explicit value from configuration, if any

    Returns:
        Worker count from the config value, else the U3CUBATURE_WORKERS
        environment variable, else the CPU count capped at 8
    """
    # 1. Explicit configuration
    if config_value is not None:
        return max(1, int(config_value))

    # 2. Environment variable
    env_value = os.environ.get(WORKERS_ENV, "").strip()
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got '{env_value}'")

    # 3. Machine default
    return max(1, min(8, os.cpu_count() or 1))


def parse_int_list(text: str, name: str = "value") -> Tuple[int, ...]:
    """
    Parse a comma separated list of integers such as "1,0,0,1,0,0".

    Args:
        text: The list as typed by the user
        name: Name used in error messages

    Returns:
        Tuple of integers
    """
    parts = [p.strip() for p in text.replace(" ", ",").split(",") if p.strip()]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise StructureError(f"{name} must be comma separated integers, got '{text}'")


def parse_structure_counts(text: str) -> Tuple[int, ...]:
    """
    Parse a structure given as K1..K6 (six entries) or K0..K6 (seven entries).

    Returns:
        The seven counts K0..K6; K0 is 0 when only six are given
    """
    counts = parse_int_list(text, "structure")
    if len(counts) == 6:
        counts = (0,) + counts
    if len(counts) != 7:
        raise StructureError(f"structure needs 6 or 7 entries, got {len(counts)}")
    if any(k < 0 for k in counts):
        raise StructureError(f"structure counts must be nonnegative, got {counts}")
    return counts


def superscript(value: int) -> str:
    """Render an integer with Unicode superscript digits."""
    return str(value).translate(_SUPERSCRIPTS)


def subscript(value: int) -> str:
    """Render an integer with Unicode subscript digits."""
    return str(value).translate(_SUBSCRIPTS)


def format_counts(counts: Sequence[int]) -> str:
    return ",".join(str(int(k)) for k in counts)


def format_real(value: float) -> str:
    """Shortest text that reads back as the same double."""
    return repr(float(value))
