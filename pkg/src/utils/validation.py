"""
Validation utilities for the lattice protein move explorer.

This module provides validation functions for numeric parameters, seeds,
file paths and paired inputs.
"""

from pathlib import Path
from typing import Any, Sized

import numpy as np

from .exceptions import InvalidParameterError, LengthMismatchError

SEED_MASK = 0xFFFFFFFFFFFFFFFF


def validate_file_path(file_path: str) -> Path:
    """
    Validate and normalize a file path.

    Args:
        file_path: Path to the file

    Returns:
        Normalized Path object

    Raises:
        InvalidParameterError: If the path is empty or does not exist
    """
    if not file_path or not isinstance(file_path, (str, Path)):
        raise InvalidParameterError("File path must be a non-empty string")

    path = Path(file_path).expanduser().resolve()
    if not path.is_file():
        raise InvalidParameterError(f"File not found: {file_path}", field="path", value=file_path)
    return path


def validate_positive_int(value: Any, field: str, minimum: int = 1) -> int:
    """
    Validate an integer parameter with a lower bound.

    Raises:
        InvalidParameterError: If the value is not an integer >= minimum
    """
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise InvalidParameterError(
            f"{field} must be an integer >= {minimum}", field=field, value=value
        )
    return int(value)


def validate_move_length(k: Any) -> int:
    """Validate the maximal move interval length k (k >= 1)."""
    return validate_positive_int(k, "k")


def validate_seed(seed: Any) -> int:
    """
    Validate a 64-bit seed and reduce it to the unsigned range.

    Args:
        seed: Signed or unsigned 64-bit integer

    Returns:
        Seed modulo 2**64, usable by numpy.random

    Raises:
        InvalidParameterError: If the seed is not an integer in range
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameterError("Seed must be an integer", field="seed", value=seed)
    seed = int(seed)
    if not (-(2**63) <= seed <= SEED_MASK):
        raise InvalidParameterError("Seed must fit into 64 bits", field="seed", value=seed)
    return seed & SEED_MASK


def validate_temperature(value: Any, field: str) -> float:
    """Validate a strictly positive temperature."""
    if not isinstance(value, (int, float, np.floating)) or not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{field} must be a positive number", field=field, value=value)
    return float(value)


def validate_cooling(cooling: Any) -> float:
    """Validate a geometric cooling factor in (0, 1)."""
    if not isinstance(cooling, (int, float, np.floating)) or not (0.0 < cooling < 1.0):
        raise InvalidParameterError(
            "Cooling factor must be between 0.0 and 1.0", field="cooling", value=cooling
        )
    return float(cooling)


def validate_same_length(first: Sized, second: Sized, what: str = "inputs") -> None:
    """
    Validate that two paired inputs have equal length.

    Raises:
        LengthMismatchError: If the lengths differ
    """
    if len(first) != len(second):
        raise LengthMismatchError(
            f"Length mismatch between {what}: {len(first)} != {len(second)}",
            field=what,
            value=(len(first), len(second)),
        )
