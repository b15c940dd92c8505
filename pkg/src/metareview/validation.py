"""Input validation helpers shared by the estimators and the numeric kernel."""

import numpy as np


def as_float_array(x, name="array"):
    """Coerce to a float64 ndarray, rejecting NaN/Inf."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_vector(x, name="vector"):
    arr = as_float_array(x, name)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    return arr


def as_matrix(x, name="matrix"):
    arr = as_float_array(x, name)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    return arr


def check_lengths_match(a, b, name_a="a", name_b="b"):
    if len(a) != len(b):
        raise ValueError(f"{name_a} has length {len(a)} but {name_b} has length {len(b)}")
