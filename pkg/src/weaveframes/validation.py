"""Input validation helpers.

Every public entry point funnels raw user input (lists, nested lists of
``[re, im]`` pairs, numpy arrays) through these helpers so the rest of the
package can assume finite ``complex128`` arrays of the right shape.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .exceptions import ShapeError

MAX_EXHAUSTIVE_MEMBERS = 20


def check_operator(M, rows: int | None = None, cols: int | None = None, name: str = "operator") -> np.ndarray:
    """Return ``M`` as a finite 2-D complex array, checking its shape.

    The returned array is a fresh read-only copy, so validated operators
    can be shared freely.
    """
    arr = np.array(M, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D matrix, got ndim={arr.ndim}")
    if rows is not None and arr.shape[0] != rows:
        raise ShapeError(f"{name} must have {rows} rows, got {arr.shape[0]}")
    if cols is not None and arr.shape[1] != cols:
        raise ShapeError(f"{name} must have {cols} columns, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


def check_square(M, n: int | None = None, name: str = "operator") -> np.ndarray:
    arr = check_operator(M, name=name)
    if arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ShapeError(f"{name} must be {n}x{n}, got {arr.shape}")
    return arr


def check_vector(f, n: int | None = None, name: str = "vector") -> np.ndarray:
    arr = np.asarray(f, dtype=np.complex128)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got ndim={arr.ndim}")
    if n is not None and arr.shape[0] != n:
        raise ShapeError(f"{name} must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} has non-finite entries")
    return arr


def check_vectors(vectors, n: int | None = None, name: str = "vectors") -> np.ndarray:
    """Stack a nonempty sequence of vectors into a ``(count, n)`` array."""
    arr = np.array(vectors, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ShapeError(f"{name} must be a nonempty sequence of equal-length vectors")
    if n is not None and arr.shape[1] != n:
        raise ShapeError(f"{name} must live in dimension {n}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} has non-finite entries")
    return arr


def check_mask(sigma: int, m: int) -> int:
    """Validate a subset bitmask over ``m`` members (bit ``j`` set means member ``j`` is in the subset)."""
    if isinstance(sigma, (bool, np.bool_)) or not isinstance(sigma, (int, np.integer)):
        raise ShapeError(f"subset mask must be an int, got {type(sigma).__name__}")
    sigma = int(sigma)
    if sigma < 0 or sigma >> m:
        raise ShapeError(f"subset mask {sigma} does not fit in {m} members")
    return sigma


def mask_from_indices(indices: Iterable[int], m: int) -> int:
    """Bitmask for a set of 1-based member indices."""
    mask = 0
    for j in indices:
        if not 1 <= j <= m:
            raise ShapeError(f"member index {j} outside 1..{m}")
        mask |= 1 << (j - 1)
    return mask


def indices_from_mask(mask: int, m: int) -> list[int]:
    """1-based member indices contained in ``mask``."""
    return [j + 1 for j in range(m) if mask >> j & 1]


def check_cap(m: int, cap: int = MAX_EXHAUSTIVE_MEMBERS) -> None:
    from .exceptions import CapExceededError

    if m > cap:
        raise CapExceededError(
            f"exhaustive enumeration over {m} members exceeds the cap of {cap}; use sampling"
        )
