"""Weight vectors for sums of independent uniform random variables.

A weight vector ``a`` describes the linear form ``sum_i a_i X_i`` with the
``X_i`` independent and uniform on ``[-1, 1]``.  The same vector, read as a
hyperplane normal, selects the central section ``Q_n \\cap a^\\perp`` of the
cube ``Q_n = [-1, 1]^n``.  Vectors are kept exactly as given; nothing in this
module normalizes silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidInputError",
    "RELATIVE_WEIGHT_FLOOR",
    "ReducedWeights",
    "as_weight_vector",
    "as_unit_vector",
    "reduce_weights",
    "nonzero_weights",
]

# weights this far below the largest one are indistinguishable from zero in
# the corner-shift arithmetic of the closed-form density (they fall under
# the ulp of the total weight sum) and only poison it with cancellation;
# dropping them perturbs the density by the same relative amount
RELATIVE_WEIGHT_FLOOR = 1e-14


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


def as_weight_vector(a, *, allow_zero: bool = False) -> np.ndarray:
    """Coerce ``a`` to a 1-d float array and validate it.

    Parameters
    ----------
    a : array_like
        Sequence of real weights.
    allow_zero : bool
        Permit the all-zero vector.  By default at least one coordinate
        must be nonzero.

    Returns
    -------
    numpy.ndarray
        A fresh float64 copy of the input.
    """
    arr = np.atleast_1d(np.asarray(a, dtype=float)).copy()
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("weight vector must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("weight vector must be finite")
    if not allow_zero and not np.any(arr):
        raise InvalidInputError("weight vector must have a nonzero coordinate")
    return arr


def as_unit_vector(a) -> np.ndarray:
    """Coerce ``a`` and rescale it to Euclidean norm 1."""
    arr = as_weight_vector(a)
    # divide out the peak first so squaring cannot underflow to zero
    arr = arr / np.max(np.abs(arr))
    return arr / np.linalg.norm(arr)


def nonzero_weights(a) -> np.ndarray:
    """Absolute values of the effectively nonzero coordinates, order kept.

    Zero weights contribute the constant 0 to ``sum a_i X_i`` and a sign
    flip leaves each uniform factor invariant in distribution, so the
    density only depends on this reduction.  Coordinates below
    ``RELATIVE_WEIGHT_FLOOR`` times the largest one are treated as zero.
    """
    arr = np.abs(as_weight_vector(a, allow_zero=True))
    return arr[arr > RELATIVE_WEIGHT_FLOOR * float(np.max(arr))]


@dataclass(frozen=True)
class ReducedWeights:
    """A weight vector with one coordinate deleted.

    Attributes
    ----------
    parent : numpy.ndarray
        The original vector.
    omitted_index : int
        0-based index of the deleted coordinate.
    coords : numpy.ndarray
        ``parent`` with that coordinate removed; may be empty for 1-d input.
    """

    parent: np.ndarray
    omitted_index: int
    coords: np.ndarray = field(repr=True)

    @property
    def degenerate(self) -> bool:
        """True when no randomness is left: empty or all-zero remainder."""
        return self.coords.size == 0 or not np.any(self.coords)


def reduce_weights(a, k: int) -> ReducedWeights:
    """Delete coordinate ``k`` (0-based) from the weight vector.

    Raises
    ------
    InvalidInputError
        If ``k`` is out of range.
    """
    arr = as_weight_vector(a, allow_zero=True)
    if not -arr.size <= k < arr.size:
        raise InvalidInputError(f"index {k} out of range for size {arr.size}")
    k = k % arr.size
    coords = np.delete(arr, k)
    return ReducedWeights(parent=arr, omitted_index=k, coords=coords)
