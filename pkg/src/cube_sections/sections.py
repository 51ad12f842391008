"""Hyperplane-section volumes of the cube ``Q_n = [-1, 1]^n``.

The bridge between geometry and probability: if ``a`` is a unit normal and
``S = sum_i a_i X_i`` with ``X_i ~ U[-1, 1]``, then the parallel section
function satisfies ``s_a(r) = 2^n |a| f_S(r)``, so every volume here is read
off an exact piecewise-polynomial density.  No quadrature is used in this
module; the oscillatory-integral path lives in :mod:`cube_sections.oracles`
as an independent check.

Boundary convention: densities are evaluated right-continuously, except
that geometric quantities at a support endpoint use the one-sided limit
from inside the support (a section of a facet by its own boundary plane is
still a face, not the empty set).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .density import cdf_at, density_at
from .weights import (
    InvalidInputError,
    as_unit_vector,
    as_weight_vector,
    nonzero_weights,
    reduce_weights,
)

__all__ = [
    "SectionReport",
    "parallel_section",
    "central_volume",
    "normalized_section",
    "facet_section_volume",
    "cone_volume",
    "slab_identity_check",
    "section_report",
    "diagonal_direction",
    "diagonal_section_volume",
]


def _density_inner(coords: np.ndarray, r: float) -> float:
    """Density at ``r`` using the inner one-sided limit at support endpoints.

    Only the single-box density is discontinuous, so this differs from
    ``density_at`` solely at ``|r| = |w|`` for one nonzero weight ``w``.
    """
    w = nonzero_weights(coords)
    if w.size == 1:
        h = float(w[0])
        return 0.5 / h if abs(r) <= h else 0.0
    return density_at(w, r)


def parallel_section(a, r: float, *, with_flag: bool = False):
    """Volume of ``{x in Q_n : <x, a> = r}``; not scale-invariant in ``a``.

    Parameters
    ----------
    a : array_like
        Nonzero weight vector (n coordinates).
    r : float
        Hyperplane offset.
    with_flag : bool
        Also return a degeneracy flag.  The flag is set in the single
        degenerate case ``a = c e_j`` with ``|r| = |c|``, where the density
        does not exist but the geometric section is the facet itself.

    Returns
    -------
    float, or (float, bool) when ``with_flag`` is set.
    """
    arr = as_weight_vector(a)
    n = arr.size
    w = nonzero_weights(arr)
    r = float(r)
    if w.size == 1:
        h = float(w[0])
        if abs(r) < h:
            value, flag = 2.0 ** (n - 1), False
        elif abs(r) == h:
            value, flag = 2.0 ** (n - 1), True
        else:
            value, flag = 0.0, False
    else:
        value = 2.0**n * float(np.linalg.norm(arr)) * density_at(arr, r)
        flag = False
    return (value, flag) if with_flag else value


def central_volume(a) -> float:
    """``Vol_{n-1}(Q_n \\cap a^\\perp)``; invariant under scaling of ``a``."""
    return parallel_section(as_unit_vector(a), 0.0)


def normalized_section(a) -> float:
    """Scale-invariant section function ``pi * central volume / 2^(n-1)``.

    Equals ``pi`` at coordinate directions and ``sqrt(2) pi`` at two-
    coordinate diagonals, the extremes of the Hadwiger-Ball bounds.
    """
    arr = as_weight_vector(a)
    return math.pi * central_volume(arr) / 2.0 ** (arr.size - 1)


def facet_section_volume(a, k: int) -> float:
    """``(n-2)``-volume of the slice of facet ``x_k = 1`` by ``a^perp``.

    Computed from the reduced weights ``a`` without coordinate ``k``:
    the slice volume equals ``s_reduced(a_k)`` over the (n-1)-cube.
    Degenerate case ``a = +-e_k`` returns 0.
    """
    u = as_unit_vector(a)
    red = reduce_weights(u, k)
    if red.degenerate:
        return 0.0
    m = red.coords.size  # the facet is an (n-1)-cube
    return 2.0**m * float(np.linalg.norm(red.coords)) * _density_inner(
        red.coords, abs(float(u[k % u.size]))
    )


def cone_volume(a, k: int) -> float:
    """Volume of ``conv(0 \\cup (S_k \\cap a^\\perp))`` for facet ``x_k = 1``.

    Cone over the facet slice with apex at the origin: base times the
    distance ``1/sqrt(1 - a_k^2)`` from 0 to the slice's affine hull,
    divided by the dimension ``n - 1``.
    """
    u = as_unit_vector(a)
    if u.size < 2:
        raise InvalidInputError("cone volumes need dimension at least 2")
    red = reduce_weights(u, k)
    if red.degenerate:
        return 0.0
    base = facet_section_volume(u, k)
    return base / ((u.size - 1) * float(np.linalg.norm(red.coords)))


def slab_identity_check(a, k: int) -> tuple[float, float]:
    """Central volume vs the orthogonal-projection slab formula.

    Projecting ``Q_n \\cap a^\\perp`` onto the facet ``x_k = 1`` scales
    volumes by ``a_k`` and lands on the slab ``{|<x, reduced a>| <= a_k}``
    of the (n-1)-cube, giving

        s_a(0) = 2^(n-1) (F(a_k) - F(-a_k)) / a_k

    with ``F`` the CDF of the reduced weight sum.  Returns ``(lhs, rhs)``.
    """
    u = as_unit_vector(a)
    ak = float(u[k % u.size])
    if ak == 0.0:
        raise InvalidInputError("slab identity needs a_k != 0")
    ak = abs(ak)
    red = reduce_weights(u, k)
    lhs = central_volume(u)
    n = u.size
    if red.degenerate:
        spread = 1.0  # empty sum is the point mass at 0
    else:
        spread = cdf_at(red.coords, ak) - cdf_at(red.coords, -ak)
    rhs = 2.0 ** (n - 1) * spread / ak
    return lhs, rhs


@dataclass(frozen=True)
class SectionReport:
    """Full central-section summary for one direction.

    Attributes
    ----------
    direction : numpy.ndarray
        Unit-normalized copy of the input.
    volume : float
        ``(n-1)``-volume of the central section.
    sigma : float
        Normalized section value ``pi * volume / 2^(n-1)``.
    cone_volumes, facet_section_volumes : numpy.ndarray
        Per-facet cone and slice volumes (facets ``x_k = 1`` only; sign
        symmetry makes the opposite facets redundant).
    degenerate_facets : tuple
        Indices ``k`` with ``a_k = 0``.  The slab identity divides by
        ``a_k`` and is undefined there, so those indices are skipped in
        ``slab_max_error``; such boundary directions are also exactly the
        ones where the cone-sum identity may fail.
    cone_sum : float
        Sum of cone volumes; equals ``volume / 2`` for interior directions.
    slab_max_error : float
        Worst ``|lhs - rhs|`` of the slab identity over ``a_k != 0``.
    """

    direction: np.ndarray
    volume: float
    sigma: float
    cone_volumes: np.ndarray
    facet_section_volumes: np.ndarray
    degenerate_facets: tuple = field(default_factory=tuple)
    cone_sum: float = 0.0
    slab_max_error: float = 0.0

    def to_dict(self) -> dict:
        return {
            "direction": [float(x) for x in self.direction],
            "volume": self.volume,
            "sigma": self.sigma,
            "cone_volumes": [float(x) for x in self.cone_volumes],
            "facet_section_volumes": [float(x) for x in self.facet_section_volumes],
            "degenerate_facets": list(self.degenerate_facets),
            "cone_sum": self.cone_sum,
            "slab_max_error": self.slab_max_error,
        }


def section_report(a) -> SectionReport:
    """Compute the central volume and all per-facet cross-checks."""
    u = as_unit_vector(a)
    n = u.size
    vol = central_volume(u)
    facets = np.array([facet_section_volume(u, k) for k in range(n)])
    if n >= 2:
        cones = np.array([cone_volume(u, k) for k in range(n)])
    else:
        cones = np.zeros(n)
    slab_errors = [
        abs(lhs - rhs)
        for k in range(n)
        if u[k] != 0.0
        for lhs, rhs in [slab_identity_check(u, k)]
    ]
    return SectionReport(
        direction=u,
        volume=vol,
        sigma=math.pi * vol / 2.0 ** (n - 1),
        cone_volumes=cones,
        facet_section_volumes=facets,
        degenerate_facets=tuple(int(k) for k in range(n) if u[k] == 0.0),
        cone_sum=float(np.sum(cones)),
        slab_max_error=max(slab_errors, default=0.0),
    )


def diagonal_direction(k: int, n: int) -> np.ndarray:
    """Canonical k-diagonal direction in dimension n: zeros then 1/sqrt(k)."""
    if not 1 <= k <= n:
        raise InvalidInputError(f"need 1 <= k <= n, got k={k}, n={n}")
    v = np.zeros(n)
    v[n - k :] = 1.0 / math.sqrt(k)
    return v


def diagonal_section_volume(n: int, k: int) -> float:
    """Central volume of a k-diagonal section of ``Q_n``."""
    return central_volume(diagonal_direction(k, n))
