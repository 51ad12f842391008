"""Exact densities of weighted sums of independent uniform variables.

For weights ``a`` the random variable ``S = sum_i a_i X_i`` with
``X_i ~ U[-1, 1]`` has a compactly supported piecewise-polynomial density
(the Irwin-Hall family, rescaled and symmetrized).  Two independent
constructions are provided:

* ``density_closed_form`` expands the truncated-power representation

      f(x) = (2^m m! prod w_i)^{-1} * sum_eps (-1)^{|eps|} (x - s_eps)_+^{m-1}

  over the ``2^m`` sign patterns ``s_eps = sum_i +-w_i`` of the ``m``
  nonzero weights.  The alternating sum is evaluated with compensated
  summation, and only the left half of the support is built directly; the
  right half is mirrored, which makes the result exactly even.

* ``density_by_convolution`` folds in one uniform factor at a time using
  the antiderivative identity ``g(x) = (F(x+w) - F(x-w)) / (2w)``.

The two paths share no code and serve as oracles for each other.

Fast point evaluators (``density_at``, ``cdf_at``) avoid constructing the
full piecewise object; they power the criticality and search hot loops.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

from .piecewise import PiecewisePolynomial
from .weights import InvalidInputError, as_weight_vector, nonzero_weights

__all__ = [
    "density_closed_form",
    "density_by_convolution",
    "density_at",
    "cdf_at",
    "eval_density",
    "eval_cdf",
    "characteristic_function",
    "MAX_CLOSED_FORM_WEIGHTS",
]

# catastrophic cancellation in the alternating truncated-power sum limits
# the closed form to a few dozen weights; every supported computation stays
# far below this.
MAX_CLOSED_FORM_WEIGHTS = 20

_MERGE_REL_TOL = 1e-13


@lru_cache(maxsize=32)
def _sign_patterns(m: int) -> tuple[np.ndarray, np.ndarray]:
    """All sign vectors in {-1,+1}^m and the parity (-1)^(#positive)."""
    bits = (np.arange(2**m)[:, None] >> np.arange(m)) & 1
    signs = (2 * bits - 1).astype(float)
    parity = np.where(bits.sum(axis=1) % 2 == 0, 1.0, -1.0)
    return signs, parity


def _corner_shifts(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    signs, parity = _sign_patterns(w.size)
    return signs @ w, parity


def _prepared(a) -> np.ndarray:
    w = nonzero_weights(a)
    if w.size == 0:
        raise InvalidInputError("all-zero weight vector has no density")
    if w.size > MAX_CLOSED_FORM_WEIGHTS:
        raise InvalidInputError(
            f"more than {MAX_CLOSED_FORM_WEIGHTS} nonzero weights: the "
            "truncated-power expansion would lose all precision"
        )
    return w


def _merged_breakpoints(values: np.ndarray, span: float) -> np.ndarray:
    """Sort, merge within 1e-13*span, and symmetrize around zero.

    The input multiset is exactly symmetric (negating a sign pattern negates
    its shift without rounding), so averaging with the reversed, negated
    representative list restores exact evenness after the merge.
    """
    tol = _MERGE_REL_TOL * span
    vals = np.sort(values)
    reps = []
    start = 0
    for i in range(1, vals.size + 1):
        if i == vals.size or vals[i] - vals[start] > tol:
            reps.append(vals[start:i].mean())
            start = i
    reps = np.asarray(reps)
    reps = 0.5 * (reps - reps[::-1])
    # snap the middle representative of an odd-length list to exactly zero
    if reps.size % 2 == 1:
        reps[reps.size // 2] = 0.0
    return reps


def density_closed_form(a) -> PiecewisePolynomial:
    """Exact density of ``sum_i a_i X_i`` via the truncated-power expansion.

    Zero weights are dropped: they leave the distribution unchanged.  A
    single nonzero weight gives the uniform box of height ``1/(2|a|)``.

    Raises
    ------
    InvalidInputError
        For the all-zero vector, or more than 20 nonzero weights.
    """
    w = _prepared(a)
    m = w.size
    if m == 1:
        h = float(w[0])
        return PiecewisePolynomial(np.array([-h, h]), np.array([[0.5 / h]]))

    shifts, parity = _corner_shifts(w)
    span = 2.0 * float(np.sum(w))
    bp = _merged_breakpoints(shifts, span)
    tol = _MERGE_REL_TOL * span
    scale = 1.0 / (2.0**m * float(np.prod(w)) * math.factorial(m - 1))
    binoms = [math.comb(m - 1, i) for i in range(m)]

    mids = 0.5 * (bp[:-1] + bp[1:])
    npieces = mids.size
    coeffs = np.zeros((npieces, m))
    for j in range(npieces):
        mid = mids[j]
        if mid > tol:
            break  # right half is mirrored below
        included = shifts <= bp[j] + tol
        deltas = mid - shifts[included]
        par = parity[included]
        for i in range(m):
            terms = par * deltas ** (m - 1 - i)
            coeffs[j, i] = scale * binoms[i] * math.fsum(terms)
        if abs(mid) <= tol:
            # the straddling piece is an even polynomial; enforce it exactly
            coeffs[j, 1::2] = 0.0
    for j in range(npieces):
        mirror = npieces - 1 - j
        if mids[j] > tol and mirror != j:
            signs = (-1.0) ** np.arange(m)
            coeffs[j] = coeffs[mirror] * signs
    return PiecewisePolynomial(bp, coeffs)


def _fold_box(f: PiecewisePolynomial, v: float) -> PiecewisePolynomial:
    """Convolve ``f`` with the uniform box of half-width ``v``."""
    old_bp = f.breakpoints
    new_vals = np.concatenate([old_bp - v, old_bp + v])
    span = (old_bp[-1] - old_bp[0]) + 2.0 * v
    bp = _merged_breakpoints(new_vals, span)
    mids_old = f.midpoints
    halves_old = 0.5 * np.diff(old_bp)
    offsets = f._cumulative_offsets
    total = f.total_integral

    def cdf_poly(point: float, local_shift_base: float):
        """CDF restricted to the old piece containing ``point``.

        Returns ascending coefficients of F(x + shift) as a polynomial in
        the new local variable, where shift = +-v and ``point`` is the
        shifted midpoint of the new piece.
        """
        if point <= old_bp[0]:
            return np.array([0.0])
        if point >= old_bp[-1]:
            return np.array([total])
        j = int(np.searchsorted(old_bp, point, side="right")) - 1
        j = min(max(j, 0), mids_old.size - 1)
        c = f.coefficients[j]
        anti = np.concatenate([[0.0], c / np.arange(1, c.size + 1)])
        const = offsets[j] - P.polyval(-halves_old[j], anti)
        # compose with u -> u + delta to re-center on the new midpoint
        delta = local_shift_base - mids_old[j]
        composed = np.polynomial.Polynomial(anti)(
            np.polynomial.Polynomial([delta, 1.0])
        )
        out = composed.coef.copy()
        out[0] += const
        return out

    mids_new = 0.5 * (bp[:-1] + bp[1:])
    rows = []
    for mid in mids_new:
        up = cdf_poly(mid + v, mid + v)
        dn = cdf_poly(mid - v, mid - v)
        n = max(up.size, dn.size)
        row = np.zeros(n)
        row[: up.size] += up
        row[: dn.size] -= dn
        rows.append(row / (2.0 * v))
    width = max(r.size for r in rows)
    coeffs = np.zeros((len(rows), width))
    for j, r in enumerate(rows):
        coeffs[j, : r.size] = r
    return PiecewisePolynomial(bp, coeffs)


def density_by_convolution(a) -> PiecewisePolynomial:
    """Same contract as :func:`density_closed_form`, independent path."""
    w = _prepared(a)
    h = float(w[0])
    f = PiecewisePolynomial(np.array([-h, h]), np.array([[0.5 / h]]))
    for v in w[1:]:
        f = _fold_box(f, float(v))
    return f


def density_at(a, r: float) -> float:
    """Point evaluation of the density without building the pieces.

    Right-continuous, like :class:`PiecewisePolynomial` evaluation; the
    only discontinuous case is the single-weight box.
    """
    w = _prepared(a)
    m = w.size
    r = float(r)
    if m == 1:
        h = float(w[0])
        return 0.5 / h if -h <= r < h else 0.0
    total = float(np.sum(w))
    if not -total < r < total:
        return 0.0
    shifts, parity = _corner_shifts(w)
    d = r - shifts
    live = d > 0.0
    terms = parity[live] * d[live] ** (m - 1)
    scale = 1.0 / (2.0**m * float(np.prod(w)) * math.factorial(m - 1))
    return scale * math.fsum(terms)


def cdf_at(a, r: float) -> float:
    """Distribution function of ``sum a_i X_i`` at ``r``."""
    w = _prepared(a)
    m = w.size
    r = float(r)
    total = float(np.sum(w))
    if r <= -total:
        return 0.0
    if r >= total:
        return 1.0
    if m == 1:
        return (r + total) / (2.0 * total)
    shifts, parity = _corner_shifts(w)
    d = r - shifts
    live = d > 0.0
    terms = parity[live] * d[live] ** m
    scale = 1.0 / (2.0**m * float(np.prod(w)) * math.factorial(m))
    return scale * math.fsum(terms)


def eval_density(f: PiecewisePolynomial, r) -> float | np.ndarray:
    """Evaluate a constructed density, zero outside its support."""
    return f(r)


def eval_cdf(f: PiecewisePolynomial, r) -> float | np.ndarray:
    """Antiderivative of a constructed density from the left endpoint."""
    return f.cumulative(r)


def characteristic_function(a, t):
    """``prod_i sin(a_i t) / (a_i t)`` with ``sin(0)/0 = 1``.

    Stable for small arguments: each factor is evaluated as a sinc, which
    has no cancellation near zero.  Accepts scalar or array ``t``.
    """
    w = as_weight_vector(a, allow_zero=True)
    t = np.asarray(t, dtype=float)
    z = np.multiply.outer(t, w) / np.pi
    out = np.prod(np.sinc(z), axis=-1)
    return float(out) if out.ndim == 0 else out
