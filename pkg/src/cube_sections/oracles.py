"""Independent computation paths used to cross-validate the exact core.

Two deliberately different methods re-derive section volumes:

* panel-wise Gauss-Legendre quadrature of the oscillatory sinc-product
  integral, with the infinite tail integrated in closed form through
  sine/cosine-integral recurrences, and
* Monte Carlo estimation of the slab probability
  ``P(|sum a_i X_i - r| <= eps)``.

Nothing here touches the piecewise-polynomial machinery, so agreement with
:mod:`cube_sections.sections` is a genuine end-to-end check.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .weights import InvalidInputError, as_weight_vector, nonzero_weights

__all__ = [
    "QuadratureConfig",
    "MonteCarloEstimate",
    "sinc_product_quadrature",
    "monte_carlo_section",
    "clt_diagonal_asymptote",
    "worker_count",
]


def worker_count(requested: int | None = None) -> int:
    """Worker cap: explicit argument, else CUBE_SECTIONS_THREADS, else 1."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("CUBE_SECTIONS_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls for the oscillatory quadrature.

    ``truncation`` defaults to the point where the envelope bound
    ``prod |sinc(w_i t)| <= 1 / (t^m prod w_i)`` certifies a tail below
    ``tail_bound_target``, clamped to [20, 4000]; the clamp is harmless
    because the tail beyond the truncation is then added analytically.
    """

    panel_order: int = 16
    truncation: float | None = None
    tail_bound_target: float = 1e-10

    def resolve_truncation(self, w: np.ndarray) -> float:
        if self.truncation is not None:
            return float(self.truncation)
        m = w.size
        prod_w = float(np.prod(w))
        t = ((m - 1) * prod_w * self.tail_bound_target) ** (-1.0 / (m - 1))
        return float(min(max(t, 20.0), 4000.0))


def _trig_product_terms(w: np.ndarray, shift: float) -> list[tuple[float, float, bool]]:
    """Expand ``prod sin(w_i t) * cos(shift t)`` into pure sin/cos terms.

    Returns triples ``(coefficient, frequency >= 0, is_sine)``.
    """
    # (coef, omega, is_sine); product-to-sum, one factor at a time
    terms: list[tuple[float, float, bool]] = [(1.0, float(w[0]), True)]

    def fold(terms, v, factor_is_sine):
        out = []
        for coef, om, is_sine in terms:
            if factor_is_sine and is_sine:
                # sin x sin v = (cos(x-v) - cos(x+v)) / 2
                out.append((0.5 * coef, om - v, False))
                out.append((-0.5 * coef, om + v, False))
            elif factor_is_sine and not is_sine:
                # cos x sin v = (sin(x+v) - sin(x-v)) / 2
                out.append((0.5 * coef, om + v, True))
                out.append((-0.5 * coef, om - v, True))
            elif not factor_is_sine and is_sine:
                # sin x cos v = (sin(x+v) + sin(x-v)) / 2
                out.append((0.5 * coef, om + v, True))
                out.append((0.5 * coef, om - v, True))
            else:
                # cos x cos v = (cos(x+v) + cos(x-v)) / 2
                out.append((0.5 * coef, om + v, False))
                out.append((0.5 * coef, om - v, False))
        normalized = []
        for coef, om, is_sine in out:
            if om < 0.0:
                om = -om
                if is_sine:
                    coef = -coef
            normalized.append((coef, om, is_sine))
        return normalized

    for v in w[1:]:
        terms = fold(terms, float(v), True)
    if shift != 0.0:
        terms = fold(terms, float(shift), False)
    return terms


def _tail_trig_integral(m: int, omega: float, is_sine: bool, T: float) -> float:
    """``int_T^inf trig(omega t) / t^m dt`` by upward recurrence from Si/Ci."""
    if omega == 0.0:
        if is_sine:
            return 0.0
        if m == 1:
            raise InvalidInputError("divergent tail: constant term with m = 1")
        return T ** (1 - m) / (m - 1)
    si, ci = sici(omega * T)
    s = math.pi / 2.0 - float(si)  # int_T^inf sin(omega t)/t dt
    c = -float(ci)  # int_T^inf cos(omega t)/t dt
    for mu in range(2, m + 1):
        denom = (mu - 1) * T ** (mu - 1)
        s_next = math.sin(omega * T) / denom + omega / (mu - 1) * c
        c_next = math.cos(omega * T) / denom - omega / (mu - 1) * s
        s, c = s_next, c_next
    return s if is_sine else c


def sinc_product_quadrature(a, cfg: QuadratureConfig | None = None, *, cosine_shift: float = 0.0) -> float:
    """``int prod_i sin(a_i t)/(a_i t) * cos(cosine_shift * t) dt`` over the line.

    Gauss-Legendre panels no longer than half the fastest oscillation
    period cover ``[0, T]``; the remainder ``[T, inf)`` is integrated in
    closed form after expanding the sine product into single-frequency
    terms.  With the default shift 0 this is the raw section integral
    ``I(a)``; a nonzero shift yields ``2 pi f_a(shift)`` for Fourier
    cross-checks.

    Raises
    ------
    InvalidInputError
        If fewer than two coordinates are nonzero (not integrable).
    """
    cfg = cfg or QuadratureConfig()
    w = nonzero_weights(as_weight_vector(a))
    if w.size < 2:
        raise InvalidInputError(
            "sinc-product quadrature needs at least two nonzero weights"
        )
    m = w.size
    T = cfg.resolve_truncation(w)

    panel = math.pi / (float(np.sum(w)) + abs(cosine_shift))
    count = max(1, int(math.ceil(T / panel)))
    edges = np.linspace(0.0, T, count + 1)
    nodes, weights = np.polynomial.legendre.leggauss(cfg.panel_order)
    half = 0.5 * np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    t = (centers[:, None] + half[:, None] * nodes[None, :]).ravel()
    quad_w = (half[:, None] * weights[None, :]).ravel()
    integrand = np.prod(np.sinc(np.multiply.outer(t, w) / np.pi), axis=-1)
    if cosine_shift != 0.0:
        integrand = integrand * np.cos(cosine_shift * t)
    main = float(quad_w @ integrand)

    prod_w = float(np.prod(w))
    tail = math.fsum(
        coef * _tail_trig_integral(m, om, is_sine, T)
        for coef, om, is_sine in _trig_product_terms(w, cosine_shift)
    ) / prod_w
    return 2.0 * (main + tail)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Slab Monte Carlo result; ``std_error`` is the standard error of ``mean``."""

    mean: float
    std_error: float
    samples: int
    slab_halfwidth: float

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "slab_halfwidth": self.slab_halfwidth,
        }


_BATCH = 1 << 18


def monte_carlo_section(
    a,
    r: float = 0.0,
    samples: int = 1_000_000,
    slab_halfwidth: float | None = None,
    rng_seed: int = 0,
    threads: int | None = None,
) -> MonteCarloEstimate:
    """Estimate ``s_a(r)`` by counting cube samples in a thin slab.

    The estimator is ``2^n |a| P_hat / (2 eps)`` with
    ``P_hat = fraction of |<x, a> - r| <= eps``; the symmetric slab makes
    the leading bias ``O(eps^2)`` at ``r = 0``.  Batches draw from streams
    spawned off one seed sequence, and aggregation uses exact integer
    counts, so the result is reproducible for a fixed ``rng_seed``
    regardless of the worker count.
    """
    arr = as_weight_vector(a)
    if samples < 1:
        raise InvalidInputError("need at least one sample")
    eps = slab_halfwidth if slab_halfwidth is not None else 0.01 * float(
        np.sum(np.abs(arr))
    )
    if not eps > 0.0:
        raise InvalidInputError("slab halfwidth must be positive")

    sizes = [_BATCH] * (samples // _BATCH)
    if samples % _BATCH:
        sizes.append(samples % _BATCH)
    streams = np.random.SeedSequence(rng_seed).spawn(len(sizes))

    def run(args) -> int:
        size, stream = args
        rng = np.random.default_rng(stream)
        proj = rng.uniform(-1.0, 1.0, size=(size, arr.size)) @ arr
        return int(np.count_nonzero(np.abs(proj - r) <= eps))

    jobs = list(zip(sizes, streams))
    nworkers = worker_count(threads)
    if nworkers > 1:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            hits = sum(pool.map(run, jobs))
    else:
        hits = sum(map(run, jobs))

    p_hat = hits / samples
    factor = 2.0**arr.size * float(np.linalg.norm(arr)) / (2.0 * eps)
    return MonteCarloEstimate(
        mean=factor * p_hat,
        std_error=factor * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / samples),
        samples=samples,
        slab_halfwidth=eps,
    )


def clt_diagonal_asymptote(n: int) -> float:
    """CLT prediction ``sqrt(6/pi) * 2^(n-1)`` for the n-diagonal volume.

    The n-diagonal section value tends to this from below as the
    normalized uniform sum approaches a Gaussian.
    """
    if n < 2:
        raise InvalidInputError("asymptote defined for n >= 2")
    return math.sqrt(6.0 / math.pi) * 2.0 ** (n - 1)
