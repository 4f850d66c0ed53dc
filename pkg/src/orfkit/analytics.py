"""Closed-form moments, bound constants, envelopes, and dominance intervals.

With z = ||x - y|| and j = j_{d/2-1} (the normalized Bessel function from
:mod:`orfkit.specfun`):

* Fourier estimator (i.i.d. Gaussian frequencies):
  mean exp(-z^2/2), variance (1 - exp(-z^2))^2 / (2p).  The variance follows
  from Var[cos(w.delta)] = (1 + E cos(2 w.delta))/2 - (E cos(w.delta))^2 with
  w.delta ~ N(0, z^2), and is verified against Monte-Carlo in the tests.
* Orthogonal estimator (Haar frequencies): mean j(z); for one block (p <= d)

      Var = (1/p) { (1 + j(2z))/2 + (p-1) j(sqrt(2) z) - p j(z)^2 },

  which splits into a single-mode variance (1 + j(2z))/2 - j(z)^2 plus
  (p-1) copies of the cross covariance j(sqrt(2) z) - j(z)^2.  For p > d the
  frequencies form independent blocks, cross-block covariances vanish, and
  the variance is the block decomposition summed over block sizes.

The Gaussian sandwich exp(-z^2/2) <= j(z) <= exp(-z^2/(2d)) holds on the
closed interval [0, max(b_d, c_d)] (with the convention max = b_d for
2 <= d <= 4, where c_d is undefined); the upper bound extends to the second
zero of j.  Variance dominance over the Fourier estimator holds on
[0, max(alpha_d, beta_d)].  The formulas themselves are exact everywhere, so
functions return values with a validity flag instead of raising outside the
intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .specfun import first_zero, normalized_bessel, normalized_bessel_grid

RFF = "rff"
ORF = "orf"


@dataclass(frozen=True)
class ClosedFormSummary:
    """Closed-form mean and variance of one estimator at one separation."""

    estimator: str
    d: int
    p: int
    z: float
    bias: float
    variance: float


@dataclass(frozen=True)
class BoundConstants:
    """Interval endpoints and the first Bessel zero for one dimension.

    ``c_d`` is only defined for d >= 5; for 2 <= d <= 4 the bias interval end
    is ``b_d`` by convention.
    """

    d: int
    b_d: float
    c_d: float | None
    alpha_d: float
    beta_d: float
    bias_interval_end: float
    variance_interval_end: float
    first_zero: float


def _check_p(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or p < 1:
        raise InvalidArgumentError(f"feature count must be a positive integer, got {p!r}")
    return int(p)


def rff_bias(z):
    """Mean of the Fourier estimator: exp(-z^2/2).  Accepts scalars or arrays."""
    z = np.asarray(z, dtype=float)
    out = np.exp(-z * z / 2.0)
    return float(out) if out.ndim == 0 else out


def rff_variance(p: int, z):
    """Variance of the Fourier estimator: (1 - exp(-z^2))^2 / (2p).

    Equivalently (1/p) [ (1 + e^(-2 z^2))/2 - e^(-z^2) ]: the single-mode
    variance of cos(w.delta) scaled by the number of independent frequencies.
    """
    p = _check_p(p)
    z = np.asarray(z, dtype=float)
    out = (1.0 - np.exp(-z * z)) ** 2 / (2.0 * p)
    return float(out) if out.ndim == 0 else out


def orf_bias(d: int, z: float) -> float:
    """Mean of the orthogonal estimator: j_{d/2-1}(z)."""
    return normalized_bessel(d, z)


def orf_bias_grid(d: int, z: np.ndarray) -> np.ndarray:
    """Vectorized :func:`orf_bias` over a 1-d grid."""
    return normalized_bessel_grid(d, z)


def block_sizes(d: int, p: int) -> list[int]:
    """Column-block sizes of the orthogonal weight matrix: p <= d is one block."""
    if p <= d:
        return [p]
    sizes = [d] * (p // d)
    if p % d:
        sizes.append(p % d)
    return sizes


def _variance_from_bessels(d, p, j1, jr2, j2):
    single = (1.0 + j2) / 2.0 - j1 * j1
    cov = jr2 - j1 * j1
    total = 0.0
    for pb in block_sizes(d, p):
        total = total + pb * single + pb * (pb - 1) * cov
    return total / (p * p)


def orf_variance(d: int, p: int, z: float) -> float:
    """Variance of the orthogonal estimator (block decomposition for p > d)."""
    p = _check_p(p)
    j1 = normalized_bessel(d, z)
    jr2 = normalized_bessel(d, math.sqrt(2.0) * z)
    j2 = normalized_bessel(d, 2.0 * z)
    return float(_variance_from_bessels(d, p, j1, jr2, j2))


def orf_variance_grid(d: int, p: int, z: np.ndarray) -> np.ndarray:
    """Vectorized :func:`orf_variance` over a 1-d grid."""
    p = _check_p(p)
    z = np.asarray(z, dtype=float)
    j1 = normalized_bessel_grid(d, z)
    jr2 = normalized_bessel_grid(d, math.sqrt(2.0) * z)
    j2 = normalized_bessel_grid(d, 2.0 * z)
    return _variance_from_bessels(d, p, j1, jr2, j2)


def bound_constants(d: int) -> BoundConstants:
    """All interval constants for dimension d, plus the first zero.

    b_d = 2^(1/4) d^(3/4) sqrt(1 - 4/(2 sqrt(2) d^(3/2) - d))     (d >= 2)
    c_d = sqrt(d^2/4 - 1)  sqrt(1 - 8/(d^2 - 2d - 4))             (d >= 5)
    alpha_d = (d/2)^(3/4),  beta_d = sqrt(d^2/4 - 1) / 2

    c_d overtakes b_d around d ~ 35 and grows linearly afterwards.
    """
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool) or d < 2:
        raise InvalidArgumentError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    b_d = 2.0 ** 0.25 * d ** 0.75 * math.sqrt(1.0 - 4.0 / (2.0 * math.sqrt(2.0) * d ** 1.5 - d))
    c_d = None
    if d >= 5:
        c_d = math.sqrt(d * d / 4.0 - 1.0) * math.sqrt(1.0 - 8.0 / (d * d - 2.0 * d - 4.0))
    alpha_d = (d / 2.0) ** 0.75
    beta_d = 0.5 * math.sqrt(max(d * d / 4.0 - 1.0, 0.0))
    return BoundConstants(
        d=d,
        b_d=b_d,
        c_d=c_d,
        alpha_d=alpha_d,
        beta_d=beta_d,
        bias_interval_end=b_d if c_d is None else max(b_d, c_d),
        variance_interval_end=max(alpha_d, beta_d),
        first_zero=first_zero(d),
    )


def bias_bounds(d: int, z):
    """Gaussian sandwich for the orthogonal mean.

    Returns ``(exp(-z^2/2), exp(-z^2/(2d)), z <= max(b_d, c_d))``; the
    sandwich is only guaranteed where the flag is true (closed interval), and
    the upper bound additionally up to the second zero.  Accepts arrays.
    """
    consts = bound_constants(d)
    z = np.asarray(z, dtype=float)
    lower = np.exp(-z * z / 2.0)
    upper = np.exp(-z * z / (2.0 * d))
    inside = z <= consts.bias_interval_end
    if z.ndim == 0:
        return float(lower), float(upper), bool(inside)
    return lower, upper, inside


def variance_bounds(d: int, p: int, z):
    """Exponential envelope for the orthogonal variance on the sandwich interval.

    lower = (1 + e^(-2z^2))/(2p) + ((p-1)/p) e^(-z^2)   - e^(-z^2/d)
    upper = (1 + e^(-2z^2/d))/(2p) + ((p-1)/p) e^(-z^2/d) - e^(-z^2)

    The lower bound may be negative for small p and is returned unclamped.
    """
    p = _check_p(p)
    consts = bound_constants(d)
    z = np.asarray(z, dtype=float)
    e1 = np.exp(-z * z)
    ed = np.exp(-z * z / d)
    lower = (1.0 + np.exp(-2.0 * z * z)) / (2.0 * p) + (p - 1.0) / p * e1 - ed
    upper = (1.0 + np.exp(-2.0 * z * z / d)) / (2.0 * p) + (p - 1.0) / p * ed - e1
    inside = z <= consts.bias_interval_end
    if z.ndim == 0:
        return float(lower), float(upper), bool(inside)
    return lower, upper, inside


def variance_dominance_interval(d: int) -> float:
    """End of the interval on which the orthogonal variance is dominated: max(alpha_d, beta_d)."""
    return bound_constants(d).variance_interval_end


def closed_form_summary(estimator: str, d: int, p: int, z: float) -> ClosedFormSummary:
    """Bias and variance of either estimator at one grid point."""
    if estimator == RFF:
        bias, var = rff_bias(z), rff_variance(p, z)
    elif estimator == ORF:
        bias, var = orf_bias(d, z), orf_variance(d, p, z)
    else:
        raise InvalidArgumentError(f"estimator must be 'rff' or 'orf', got {estimator!r}")
    return ClosedFormSummary(estimator=estimator, d=int(d), p=int(p), z=float(z), bias=bias, variance=var)
