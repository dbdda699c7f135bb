"""Exact moments of the rectified multivariate Gaussian X = max(W, 0).

Closed forms for E X_i, E X_i^2 and E X_i X_j in terms of the univariate
and bivariate normal pdf/cdf, assembled into the mean vector and
covariance matrix of X. Degenerate marginals (sigma = 0) and perfectly
correlated pairs (|rho| = 1) are handled by their exact limit formulas
rather than by evaluating the general expression near its breakdown.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DegenerateCorrelationError,
    DomainError,
    NullEventError,
    NumericalConsistencyError,
)

__all__ = [
    "RectifiedMoments",
    "SIGMA_TOL_FACTOR",
    "orthant_prob",
    "rectify",
    "relu_cross_moment",
    "relu_mean",
    "relu_second_moment",
    "sigma_tol",
    "truncated_cross_moment",
]

SIGMA_TOL_FACTOR = 1e-12

# relative clamp window for a diagonal variance entry that cancels to a
# tiny negative value deep in the left tail
_DIAG_CLAMP_FACTOR = 1e-14

_ORTHANT_FLOOR = 1e-300


def sigma_tol(mu):
    """Threshold below which a standard deviation is treated as zero."""
    return SIGMA_TOL_FACTOR * max(1.0, abs(mu))


def _check_marginal(mu, sigma):
    if not (math.isfinite(mu) and math.isfinite(sigma)):
        raise DomainError(f"marginal parameters must be finite, got mu={mu!r} sigma={sigma!r}")
    if sigma < 0.0:
        raise DomainError(f"sigma must be nonnegative, got {sigma!r}")


def relu_mean(mu, sigma):
    """E max(W, 0) for W ~ N(mu, sigma^2)."""
    mu = float(mu)
    sigma = float(sigma)
    _check_marginal(mu, sigma)
    if sigma <= sigma_tol(mu):
        return max(mu, 0.0)
    m = mu / sigma
    val = sigma * kernels.std_pdf(m) + mu * kernels.std_cdf(m)
    # subnormal cancellation below ~1e-317 can round the (mathematically
    # positive) value to a tiny negative
    return val if val > 0.0 else 0.0


def relu_second_moment(mu, sigma):
    """E max(W, 0)^2 for W ~ N(mu, sigma^2)."""
    mu = float(mu)
    sigma = float(sigma)
    _check_marginal(mu, sigma)
    if sigma <= sigma_tol(mu):
        return mu * mu if mu > 0.0 else 0.0
    m = mu / sigma
    val = mu * sigma * kernels.std_pdf(m) + (mu * mu + sigma * sigma) * kernels.std_cdf(m)
    return val if val > 0.0 else 0.0


def _heaviside(t):
    if t > 0.0:
        return 1.0
    if t < 0.0:
        return 0.0
    return 0.5


def _omegas(mu_i, sigma_i, mu_j, sigma_j, rho):
    """Standardized cross terms (omega_ij, omega_ji) for |rho| < 1."""
    root = math.sqrt((1.0 - rho) * (1.0 + rho))
    denom = sigma_i * sigma_j * root
    omega_ij = (mu_i * sigma_j - rho * mu_j * sigma_i) / denom
    omega_ji = (mu_j * sigma_i - rho * mu_i * sigma_j) / denom
    return omega_ij, omega_ji


def orthant_prob(mu_i, sigma_i, mu_j, sigma_j, rho):
    """P(W_i > 0 and W_j > 0) for a bivariate Gaussian pair.

    Equals the bivariate normal cdf of the standardized means; requires
    non-deterministic marginals (sigma = 0 pairs are handled by
    :func:`relu_cross_moment` directly).
    """
    mu_i, sigma_i, mu_j, sigma_j = (float(v) for v in (mu_i, sigma_i, mu_j, sigma_j))
    _check_marginal(mu_i, sigma_i)
    _check_marginal(mu_j, sigma_j)
    if sigma_i <= sigma_tol(mu_i) or sigma_j <= sigma_tol(mu_j):
        raise DomainError("orthant_prob requires sigma_i, sigma_j > 0")
    rho = kernels.as_correlation(rho)
    return kernels.bvn_cdf(mu_i / sigma_i, mu_j / sigma_j, rho)


def truncated_cross_moment(mu_i, sigma_i, mu_j, sigma_j, rho):
    """E(X_i X_j | X_i > 0 and X_j > 0), the conditional cross moment.

    The rescaled truncated-Gaussian expression of Kan & Robotti with the
    truncation point at the origin; multiplied by :func:`orthant_prob`
    it recovers :func:`relu_cross_moment` (law of total expectation).
    """
    mu_i, sigma_i, mu_j, sigma_j = (float(v) for v in (mu_i, sigma_i, mu_j, sigma_j))
    _check_marginal(mu_i, sigma_i)
    _check_marginal(mu_j, sigma_j)
    if sigma_i <= sigma_tol(mu_i) or sigma_j <= sigma_tol(mu_j):
        raise DomainError("truncated_cross_moment requires sigma_i, sigma_j > 0")
    rho = kernels.as_correlation(rho)
    if abs(rho) > 1.0 - kernels.DEGENERATE_RHO_TOL:
        raise DegenerateCorrelationError("truncated_cross_moment requires |rho| < 1")
    prob = kernels.bvn_cdf(mu_i / sigma_i, mu_j / sigma_j, rho)
    if prob < _ORTHANT_FLOOR:
        raise NullEventError(
            f"orthant probability {prob!r} too small to condition on"
        )
    m_i = mu_i / sigma_i
    m_j = mu_j / sigma_j
    omega_ij, omega_ji = _omegas(mu_i, sigma_i, mu_j, sigma_j, rho)
    linear = (
        mu_j * sigma_i * kernels.std_pdf(m_i) * kernels.std_cdf(omega_ji)
        + mu_i * sigma_j * kernels.std_pdf(m_j) * kernels.std_cdf(omega_ij)
    )
    density = sigma_i * sigma_j * (1.0 - rho) * (1.0 + rho) * kernels.bvn_pdf(m_i, m_j, rho)
    return mu_i * mu_j + rho * sigma_i * sigma_j + (linear + density) / prob


def relu_cross_moment(mu_i, sigma_i, mu_j, sigma_j, rho):
    """E[max(W_i, 0) * max(W_j, 0)] for a bivariate Gaussian (W_i, W_j).

    General expression: four kernel terms combining the marginal pdf/cdf,
    the standardized cross terms and the bivariate pdf/cdf. Corner cases:

    * deterministic marginal(s): the constant factors out (or the whole
      product vanishes when the constant is nonpositive);
    * rho = 0: cross moment factorizes into the product of the means;
    * |rho| = 1: the pair is affinely dependent and the bivariate terms
      collapse to Heaviside weights (H(0) = 1/2) and univariate cdfs.
    """
    mu_i, sigma_i, mu_j, sigma_j = (float(v) for v in (mu_i, sigma_i, mu_j, sigma_j))
    _check_marginal(mu_i, sigma_i)
    _check_marginal(mu_j, sigma_j)
    rho = kernels.as_correlation(rho)

    det_i = sigma_i <= sigma_tol(mu_i)
    det_j = sigma_j <= sigma_tol(mu_j)
    if det_i and det_j:
        return mu_i * mu_j if (mu_i > 0.0 and mu_j > 0.0) else 0.0
    if det_i:
        return mu_i * relu_mean(mu_j, sigma_j) if mu_i > 0.0 else 0.0
    if det_j:
        return mu_j * relu_mean(mu_i, sigma_i) if mu_j > 0.0 else 0.0

    m_i = mu_i / sigma_i
    m_j = mu_j / sigma_j

    if abs(rho) > 1.0 - kernels.DEGENERATE_RHO_TOL:
        if rho > 0.0:
            h = _heaviside(mu_i * sigma_j - mu_j * sigma_i)
            return (
                h * mu_i * sigma_j * kernels.std_pdf(m_j)
                + (1.0 - h) * mu_j * sigma_i * kernels.std_pdf(m_i)
                + (mu_i * mu_j + sigma_i * sigma_j) * kernels.std_cdf(min(m_i, m_j))
            )
        h = _heaviside(mu_i * sigma_j + mu_j * sigma_i)
        return (
            h * (mu_i * sigma_j * kernels.std_pdf(m_j) + mu_j * sigma_i * kernels.std_pdf(m_i))
            + (mu_i * mu_j - sigma_i * sigma_j)
            * max(kernels.std_cdf(m_i) + kernels.std_cdf(m_j) - 1.0, 0.0)
        )

    if rho == 0.0:
        # exact factorization under independence; also avoids the heavy
        # cancellation the four-term sum suffers when both means are deep
        # in the left tail
        return relu_mean(mu_i, sigma_i) * relu_mean(mu_j, sigma_j)

    omega_ij, omega_ji = _omegas(mu_i, sigma_i, mu_j, sigma_j, rho)
    return math.fsum(
        (
            mu_j * sigma_i * kernels.std_pdf(m_i) * kernels.std_cdf(omega_ji),
            mu_i * sigma_j * kernels.std_pdf(m_j) * kernels.std_cdf(omega_ij),
            sigma_i * sigma_j * (1.0 - rho) * (1.0 + rho) * kernels.bvn_pdf(m_i, m_j, rho),
            (mu_i * mu_j + rho * sigma_i * sigma_j) * kernels.bvn_cdf(m_i, m_j, rho),
        )
    )


@dataclass(frozen=True)
class RectifiedMoments:
    """Mean vector and covariance matrix of X = max(W, 0)."""

    mean: np.ndarray
    cov: np.ndarray


def rectify(dist):
    """Moments of max(W, 0) for W ~ N(dist.mean, dist.cov).

    Each unordered pair is evaluated once and mirrored, so the covariance
    is symmetric by construction. Deterministic coordinates produce an
    exactly zero covariance row/column.
    """
    mu = np.asarray(dist.mean, dtype=np.float64)
    cov = np.asarray(dist.cov, dtype=np.float64)
    p = mu.shape[0]

    # diagonal entries may round to tiny negatives within the PSD slack
    var = np.maximum(np.diagonal(cov), 0.0)
    sigma = np.sqrt(var)

    gamma = np.empty(p)
    gamma_cov = np.zeros((p, p))
    for i in range(p):
        g = relu_mean(mu[i], sigma[i])
        gamma[i] = g
        second = relu_second_moment(mu[i], sigma[i])
        d = second - g * g
        if d < 0.0:
            scale = mu[i] * mu[i] + var[i]
            if d < -_DIAG_CLAMP_FACTOR * scale:
                raise NumericalConsistencyError(
                    f"rectified variance {d!r} at index {i} is negative beyond rounding"
                )
            d = 0.0
        gamma_cov[i, i] = d

    for i in range(p):
        for j in range(i + 1, p):
            det_i = sigma[i] <= sigma_tol(mu[i])
            det_j = sigma[j] <= sigma_tol(mu[j])
            if det_i or det_j:
                cross = relu_cross_moment(mu[i], sigma[i], mu[j], sigma[j], 0.0)
            else:
                rho = kernels.as_correlation(cov[i, j] / (sigma[i] * sigma[j]))
                cross = relu_cross_moment(mu[i], sigma[i], mu[j], sigma[j], rho)
            off = cross - gamma[i] * gamma[j]
            gamma_cov[i, j] = off
            gamma_cov[j, i] = off

    return RectifiedMoments(mean=gamma, cov=gamma_cov)
