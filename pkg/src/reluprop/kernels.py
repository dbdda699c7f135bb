"""Scalar Gaussian primitives: univariate pdf/cdf and bivariate pdf/cdf.

Thin validating layer over the selected backend (compiled or pure, see
:mod:`reluprop._backend`). All functions are pure and thread-safe.

Conventions:

* NaN arguments raise :class:`DomainError`; explicit ``±inf`` cdf bounds
  are accepted and saturate exactly to 0/1.
* Correlations are clamped into [-1, 1] when within 1e-12 of the
  boundary and rejected beyond that.
* ``bvn_cdf`` switches to the exact degenerate limits for
  ``|rho| > 1 - 1e-12``: the single-integral representation loses
  accuracy as ``1 - rho**2`` underflows.
"""

import math

from ._backend import BACKEND, impl
from .errors import DegenerateCorrelationError, DomainError

__all__ = [
    "BACKEND",
    "CORRELATION_SLACK",
    "DEGENERATE_RHO_TOL",
    "as_correlation",
    "bvn_cdf",
    "bvn_pdf",
    "erf",
    "erfc",
    "ndtri",
    "ndtri_array",
    "std_cdf",
    "std_pdf",
]

CORRELATION_SLACK = 1e-12  # overshoot beyond +-1 tolerated (clamped)
DEGENERATE_RHO_TOL = 1e-12  # |rho| > 1 - this routes to limit formulas

# selftest hook: absolute perturbation added to every bvn_cdf result so the
# embedded invariant suite can prove it detects a broken kernel
_bvn_cdf_perturbation = 0.0


def _require_finite(name, x):
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return float(x)


def as_correlation(rho):
    """Validate a correlation: clamp tiny overshoot, reject real ones."""
    rho = float(rho)
    if math.isnan(rho):
        raise DomainError("correlation is NaN")
    if rho > 1.0:
        if rho - 1.0 > CORRELATION_SLACK:
            raise DomainError(f"correlation {rho!r} exceeds 1 beyond tolerance")
        return 1.0
    if rho < -1.0:
        if -1.0 - rho > CORRELATION_SLACK:
            raise DomainError(f"correlation {rho!r} is below -1 beyond tolerance")
        return -1.0
    return rho


def erf(x):
    return impl.erf(_require_finite("x", x))


def erfc(x):
    return impl.erfc(_require_finite("x", x))


def std_pdf(x):
    """Standard normal density."""
    return impl.std_pdf(_require_finite("x", x))


def std_cdf(x):
    """Standard normal cdf; accepts ±inf and saturates exactly."""
    x = float(x)
    if math.isnan(x):
        raise DomainError("x is NaN")
    if x == math.inf:
        return 1.0
    if x == -math.inf:
        return 0.0
    return impl.std_cdf(x)


def ndtri(p):
    """Inverse standard normal cdf for p in (0, 1)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must be in (0, 1), got {p!r}")
    return impl.ndtri(p)


def ndtri_array(p):
    """Vectorised :func:`ndtri` over an array with entries in (0, 1)."""
    return impl.ndtri_array(p)


def bvn_pdf(x, y, rho):
    """Standard bivariate normal density; requires |rho| < 1."""
    x = _require_finite("x", x)
    y = _require_finite("y", y)
    rho = as_correlation(rho)
    if abs(rho) >= 1.0:
        raise DegenerateCorrelationError(
            "bvn_pdf undefined at |rho| = 1; use the degenerate limit formulas"
        )
    return impl.bvn_pdf(x, y, rho)


def bvn_cdf(x, y, rho):
    """P(U <= x, V <= y) for a standard bivariate normal with correlation rho.

    Accurate to ~1e-12 absolute for |rho| <= 1 - 1e-12; beyond that the
    exact limits Phi(min(x, y)) (rho -> 1) and
    max(Phi(x) + Phi(y) - 1, 0) (rho -> -1) are returned.
    """
    x = float(x)
    y = float(y)
    if math.isnan(x) or math.isnan(y):
        raise DomainError("bvn_cdf bounds must not be NaN")
    rho = as_correlation(rho)
    if y < x:
        # canonical argument order: the cdf is symmetric, and evaluating
        # one fixed order makes the symmetry bitwise
        x, y = y, x
    if x == -math.inf or y == -math.inf:
        return 0.0
    if x == math.inf and y == math.inf:
        return 1.0
    if x == math.inf:
        return std_cdf(y) + _bvn_cdf_perturbation
    if y == math.inf:
        return std_cdf(x) + _bvn_cdf_perturbation
    if abs(rho) > 1.0 - DEGENERATE_RHO_TOL:
        if rho > 0.0:
            return std_cdf(min(x, y)) + _bvn_cdf_perturbation
        return max(std_cdf(x) + std_cdf(y) - 1.0, 0.0) + _bvn_cdf_perturbation
    return impl.bvn_cdf(x, y, rho) + _bvn_cdf_perturbation


def _set_bvn_cdf_perturbation(eps):
    """Selftest-only hook; see cmd_selftest's negative control."""
    global _bvn_cdf_perturbation
    _bvn_cdf_perturbation = float(eps)
