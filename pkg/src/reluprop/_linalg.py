"""Covariance factorization and PSD validation helpers."""

import numpy as np
from scipy.linalg.lapack import dpstrf

from .errors import DomainError

# eigenvalues down to -PSD_TOL_FACTOR * trace are treated as rounding noise
PSD_TOL_FACTOR = 1e-8


def psd_factor(cov):
    """Factor a PSD matrix as ``cov ~= L @ L.T`` via pivoted Cholesky.

    Rank-deficient input yields zero columns for the null directions. If
    the pivoted factorization stops early, the minimum eigenvalue decides
    between harmless rank deficiency and a genuinely indefinite matrix.

    Returns ``(L, rank)``; raises :class:`DomainError` for matrices that
    are indefinite beyond the relative tolerance.
    """
    cov = np.asarray(cov, dtype=np.float64)
    n = cov.shape[0]
    if n == 0:
        return np.zeros((0, 0)), 0
    c, piv, rank, info = dpstrf(cov, lower=1)
    if info < 0:
        raise DomainError(f"pivoted Cholesky rejected argument {-info}")
    if info > 0:
        trace = float(np.trace(cov))
        min_eig = float(np.linalg.eigvalsh(cov).min())
        if min_eig < -PSD_TOL_FACTOR * max(trace, 0.0):
            raise DomainError(
                f"covariance is not positive semidefinite: min eigenvalue {min_eig!r}"
            )
    factor = np.tril(c)
    factor[:, rank:] = 0.0
    out = np.zeros_like(factor)
    out[piv - 1, :] = factor
    return out, int(rank)


def check_psd(cov):
    """Raise :class:`DomainError` unless ``cov`` is PSD within tolerance."""
    psd_factor(cov)


def neumaier_sum(terms):
    """Compensated sum with a fixed left-to-right order."""
    total = 0.0
    comp = 0.0
    for t in terms:
        s = total + t
        if abs(total) >= abs(t):
            comp += (total - s) + t
        else:
            comp += (t - s) + total
        total = s
    return total + comp
