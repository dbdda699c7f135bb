"""End-to-end moment propagation through the affine -> ReLU -> affine net.

Gaussian input N(lam, Lam) maps to a Gaussian hidden pre-activation,
whose rectified moments contract against the output weights to give the
exact output mean and variance.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._linalg import neumaier_sum, psd_factor
from .errors import DomainError, NumericalConsistencyError, ShapeError
from .rectified import rectify

__all__ = [
    "GaussianDist",
    "MlpModel",
    "OutputMoments",
    "forward",
    "forward_batch",
    "hidden_preactivation",
    "output_moments",
]

logger = logging.getLogger(__name__)

_SYMMETRY_RTOL = 1e-12
_VAR_CLAMP_FACTOR = 1e-12


@dataclass(frozen=True)
class GaussianDist:
    """Multivariate Gaussian with mean vector and PSD covariance matrix.

    Validated on construction: shapes, finiteness, symmetry within 1e-12
    relative and positive semidefiniteness within -1e-8 * trace. The
    pivoted-Cholesky factor is cached for the sampler; zero columns mark
    null directions of a rank-deficient covariance.
    """

    mean: np.ndarray
    cov: np.ndarray
    _factor: np.ndarray = field(init=False, repr=False, compare=False)
    _rank: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        cov = np.asarray(self.cov, dtype=np.float64)
        if mean.ndim != 1:
            raise ShapeError(f"mean must be a vector, got shape {mean.shape}")
        m = mean.shape[0]
        if m < 1:
            raise ShapeError("mean must have at least one entry")
        if cov.shape != (m, m):
            raise ShapeError(f"cov shape {cov.shape} does not match mean length {m}")
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise DomainError("distribution parameters must be finite")
        scale = float(np.max(np.abs(cov))) if cov.size else 0.0
        asym = float(np.max(np.abs(cov - cov.T))) if cov.size else 0.0
        if asym > _SYMMETRY_RTOL * max(scale, 1e-300):
            raise DomainError(
                f"covariance is asymmetric: max |cov - cov.T| = {asym!r}"
            )
        factor, rank = psd_factor(cov)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "_factor", factor)
        object.__setattr__(self, "_rank", rank)

    @property
    def dim(self):
        return self.mean.shape[0]


@dataclass(frozen=True)
class MlpModel:
    """Weights of the affine -> ReLU -> affine network.

    ``w_in`` is (m, p): column k holds the input weights of hidden unit k,
    so the hidden pre-activation for input v is ``w_in.T @ v + b_in``.
    The scalar output is ``w_out @ relu(hidden) + b_out``.
    """

    w_in: np.ndarray
    b_in: np.ndarray
    w_out: np.ndarray
    b_out: float

    def __post_init__(self):
        w_in = np.asarray(self.w_in, dtype=np.float64)
        b_in = np.atleast_1d(np.asarray(self.b_in, dtype=np.float64))
        w_out = np.atleast_1d(np.asarray(self.w_out, dtype=np.float64))
        b_out = float(self.b_out)
        if w_in.ndim != 2:
            raise ShapeError(f"w_in must be a matrix, got shape {w_in.shape}")
        m, p = w_in.shape
        if m < 1 or p < 1:
            raise ShapeError(f"w_in must be at least 1x1, got {w_in.shape}")
        if b_in.shape != (p,):
            raise ShapeError(f"b_in shape {b_in.shape} does not match p={p}")
        if w_out.shape != (p,):
            raise ShapeError(f"w_out shape {w_out.shape} does not match p={p}")
        for name, arr in (("w_in", w_in), ("b_in", b_in), ("w_out", w_out)):
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} must be finite")
        if not math.isfinite(b_out):
            raise DomainError("b_out must be finite")
        object.__setattr__(self, "w_in", w_in)
        object.__setattr__(self, "b_in", b_in)
        object.__setattr__(self, "w_out", w_out)
        object.__setattr__(self, "b_out", b_out)

    @property
    def n_inputs(self):
        return self.w_in.shape[0]

    @property
    def n_hidden(self):
        return self.w_in.shape[1]


@dataclass(frozen=True)
class OutputMoments:
    """Exact output mean and variance."""

    mean: float
    variance: float


def _hidden_mean(model, v):
    # fixed accumulation order over input coordinates; bitwise-identical to
    # the batched path so deterministic inputs propagate exactly
    mu = model.b_in.copy()
    for r in range(model.n_inputs):
        mu += v[r] * model.w_in[r]
    return mu


def _readout(model, x):
    y = model.b_out
    for k in range(model.n_hidden):
        y = y + model.w_out[k] * x[k]
    return y


def forward_batch(model, x):
    """Deterministic network evaluation for a batch of input rows."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_inputs:
        raise ShapeError(
            f"batch shape {x.shape} does not match model input dimension {model.n_inputs}"
        )
    n = x.shape[0]
    hidden = np.broadcast_to(model.b_in, (n, model.n_hidden)).copy()
    for r in range(model.n_inputs):
        hidden += x[:, r, None] * model.w_in[r]
    np.maximum(hidden, 0.0, out=hidden)
    y = np.full(n, model.b_out)
    for k in range(model.n_hidden):
        y += model.w_out[k] * hidden[:, k]
    return y


def forward(v, model):
    """Point evaluation of the network at a single input vector."""
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    if v.shape != (model.n_inputs,):
        raise ShapeError(
            f"input shape {v.shape} does not match model input dimension {model.n_inputs}"
        )
    return float(forward_batch(model, v[None, :])[0])


def hidden_preactivation(dist, model):
    """Gaussian law of the hidden pre-activation under a Gaussian input."""
    if dist.dim != model.n_inputs:
        raise ShapeError(
            f"distribution dimension {dist.dim} does not match model input "
            f"dimension {model.n_inputs}"
        )
    mu = _hidden_mean(model, dist.mean)
    s = model.w_in.T @ dist.cov @ model.w_in
    s = 0.5 * (s + s.T)
    return GaussianDist(mean=mu, cov=s)


def output_moments(dist, model):
    """Exact output mean and variance for a Gaussian input law."""
    hidden = hidden_preactivation(dist, model)
    rect = rectify(hidden)
    mean = _readout(model, rect.mean)

    beta = model.w_out
    p = model.n_hidden
    variance = neumaier_sum(
        beta[i] * beta[j] * rect.cov[i, j] for i in range(p) for j in range(p)
    )
    if variance < 0.0:
        slack = _VAR_CLAMP_FACTOR * float(beta @ beta) * max(float(np.trace(rect.cov)), 0.0)
        if variance < -slack:
            raise NumericalConsistencyError(
                f"output variance {variance!r} is negative beyond rounding tolerance"
            )
        logger.info("clamping tiny negative output variance %r to 0", variance)
        variance = 0.0
    return OutputMoments(mean=float(mean), variance=float(variance))
