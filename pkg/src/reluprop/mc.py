"""Seeded Monte Carlo estimator used to validate the analytical moments.

Sampling is chunked; each chunk draws from its own Philox substream keyed
by (seed, stream) with the chunk index in the counter block, so the
sample set is a pure function of (seed, chunk_size) no matter how many
worker threads evaluate chunks. Chunk statistics are merged in fixed
chunk order, which makes every report byte-reproducible.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .propagate import forward_batch, output_moments

__all__ = [
    "ConvergenceStudy",
    "McConfig",
    "McReport",
    "convergence_study",
    "mc_output_moments",
    "sample_gaussian",
]

_U64 = 2**64


@dataclass(frozen=True)
class McConfig:
    n_samples: int
    seed: int
    chunk_size: int = 65536
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 2:
            raise ConfigError(f"n_samples must be >= 2, got {self.n_samples}")
        if not 0 <= self.seed < _U64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.chunk_size < 1:
            raise ConfigError(f"chunk_size must be positive, got {self.chunk_size}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")


@dataclass(frozen=True)
class McReport:
    """Empirical output moments with their standard errors."""

    emp_mean: float
    emp_variance: float
    se_mean: float
    se_variance: float
    n: int
    seed: int


@dataclass(frozen=True)
class ConvergenceStudy:
    """RMSE-vs-n rows and the fitted log-log slopes.

    ``rows`` holds (n, rmse_mean, rmse_variance) sorted ascending in n.
    Slopes/intercepts are NaN when some RMSE is exactly zero (slope
    undefined on a log scale).
    """

    rows: tuple
    slope_mean: float
    intercept_mean: float
    slope_variance: float
    intercept_variance: float


def _bitgen(seed, stream, chunk_index):
    key = np.array([seed, stream], dtype=np.uint64)
    counter = np.array([0, chunk_index, 0, 0], dtype=np.uint64)
    return np.random.Philox(counter=counter, key=key)


def _chunk_plan(n, chunk_size):
    sizes = []
    done = 0
    while done < n:
        size = min(chunk_size, n - done)
        sizes.append(size)
        done += size
    return sizes


def _standard_normal_chunk(seed, stream, chunk_index, size, dim):
    raw = _bitgen(seed, stream, chunk_index).random_raw(size * dim)
    # uniforms strictly inside (0, 1): ((raw >> 11) + 0.5) * 2^-53
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 1.1102230246251565e-16
    return kernels.ndtri_array(u).reshape(size, dim)


def _sample_chunk(dist, seed, stream, chunk_index, size):
    z = _standard_normal_chunk(seed, stream, chunk_index, size, dist.dim)
    return dist.mean + z @ dist._factor.T


def sample_gaussian(dist, cfg, stream=0):
    """Yield chunks of multivariate Gaussian draws as (size, m) arrays."""
    for idx, size in enumerate(_chunk_plan(cfg.n_samples, cfg.chunk_size)):
        yield _sample_chunk(dist, cfg.seed, stream, idx, size)


def _chunk_stats(y):
    # shifted two-pass moments; constant samples give exact zeros
    n = y.shape[0]
    y0 = y[0]
    mean = y0 + np.mean(y - y0)
    d = y - mean
    d2 = d * d
    m2 = float(np.sum(d2))
    m3 = float(np.sum(d2 * d))
    m4 = float(np.sum(d2 * d2))
    return (n, float(mean), m2, m3, m4)


def _combine_stats(a, b):
    n1, mean1, m2a, m3a, m4a = a
    n2, mean2, m2b, m3b, m4b = b
    n = n1 + n2
    delta = mean2 - mean1
    mean = mean1 + delta * n2 / n
    m2 = m2a + m2b + delta * delta * (n1 * n2 / n)
    m3 = (
        m3a
        + m3b
        + delta**3 * (n1 * n2 * (n1 - n2) / (n * n))
        + 3.0 * delta * (n1 * m2b - n2 * m2a) / n
    )
    m4 = (
        m4a
        + m4b
        + delta**4 * (n1 * n2 * (n1 * n1 - n1 * n2 + n2 * n2) / (n**3))
        + 6.0 * delta * delta * (n1 * n1 * m2b + n2 * n2 * m2a) / (n * n)
        + 4.0 * delta * (n1 * m3b - n2 * m3a) / n
    )
    return (n, mean, m2, m3, m4)


def _mc_stats(dist, model, cfg, stream):
    sizes = _chunk_plan(cfg.n_samples, cfg.chunk_size)

    def run_chunk(args):
        idx, size = args
        x = _sample_chunk(dist, cfg.seed, stream, idx, size)
        return _chunk_stats(forward_batch(model, x))

    jobs = list(enumerate(sizes))
    if cfg.workers == 1 or len(jobs) == 1:
        parts = [run_chunk(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(run_chunk, jobs))

    total = parts[0]
    for part in parts[1:]:
        total = _combine_stats(total, part)
    return total


def mc_output_moments(dist, model, cfg, stream=0):
    """Empirical output mean/variance from n seeded forward evaluations."""
    n, mean, m2, _, m4 = _mc_stats(dist, model, cfg, stream)
    emp_variance = m2 / (n - 1)
    se_mean = math.sqrt(emp_variance / n)
    central4 = m4 / n
    var_of_var = (central4 - (n - 3) / (n - 1) * emp_variance * emp_variance) / n
    se_variance = math.sqrt(max(var_of_var, 0.0))
    return McReport(
        emp_mean=mean,
        emp_variance=emp_variance,
        se_mean=se_mean,
        se_variance=se_variance,
        n=n,
        seed=cfg.seed,
    )


def convergence_study(cases, n_grid, cfg):
    """RMSE between MC and analytical moments across cases, per grid n.

    Every (case, n) pair draws from its own substream, so enlarging the
    grid or the case list never perturbs other entries. Slopes come from
    ordinary least squares on (log n, log RMSE).
    """
    if len(cases) < 1:
        raise ConfigError("need at least one (dist, model) case")
    grid = [int(n) for n in n_grid]
    if len(grid) < 2:
        raise ConfigError("need at least two grid points")
    if len(set(grid)) != len(grid):
        raise ConfigError("grid points must be distinct")
    if any(n < 2 for n in grid):
        raise ConfigError("grid points must be >= 2")
    grid = sorted(grid)

    analytic = [output_moments(dist, model) for dist, model in cases]
    rows = []
    for g_idx, n in enumerate(grid):
        sq_mean = 0.0
        sq_var = 0.0
        for c_idx, (dist, model) in enumerate(cases):
            stream = c_idx * len(grid) + g_idx + 1
            run_cfg = McConfig(
                n_samples=n, seed=cfg.seed, chunk_size=cfg.chunk_size, workers=cfg.workers
            )
            rep = mc_output_moments(dist, model, run_cfg, stream=stream)
            sq_mean += (rep.emp_mean - analytic[c_idx].mean) ** 2
            sq_var += (rep.emp_variance - analytic[c_idx].variance) ** 2
        rows.append((n, math.sqrt(sq_mean / len(cases)), math.sqrt(sq_var / len(cases))))

    def fit(idx):
        vals = [row[idx] for row in rows]
        if any(v <= 0.0 for v in vals):
            return math.nan, math.nan
        slope, intercept = np.polyfit(np.log([row[0] for row in rows]), np.log(vals), 1)
        return float(slope), float(intercept)

    slope_mean, intercept_mean = fit(1)
    slope_variance, intercept_variance = fit(2)
    return ConvergenceStudy(
        rows=tuple(rows),
        slope_mean=slope_mean,
        intercept_mean=intercept_mean,
        slope_variance=slope_variance,
        intercept_variance=intercept_variance,
    )
