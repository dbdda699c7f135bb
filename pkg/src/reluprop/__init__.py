"""Exact propagation of Gaussian input uncertainty through a trained
single-hidden-layer ReLU network, plus the Monte Carlo harness that
validates the closed forms.

The output mean and variance are exact (no series expansion, no
linearization): the hidden pre-activation stays Gaussian under the first
affine map, the rectifier's first and second moments have closed forms in
the normal pdf/cdf, and the cross moments reduce to the bivariate normal
pdf/cdf. The second affine map then contracts the rectified moments into
the output mean and variance.
"""

from .errors import (
    ConfigError,
    DegenerateCorrelationError,
    DomainError,
    NullEventError,
    NumericalConsistencyError,
    RelupropError,
    SchemaError,
    ShapeError,
)
from .kernels import BACKEND, bvn_cdf, bvn_pdf, erf, erfc, ndtri, std_cdf, std_pdf
from .mc import ConvergenceStudy, McConfig, McReport, convergence_study, mc_output_moments, sample_gaussian
from .model_io import (
    DistFile,
    ModelFile,
    gen_dist,
    gen_model,
    load_case,
    load_dist,
    load_model,
    save_case,
    save_dist_file,
    save_model_file,
)
from .propagate import (
    GaussianDist,
    MlpModel,
    OutputMoments,
    forward,
    forward_batch,
    hidden_preactivation,
    output_moments,
)
from .rectified import (
    RectifiedMoments,
    orthant_prob,
    rectify,
    relu_cross_moment,
    relu_mean,
    relu_second_moment,
    truncated_cross_moment,
)
from .selftest import run_selftest

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "ConvergenceStudy",
    "DegenerateCorrelationError",
    "DistFile",
    "DomainError",
    "GaussianDist",
    "McConfig",
    "McReport",
    "MlpModel",
    "ModelFile",
    "NullEventError",
    "NumericalConsistencyError",
    "OutputMoments",
    "RectifiedMoments",
    "RelupropError",
    "SchemaError",
    "ShapeError",
    "bvn_cdf",
    "bvn_pdf",
    "convergence_study",
    "erf",
    "erfc",
    "forward",
    "forward_batch",
    "gen_dist",
    "gen_model",
    "hidden_preactivation",
    "load_case",
    "load_dist",
    "load_model",
    "mc_output_moments",
    "ndtri",
    "orthant_prob",
    "output_moments",
    "rectify",
    "relu_cross_moment",
    "relu_mean",
    "relu_second_moment",
    "run_selftest",
    "sample_gaussian",
    "save_case",
    "save_dist_file",
    "save_model_file",
    "std_cdf",
    "std_pdf",
    "truncated_cross_moment",
]
