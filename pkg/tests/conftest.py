"""Shared fixtures and independent quadrature oracles.

The oracles deliberately avoid the package's own kernels: they integrate
plain-math densities with QUADPACK so that agreement is meaningful.
"""

import math
import warnings

import numpy as np
import pytest
from scipy import integrate

import reluprop as rp

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _normal_pdf(w, mu, sigma):
    t = (w - mu) / sigma
    return math.exp(-0.5 * t * t) / (sigma * _SQRT_2PI)


def quad_relu_mean(mu, sigma):
    """1-D adaptive quadrature of max(w, 0) * N(w; mu, sigma^2)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            lambda w: w * _normal_pdf(w, mu, sigma),
            0.0,
            max(mu, 0.0) + 40.0 * sigma,
            epsabs=0.0,
            epsrel=1e-13,
            limit=500,
        )
    return val


def quad_relu_second(mu, sigma):
    """1-D adaptive quadrature of max(w, 0)^2 * N(w; mu, sigma^2)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            lambda w: w * w * _normal_pdf(w, mu, sigma),
            0.0,
            max(mu, 0.0) + 40.0 * sigma,
            epsabs=0.0,
            epsrel=1e-13,
            limit=500,
        )
    return val


def _bvn_density(u, v, rho):
    omr2 = (1.0 - rho) * (1.0 + rho)
    q = (u * u - 2.0 * rho * u * v + v * v) / omr2
    return math.exp(-0.5 * q) / (2.0 * math.pi * math.sqrt(omr2))


def dblquad_phi2(x, y, rho):
    """2-D adaptive quadrature of the standard bivariate normal density."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.dblquad(
            lambda v, u: _bvn_density(u, v, rho),
            -40.0,
            x,
            -40.0,
            y,
            epsabs=1e-14,
            epsrel=1e-12,
        )
    return val


def dblquad_cross(mu_i, sigma_i, mu_j, sigma_j, rho):
    """2-D adaptive quadrature of max(w1, 0) max(w2, 0) against the
    bivariate normal density, in standardized coordinates."""
    m_i = mu_i / sigma_i
    m_j = mu_j / sigma_j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.dblquad(
            lambda v, u: (mu_i + sigma_i * u) * (mu_j + sigma_j * v) * _bvn_density(u, v, rho),
            max(-m_i, -39.0),
            39.0,
            max(-m_j, -39.0),
            39.0,
            epsabs=1e-13,
            epsrel=1e-11,
        )
    return val


def semiquad_cross(mu_i, sigma_i, mu_j, sigma_j, rho):
    """Cross-moment oracle with the inner integral done in closed form.

    Reduces the 2-D integral to a 1-D adaptive quadrature using the
    conditional law of the second coordinate; stays accurate on the
    near-degenerate ridge (|rho| -> 1) where plain 2-D quadrature loses
    several digits. Uses scipy's normal cdf, independent of the package
    kernels.
    """
    from scipy.special import ndtr

    root = math.sqrt((1.0 - rho) * (1.0 + rho))
    lo_u = -mu_i / sigma_i

    def outer(u):
        a = (-mu_j / sigma_j - rho * u) / root
        inner = (mu_j + sigma_j * rho * u) * ndtr(-a) + sigma_j * root * math.exp(
            -0.5 * a * a
        ) / _SQRT_2PI
        return (mu_i + sigma_i * u) * math.exp(-0.5 * u * u) / _SQRT_2PI * inner

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            outer, max(lo_u, -39.0), max(lo_u, -39.0) + 60.0, epsabs=1e-300, epsrel=1e-13, limit=500
        )
    return val


@pytest.fixture(scope="session")
def scalar_model():
    """Identity 1x1 network: output is exactly the rectified input."""
    return rp.MlpModel(w_in=[[1.0]], b_in=[0.0], w_out=[1.0], b_out=0.0)


@pytest.fixture(scope="session")
def scalar_dist():
    return rp.GaussianDist(mean=[0.0], cov=[[1.0]])


@pytest.fixture(scope="session")
def fixture_model():
    """The fixed m=2, p=12 model used across the acceptance suite."""
    return rp.gen_model(2, 12, seed=42).to_model()


@pytest.fixture(scope="session")
def fixture_cases(fixture_model):
    """40 random Gaussian input distributions paired with the fixed model."""
    return [
        (rp.gen_dist(2, seed=1000 + i).to_dist(), fixture_model) for i in range(40)
    ]
