"""Monte Carlo sampler and convergence harness."""

import math

import numpy as np
import pytest

import reluprop as rp
from reluprop.errors import ConfigError


def test_config_validation():
    with pytest.raises(ConfigError):
        rp.McConfig(n_samples=1, seed=0)
    with pytest.raises(ConfigError):
        rp.McConfig(n_samples=10, seed=-1)
    with pytest.raises(ConfigError):
        rp.McConfig(n_samples=10, seed=2**64)
    with pytest.raises(ConfigError):
        rp.McConfig(n_samples=10, seed=0, chunk_size=0)
    with pytest.raises(ConfigError):
        rp.McConfig(n_samples=10, seed=0, workers=0)


def test_sample_gaussian_deterministic_input():
    dist = rp.GaussianDist(mean=[2.0, -1.0], cov=np.zeros((2, 2)))
    cfg = rp.McConfig(n_samples=1000, seed=7, chunk_size=128)
    for chunk in rp.sample_gaussian(dist, cfg):
        assert np.all(chunk == np.array([2.0, -1.0]))


def test_sample_gaussian_identity_cov_clt():
    dist = rp.GaussianDist(mean=[1.0, -2.0], cov=np.eye(2))
    n = 10**6
    cfg = rp.McConfig(n_samples=n, seed=12)
    total = np.zeros(2)
    for chunk in rp.sample_gaussian(dist, cfg):
        total += chunk.sum(axis=0)
    assert np.all(np.abs(total / n - dist.mean) <= 4.0 / math.sqrt(n))


def test_sample_gaussian_repeatable():
    dist = rp.gen_dist(3, seed=5).to_dist()
    cfg = rp.McConfig(n_samples=5000, seed=99, chunk_size=512)
    a = np.concatenate(list(rp.sample_gaussian(dist, cfg)))
    b = np.concatenate(list(rp.sample_gaussian(dist, cfg)))
    assert np.array_equal(a, b)


def test_sample_gaussian_rank_deficient_cov():
    # perfectly correlated pair: null direction zeroed, law preserved
    dist = rp.GaussianDist(mean=[0.0, 0.0], cov=[[1.0, 1.0], [1.0, 1.0]])
    cfg = rp.McConfig(n_samples=20000, seed=3)
    for chunk in rp.sample_gaussian(dist, cfg):
        np.testing.assert_allclose(chunk[:, 0], chunk[:, 1], rtol=0, atol=1e-12)


def test_mc_report_beta_zero_exact(scalar_dist):
    model = rp.MlpModel(w_in=[[1.0]], b_in=[0.0], w_out=[0.0], b_out=1.25)
    rep = rp.mc_output_moments(scalar_dist, model, rp.McConfig(n_samples=5000, seed=1))
    assert rep.emp_mean == 1.25
    assert rep.emp_variance == 0.0
    assert rep.se_mean == 0.0 and rep.se_variance == 0.0


def test_mc_scalar_case_within_4_se(scalar_model, scalar_dist):
    rep = rp.mc_output_moments(scalar_dist, scalar_model, rp.McConfig(n_samples=10**6, seed=1))
    assert abs(rep.emp_mean - 0.3989422804014327) <= 4.0 * rep.se_mean
    assert rep.n == 10**6 and rep.seed == 1
    assert math.isclose(rep.se_mean, math.sqrt(rep.emp_variance / rep.n), rel_tol=1e-15)


def test_mc_reports_identical_across_runs_and_workers(fixture_model):
    dist = rp.gen_dist(2, seed=77).to_dist()
    reports = [
        rp.mc_output_moments(
            dist, fixture_model, rp.McConfig(n_samples=150000, seed=5, chunk_size=8192, workers=w)
        )
        for w in (1, 1, 8)
    ]
    assert reports[0] == reports[1] == reports[2]


def test_mc_error_shrinks_with_n(scalar_model, scalar_dist):
    analytic = rp.output_moments(scalar_dist, scalar_model)
    # average over several seeds so the 1/sqrt(n) trend is not swamped by
    # one lucky small-n draw
    errs = {n: 0.0 for n in (10**3, 10**6)}
    for seed in range(5):
        for n in errs:
            rep = rp.mc_output_moments(scalar_dist, scalar_model, rp.McConfig(n_samples=n, seed=seed))
            errs[n] += abs(rep.emp_mean - analytic.mean)
    assert errs[10**6] < errs[10**3]


def test_mc_coverage_of_mean_interval(scalar_model, scalar_dist):
    """Over 200 fixed seeds, the 95% interval covers the analytic mean
    93-97% of the time (fixed block 10000..10199; deterministic)."""
    analytic = rp.output_moments(scalar_dist, scalar_model)
    hits = 0
    for seed in range(10000, 10200):
        rep = rp.mc_output_moments(
            scalar_dist, scalar_model, rp.McConfig(n_samples=4096, seed=seed, chunk_size=4096)
        )
        if abs(rep.emp_mean - analytic.mean) <= 1.96 * rep.se_mean:
            hits += 1
    assert 186 <= hits <= 194, f"coverage {hits}/200 outside 93-97%"


def test_convergence_study_validation(fixture_cases):
    cfg = rp.McConfig(n_samples=2, seed=1)
    with pytest.raises(ConfigError):
        rp.convergence_study([], [100, 1000], cfg)
    with pytest.raises(ConfigError):
        rp.convergence_study(fixture_cases[:1], [100], cfg)
    with pytest.raises(ConfigError):
        rp.convergence_study(fixture_cases[:1], [100, 100], cfg)
    with pytest.raises(ConfigError):
        rp.convergence_study(fixture_cases[:1], [1, 100], cfg)


def test_convergence_study_deterministic_case_reports_nan_slope(fixture_model):
    dist = rp.GaussianDist(mean=[0.1, 0.2], cov=np.zeros((2, 2)))
    study = rp.convergence_study(
        [(dist, fixture_model)], [100, 1000], rp.McConfig(n_samples=2, seed=1)
    )
    for _, rmse_mean, rmse_var in study.rows:
        assert rmse_mean == 0.0 and rmse_var == 0.0
    assert math.isnan(study.slope_mean) and math.isnan(study.slope_variance)


def test_convergence_study_rows_sorted_and_decreasing(fixture_cases):
    study = rp.convergence_study(
        fixture_cases[:6], [4000, 500, 40000], rp.McConfig(n_samples=2, seed=21)
    )
    ns = [row[0] for row in study.rows]
    assert ns == sorted(ns) == [500, 4000, 40000]
    assert study.rows[-1][1] < study.rows[0][1]
    assert study.rows[-1][2] < study.rows[0][2]
    assert study.slope_mean < 0.0 and study.slope_variance < 0.0


def test_convergence_study_repeatable(fixture_cases):
    cfg = rp.McConfig(n_samples=2, seed=33, workers=2)
    a = rp.convergence_study(fixture_cases[:4], [1000, 8000], cfg)
    b = rp.convergence_study(fixture_cases[:4], [1000, 8000], cfg)
    assert a == b
