"""Acceptance suite: one test per criterion, printed as one line each.

Protocol constants are pinned here: the fixed model fixture is
(m=2, p=12, seed=42), the 40 input distributions use seeds 1000..1039,
and every Monte Carlo criterion runs under protocol seed 123.
"""

import json
import math

import numpy as np
import pytest

import reluprop as rp
from conftest import dblquad_cross, dblquad_phi2, quad_relu_mean, quad_relu_second
from reluprop import kernels
from reluprop.rectified import (
    orthant_prob,
    relu_cross_moment,
    relu_mean,
    relu_second_moment,
    truncated_cross_moment,
)

PROTOCOL_SEED = 123

RATIOS = tuple(float(r) for r in range(-6, 7))
SIGMAS = (0.1, 1.0, 10.0)


def _report(num, desc, ok, detail):
    print(f"\ncriterion {num} ({desc}): {'PASS' if ok else 'FAIL'} [{detail}]")
    assert ok, f"criterion {num} ({desc}): {detail}"


def _mc_report_bytes(rep):
    return json.dumps(
        {
            "emp_mean": rep.emp_mean,
            "emp_variance": rep.emp_variance,
            "se_mean": rep.se_mean,
            "se_variance": rep.se_variance,
            "n": rep.n,
            "seed": rep.seed,
        }
    ).encode()


def _study_bytes(study):
    lines = ["n,rmse_mean,rmse_variance"]
    for n, rmse_mean, rmse_variance in study.rows:
        lines.append(f"{n},{rmse_mean!r},{rmse_variance!r}")
    return "\n".join(lines).encode()


@pytest.fixture(scope="module")
def c7_reports(fixture_cases):
    def run(workers):
        cfg = rp.McConfig(n_samples=10**6, seed=PROTOCOL_SEED, workers=workers)
        return [
            rp.mc_output_moments(dist, model, cfg, stream=idx + 1)
            for idx, (dist, model) in enumerate(fixture_cases)
        ]

    return {"w1a": run(1), "w1b": run(1), "w8": run(8)}


@pytest.fixture(scope="module")
def c8_studies(fixture_cases):
    grid = [10**3, 10**4, 10**5, 10**6]

    def run(workers):
        cfg = rp.McConfig(n_samples=2, seed=PROTOCOL_SEED, workers=workers)
        return rp.convergence_study(fixture_cases, grid, cfg)

    return {"w1a": run(1), "w1b": run(1), "w8": run(8)}


def test_criterion_1_kernel_accuracy():
    worst = 0.0
    for rho in (-0.99, -0.5, 0.0, 0.5, 0.99):
        for x in (-3.0, -1.0, 0.0, 1.0, 3.0):
            for y in (-3.0, -1.0, 0.0, 1.0, 3.0):
                worst = max(worst, abs(kernels.bvn_cdf(x, y, rho) - dblquad_phi2(x, y, rho)))
    orthant = abs(kernels.bvn_cdf(0.0, 0.0, 0.5) - 1.0 / 3.0)
    ok = worst <= 1e-10 and orthant <= 1e-12
    _report(
        1,
        "bivariate cdf vs quadrature oracle",
        ok,
        f"grid worst abs {worst:.2e} (tol 1e-10), |cdf(0,0,0.5)-1/3| {orthant:.2e} (tol 1e-12)",
    )


def test_criterion_2_univariate_moments():
    worst = 0.0
    for sigma in SIGMAS:
        for ratio in RATIOS:
            mu = ratio * sigma
            want = quad_relu_mean(mu, sigma)
            worst = max(worst, abs(relu_mean(mu, sigma) - want) / abs(want))
            want2 = quad_relu_second(mu, sigma)
            worst = max(worst, abs(relu_second_moment(mu, sigma) - want2) / abs(want2))
    ok = worst <= 1e-10
    _report(
        2,
        "rectified mean/second moment vs 1-D quadrature",
        ok,
        f"worst rel {worst:.2e} (tol 1e-10) over mu/sigma in [-6,6], sigma in {SIGMAS}",
    )


def test_criterion_3_cross_moments():
    rng = np.random.default_rng(20240501)
    worst_excess = 0.0
    worst_rel = 0.0
    for _ in range(200):
        mu_i, mu_j = rng.uniform(-3.0, 3.0, 2)
        s_i, s_j = rng.uniform(0.2, 3.0, 2)
        rho = float(rng.uniform(-0.999, 0.999))
        got = relu_cross_moment(mu_i, s_i, mu_j, s_j, rho)
        want = dblquad_cross(mu_i, s_i, mu_j, s_j, rho)
        tol = max(1e-9 * abs(want), 1e-12)
        worst_excess = max(worst_excess, abs(got - want) - tol)
        if abs(want) > 1e-3:
            worst_rel = max(worst_rel, abs(got - want) / abs(want))
    ok = worst_excess <= 0.0
    _report(
        3,
        "cross moment vs 2-D quadrature, 200 random points",
        ok,
        f"all within max(1e-9 rel, 1e-12 abs); worst rel away from zero {worst_rel:.2e}",
    )


def test_criterion_4_corner_cases():
    failures = []
    # sigma = 0 branches are exact
    if relu_mean(2.0, 0.0) != 2.0 or relu_mean(-2.0, 0.0) != 0.0:
        failures.append("relu_mean sigma=0")
    if relu_second_moment(-3.0, 0.0) != 0.0 or relu_second_moment(3.0, 0.0) != 9.0:
        failures.append("relu_second_moment sigma=0")
    if relu_cross_moment(2.0, 0.0, 1.0, 1.0, 0.0) != 2.0 * relu_mean(1.0, 1.0):
        failures.append("cross sigma_i=0")
    if relu_cross_moment(2.0, 0.0, -3.0, 0.0, 0.0) != 0.0:
        failures.append("cross both deterministic")
    # |rho| = 1 limits continuous at 1e-5, including the H(0) = 1/2 tie
    worst_gap = 0.0
    cases = (
        (0.5, 1.0, -0.2, 2.0),
        (1.0, 1.0, 2.0, 2.0),  # mu_i sigma_j == mu_j sigma_i: tie case
        (-0.3, 0.5, 0.4, 1.5),
        (0.0, 1.0, 0.0, 1.0),  # tie case at the origin
    )
    for mu_i, s_i, mu_j, s_j in cases:
        for sign in (1.0, -1.0):
            near = relu_cross_moment(mu_i, s_i, mu_j, s_j, sign * (1.0 - 1e-9))
            limit = relu_cross_moment(mu_i, s_i, mu_j, s_j, sign * 1.0)
            worst_gap = max(worst_gap, abs(near - limit))
    if worst_gap > 1e-5:
        failures.append(f"rho=+-1 continuity gap {worst_gap:.2e}")
    # rho = 1 with equal marginals reduces to the second moment exactly
    for mu, sigma in ((0.0, 1.0), (0.7, 1.3), (-1.2, 0.4)):
        if relu_cross_moment(mu, sigma, mu, sigma, 1.0) != relu_second_moment(mu, sigma):
            failures.append(f"rho=1 equal marginals at ({mu},{sigma})")
    ok = not failures
    _report(
        4,
        "degenerate branches",
        ok,
        f"sigma=0 exact, |rho|=1 continuity worst {worst_gap:.2e} (tol 1e-5)"
        if ok
        else "; ".join(failures),
    )


def test_criterion_5_factorization():
    worst = 0.0
    for s_i in SIGMAS:
        for s_j in SIGMAS:
            for r_i in RATIOS:
                for r_j in RATIOS:
                    mu_i, mu_j = r_i * s_i, r_j * s_j
                    got = relu_cross_moment(mu_i, s_i, mu_j, s_j, 0.0)
                    want = relu_mean(mu_i, s_i) * relu_mean(mu_j, s_j)
                    if want == 0.0:
                        if got != 0.0:
                            worst = math.inf
                    else:
                        worst = max(worst, abs(got - want) / want)
    ok = worst <= 1e-13
    _report(
        5,
        "zero-correlation factorization",
        ok,
        f"worst rel {worst:.2e} (tol 1e-13) over the criterion-2 grid",
    )


def test_criterion_6_total_expectation():
    rng = np.random.default_rng(20240502)
    worst = 0.0
    for _ in range(100):
        mu_i, mu_j = rng.uniform(-1.5, 1.5, 2)
        s_i, s_j = rng.uniform(0.5, 2.0, 2)
        rho = float(rng.uniform(-0.9, 0.9))
        product = truncated_cross_moment(mu_i, s_i, mu_j, s_j, rho) * orthant_prob(
            mu_i, s_i, mu_j, s_j, rho
        )
        direct = relu_cross_moment(mu_i, s_i, mu_j, s_j, rho)
        worst = max(worst, abs(product - direct) / abs(direct))
    ok = worst <= 1e-12
    _report(
        6,
        "law of total expectation, 100 random draws",
        ok,
        f"worst rel {worst:.2e} (tol 1e-12)",
    )


def test_criterion_7_end_to_end_mc(fixture_cases, c7_reports):
    within = 0
    worst_z = 0.0
    for (dist, model), rep in zip(fixture_cases, c7_reports["w1a"]):
        analytic = rp.output_moments(dist, model)
        z_mean = abs(rep.emp_mean - analytic.mean) / rep.se_mean
        z_var = abs(rep.emp_variance - analytic.variance) / rep.se_variance
        worst_z = max(worst_z, z_mean, z_var)
        if z_mean <= 4.0 and z_var <= 4.0:
            within += 1
    ok = within >= 38
    _report(
        7,
        "analytic vs MC at n=1e6, 40 cases",
        ok,
        f"{within}/40 within 4 SE (need >= 38), worst z {worst_z:.2f}",
    )


def test_criterion_8_convergence_slope(c8_studies):
    study = c8_studies["w1a"]
    rmse_mean = [row[1] for row in study.rows]
    rmse_var = [row[2] for row in study.rows]
    monotone = all(a > b for a, b in zip(rmse_mean, rmse_mean[1:])) and all(
        a > b for a, b in zip(rmse_var, rmse_var[1:])
    )
    decreasing_ends = rmse_mean[-1] < rmse_mean[0] and rmse_var[-1] < rmse_var[0]
    slopes_ok = (
        -0.55 <= study.slope_mean <= -0.45 and -0.55 <= study.slope_variance <= -0.45
    )
    ok = slopes_ok and monotone and decreasing_ends
    _report(
        8,
        "RMSE log-log slopes over n in 1e3..1e6",
        ok,
        f"slope_mean {study.slope_mean:+.4f}, slope_variance {study.slope_variance:+.4f} "
        f"(window [-0.55,-0.45]), RMSE monotone decreasing: {monotone}",
    )


def test_criterion_9_determinism(c7_reports, c8_studies):
    c7_ok = (
        [_mc_report_bytes(r) for r in c7_reports["w1a"]]
        == [_mc_report_bytes(r) for r in c7_reports["w1b"]]
        == [_mc_report_bytes(r) for r in c7_reports["w8"]]
    )
    c8_ok = (
        _study_bytes(c8_studies["w1a"])
        == _study_bytes(c8_studies["w1b"])
        == _study_bytes(c8_studies["w8"])
    )
    ok = c7_ok and c8_ok
    _report(
        9,
        "byte-identical MC reports across reruns and 1 vs 8 workers",
        ok,
        f"criterion-7 reports identical: {c7_ok}, criterion-8 CSV identical: {c8_ok}",
    )
