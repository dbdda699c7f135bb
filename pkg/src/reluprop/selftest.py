"""Embedded invariant suite behind ``reluprop selftest``.

Self-contained (no quadrature dependencies at run time): kernel checks
compare against reference values frozen from high-precision oracles
(2-D adaptive quadrature for the bivariate cdf grid, 30-digit quadrature
for the rectified moment grid); the remaining checks are internal
identities. ``phi2_perturbation`` injects a known kernel error so the
suite can demonstrate it detects one (negative control).
"""

import numpy as np

from . import kernels
from .mc import McConfig, mc_output_moments
from .model_io import gen_dist, gen_model
from .rectified import (
    orthant_prob,
    rectify,
    relu_cross_moment,
    relu_mean,
    relu_second_moment,
    truncated_cross_moment,
)

__all__ = ["run_selftest"]

# frozen: 2-D adaptive quadrature of the bivariate normal density over
# (-inf, x] x (-inf, y], absolute accuracy ~1e-12
_PHI2_GRID = (
    (-3.0, -3.0, -0.99, 0.0),
    (-3.0, -1.0, -0.99, 9.267586990711541e-184),
    (-3.0, 0.0, -0.99, 2.669139334933949e-106),
    (-3.0, 1.0, -0.99, 1.2853575743316643e-50),
    (-3.0, 3.0, -0.99, 0.0002483780330094516),
    (-1.0, -3.0, -0.99, 9.267586990711543e-184),
    (-1.0, -1.0, -0.99, 9.576940910642122e-50),
    (-1.0, 0.0, -0.99, 3.398299120568635e-15),
    (-1.0, 1.0, -0.99, 0.013651719083462688),
    (-1.0, 3.0, -0.99, 0.15730535589982697),
    (0.0, -3.0, -0.99, 2.669139334933949e-106),
    (0.0, -1.0, -0.99, 3.3307733124222657e-15),
    (0.0, 0.0, -0.99, 0.022526706822205957),
    (0.0, 1.0, -0.99, 0.34134474606854803),
    (0.0, 3.0, -0.99, 0.49865010196836984),
    (1.0, -3.0, -0.99, 1.2853575743316282e-50),
    (1.0, -1.0, -0.99, 0.013651719083462676),
    (1.0, 0.0, -0.99, 0.34134474606854825),
    (1.0, 1.0, -0.99, 0.6826894921370859),
    (1.0, 3.0, -0.99, 0.8399948480369123),
    (3.0, -3.0, -0.99, 0.00024837803300946045),
    (3.0, -1.0, -0.99, 0.15730535589982686),
    (3.0, 0.0, -0.99, 0.49865010196837006),
    (3.0, 1.0, -0.99, 0.8399948480369129),
    (3.0, 3.0, -0.99, 0.9973002039367393),
    (-3.0, -3.0, -0.5, 7.147502185723283e-11),
    (-3.0, -1.0, -0.5, 1.697385487436968e-06),
    (-3.0, 0.0, -0.5, 4.094483091609605e-05),
    (-3.0, 1.0, -0.5, 0.00031331918297456237),
    (-3.0, 3.0, -0.5, 0.001268008369797902),
    (-1.0, -3.0, -0.5, 1.6973854874369964e-06),
    (-1.0, -1.0, -0.5, 0.0037823020728542647),
    (-1.0, 0.0, -0.5, 0.03125704735483193),
    (-1.0, 1.0, -0.5, 0.09614115922179324),
    (-1.0, 3.0, -0.5, 0.15761867508280153),
    (0.0, -3.0, -0.5, 4.094483091609608e-05),
    (0.0, -1.0, -0.5, 0.031257047354831924),
    (0.0, 0.0, -0.5, 0.16666666666666669),
    (0.0, 1.0, -0.5, 0.3726017934233749),
    (0.0, 3.0, -0.5, 0.498691046799286),
    (1.0, -3.0, -0.5, 0.0003133191829745624),
    (1.0, -1.0, -0.5, 0.09614115922179324),
    (1.0, 0.0, -0.5, 0.372601793423375),
    (1.0, 1.0, -0.5, 0.6864717942099402),
    (1.0, 3.0, -0.5, 0.8399965454224003),
    (3.0, -3.0, -0.5, 0.001268008369797902),
    (3.0, -1.0, -0.5, 0.15761867508280156),
    (3.0, 0.0, -0.5, 0.498691046799286),
    (3.0, 1.0, -0.5, 0.8399965454224003),
    (3.0, 3.0, -0.5, 0.997300204008215),
    (-3.0, -3.0, 0.0, 1.8222246957988025e-06),
    (-3.0, -1.0, 0.0, 0.0002141684149898466),
    (-3.0, 0.0, 0.0, 0.000674949015815047),
    (-3.0, 1.0, 0.0, 0.0011357296166402476),
    (-3.0, 3.0, 0.0, 0.0013480758069342957),
    (-1.0, -3.0, 0.0, 0.00021416841498984665),
    (-1.0, -1.0, 0.0, 0.02517148960005512),
    (-1.0, 0.0, 0.0, 0.07932762696572852),
    (-1.0, 1.0, 0.0, 0.13348376433140197),
    (-1.0, 3.0, 0.0, 0.15844108551646727),
    (0.0, -3.0, 0.0, 0.0006749490158150471),
    (0.0, -1.0, 0.0, 0.07932762696572854),
    (0.0, 0.0, 0.0, 0.25),
    (0.0, 1.0, 0.0, 0.42067237303427146),
    (0.0, 3.0, 0.0, 0.4993250509841851),
    (1.0, -3.0, 0.0, 0.0011357296166402476),
    (1.0, -1.0, 0.0, 0.13348376433140194),
    (1.0, 0.0, 0.0, 0.42067237303427146),
    (1.0, 1.0, 0.0, 0.7078609817371411),
    (1.0, 3.0, 0.0, 0.8402090164519029),
    (3.0, -3.0, 0.0, 0.0013480758069342952),
    (3.0, -1.0, 0.0, 0.15844108551646724),
    (3.0, 0.0, 0.0, 0.4993250509841849),
    (3.0, 1.0, 0.0, 0.8402090164519027),
    (3.0, 3.0, 0.0, 0.9973020261614356),
    (-3.0, -3.0, 0.5, 8.188966183219208e-05),
    (-3.0, -1.0, 0.5, 0.0010365788486555317),
    (-3.0, 0.0, 0.5, 0.0013089532007139984),
    (-3.0, 1.0, 0.5, 0.001348200646142657),
    (-3.0, 3.0, 0.5, 0.0013498979601550725),
    (-1.0, -3.0, 0.5, 0.001036578848655532),
    (-1.0, -1.0, 0.5, 0.06251409470966383),
    (-1.0, 0.0, 0.5, 0.12739820657662512),
    (-1.0, 1.0, 0.5, 0.15487295185860278),
    (-1.0, 3.0, 0.5, 0.1586535565459696),
    (0.0, -3.0, 0.5, 0.001308953200713998),
    (0.0, -1.0, 0.5, 0.12739820657662515),
    (0.0, 0.0, 0.5, 0.3333333333333334),
    (0.0, 1.0, 0.5, 0.46874295264516813),
    (0.0, 3.0, 0.5, 0.49995905516908395),
    (1.0, -3.0, 0.5, 0.001348200646142657),
    (1.0, -1.0, 0.5, 0.15487295185860278),
    (1.0, 0.0, 0.5, 0.4687429526451682),
    (1.0, 1.0, 0.5, 0.7452035868467496),
    (1.0, 3.0, 0.5, 0.8410314268855684),
    (3.0, -3.0, 0.5, 0.0013498979601550725),
    (3.0, -1.0, 0.5, 0.1586535565459696),
    (3.0, 0.0, 0.5, 0.4999590551690839),
    (3.0, 1.0, 0.5, 0.8410314268855683),
    (3.0, 3.0, 0.5, 0.9973820935985719),
    (-3.0, -3.0, 0.99, 0.0011015199986035636),
    (-3.0, -1.0, 0.99, 0.0013498980312225647),
    (-3.0, 0.0, 0.99, 0.0013498980316122967),
    (-3.0, 1.0, 0.99, 0.0013498980294674833),
    (-3.0, 3.0, 0.99, 0.001349898028041818),
    (-1.0, -3.0, 0.99, 0.00134989803160852),
    (-1.0, -1.0, 0.99, 0.14500353484760642),
    (-1.0, 0.0, 0.99, 0.15865525393143015),
    (-1.0, 1.0, 0.99, 0.15865525392925903),
    (-1.0, 3.0, 0.99, 0.15865525392786606),
    (0.0, -3.0, 0.99, 0.0013498980316089774),
    (0.0, -1.0, 0.99, 0.15865525393105442),
    (0.0, 0.0, 0.99, 0.47747329317778897),
    (0.0, 1.0, 0.99, 0.49999999999785005),
    (0.0, 3.0, 0.99, 0.49999999999633143),
    (1.0, -3.0, 0.99, 0.0013498980316090496),
    (1.0, -1.0, 0.99, 0.1586552539310517),
    (1.0, 0.0, 0.99, 0.4999999999999756),
    (1.0, 1.0, 0.99, 0.8276930269828844),
    (1.0, 3.0, 0.99, 0.8413447460649569),
    (3.0, -3.0, 0.99, 0.0013498980316092996),
    (3.0, -1.0, 0.99, 0.15865525393105898),
    (3.0, 0.0, 0.99, 0.499999999999973),
    (3.0, 1.0, 0.99, 0.8413447460663374),
    (3.0, 3.0, 0.99, 0.9984017239317877),
)

# frozen: (mu, sigma, E max(W,0), E max(W,0)^2) from 30-digit quadrature
_RECT_MOMENT_GRID = (
    (-0.6000000000000001, 0.1, 1.563569795970961e-11, 4.844576745511811e-13),
    (-0.30000000000000004, 0.1, 3.8215431704772325e-05, 2.0343508048692356e-06),
    (-0.1, 0.1, 0.00833154705876863, 0.0007533978334377076),
    (-0.05, 0.1, 0.019779655740130603, 0.002096392600253339),
    (0.0, 0.1, 0.03989422804014327, 0.005000000000000001),
    (0.05, 0.1, 0.0697796557401306, 0.010403607399746662),
    (0.1, 0.1, 0.10833154705876863, 0.019246602166562293),
    (0.30000000000000004, 0.1, 0.30003821543170484, 0.09999796564919516),
    (0.6000000000000001, 0.1, 0.6000000000156358, 0.36999999999951566),
    (-6.0, 1.0, 1.5635697959709664e-10, 4.8445767455118286e-11),
    (-3.0, 1.0, 0.0003821543170477236, 0.00020343508048692373),
    (-1.0, 1.0, 0.0833154705876863, 0.07533978334377076),
    (-0.5, 1.0, 0.19779655740130603, 0.20963926002533387),
    (0.0, 1.0, 0.3989422804014327, 0.5),
    (0.5, 1.0, 0.6977965574013061, 1.0403607399746662),
    (1.0, 1.0, 1.0833154705876864, 1.9246602166562292),
    (3.0, 1.0, 3.0003821543170477, 9.999796564919514),
    (6.0, 1.0, 6.000000000156357, 36.999999999951555),
    (-60.0, 10.0, 1.5635697959709663e-09, 4.8445767455118285e-09),
    (-30.0, 10.0, 0.003821543170477236, 0.020343508048692373),
    (-10.0, 10.0, 0.833154705876863, 7.533978334377076),
    (-5.0, 10.0, 1.9779655740130604, 20.963926002533388),
    (0.0, 10.0, 3.989422804014327, 50.0),
    (5.0, 10.0, 6.97796557401306, 104.03607399746662),
    (10.0, 10.0, 10.833154705876863, 192.46602166562292),
    (30.0, 10.0, 30.003821543170478, 999.9796564919513),
    (60.0, 10.0, 60.00000000156357, 3699.9999999951556),
)


def _check_phi2_grid():
    worst = 0.0
    for x, y, rho, ref in _PHI2_GRID:
        worst = max(worst, abs(kernels.bvn_cdf(x, y, rho) - ref))
    return worst <= 1e-10, f"max abs err {worst:.3e} (tol 1e-10)"


def _check_kernel_identities():
    failures = []
    if kernels.std_cdf(0.0) != 0.5:
        failures.append("std_cdf(0) != 0.5")
    if abs(kernels.std_pdf(0.0) - 0.3989422804014327) > 1e-16:
        failures.append("std_pdf(0) off")
    if abs(kernels.bvn_cdf(0.0, 0.0, 0.5) - 1.0 / 3.0) > 1e-12:
        failures.append("bvn_cdf(0,0,0.5) != 1/3")
    if abs(kernels.bvn_cdf(0.0, 0.0, -0.5) - 1.0 / 6.0) > 1e-12:
        failures.append("bvn_cdf(0,0,-0.5) != 1/6")
    grid = (-3.0, -1.0, -0.2, 0.0, 0.7, 1.0, 3.0)
    for rho in (-0.99, -0.5, 0.0, 0.5, 0.99):
        for x in grid:
            for y in grid:
                if kernels.bvn_cdf(x, y, rho) != kernels.bvn_cdf(y, x, rho):
                    failures.append(f"symmetry broken at ({x},{y},{rho})")
            if abs(kernels.bvn_cdf(x, 40.0, rho) - kernels.std_cdf(x)) > 1e-12:
                failures.append(f"marginal consistency broken at ({x},{rho})")
    for x in np.linspace(-10.0, 10.0, 201):
        if abs(kernels.std_cdf(float(x)) + kernels.std_cdf(float(-x)) - 1.0) > 1e-15:
            failures.append(f"cdf reflection broken at {x}")
            break
    return not failures, failures[0] if failures else "all identities hold"


def _check_rectified_grid():
    worst = 0.0
    for mu, sigma, ref1, ref2 in _RECT_MOMENT_GRID:
        worst = max(worst, abs(relu_mean(mu, sigma) - ref1) / ref1)
        worst = max(worst, abs(relu_second_moment(mu, sigma) - ref2) / ref2)
    return worst <= 1e-10, f"max rel err {worst:.3e} (tol 1e-10)"


def _check_factorization():
    worst = 0.0
    for s_i in (0.1, 1.0, 10.0):
        for s_j in (0.5, 2.0):
            for r_i in (-6.0, -1.0, 0.0, 2.0, 6.0):
                for r_j in (-4.0, 0.5, 3.0):
                    mu_i, mu_j = r_i * s_i, r_j * s_j
                    got = relu_cross_moment(mu_i, s_i, mu_j, s_j, 0.0)
                    want = relu_mean(mu_i, s_i) * relu_mean(mu_j, s_j)
                    if want != 0.0:
                        worst = max(worst, abs(got - want) / abs(want))
    return worst <= 1e-13, f"max rel err {worst:.3e} (tol 1e-13)"


def _check_corner_cases():
    failures = []
    if relu_cross_moment(2.0, 0.0, 1.0, 1.0, 0.0) != 2.0 * relu_mean(1.0, 1.0):
        failures.append("sigma_i=0, mu_i>0 branch not exact")
    if relu_cross_moment(-2.0, 0.0, 1.0, 1.0, 0.0) != 0.0:
        failures.append("sigma_i=0, mu_i<0 branch not zero")
    if relu_cross_moment(3.0, 0.0, 2.0, 0.0, 0.0) != 6.0:
        failures.append("both deterministic branch not exact")
    if relu_cross_moment(1.3, 0.7, 1.3, 0.7, 1.0) != relu_second_moment(1.3, 0.7):
        failures.append("rho=1 with equal marginals != second moment")
    cases = ((0.5, 1.0, -0.2, 2.0), (1.0, 1.0, 2.0, 2.0), (-0.3, 0.5, 0.4, 1.5))
    for mu_i, s_i, mu_j, s_j in cases:
        near = relu_cross_moment(mu_i, s_i, mu_j, s_j, 1.0 - 1e-9)
        limit = relu_cross_moment(mu_i, s_i, mu_j, s_j, 1.0)
        if abs(near - limit) > 1e-5:
            failures.append(f"rho->1 discontinuity {abs(near - limit):.2e} at {(mu_i, s_i, mu_j, s_j)}")
        near = relu_cross_moment(mu_i, s_i, mu_j, s_j, -(1.0 - 1e-9))
        limit = relu_cross_moment(mu_i, s_i, mu_j, s_j, -1.0)
        if abs(near - limit) > 1e-5:
            failures.append(f"rho->-1 discontinuity {abs(near - limit):.2e} at {(mu_i, s_i, mu_j, s_j)}")
    return not failures, failures[0] if failures else "corner branches exact/continuous"


def _check_total_expectation():
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(100):
        mu_i, mu_j = rng.uniform(-1.5, 1.5, 2)
        s_i, s_j = rng.uniform(0.5, 2.0, 2)
        rho = float(rng.uniform(-0.9, 0.9))
        lhs = truncated_cross_moment(mu_i, s_i, mu_j, s_j, rho) * orthant_prob(
            mu_i, s_i, mu_j, s_j, rho
        )
        rhs = relu_cross_moment(mu_i, s_i, mu_j, s_j, rho)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst <= 1e-12, f"max rel err {worst:.3e} (tol 1e-12)"


def _check_mc_determinism():
    model = gen_model(2, 6, seed=11).to_model()
    dist = gen_dist(2, seed=12).to_dist()
    reports = [
        mc_output_moments(dist, model, McConfig(n_samples=20000, seed=99, chunk_size=4096, workers=w))
        for w in (1, 1, 4)
    ]
    ok = reports[0] == reports[1] == reports[2]
    return ok, "reports identical across reruns and worker counts" if ok else "reports differ"


def _check_rectify_assembly():
    from .propagate import GaussianDist

    dist = GaussianDist(mean=[1.0, -0.5], cov=[[0.0, 0.0], [0.0, 2.0]])
    rect = rectify(dist)
    ok = (
        rect.mean[0] == 1.0
        and rect.cov[0, 0] == 0.0
        and rect.cov[0, 1] == 0.0
        and rect.cov[1, 0] == 0.0
        and np.array_equal(rect.cov, rect.cov.T)
    )
    return ok, "deterministic coordinate propagates exactly" if ok else "assembly broken"


_CHECKS = (
    ("phi2-oracle-grid", _check_phi2_grid),
    ("kernel-identities", _check_kernel_identities),
    ("rectified-moment-grid", _check_rectified_grid),
    ("independence-factorization", _check_factorization),
    ("corner-cases", _check_corner_cases),
    ("law-of-total-expectation", _check_total_expectation),
    ("rectify-assembly", _check_rectify_assembly),
    ("mc-determinism", _check_mc_determinism),
)


def run_selftest(phi2_perturbation=0.0):
    """Run all embedded checks; returns a list of (name, ok, detail)."""
    kernels._set_bvn_cdf_perturbation(phi2_perturbation)
    try:
        return [(name, *check()) for name, check in _CHECKS]
    finally:
        kernels._set_bvn_cdf_perturbation(0.0)
