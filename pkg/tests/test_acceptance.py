"""End-to-end acceptance checks, one per headline claim.

Each test prints a single pass/fail line (run pytest with -s to see them all)
and then asserts, so the suite stays a faithful scoreboard.
"""

import math
import time

import numpy as np
import pytest

from sharpineq import (
    DecayClass,
    ExponentTriple,
    MinkowskiNorm,
    RadialHypFunction,
    RadialProfile,
    TestFunction as TF,
    ball_volume_constant,
    check_p_ode,
    check_pqr_identity,
    curvature_defect,
    dual_norm_value,
    gaussian_T,
    gaussian_moment_identity,
    hardy_hyperbolic_report,
    hardy_sharpness_sweep,
    hpw_hyperbolic_report,
    hpw_report,
    hyp_ball_volume,
    hyp_volume_ratio_check,
    ko_alpha_scan,
    laplace_comparison_check,
    modified_hpw_report,
    pqr,
    uniformity_constant,
)

TRIPLES = (ExponentTriple(3, 3.0, 1.0), ExponentTriple(3, 2.5, 0.5))

EUCLID3 = MinkowskiNorm(3, "weighted-euclidean", matrix=np.eye(3))
WEIGHTED3 = MinkowskiNorm(3, "weighted-euclidean", matrix=np.diag([4.0, 1.0, 1.0]))
LP4_3 = MinkowskiNorm(3, "lp", exponent=4.0)


def report(label, ok):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}")
    assert ok


def gaussian_tf(lam):
    return TF.radial(
        RadialProfile(lambda r: math.exp(-lam * r * r), DecayClass.gaussian(lam)),
        lambda r: -2 * lam * r * math.exp(-lam * r * r),
    )


def test_01_interpolation_identity():
    start = time.perf_counter()
    worst = 0.0
    for t in TRIPLES:
        for rep in check_pqr_identity(t, [0.1, 1.0, 10.0]):
            worst = max(worst, abs(rep.ratio - rep.target))
    elapsed = time.perf_counter() - start
    report(
        f"interpolation identity: max defect {worst:.2e} (<= 1e-6), {elapsed:.1f}s (< 5s)",
        worst <= 1e-6 and elapsed < 5.0,
    )


def test_02_extremal_integral_ode_and_power_law():
    lam_grid = [0.5, 1.0, 2.0]
    worst_res, worst_fit = 0.0, 0.0
    for t in TRIPLES:
        for res in check_p_ode(t, lam_grid):
            worst_res = max(worst_res, abs(res))
        logs = np.log([pqr(t, lam, "P").value for lam in lam_grid])
        slope = np.polyfit(np.log(lam_grid), logs, 1)[0]
        worst_fit = max(worst_fit, abs(slope - t.p_power))
    report(
        f"P power law: max ODE residual {worst_res:.2e} (<= 1e-5), "
        f"max fitted-exponent defect {worst_fit:.2e} (<= 1e-4)",
        worst_res <= 1e-5 and worst_fit <= 1e-4,
    )


def test_03_hpw_equality_family():
    worst_eq, worst_mom = 0.0, 0.0
    for norm in (EUCLID3, WEIGHTED3, LP4_3):
        for lam in (0.5, 1.0, 2.0):
            rep = hpw_report(norm, 3, gaussian_tf(lam))
            worst_eq = max(worst_eq, abs(rep.ratio - 2.25))
    for lam in (0.5, 1.0, 2.0):
        worst_mom = max(worst_mom, gaussian_moment_identity(3, lam))
    report(
        f"uncertainty equality family: max |ratio - 9/4| {worst_eq:.2e} (<= 1e-6), "
        f"moment identity defect {worst_mom:.2e} (<= 1e-8)",
        worst_eq <= 1e-6 and worst_mom <= 1e-8,
    )


def test_04_gaussian_moment_closed_form_and_ode():
    worst_cf, worst_ode = 0.0, 0.0
    for n in (3, 4):
        for lam in (0.5, 1.0):
            out = gaussian_T(n, lam)
            worst_cf = max(worst_cf, out["closed_form_relative_error"])
            worst_ode = max(worst_ode, abs(out["ode_relative_residual"]))
    report(
        f"gaussian moment integral: closed-form defect {worst_cf:.2e} (<= 1e-9), "
        f"ODE residual {worst_ode:.2e} (<= 1e-6)",
        worst_cf <= 1e-9 and worst_ode <= 1e-6,
    )


def test_05_hardy_sharpness_sweep():
    start = time.perf_counter()
    eps = [10.0 ** -k for k in range(2, 9)]
    out = hardy_sharpness_sweep(EUCLID3, 3, 1.0, 2.0, eps)
    elapsed = time.perf_counter() - start
    qs = out["quotients"]
    mono = all(b <= a + 1e-12 for a, b in zip(qs, qs[1:]))
    above = all(q >= 0.25 for q in qs)
    limit_ok = abs(out["extrapolated_limit"] - 0.25) <= 0.01
    report(
        f"hardy sharpness sweep: limit {out['extrapolated_limit']:.6f} (0.25 +/- 0.01), "
        f"monotone={mono}, above-target={above}, {elapsed:.1f}s (< 30s)",
        mono and above and limit_ok and elapsed < 30.0,
    )


def test_06_modified_uncertainty_equality_on_ball():
    worst = 0.0
    for n in (3, 4, 5):
        for alpha in (0.25, 1.0, 4.0):
            rep = modified_hpw_report(n, alpha=alpha)
            worst = max(worst, abs(rep.ratio - rep.target) / rep.target)
    report(
        f"modified uncertainty equality: max relative defect {worst:.2e} (<= 1e-6)",
        worst <= 1e-6,
    )


def test_07_refutation_strictness_and_scan():
    strict = True
    for n in (3, 4):
        rep = hpw_hyperbolic_report(RadialHypFunction.gaussian(1.0), n)
        strict = strict and rep.slack > 100 * rep.combined_error * rep.target
    scan = ko_alpha_scan(4, (3.0, 100.0), grid_size=4096)
    no_roots = len(scan["brackets"]) == 0
    report(
        f"refutation: gaussian slack strict for n in {{3,4}}={strict}, "
        f"sign changes on (3,100] = {len(scan['brackets'])} (expect 0)",
        strict and no_roots,
    )


def test_08_hardy_improvements_on_ball():
    u = RadialHypFunction(
        RadialProfile(lambda r: r * math.exp(-r * r), DecayClass.gaussian(1.0)),
        lambda r: (1 - 2 * r * r) * math.exp(-r * r),
    )
    rep1, rep2 = hardy_hyperbolic_report(u, 3)
    slacks_ok = rep1.slack >= -1e-9 and rep2.slack >= -1e-9
    rho = np.linspace(50.0 / 10_000, 50.0, 10_000)
    lhs = rho / np.tanh(rho) - 1
    rhs = 3 * rho ** 2 / (math.pi ** 2 + rho ** 2)
    pointwise_ok = bool(np.all(lhs >= rhs))
    report(
        f"hardy on the ball: slacks ({rep1.slack:.3e}, {rep2.slack:.3e}) >= 0, "
        f"pointwise defect bound on 1e4 grid = {pointwise_ok}",
        slacks_ok and pointwise_ok,
    )


def test_09_comparison_geometry():
    lap = laplace_comparison_check(3, [-1.0], [0.01, 0.5, 1.0, 2.0, 3.0])
    eq_ok = lap["max_equality_defect"] <= 1e-12
    vol = hyp_volume_ratio_check(3, [0.01, 0.5, 1.0, 2.0, 3.0])
    mono_ok = vol["non_decreasing"] and vol["all_above_omega"]
    limit = hyp_ball_volume(3, 0.01) / 0.01 ** 3
    limit_ok = abs(limit - ball_volume_constant(3)) / ball_volume_constant(3) <= 1e-4
    report(
        f"comparison geometry: laplacian equality defect {lap['max_equality_defect']:.2e} "
        f"(<= 1e-12), volume ratio monotone={mono_ok}, small-radius limit ok={limit_ok}",
        eq_ok and mono_ok and limit_ok,
    )


def test_10_duality_layer():
    norm = MinkowskiNorm(3, "lp", exponent=4.0)
    rng = np.random.Generator(np.random.Philox(key=0x5EED))
    worst = 0.0
    for _ in range(1000):
        alpha = rng.standard_normal(3)
        closed = float(np.sum(np.abs(alpha) ** (4 / 3)) ** 0.75)
        worst = max(worst, abs(dual_norm_value(norm, alpha) - closed) / closed)
    u1 = uniformity_constant(MinkowskiNorm(3, "weighted-euclidean", matrix=np.eye(3)))
    u2 = uniformity_constant(MinkowskiNorm(2, "weighted-euclidean", matrix=np.diag([4.0, 1.0])))
    riem_ok = abs(u1 - 1) <= 1e-6 and abs(u2 - 1) <= 1e-6
    gap = uniformity_constant(MinkowskiNorm(2, "lp", exponent=4.0))
    report(
        f"duality layer: max dual defect {worst:.2e} (<= 1e-8), "
        f"inner-product uniformity = 1 ok={riem_ok}, quartic-norm gap {gap:.4f} (< 0.999)",
        worst <= 1e-8 and riem_ok and gap < 0.999,
    )
