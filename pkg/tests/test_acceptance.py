"""Acceptance suite: one PASS/FAIL line per criterion.

Run on its own with ``python3 -m pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.  Criteria whose literal statement
disagrees with the closed-form geometry are kept literal and fail.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy.stats import norm

from radiso import logconvex as lc
from radiso.analysis import (COMPACT_NON_CLOSED, NON_COMPACT_SIMPLE, SELF_INTERSECTING, ball_comparison,
                             classify, region_measure, region_perimeter)
from radiso.density import exp_r, gaussian, inverse_r, lebesgue, power_law
from radiso.errors import Divergent
from radiso.stationary import StationaryParams, constant_u, integrate_f, solve_curve
from radiso.symmetrize import random_angular_set, set_measure, set_perimeter, symmetrize_set


def report(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\nCriterion {n}: {'PASS' if ok else 'FAIL'} | {detail}")


def test_criterion_01_gaussian_half_space(capsys):
    t0 = time.perf_counter()
    curve = integrate_f(constant_u(1.0, gaussian()))
    r = np.linspace(1 + 1e-6, 10, 2000)
    err_f = float(np.max(np.abs(curve.f_at(r) - np.arccos(1 / r))))
    err_m = abs(region_measure(curve) - norm.sf(1.0))
    err_p = abs(region_perimeter(curve) - math.exp(-0.5) / math.sqrt(2 * math.pi))
    elapsed = time.perf_counter() - t0
    ok = err_f <= 1e-8 and err_m <= 1e-6 and err_p <= 1e-6 and elapsed < 1.0
    report(capsys, 1, ok, f"sup|f-arccos(1/r)|={err_f:.2e} measure err={err_m:.2e} "
                          f"perimeter err={err_p:.2e} time={elapsed:.2f}s")
    assert ok


def test_criterion_02_lebesgue_circle(capsys):
    # literal target: centre (2, 0), radius 1
    curve = solve_curve(StationaryParams(lebesgue(), -0.5, 0.75))
    r = np.linspace(curve.r0, curve.r1, 400)
    f = curve.f_at(r)
    x, y = r * np.cos(f), r * np.sin(f)
    resid = float(np.max(np.abs((x - 2) ** 2 + y ** 2 - 1)))
    alt = float(np.max(np.abs((x + 1) ** 2 + y ** 2 - 4)))
    ok = resid < 1e-6
    report(capsys, 2, ok, f"residual vs centre (2,0) radius 1 = {resid:.3e}; "
                          f"residual vs centre (-1,0) radius 2 = {alt:.3e} (r0={curve.r0:g}, r1={curve.r1:g})")
    assert ok


@pytest.mark.parametrize("lam", [1.5, 2.0, 3.0])
def test_criterion_03_inverse_r_closed_form(capsys, lam):
    curve = solve_curve(StationaryParams(inverse_r(), -1.0, lam))
    expected = math.pi * (1 - lam / math.sqrt(lam * lam - 1))
    err = abs(curve.f_end - expected)
    ok = err <= 1e-6
    report(capsys, 3, ok, f"lambda={lam}: f(r1)={curve.f_end:.12f} expected={expected:.12f} err={err:.2e}")
    assert ok


@pytest.mark.parametrize("lam", [0.25, 0.5, 1.0])
def test_criterion_03_inverse_r_divergent(capsys, lam):
    try:
        solve_curve(StationaryParams(inverse_r(), -1.0, lam))
        ok = False
    except Divergent:
        ok = True
    report(capsys, 3, ok, f"lambda={lam}: rotation integral flagged divergent={ok}")
    assert ok


def test_criterion_04_exponential_shooting(capsys, smooth_exponential, timings):
    res = smooth_exponential
    ratio = ball_comparison(res.curve)
    elapsed = timings["smooth_exponential"]
    ok = 1e-5 <= res.lam <= 1e-3 and res.residual <= 1e-8 and ratio < 1 and elapsed < 30
    report(capsys, 4, ok, f"lambda*={res.lam:.6e} residual={res.residual:.2e} "
                          f"ball ratio={ratio:.6f} time={elapsed:.1f}s")
    assert ok


@pytest.mark.parametrize("alpha,a,lam,tag", [
    (3.0, 0.5, 0.0, NON_COMPACT_SIMPLE),
    (1.0, 0.5, 0.0, SELF_INTERSECTING),
    (1.0, 0.5, -0.1, COMPACT_NON_CLOSED),
])
def test_criterion_05_regime_map(capsys, alpha, a, lam, tag):
    got = classify(solve_curve(StationaryParams(power_law(alpha), a, lam))).tag
    ok = got == tag
    report(capsys, 5, ok, f"alpha={alpha} a={a} lambda={lam}: {got} (expected {tag})")
    assert ok


def test_criterion_06_thresholds(capsys, thresholds, timings):
    est = thresholds
    elapsed = timings["thresholds"]
    crosses = bool(est.heuristic["crosses_pi"])
    ok = 1.02 <= est.alpha0 <= 1.15 and crosses and elapsed < 600
    report(capsys, 6, ok, f"alpha0={est.alpha0:.6f} alpha1={est.alpha1:.6f} "
                          f"heuristic crosses pi in (1.4, 1.6)={crosses} time={elapsed:.1f}s")
    assert ok


def test_criterion_07_symmetrization_suite(capsys):
    law = gaussian()
    R = law.truncation_radius()
    n = 2048
    dr = R / n
    t0 = time.perf_counter()
    worst_gap = math.inf
    measure_exact = idempotent = True
    for k in range(200):
        s = random_angular_set(law, R, np.random.default_rng([7, k]), n=n)
        sym = symmetrize_set(s)
        measure_exact &= set_measure(sym) == set_measure(s)
        idempotent &= symmetrize_set(sym) == sym
        worst_gap = min(worst_gap, set_perimeter(s, warn=False) - set_perimeter(sym, warn=False))
    elapsed = time.perf_counter() - t0
    ok = measure_exact and idempotent and worst_gap >= -10 * dr and elapsed < 120
    report(capsys, 7, ok, f"200 sets: measure exact={measure_exact} idempotent={idempotent} "
                          f"min(P(S)-P(S*))={worst_gap:.3e} (slack {-10 * dr:.3e}) time={elapsed:.1f}s")
    assert ok


def test_criterion_08_divergence_equality_and_cheeger(capsys):
    law = exp_r()
    errs = [abs(lc.divergence_lower_bound(law, R) - 2 * math.pi * R * math.exp(R)) for R in (0.5, 1.0, 2.0)]
    cut = exp_r(domain_radius=5.0)
    slack = math.inf
    for k in range(100):
        A = lc.random_axial_region(5.0, np.random.default_rng([8, k]))
        slack = min(slack, A.perimeter(cut) - A.measure(cut))
    ok = max(errs) <= 1e-9 and slack >= 0
    report(capsys, 8, ok, f"max |bound - 2 pi R e^R|={max(errs):.2e}; min(perimeter - measure) over 100 "
                          f"regions={slack:.4f}")
    assert ok


@pytest.mark.parametrize("d", [2, 3])
def test_criterion_09_corollary_threshold(capsys, d):
    law = lc.gaussian_log_convex(d)
    th = lc.bigballs_threshold(law, 0.3, 20.0)
    fixed = lc.bigballs_threshold(law, 0.3, 20.0, profile=lambda _: lc.corollary_profile(d))
    target = math.sqrt(d + 2)
    ok = abs(th - target) <= 1e-6 and abs(fixed - target) <= 1e-6
    report(capsys, 9, ok, f"v=r^2/2 d={d}: flip (breakpoint at r0)={th:.10f} flip (fixed profile)="
                          f"{fixed:.10f} sqrt(d+2)={target:.10f}")
    assert ok


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("a", [0.5, 1.0])
def test_criterion_09_power_threshold(capsys, d, a):
    th = lc.bigballs_threshold(lc.radial_power_law(a, d), 0.3, 20.0)
    target = ((d + 2) / a) ** (1 / (a + 1))
    ok = abs(th - target) <= 1e-6
    report(capsys, 9, ok, f"v'=r^{a} d={d}: flip={th:.10f} formula={target:.10f} err={th - target:.2e}")
    assert ok


def test_criterion_10_ratio_bound(capsys):
    t0 = time.perf_counter()
    worst = {}
    for name, law, cutoff in (("e^r", exp_r(domain_radius=5.0), 5.0),
                              ("e^{r^2}", lc.gaussian_log_convex(2, scale=1.0, domain_radius=3.0), 3.0)):
        worst[name] = min(lc.ball_ratio_check(law, lc.random_axial_region(cutoff, np.random.default_rng([10, k])))
                          for k in range(500))
    elapsed = time.perf_counter() - t0
    ok = (min(worst.values()) >= lc.RATIO_BOUND - 1e-6 and worst["e^{r^2}"] >= 1 - 1e-6 and elapsed < 300)
    report(capsys, 10, ok, f"min ratio e^r={worst['e^r']:.5f} e^(r^2)={worst['e^{r^2}']:.5f} "
                           f"bound={lc.RATIO_BOUND:.5f} time={elapsed:.1f}s")
    assert ok


def test_criterion_11_model_measure_and_transport(capsys):
    prof_err = 0.0
    for A in (0.5, 1.0, 2.0):
        m = lc.ModelMeasure1D(A)
        for t in np.linspace(0.0, 10.0, 101):
            prof_err = max(prof_err, abs(m.interval_profile(float(t)) - lc.model_profile_1d(A, float(t))))
    nu = lambda B: (lambda x: -np.log(np.cos(B * np.asarray(x, dtype=float))))
    lips = []
    for A, B in ((0.5, 1.0), (1.0, 2.0), (1.0, 1.0 + 1e-3)):
        tm = lc.monotone_transport_1d(A, nu(B), target_half_width=math.pi / (2 * B), points=10_000)
        lips.append(tm.lipschitz_estimate)
    slope_err = 0.0
    for A in (0.5, 1.0, 2.0):
        tm = lc.monotone_transport_1d(A, nu(A), target_half_width=math.pi / (2 * A), points=10_000)
        slope = (tm.T[2:] - tm.T[:-2]) / (tm.x[2:] - tm.x[:-2])
        slope_err = max(slope_err, float(np.max(np.abs(slope - 1))))
    ok = prof_err <= 1e-8 and max(lips) <= 1 + 1e-4 and slope_err <= 1e-10
    report(capsys, 11, ok, f"profile err={prof_err:.2e} max Lipschitz(nu_A->nu_B)={max(lips):.8f} "
                           f"identity slope err={slope_err:.2e}")
    assert ok


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
