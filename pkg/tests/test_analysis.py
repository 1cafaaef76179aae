from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, special

from radiso import analysis
from radiso.analysis import (COMPACT_CLOSED_SMOOTH, COMPACT_NON_CLOSED, NON_COMPACT_SIMPLE, ORIGIN_STARTING,
                             SELF_INTERSECTING, CurveClass, ball_comparison, classify, region_measure,
                             region_perimeter, summarize)
from radiso.density import exp_r, gaussian, power_law
from radiso.errors import RangeError
from radiso.shooting import half_plane
from radiso.stationary import StationaryParams, constant_u, integrate_f, solve_curve

PHI_BAR_1 = 0.5 * special.erfc(1 / math.sqrt(2))


def curve(alpha, a, lam=0.0):
    return solve_curve(StationaryParams(power_law(alpha), a, lam))


@pytest.mark.parametrize("alpha,a,lam,tag", [
    (3.0, 0.5, 0.0, NON_COMPACT_SIMPLE),
    (1.0, 0.5, 0.0, SELF_INTERSECTING),
    (1.0, 0.5, -0.1, COMPACT_NON_CLOSED),
    (1.0, 0.5, 1e-4, SELF_INTERSECTING),
])
def test_regime_map(alpha, a, lam, tag):
    assert classify(curve(alpha, a, lam)).tag == tag


@pytest.mark.xfail(strict=True, reason="lambda = 1e-4 overshoots: rotation is about 1.011 pi; "
                                       "the smooth closure sits at 2.359e-4")
def test_regime_map_literal_smooth_at_1e_4():
    assert classify(curve(1.0, 0.5, 1e-4)).tag == COMPACT_CLOSED_SMOOTH


def test_smooth_closed_curve_class(smooth_exponential):
    assert classify(smooth_exponential.curve).tag == COMPACT_CLOSED_SMOOTH


def test_origin_start_class():
    c = integrate_f(constant_u(0.0, gaussian()), start="Origin")
    assert classify(c).tag == ORIGIN_STARTING


def test_unknown_tag_rejected():
    with pytest.raises(ValueError):
        CurveClass("Spiral")


@pytest.mark.parametrize("law", [gaussian(), power_law(1.0), power_law(3.0)], ids=lambda l: l.name)
def test_half_plane_measure(law):
    hp = half_plane(law)
    assert region_measure(hp) == pytest.approx(0.5, abs=1e-12)


def test_half_plane_gaussian_perimeter_and_ratio():
    hp = half_plane(gaussian())
    assert region_perimeter(hp) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-12)
    ball = math.sqrt(2 * math.log(2)) * 0.5  # r exp(-r^2/2) at r = sqrt(2 ln 2)
    assert ball_comparison(hp) == pytest.approx(region_perimeter(hp) / ball, rel=1e-10)
    assert ball_comparison(hp) < 1


def test_gaussian_half_space_measure_and_perimeter():
    c = integrate_f(constant_u(1.0, gaussian()))
    assert abs(region_measure(c) - PHI_BAR_1) < 1e-10
    assert abs(region_perimeter(c) - math.exp(-0.5) / math.sqrt(2 * math.pi)) < 1e-10


def test_far_half_space_is_negligible():
    c = integrate_f(constant_u(30.0, gaussian()))
    assert region_measure(c) < 1e-150


def test_smooth_closure_beats_the_ball(smooth_exponential):
    assert ball_comparison(smooth_exponential.curve) < 1


@pytest.mark.parametrize("alpha,a,lam", [(3.0, 0.5, 0.0), (1.0, 0.5, -0.1), (2.0, 0.4, 0.0)])
def test_summary_mass_balance_and_tol_stability(alpha, a, lam):
    c = curve(alpha, a, lam)
    s = summarize(c)
    assert s.measure + s.complement_measure == pytest.approx(1.0, abs=1e-8)
    assert classify(c, 1e-6) == classify(c, 5e-7)
    assert s.as_dict()["class"] == classify(c).tag


def test_closed_curve_mass_balance(smooth_exponential):
    s = summarize(smooth_exponential.curve)
    assert 0 < s.measure < 1
    assert s.measure + s.complement_measure == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("alpha,a,lam", [(3.0, 0.5, 0.0), (1.0, 0.5, -0.1), (1.5, 0.6, 0.0)])
def test_perimeter_dominates_radial_weight(alpha, a, lam):
    c = curve(alpha, a, lam)
    law = c.law
    hi = c.r1 if not c.unbounded else c.r_end
    lower = 2 * integrate.quad(lambda r: float(law.density(r)), c.r0, hi, epsabs=1e-14)[0]
    assert region_perimeter(c) >= lower - 1e-12


def test_infinite_mass_law_needs_cutoff():
    c = solve_curve(StationaryParams(exp_r(), 0.5, 0.5))
    with pytest.raises(RangeError):
        region_measure(c)


@pytest.mark.parametrize("a,lam", [(-0.5, 0.5), (-1.0, 1.0), (0.5, 0.5)])
def test_perimeter_exceeds_divergence_bound_for_log_convex_law(a, lam):
    """Cross-module check: the curve's branches plus the cap arc at the cutoff bound the region."""
    law = exp_r(domain_radius=4.0)
    c = solve_curve(StationaryParams(law, a, lam))
    R = c.r1
    x, w = np.polynomial.legendre.leggauss(200)
    r = 0.5 * (R - c.r0) * x + 0.5 * (R + c.r0)
    w = 0.5 * (R - c.r0) * w
    f = np.abs(c.f_at(r))
    bound = 2 * np.sum(w * f * (1 + r) * np.exp(r))
    per = region_perimeter(c) + 2 * abs(c.f_end) * R * math.exp(R)
    assert per >= bound - 1e-8
