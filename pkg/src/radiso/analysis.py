"""Taxonomy, measure and weighted perimeter of regions bounded by stationary curves."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .errors import DomainError, RangeError
from .stationary import ORIGIN, CurveSolution, radial_gap, rotation_integrand

NON_COMPACT_SIMPLE = "NonCompactSimple"
SELF_INTERSECTING = "SelfIntersecting"
COMPACT_NON_CLOSED = "CompactNonClosed"
COMPACT_CLOSED_SMOOTH = "CompactClosedSmooth"
ORIGIN_STARTING = "OriginStarting"

CURVE_CLASSES = (NON_COMPACT_SIMPLE, SELF_INTERSECTING, COMPACT_NON_CLOSED,
                 COMPACT_CLOSED_SMOOTH, ORIGIN_STARTING)


@dataclass(frozen=True)
class CurveClass:
    tag: str

    def __post_init__(self):
        if self.tag not in CURVE_CLASSES:
            raise ValueError(f"unknown curve class {self.tag!r}")

    def __str__(self):
        return self.tag


def classify(curve: CurveSolution, tol: float = 1e-6) -> CurveClass:
    if curve.start == ORIGIN:
        return CurveClass(ORIGIN_STARTING)
    peak = max(float(np.max(np.abs(curve.f))), abs(curve.f_end))
    if not math.isfinite(curve.rotation) or peak > math.pi + tol:
        return CurveClass(SELF_INTERSECTING)
    if curve.unbounded:
        if abs(curve.f_end) >= math.pi - tol:
            # reaches pi only asymptotically or beyond: the branches meet
            return CurveClass(SELF_INTERSECTING)
        return CurveClass(NON_COMPACT_SIMPLE)
    if curve.end_slope_infinite and abs(abs(curve.f_end) - math.pi) <= tol:
        return CurveClass(COMPACT_CLOSED_SMOOTH)
    if not curve.end_slope_infinite and abs(curve.f_end) >= math.pi - tol:
        # pi reached with a finite slope
        return CurveClass(SELF_INTERSECTING)
    return CurveClass(COMPACT_NON_CLOSED)


def _tail(curve: CurveSolution):
    """P(r) = int_r^inf s rho(s) ds (normalised); raises RangeError when infinite."""
    law = curve.law
    if law is None:
        raise DomainError("curve has no attached law")
    if not law.probability and math.isinf(law.domain_radius):
        raise RangeError("region measure diverges for an infinite-mass law without a cutoff")
    return law.radial_tail


def region_measure(curve: CurveSolution) -> float:
    """mu of {|theta| < f(r)}, f extended by its terminal value beyond r1.

    Computed as 2 * [f(r0) P(r0) + int g P dr], which is the same double
    integral as 2 int r f rho dr after exchanging the order of integration.
    """
    P = _tail(curve)
    g = rotation_integrand(curve.u)
    lo_sing = curve.lo_kind in ("crossing", "origin")
    hi_sing = curve.hi_kind == "crossing"
    hi = curve.r1 if not curve.unbounded else curve.r_end
    fun = lambda s, e=None, d=None: g(s, e, d) * P(s)
    body = quadrature.integrate(fun, curve.r0, hi, singular_lo=lo_sing, singular_hi=hi_sing,
                                endpoint_aware=True)
    head = curve.f_start * float(P(np.array(curve.r0)))
    return 2.0 * (head + body)


def total_mass(curve: CurveSolution) -> float:
    return curve.law.total_mass()


def region_perimeter(curve: CurveSolution) -> float:
    """mu+ of the two mirror branches: 2 int r / sqrt(r^2 - u^2) rho dr."""
    law = curve.law
    u = curve.u
    lo_sing = curve.lo_kind in ("crossing", "origin")
    hi_sing = curve.hi_kind == "crossing"
    if curve.unbounded:
        if not law.probability and math.isinf(law.domain_radius):
            raise RangeError("perimeter diverges for an unbounded curve of an infinite-mass law")
        hi = curve.r_end
    else:
        hi = curve.r1

    def fun(s, e=None, d=None):
        minus, plus, _ = radial_gap(u, s, e, d)
        prod = minus * plus
        ok = prod > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(ok, s / np.sqrt(np.where(ok, prod, 1.0)), 0.0)
        return w * law.density(s)

    return 2.0 * quadrature.integrate(fun, curve.r0, hi, singular_lo=lo_sing, singular_hi=hi_sing,
                                      endpoint_aware=True)


def equal_measure_ball_perimeter(law, m: float) -> float:
    """Smallest perimeter of a centred ball or ball complement with measure m."""
    r = law.radius_for_measure(m)
    best = law.ball_perimeter(r)
    if law.probability and m < 1.0:
        best = min(best, law.ball_perimeter(law.radius_for_measure(1.0 - m)))
    return best


def ball_comparison(curve: CurveSolution) -> float:
    """region perimeter / perimeter of the best centred ball (or complement) of equal measure."""
    m = region_measure(curve)
    law = curve.law
    if not 0.0 < m < law.total_mass():
        raise RangeError(f"measure {m} cannot be matched by a centred ball")
    return region_perimeter(curve) / equal_measure_ball_perimeter(law, m)


@dataclass(frozen=True)
class RegionSummary:
    measure: float
    complement_measure: float
    perimeter: float
    rotation: float
    compact: bool
    ball_radius_equal_measure: float
    curve_class: str = ""

    def as_dict(self) -> dict:
        return {
            "measure": self.measure,
            "complement_measure": self.complement_measure,
            "perimeter": self.perimeter,
            "rotation": self.rotation,
            "compact": self.compact,
            "ball_radius_equal_measure": self.ball_radius_equal_measure,
            "class": self.curve_class,
        }


def summarize(curve: CurveSolution, tol: float = 1e-6) -> RegionSummary:
    m = region_measure(curve)
    law = curve.law
    total = law.total_mass()
    try:
        rb = law.radius_for_measure(m) if 0.0 < m < total else math.nan
    except RangeError:
        rb = math.nan
    return RegionSummary(
        measure=m,
        complement_measure=total - m,
        perimeter=region_perimeter(curve),
        rotation=curve.rotation,
        compact=not curve.unbounded,
        ball_radius_equal_measure=rb,
        curve_class=classify(curve, tol).tag,
    )
