"""Shooting in (a, lambda): smooth closures, measure targets, profiles and critical exponents."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from . import analysis, quadrature
from .density import RadialDensity, power_law
from .errors import (Divergent, DomainError, EmptyInterval, Inconclusive, NoSolution, QuadratureError,
                     RangeError)
from .stationary import (ORIGIN, CurveSolution, ExplicitU, StationaryParams, constant_u,
                         integrate_f, rotation_integrand, solve_curve)

CLOSURE_TOL = 1e-8
MEASURE_TOL = 1e-6

NON_COMPACT = "NonCompact"
COMPACT_SMOOTH = "CompactSmooth"
BALL = "Ball"
HALF_PLANE = "HalfPlane"


@dataclass(frozen=True, eq=False)
class ShootingResult:
    a: float
    lam: float
    curve: CurveSolution
    curve_class: str
    summary: analysis.RegionSummary
    residual: float
    iterations: int
    family: str = ""

    def as_dict(self) -> dict:
        out = {"a": self.a, "lambda": self.lam, "c": self.curve.u.c, "class": self.curve_class,
               "residual": self.residual, "iterations": self.iterations, "family": self.family,
               "r0": self.curve.r0, "r1": self.curve.r1}
        out.update({k: v for k, v in self.summary.as_dict().items() if k != "class"})
        return out


@dataclass(frozen=True)
class ProfilePoint:
    target_measure: float
    best_family: str
    perimeter: float
    competitors: tuple
    details: dict = field(default_factory=dict, compare=False)


def _law(alpha, law):
    return power_law(alpha) if law is None else law


def _curve(law, a, lam):
    return solve_curve(StationaryParams(law, a, lam))


def closure_defect(law: RadialDensity, a: float, lam: float):
    """pi - |f(r1)| for curves ending with infinite slope; None when not compact."""
    try:
        c = _curve(law, a, lam)
    except (EmptyInterval, Divergent, DomainError, QuadratureError):
        return None
    if c.unbounded or not c.end_slope_infinite:
        return None
    return math.pi - abs(c.f_end)


def _result(curve, iterations, residual=math.nan, family=""):
    summ = analysis.summarize(curve)
    return ShootingResult(a=curve.u.a, lam=curve.u.lam, curve=curve, curve_class=summ.curve_class,
                          summary=summ, residual=residual, iterations=iterations, family=family)


def _bracket_roots(xs, vals):
    out = []
    for i in range(len(xs) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if v0 is None or v1 is None:
            continue
        if v0 == 0.0:
            out.append((xs[i], xs[i]))
        elif v0 * v1 < 0:
            out.append((xs[i], xs[i + 1]))
    return out


def find_lambda_smooth(alpha: float, a: float, bracket=(1e-300, 1.0), law: RadialDensity | None = None,
                       scan_points: int = 48, tol: float = CLOSURE_TOL) -> ShootingResult:
    """Positive lambda at which both ends of the curve meet smoothly.

    The closure defect g(lambda) = pi - |f(r1)| is bracketed in log(lambda).
    When the defect is not monotone on a probe grid inside the bracket, a
    dense log-spaced scan locates the sign change before bisection.
    """
    if not a > 0:
        raise DomainError("a must be positive")
    lo, hi = bracket
    if not 0 < lo < hi:
        raise DomainError("bracket must satisfy 0 < lo < hi")
    law = _law(alpha, law)
    calls = [0]

    def defect(ll):
        calls[0] += 1
        return closure_defect(law, a, math.exp(ll))

    l0, l1 = math.log(lo), math.log(hi)
    probe = np.linspace(l0, l1, 9)
    pv = [defect(x) for x in probe]
    good = [v for v in pv if v is not None]
    monotone = (len(good) == len(pv)
                and (all(np.diff(good) >= 0) or all(np.diff(good) <= 0)))
    if monotone and good[0] * good[-1] < 0:
        brackets = [(l0, l1)]
    else:
        top = _valid_top(defect, probe, pv)
        if top is None:
            raise NoSolution(f"no compact curve for alpha={alpha:g}, a={a:g} in lambda bracket {bracket}")
        # closures sit just below the largest admissible lambda: refine there
        split = max(l0, top - 24.0)
        xs = np.concatenate([np.linspace(l0, split, max(scan_points // 4, 2))[:-1],
                             np.linspace(split, top, scan_points)])
        brackets = _bracket_roots(list(xs), [defect(x) for x in xs])
        if not brackets:
            raise NoSolution(f"no smooth closure for alpha={alpha:g}, a={a:g} in lambda bracket {bracket}")
    for b0, b1 in brackets:
        if b0 == b1:
            ll = b0
        else:
            try:
                ll = optimize.brentq(lambda x: _nan_to_num(defect(x)), b0, b1, xtol=1e-13, rtol=1e-15,
                                     maxiter=200)
            except ValueError:
                continue
        lam = math.exp(ll)
        c = _curve(law, a, lam)
        if c.unbounded or not c.end_slope_infinite:
            continue
        resid = abs(math.pi - abs(c.f_end))
        if resid <= tol:
            return _result(c, calls[0], resid, COMPACT_SMOOTH)
    raise NoSolution(f"closure defect could not be driven below {tol:g} for alpha={alpha:g}, a={a:g}")


def _valid_top(defect, probe, pv):
    """Largest log-lambda in the probe range whose curve is compact (bisection on validity)."""
    ok = [i for i, v in enumerate(pv) if v is not None]
    if not ok:
        return None
    i = ok[-1]
    if i == len(probe) - 1:
        return float(probe[-1])
    lo, hi = float(probe[i]), float(probe[i + 1])
    for _ in range(24):
        mid = 0.5 * (lo + hi)
        if defect(mid) is None:
            hi = mid
        else:
            lo = mid
    return lo


def _nan_to_num(v):
    # a degenerate curve inside a bracket: push bisection back toward the valid side
    return -math.pi if v is None else v


def negative_lambda_closures(alpha: float, a: float, law: RadialDensity | None = None, points: int = 48):
    """Negative lambda values with |f(r1)| = pi; these curves are self-intersecting and never candidates."""
    law = _law(alpha, law)
    xs = np.linspace(math.log(1e-8), math.log(10.0), points)
    vals = [closure_defect(law, a, -math.exp(x)) for x in xs]
    out = []
    for b0, b1 in _bracket_roots(list(xs), vals):
        ll = b0 if b0 == b1 else optimize.brentq(
            lambda x: _nan_to_num(closure_defect(law, a, -math.exp(x))), b0, b1, xtol=1e-12)
        out.append(-math.exp(ll))
    return out


# -- measure targets ---------------------------------------------------------

def half_plane(law: RadialDensity) -> CurveSolution:
    """The diameter line: u == 0 started at the origin with f = pi/2."""
    return integrate_f(constant_u(0.0, law), start=ORIGIN)


def _noncompact_measure(law, a):
    try:
        c = _curve(law, a, 0.0)
    except (EmptyInterval, Divergent, QuadratureError):
        return None, None
    if not c.unbounded or analysis.classify(c).tag != analysis.NON_COMPACT_SIMPLE:
        return None, c
    return analysis.region_measure(c), c


def find_a_for_measure(alpha: float, target_m: float, family: str = NON_COMPACT,
                       law: RadialDensity | None = None, a_range=(1e-3, 20.0), points: int = 48
                       ) -> ShootingResult:
    """Coefficient a whose curve in ``family`` bounds a region of measure ``target_m``.

    Several roots may exist; the one with the smallest perimeter is returned.
    """
    if not 0.0 < target_m < 1.0:
        raise NoSolution("target measure must lie strictly between 0 and 1")
    law = _law(alpha, law)
    if family == NON_COMPACT:
        if abs(target_m - 0.5) < 1e-12:
            hp = half_plane(law)
            return _result(hp, 0, 0.0, HALF_PLANE)
        measure = lambda a: _noncompact_measure(law, a)[0]
        a_grid = np.geomspace(a_range[0], a_range[1], points)
        warm = None
    elif family == COMPACT_SMOOTH:
        cache = _family_cache(law)

        def measure(a):
            if a not in cache:
                try:
                    cache[a] = _compact_smooth(alpha, a, law, cache)
                except (NoSolution, DomainError):
                    cache[a] = None
            res = cache[a]
            return None if res is None else res.summary.measure

        a_grid = np.linspace(0.2, 0.7, 11)
    else:
        raise DomainError(f"unknown family {family!r}")

    vals = [measure(a) for a in a_grid]
    diffs = [None if v is None else v - target_m for v in vals]
    roots = []
    for b0, b1 in _bracket_roots(list(a_grid), diffs):
        if b0 == b1:
            roots.append(b0)
            continue
        def fn(a):
            v = measure(a)
            return math.nan if v is None else v - target_m

        try:
            roots.append(optimize.brentq(fn, b0, b1, xtol=1e-12, rtol=1e-14))
        except ValueError:
            continue
    best = None
    for a in roots:
        if family == NON_COMPACT:
            m, c = _noncompact_measure(law, a)
            if m is None or abs(m - target_m) > MEASURE_TOL:
                continue
            res = _result(c, len(a_grid), abs(m - target_m), NON_COMPACT)
        else:
            measure(a)
            res = cache.get(a)
            if res is None or abs(res.summary.measure - target_m) > MEASURE_TOL:
                continue
        if best is None or res.summary.perimeter < best.summary.perimeter:
            best = res
    if best is None:
        raise NoSolution(f"measure {target_m} not reached by the {family} family for alpha={alpha:g}")
    return best


# lambda*(a) per law; solutions are deterministic so they are shared between calls
_FAMILIES: dict = {}


def _family_cache(law):
    key = (law.name, law.dimension, law.domain_radius)
    return _FAMILIES.setdefault(key, {})


def _compact_smooth(alpha, a, law, cache):
    # warm start from the nearest a already solved
    solved = [(abs(k - a), v) for k, v in cache.items() if v is not None]
    if solved:
        near = min(solved, key=lambda kv: kv[0])[1]
        ll = math.log(near.lam)
        for width in (1.0, 4.0):
            try:
                return find_lambda_smooth(alpha, a, (math.exp(ll - width), math.exp(min(ll + width, 0.0))),
                                          law=law)
            except NoSolution:
                pass
    return find_lambda_smooth(alpha, a, law=law)


# -- profiles ----------------------------------------------------------------

def profile_point(alpha: float, target_m: float, law: RadialDensity | None = None,
                  families=(NON_COMPACT, COMPACT_SMOOTH, BALL, HALF_PLANE)) -> ProfilePoint:
    """Best perimeter among the stationary families (and complements) at measure ``target_m``."""
    if not 0.0 < target_m < 1.0:
        raise RangeError("target measure must lie in (0, 1)")
    law = _law(alpha, law)
    comp, details = [], {}
    if BALL in families:
        comp.append((BALL, analysis.equal_measure_ball_perimeter(law, target_m)))
    if HALF_PLANE in families and abs(target_m - 0.5) < 1e-12:
        comp.append((HALF_PLANE, analysis.region_perimeter(half_plane(law))))
    for fam in (NON_COMPACT, COMPACT_SMOOTH):
        if fam not in families:
            continue
        for m, side in ((target_m, "region"), (1.0 - target_m, "complement")):
            try:
                res = find_a_for_measure(alpha, m, fam, law=law)
            except (NoSolution, DomainError, RangeError):
                continue
            if res.family == HALF_PLANE:
                continue
            comp.append((fam, res.summary.perimeter))
            details[f"{fam}:{side}"] = res.as_dict()
    if not comp:
        raise NoSolution(f"no family produced a set of measure {target_m}")
    best = min(comp, key=lambda kv: kv[1])
    return ProfilePoint(target_m, best[0], best[1], tuple(comp), details)


# -- critical exponents ------------------------------------------------------

def rotation_lambda0(alpha: float, a: float):
    """Full rotation of the lambda = 0 curve of the alpha power law (None beyond the scan range)."""
    try:
        return _curve(power_law(alpha), a, 0.0).rotation
    except EmptyInterval:
        return None


def _a1(alpha, a_grid):
    rots = [rotation_lambda0(alpha, a) for a in a_grid]
    seen = [v for v in rots if v is not None]
    above = [i for i, v in enumerate(rots) if v is not None and v > math.pi]
    if not above or above[0] == 0 or rots[above[0] - 1] is None:
        return None, max(seen)
    i = above[0]
    a1 = optimize.brentq(lambda a: rotation_lambda0(alpha, a) - math.pi, a_grid[i - 1], a_grid[i],
                         xtol=1e-13, rtol=1e-14)
    return a1, max(seen)


def asymptotic_rotation(alpha: float, a: float) -> float:
    """Rotation of u = a r**(2 - alpha) by direct quadrature."""
    if not 1.0 < alpha < 2.0 or not a > 0:
        raise DomainError("need 1 < alpha < 2 and a > 0")
    u = ExplicitU(lambda r: a * np.power(r, 2.0 - alpha),
                  lambda r: a * (2.0 - alpha) * np.power(r, 1.0 - alpha), c=0.0)
    g = rotation_integrand(u)
    r0 = a ** (1.0 / (alpha - 1.0))
    head = quadrature.integrate(g, r0, 2.0 * r0, singular_lo=True, endpoint_aware=True)
    # beyond 2 r0 use s = 2 r0 / w**(1/(alpha-1)) so the slow algebraic decay becomes a finite range
    p = 1.0 / (alpha - 1.0)

    def mapped(w):
        w = np.asarray(w, dtype=float)
        s = 2.0 * r0 * np.power(w, -p)
        return g(s) * 2.0 * r0 * p * np.power(w, -p - 1.0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
        tail, _ = sp_integrate.quad(lambda w: float(mapped(np.array(w))), 0.0, 1.0,
                                    epsabs=1e-13, epsrel=1e-12, limit=400)
    return head + tail


@dataclass(frozen=True)
class ThresholdEstimate:
    alpha0: float
    alpha1: float
    a_range: tuple
    evidence: tuple
    heuristic: dict

    def __iter__(self):
        yield self.alpha0
        yield self.alpha1


def estimate_alpha_thresholds(grid, a_range=(0.01, 50.0), a_points: int = 40,
                              heuristic_alphas=(1.4, 1.6)) -> ThresholdEstimate:
    """Critical exponents of the lambda = 0 family.

    alpha0: a0(alpha) = a1(alpha), i.e. the curve with rotation exactly pi
    bounds measure 1/2.  alpha1: supremum over the a-range of the rotation
    falls below pi.  Both are bracketed on ``grid`` and refined by bisection.
    """
    grid = sorted(float(x) for x in grid)
    if len(grid) < 8 or grid[0] <= 1.0 or grid[-1] >= 2.0:
        raise DomainError("grid needs at least 8 exponents inside (1, 2)")
    a_grid = np.geomspace(a_range[0], a_range[1], a_points)

    def d0(alpha):
        a1, _ = _a1(alpha, a_grid)
        if a1 is None:
            return None, None
        return analysis.region_measure(_curve(power_law(alpha), a1, 0.0)) - 0.5, a1

    def sup_rot(alpha):
        return max(v for v in (rotation_lambda0(alpha, a) for a in a_grid) if v is not None) - math.pi

    rows = []
    for al in grid:
        dm, a1 = d0(al)
        rows.append({"alpha": al, "a1": a1, "measure_at_a1_minus_half": dm, "sup_rotation_minus_pi": sup_rot(al)})

    alpha0 = _bisect_grid(grid, [r["measure_at_a1_minus_half"] for r in rows], lambda x: d0(x)[0])
    alpha1 = _bisect_grid(grid, [r["sup_rotation_minus_pi"] for r in rows], sup_rot)
    if alpha0 is None or alpha1 is None:
        raise Inconclusive("grid does not bracket both thresholds")

    heur = {}
    for al in heuristic_alphas:
        heur[al] = max(asymptotic_rotation(al, a) for a in np.geomspace(0.05, 20.0, 16))
    lo, hi = min(heuristic_alphas), max(heuristic_alphas)
    heur_info = {"sup_rotation": heur, "closed_form": {al: math.pi / (2 * (al - 1)) for al in heuristic_alphas},
                 "crosses_pi": heur[lo] > math.pi > heur[hi]}
    return ThresholdEstimate(alpha0, alpha1, (a_range[0], a_range[1], a_points), tuple(rows), heur_info)


def _bisect_grid(xs, vals, fn):
    for b0, b1 in _bracket_roots(xs, vals):
        if b0 == b1:
            return b0
        f0 = fn(b0)
        lo, hi = b0, b1
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            fm = fn(mid)
            if fm is None:
                return None
            if (fm > 0) == (f0 > 0):
                lo, f0 = mid, fm
            else:
                hi = mid
            if hi - lo < 1e-9:
                break
        return 0.5 * (lo + hi)
    return None
