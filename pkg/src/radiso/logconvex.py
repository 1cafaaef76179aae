"""Log-convex radial measures: divergence bounds, big-ball certificates, ratio checks, 1-D transport."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from . import quadrature
from .density import RadialDensity, sphere_area
from .errors import DomainError, PreconditionError, RangeError

RATIO_BOUND = 1.0 / math.sqrt(1.0 + math.pi ** 2)
VALUE_TOL = 8 * np.finfo(float).eps


def _quad(fun, lo, hi):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
        return sp_integrate.quad(fun, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)[0]


# -- axially symmetric test regions --------------------------------------------

@dataclass(frozen=True)
class AxialRegion:
    """{(r, theta): r_a < r < r_b, |theta| < F(r)} in the plane, 0 < F <= pi."""

    r_a: float
    r_b: float
    F: Callable
    dF: Callable

    def __post_init__(self):
        if not 0.0 <= self.r_a < self.r_b:
            raise DomainError("need 0 <= r_a < r_b")

    def measure(self, law: RadialDensity) -> float:
        return 2.0 * law.normalization * _quad(
            lambda r: float(self.F(r)) * r * math.exp(law.sign * float(law.potential(r))), self.r_a, self.r_b)

    def perimeter(self, law: RadialDensity) -> float:
        rho = lambda r: float(law.density(r))

        def side(r):
            Fr = float(self.F(r))
            if Fr >= math.pi:
                return 0.0  # the two branches coincide on the negative axis
            return math.sqrt(1.0 + (r * float(self.dF(r))) ** 2) * rho(r)

        caps = 2.0 * float(self.F(self.r_b)) * self.r_b * rho(self.r_b)
        if self.r_a > 0:
            caps += 2.0 * float(self.F(self.r_a)) * self.r_a * rho(self.r_a)
        return caps + 2.0 * _quad(side, self.r_a, self.r_b)

    def integral(self, law: RadialDensity, G) -> float:
        """int_A G(r) dmu."""
        return 2.0 * _quad(lambda r: float(G(r)) * float(self.F(r)) * r * float(law.density(r)),
                           self.r_a, self.r_b)


def random_axial_region(cutoff: float, rng: np.random.Generator) -> AxialRegion:
    """Smooth random region inside B_cutoff with 0 < F < pi."""
    r_a = 0.0 if rng.random() < 0.5 else rng.uniform(0.0, 0.5 * cutoff)
    r_b = rng.uniform(r_a + 0.1 * cutoff, cutoff)
    c = rng.uniform(0.1, 0.9) * math.pi
    b = 0.95 * rng.uniform(0.0, 1.0) * min(c, math.pi - c)
    w = rng.uniform(0.0, 6.0 / cutoff)
    ph = rng.uniform(0.0, 2.0 * math.pi)
    return AxialRegion(r_a, r_b, lambda r: c + b * np.sin(w * r + ph), lambda r: b * w * np.cos(w * r + ph))


# -- divergence-theorem lower bound --------------------------------------------

def _require_log_convex_sign(density):
    if density.sign != 1:
        raise PreconditionError("this bound is stated for densities exp(v) with increasing v")


def divergence_lower_bound(density: RadialDensity, region) -> float:
    """int_A ((d-1)/r + v'(r)) dmu for a centred ball (radius given) or a planar region."""
    _require_log_convex_sign(density)
    d = density.dimension
    kern = lambda r: (d - 1) / r + float(density.potential_deriv(r)) if r > 0 else 0.0
    if isinstance(region, (int, float)):
        R = float(region)
        om = sphere_area(d)
        val = om * _quad(lambda r: ((d - 1) * r ** (d - 2) + float(density.potential_deriv(r)) * r ** (d - 1))
                         * float(density.density(r)), 0.0, R)
        return val
    if d != 2:
        raise DomainError("non-ball regions are planar")
    if isinstance(region, AxialRegion):
        return 2.0 * _quad(lambda r: float(region.F(r)) * (1.0 + r * float(density.potential_deriv(r)))
                           * float(density.density(r)), region.r_a, region.r_b)
    from .symmetrize import AngularSet

    if isinstance(region, AngularSet):
        r = region.radii
        return float(np.sum(region.lengths * (1.0 + r * density.potential_deriv(r)) * density.density(r))
                     * region.ring_spacing)
    raise TypeError(f"unsupported region type {type(region).__name__}")


def ball_bound_is_minimal(density: RadialDensity, F, m: float) -> float:
    """int over the centred ball of measure m of F dmu (the minimum over sets of that measure)."""
    r = density.radius_for_measure(m)
    d = density.dimension
    return sphere_area(d) * _quad(lambda s: float(F(s)) * s ** (d - 1) * float(density.density(s)), 0.0, r)


# -- big balls -------------------------------------------------------------------

@dataclass(frozen=True)
class CubicProfile:
    """f(r) = 3/(2R) (r - r^3/(3R^2)) for r <= R, 1 beyond; C^1 with f(R) = 1."""

    R: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        R = self.R
        return np.where(r <= R, 1.5 / R * (r - r ** 3 / (3 * R * R)), 1.0)

    def d1(self, r):
        r = np.asarray(r, dtype=float)
        R = self.R
        return np.where(r <= R, 1.5 / R * (1 - r * r / (R * R)), 0.0)

    def d2(self, r):
        r = np.asarray(r, dtype=float)
        R = self.R
        return np.where(r <= R, -3.0 * r / R ** 3, 0.0)

    @property
    def breakpoints(self):
        return (self.R,)


def corollary_profile(d: int) -> CubicProfile:
    return CubicProfile(math.sqrt(d + 2.0))


def _F_and_slope(density, f, r):
    d = density.dimension
    vp = density.potential_deriv(r)
    F = f.d1(r) + f(r) * (vp + (d - 1) / r)
    dF = f.d2(r) + f.d1(r) * (vp + (d - 1) / r) + f(r) * (density.potential_second_deriv(r) - (d - 1) / r ** 2)
    return F, dF


def _slope_noise(density, f, r):
    """Rounding budget for F': near r = 0 the terms f'/r and f/r**2 cancel."""
    d = density.dimension
    vp = np.abs(density.potential_deriv(r))
    scale = (np.abs(f.d2(r)) + np.abs(f.d1(r)) * (vp + (d - 1) / r)
             + np.abs(f(r)) * (np.abs(density.potential_second_deriv(r)) + (d - 1) / r ** 2))
    return 64 * np.finfo(float).eps * scale


def bigballs_certificate(density: RadialDensity, f, r0: float, r_check: float | None = None,
                         points: int = 20001, tol: float = 1e-12) -> bool:
    """True iff |f| <= 1, f(r0) = 1 and F = f' + f (v' + (d-1)/r) is nondecreasing.

    Monotonicity is checked on the grid and, when ``f`` exposes derivatives
    ``d1``/``d2``, through the sign of F' including a local search around the
    smallest grid value on each smooth piece.
    """
    _require_log_convex_sign(density)
    if not r0 > 0:
        raise DomainError("r0 must be positive")
    top = r_check if r_check is not None else max(4.0 * r0, 10.0)
    r = np.unique(np.concatenate([np.geomspace(1e-6 * min(r0, 1.0), top, points // 2),
                                  np.linspace(1e-6, top, points // 2), [r0]]))
    fv = np.asarray(f(r), dtype=float)
    if not np.all(np.isfinite(fv)):
        raise DomainError("profile is not finite on the check grid")
    if np.max(np.abs(fv)) > 1.0 + tol:
        return False
    # f touches 1 tangentially at the breakpoint, so a loose test here would
    # shift the flip point by about sqrt(tol)
    if abs(float(f(np.array(r0))) - 1.0) > VALUE_TOL:
        return False
    if not (hasattr(f, "d1") and hasattr(f, "d2")):
        d = density.dimension
        step = 1e-6 * np.maximum(r, 1.0)
        dfv = (np.asarray(f(r + step)) - np.asarray(f(r - step))) / (2 * step)
        F = dfv + fv * (density.potential_deriv(r) + (d - 1) / r)
        return bool(np.all(np.diff(F) >= -tol))
    F, dF = _F_and_slope(density, f, r)
    if np.any(np.diff(F) < -tol) or np.any(dF < -tol - _slope_noise(density, f, r)):
        return False
    # grid minima of F' can sit between nodes: refine on each smooth piece
    cuts = [0.0] + [b for b in getattr(f, "breakpoints", ()) if 0 < b < top] + [top]
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        sel = (r > lo) & (r < hi)
        if sel.sum() < 3:
            continue
        rs, ds = r[sel], dF[sel]
        k = int(np.argmin(ds))
        a, b = rs[max(k - 1, 0)], rs[min(k + 1, rs.size - 1)]
        res = optimize.minimize_scalar(lambda x: float(_F_and_slope(density, f, np.array(x))[1]),
                                       bounds=(a, b), method="bounded", options={"xatol": 1e-14})
        if res.fun < -tol - float(_slope_noise(density, f, np.array(res.x))):
            return False
    return True


def bigballs_threshold(density: RadialDensity, lo: float, hi: float, profile=CubicProfile,
                       xtol: float = 1e-10) -> float:
    """Smallest r0 in [lo, hi] certified by ``profile(r0)`` (bisection on the boolean)."""
    ok = lambda x: bigballs_certificate(density, profile(x), x)
    if ok(lo) or not ok(hi):
        raise RangeError("certificate does not flip inside the bracket")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def radial_power_law(a: float, dimension: int = 2, domain_radius: float = math.inf) -> RadialDensity:
    """exp(v) with v' = r**a, i.e. v = r**(a+1)/(a+1)."""
    if not a > 0:
        raise DomainError("a must be positive")
    return RadialDensity(
        sign=1,
        potential=lambda r: np.power(r, a + 1.0) / (a + 1.0),
        potential_deriv=lambda r: np.power(r, a),
        potential_deriv2=lambda r: a * np.power(r, a - 1.0),
        dimension=dimension,
        domain_radius=domain_radius,
        name=f"radial_power:{a:g}",
        params={"a": a},
    )


def gaussian_log_convex(dimension: int = 2, scale: float = 0.5, domain_radius: float = math.inf):
    """exp(scale * r^2); scale = 1/2 gives v'' = 1, scale = 1 the Borell weight exp(r^2)."""
    return RadialDensity(
        sign=1,
        potential=lambda r: scale * np.square(r),
        potential_deriv=lambda r: 2.0 * scale * np.asarray(r, dtype=float),
        potential_deriv2=lambda r: np.full_like(np.asarray(r, dtype=float), 2.0 * scale),
        dimension=dimension,
        domain_radius=domain_radius,
        name=f"exp_r2:{scale:g}",
    )


# -- ratio to balls ----------------------------------------------------------------

def check_log_convex(density: RadialDensity, top: float | None = None, points: int = 2001):
    _require_log_convex_sign(density)
    top = top if top is not None else (density.domain_radius if math.isfinite(density.domain_radius) else 10.0)
    r = np.linspace(1e-3, top, points)
    if np.any(density.potential_second_deriv(r) < -1e-10) or np.any(density.potential_deriv(r) < -1e-10):
        raise PreconditionError("potential is not convex and increasing on the sample grid")


def region_measure_perimeter(density: RadialDensity, region):
    from .symmetrize import AngularSet, set_measure, set_perimeter
    from .stationary import CurveSolution

    if isinstance(region, (int, float)):
        R = float(region)
        return density.ball_measure(R), density.ball_perimeter(R)
    if isinstance(region, AxialRegion):
        return region.measure(density), region.perimeter(density)
    if isinstance(region, AngularSet):
        return set_measure(region), set_perimeter(region)
    if isinstance(region, CurveSolution):
        from . import analysis

        return analysis.region_measure(region), analysis.region_perimeter(region)
    raise TypeError(f"unsupported region type {type(region).__name__}")


def ball_ratio_check(density: RadialDensity, region) -> float:
    """mu+(dA) / mu+(dB) with B the centred ball of the same measure."""
    check_log_convex(density)
    m, per = region_measure_perimeter(density, region)
    r = density.radius_for_measure(m)
    return per / density.ball_perimeter(r)


# -- one-dimensional model measure and transport ---------------------------------

def model_profile_1d(A: float, t: float) -> float:
    if not A > 0:
        raise DomainError("A must be positive")
    if t < 0:
        raise DomainError("t must be nonnegative")
    return math.exp(A * t / 2.0) + math.exp(-A * t / 2.0)


def _gl_cells(fun, edges):
    return quadrature._gl(fun, edges[:-1], edges[1:])


@dataclass(frozen=True)
class ModelMeasure1D:
    """nu_A = dx / cos(A x) on (-pi/(2A), pi/(2A)); potential V = -log cos(A x)."""

    A: float

    def __post_init__(self):
        if not self.A > 0:
            raise DomainError("A must be positive")

    @property
    def half_width(self) -> float:
        return math.pi / (2.0 * self.A)

    def potential(self, x):
        return -np.log(np.cos(self.A * np.asarray(x, dtype=float)))

    def density(self, x):
        return 1.0 / np.cos(self.A * np.asarray(x, dtype=float))

    def potential_deriv2(self, x):
        return self.A ** 2 / np.cos(self.A * np.asarray(x, dtype=float)) ** 2

    def cdf0(self, x: float) -> float:
        """nu_A((0, x)) by adaptive quadrature."""
        if abs(x) >= self.half_width:
            raise DomainError("x outside the support")
        return math.copysign(quadrature.integrate(self.density, 0.0, abs(x)), x)

    def _edge_mass(self, y: float) -> float:
        """nu_A((hw - y, hw)) written as int_y^hw dw / sin(A w), exact near the support edge."""
        return quadrature.integrate(lambda w: 1.0 / np.sin(self.A * w), y, self.half_width,
                                    atol=0.0, rtol=1e-15)

    def edge_gap(self, t: float) -> float:
        """Distance y from the support edge to the endpoint of the symmetric interval of measure t."""
        if t < 0:
            raise DomainError("t must be nonnegative")
        hw = self.half_width
        if t == 0:
            return hw
        lo = 0.5 * hw
        while self._edge_mass(lo) < 0.5 * t:
            lo *= 0.5
        return optimize.brentq(lambda y: self._edge_mass(y) - 0.5 * t, lo, hw, xtol=1e-300, rtol=1e-15,
                               maxiter=300)

    def symmetric_interval(self, t: float) -> float:
        """Half-width x of the interval (-x, x) with nu_A-measure t."""
        return self.half_width - self.edge_gap(t)

    def interval_profile(self, t: float) -> float:
        """Boundary weight 2 / cos(A x) of the symmetric interval of measure t."""
        return 2.0 / math.sin(self.A * self.edge_gap(t))


@dataclass(frozen=True, eq=False)
class TransportMap:
    source: ModelMeasure1D
    target_potential: Callable
    x: np.ndarray
    T: np.ndarray
    lipschitz_estimate: float
    pushforward_residual: float
    hypotheses_ok: bool
    notes: dict = field(default_factory=dict)

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.T.tolist()))


def check_transport_hypotheses(A: float, W, half_width: float, rel: float = 1e-6, points: int = 2001,
                               fraction: float = 0.9):
    """Evenness, W(0) = 0, convexity and W'' exp(-2W) >= A^2 by central differences."""
    top = fraction * half_width
    h = 1e-4 * (2 * top)
    x = np.linspace(-top + h, top - h, points)
    w = np.asarray(W(x), dtype=float)
    problems = []
    if abs(float(W(np.array(0.0)))) > 1e-12:
        problems.append("W(0) != 0")
    if np.max(np.abs(w - np.asarray(W(-x), dtype=float))) > 1e-10 * max(1.0, float(np.max(np.abs(w)))):
        problems.append("W is not even")
    w2 = (np.asarray(W(x + h)) - 2 * w + np.asarray(W(x - h))) / (h * h)
    if np.any(w2 < -1e-8):
        problems.append("W is not convex")
    if np.any(w2 * np.exp(-2 * w) < A * A * (1 - rel)):
        problems.append("W'' exp(-2W) < A^2")
    return problems


def monotone_transport_1d(A: float, W, target_half_width: float = math.inf, points: int = 10_000,
                          support_fraction: float = 0.99, force: bool = False) -> TransportMap:
    """Increasing map T = G^{-1} o F_A pushing nu_A to exp(W) dx, computed on x >= 0 and reflected.

    F_A and G are cumulative quadratures measured from 0; G is inverted by
    bisection inside the panel that brackets each target value.
    """
    src = ModelMeasure1D(A)
    check_width = target_half_width if math.isfinite(target_half_width) else 10.0 / A
    problems = check_transport_hypotheses(A, W, check_width)
    if problems and not force:
        raise PreconditionError("; ".join(problems))

    X = support_fraction * src.half_width
    x = np.linspace(0.0, X, points // 2 + 1)
    Fx = np.concatenate([[0.0], np.cumsum(_gl_cells(src.density, x))])
    target = lambda y: np.exp(np.asarray(W(y), dtype=float))
    G = lambda y: quadrature.integrate(target, 0.0, y)

    # upper end of the target table: G(Y) >= F_A(X)
    need = Fx[-1]
    if math.isfinite(target_half_width):
        lo, hi = 0.0, target_half_width
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if G(mid) >= need:
                hi = mid
            else:
                lo = mid
            if hi - lo < 1e-15 * target_half_width:
                break
        Y = hi
    else:
        Y = 1.0
        while G(Y) < need:
            Y *= 2.0
    _, nodes, run = quadrature.integrate(target, 0.0, Y, cumulative=True)
    if run[-1] < need:
        raise RangeError("target mass does not cover the source range")

    k = np.clip(np.searchsorted(run, Fx, side="right") - 1, 0, nodes.size - 2)
    lo = nodes[k].copy()
    hi = nodes[k + 1].copy()
    base = run[k]
    want = Fx - base
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        part = quadrature._gl(target, nodes[k], mid)
        up = part >= want
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)
    T = 0.5 * (lo + hi)
    T[0] = 0.0

    xs = np.concatenate([-x[:0:-1], x])
    Ts = np.concatenate([-T[:0:-1], T])
    slope = (Ts[2:] - Ts[:-2]) / (xs[2:] - xs[:-2])
    GT = base + quadrature._gl(target, nodes[k], T)
    resid = float(np.max(np.abs(GT - Fx)))
    return TransportMap(source=src, target_potential=W, x=xs, T=Ts, lipschitz_estimate=float(np.max(slope)),
                        pushforward_residual=resid, hypotheses_ok=not problems,
                        notes={"support_fraction": support_fraction, "target_extent": Y, "problems": problems})
