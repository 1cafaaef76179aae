"""Stationary curves of weighted perimeter for radial densities on the plane.

A curve symmetric about the x-axis is written in polar form as
``theta = +-f(r)``.  Stationarity reduces to a linear first-order equation for

    u = r**2 f' / sqrt(1 + r**2 f'**2),      u' - V' u = c r,

with ``rho = exp(-V)``, followed by the quadrature

    f' = u / (r sqrt(r**2 - u**2)).

We parameterise by ``a`` and ``lam`` as ``u = a * (particular) + lam * exp(V)``,
which fixes ``c = -a`` for all laws except ``dx/r``, where the customary
closed form ``u = a r**2 + lam r`` gives ``c = +a``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize, special

from . import quadrature
from .density import RadialDensity
from .errors import DomainError, Divergent, EmptyInterval

INNER_TOUCH = "InnerTouch"
ORIGIN = "Origin"

SCAN_POINTS = 4096
SCAN_MIN = 1e-6
TANGENT_WIDTH = 1e-5


@dataclass(frozen=True)
class StationaryParams:
    law: RadialDensity
    a: float
    lam: float = 0.0
    start: str = INNER_TOUCH

    def __post_init__(self):
        if self.law.dimension != 2:
            raise DomainError("stationary curves are solved in the plane only")
        if self.start not in (INNER_TOUCH, ORIGIN):
            raise DomainError(f"unknown start {self.start!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.lam)):
            raise DomainError("a and lambda must be finite")


class Tangent(EmptyInterval):
    """|u| touches r without crossing it: the degenerate circle solution."""

    def __init__(self, radius: float):
        super().__init__(f"|u(r)| = r only tangentially, at r = {radius:.15g}")
        self.radius = radius


# -- u solutions -------------------------------------------------------------

def _exp_gamma_upper(sig: float, x):
    """exp(x) * Gamma(sig, x) * x**(1 - sig), stable for large x."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 50.0
    if np.any(small):
        xs = x[small]
        with np.errstate(divide="ignore", invalid="ignore"):
            val = special.gamma(sig) * special.gammaincc(sig, xs) * np.exp(xs) * np.power(xs, 1.0 - sig)
        out[small] = val
    if np.any(~small):
        xl = x[~small]
        term = np.ones_like(xl)
        acc = np.ones_like(xl)
        for k in range(1, 40):
            term = term * (sig - k) / xl
            acc = acc + term
            if np.all(np.abs(term) < 1e-17 * np.abs(acc)):
                break
        out[~small] = acc
    return out


def _signed_exp(lam: float, x):
    """lam * exp(x) without forming exp(x) separately."""
    if lam == 0.0:
        return np.zeros_like(np.asarray(x, dtype=float))
    with np.errstate(over="ignore"):
        return math.copysign(1.0, lam) * np.exp(math.log(abs(lam)) + np.asarray(x, dtype=float))


class USolution:
    """Base class: ``u(r)``, ``u'(r)`` and the ODE constant ``c``."""

    closed_form = False

    def __init__(self, a: float, lam: float, law: RadialDensity | None = None):
        self.a = float(a)
        self.lam = float(lam)
        self.law = law

    @property
    def c(self) -> float:
        return -self.a

    def __call__(self, r):
        raise NotImplementedError

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        return self.law.ode_potential_deriv(r) * self(r) + self.c * r

    def evaluate(self, r):
        return self(r)

    def evaluate_deriv(self, r):
        return self.deriv(r)

    def tail_rotation(self, R: float):
        """int_R^inf f' dr when a closed form is known, else None."""
        return None

    def scan_radius(self) -> float:
        base = self.law.truncation_radius() if self.law is not None else math.inf
        if math.isinf(base):
            base = 1e3
        return base

    def describe(self) -> dict:
        return {"kind": type(self).__name__, "a": self.a, "lambda": self.lam, "c": self.c}


class PowerLawU(USolution):
    """u = (a/alpha) exp(x) Gamma(2/alpha, x) x**(1-2/alpha) r**(2-alpha) + lam exp(x), x = r**alpha."""

    closed_form = True

    def __init__(self, alpha: float, a: float, lam: float, law: RadialDensity):
        super().__init__(a, lam, law)
        self.alpha = float(alpha)
        self.sig = 2.0 / self.alpha

    def particular(self, r):
        r = np.asarray(r, dtype=float)
        x = np.power(r, self.alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            # exp(x) Gamma(sig, x) = x**(sig-1) S(x) and x**(sig-1) = r**(2-alpha)
            scale = np.where(r > 0, np.power(r, 2.0 - self.alpha), 0.0)
            val = scale * _exp_gamma_upper(self.sig, x)
        at0 = special.gamma(self.sig)
        return np.where(r > 0, val, at0) / self.alpha

    @property
    def u0(self) -> float:
        """u(0) = a Gamma(sig)/alpha + lam, snapped to 0 when it is pure rounding."""
        head = self.a * special.gamma(self.sig) / self.alpha
        val = head + self.lam
        if abs(val) <= 4 * np.finfo(float).eps * (abs(head) + abs(self.lam)):
            return 0.0
        return val

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        x = np.power(r, self.alpha)
        out = self.a * self.particular(r) + _signed_exp(self.lam, x)
        # near the origin use e^x (u0 - (a/alpha) gamma_lower(sig, x)), which keeps u0 = 0 exact
        small = x < 1.0
        if np.any(small):
            xs = x[small] if out.ndim else x
            low = special.gamma(self.sig) * special.gammainc(self.sig, xs)
            near = np.exp(xs) * (self.u0 - self.a / self.alpha * low)
            if out.ndim:
                out[small] = near
            else:
                out = near
        return out

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        return self.alpha * np.power(r, self.alpha - 1.0) * self(r) - self.a * r

    def scan_radius(self) -> float:
        base = self.law.truncation_radius()
        if self.lam != 0.0:
            reach = (max(0.0, -math.log(abs(self.lam))) + 40.0) ** (1.0 / self.alpha)
            base = max(base, 1.5 * reach)
        return base

    def tail_rotation(self, R: float):
        if self.lam != 0.0:
            return None
        if self.a == 0.0:
            return 0.0
        if self.alpha == 1.0:
            # u/r -> a, the rotation integrand decays like 1/r
            return math.inf
        al, k = self.alpha, self.a / self.alpha
        yR = R ** (1.0 - al)

        def integrand(y):
            if y == 0.0:
                S = 1.0
            else:
                s = y ** (-1.0 / (al - 1.0))
                S = float(_exp_gamma_upper(self.sig, np.array([s ** al]))[0])
            W = k * y * S
            return k * S / math.sqrt(1.0 - W * W) / (al - 1.0)

        val, _ = sp_integrate.quad(integrand, 0.0, yR, epsabs=1e-14, epsrel=1e-13, limit=200)
        return val

    def describe(self) -> dict:
        out = super().describe()
        out["alpha"] = self.alpha
        return out


class GaussianU(USolution):
    """Standard Gaussian weight exp(-r^2/2): u = a + lam exp(r^2/2)."""

    closed_form = True

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.a + _signed_exp(self.lam, 0.5 * r * r)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        return r * self(r) - self.a * r

    def scan_radius(self) -> float:
        base = self.law.truncation_radius()
        if self.lam != 0.0:
            base = max(base, 1.5 * math.sqrt(2.0 * (max(0.0, -math.log(abs(self.lam))) + 40.0)))
        return base

    def tail_rotation(self, R: float):
        if self.lam != 0.0:
            return None
        return math.asin(self.a / R)


class LebesgueU(USolution):
    """Flat plane: u = lam - a r^2 / 2 (circles and lines)."""

    closed_form = True

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.lam - 0.5 * self.a * r * r

    def deriv(self, r):
        return -self.a * np.asarray(r, dtype=float)

    def scan_radius(self) -> float:
        if self.law is not None and math.isfinite(self.law.domain_radius):
            return self.law.domain_radius
        return max(1e3, 10.0 * math.sqrt(abs(self.lam) / max(abs(self.a), 1e-300)))

    def tail_rotation(self, R: float):
        if self.a != 0.0:
            return None
        return math.asin(self.lam / R)


class InverseRU(USolution):
    """Weight dx/r: u = a r^2 + lam r, hence u' - u/r = a r and c = +a."""

    closed_form = True

    @property
    def c(self) -> float:
        return self.a

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.a * r * r + self.lam * r

    def deriv(self, r):
        return 2.0 * self.a * np.asarray(r, dtype=float) + self.lam

    def scan_radius(self) -> float:
        return max(1e3, 4.0 * (abs(self.lam) + 1.0) / max(abs(self.a), 1e-12))

    def tail_rotation(self, R: float):
        if self.a != 0.0:
            return None
        if self.lam == 0.0:
            return 0.0
        return math.inf


class QuadratureU(USolution):
    """Integrating-factor solution for an arbitrary smooth potential.

    u(r) = lam exp(V(r)) + a int_r^inf s exp(V(r) - V(s)) ds when the law has
    finite mass on the whole plane (this matches the closed forms), and
    u(r) = lam exp(V(r)) - a int_0^r ... otherwise.  A declared cutoff radius
    does not move the reference point.
    """

    def __init__(self, a, lam, law):
        super().__init__(a, lam, law)
        mass = math.inf
        if math.isinf(law.domain_radius):
            try:
                mass = law.total_mass()
            except DomainError:
                pass
        self.outer = law.probability or math.isfinite(mass)

    def _integral(self, r):
        V = self.law.ode_potential
        Vr = float(V(r))
        fun = lambda s: s * math.exp(Vr - float(V(s)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
            if self.outer:
                hi = self.law.domain_radius
                pieces = [(r, 2.0 * r + 2.0), (2.0 * r + 2.0, math.inf)] if math.isinf(hi) else [(r, hi)]
                return sum(sp_integrate.quad(fun, lo, up, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
                           for lo, up in pieces)
            return -sp_integrate.quad(fun, 0.0, r, epsabs=1e-15, epsrel=1e-13, limit=400)[0]

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        part = np.array([self._integral(float(x)) for x in flat]).reshape(r.shape)
        return self.a * part + _signed_exp(self.lam, self.law.ode_potential(r))


class ExplicitU(USolution):
    """User-supplied u with known derivative and ODE constant c."""

    def __init__(self, fun, deriv, c: float, law: RadialDensity | None = None, tail=None,
                 name: str = "explicit", scan: float = 1e3):
        super().__init__(-c, 0.0, law)
        self._fun = fun
        self._deriv = deriv
        self._c = float(c)
        self._tail = tail
        self.name = name
        self._scan = scan

    @property
    def c(self) -> float:
        return self._c

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.broadcast_to(np.asarray(self._fun(r), dtype=float), r.shape).copy()

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        return np.broadcast_to(np.asarray(self._deriv(r), dtype=float), r.shape).copy()

    def scan_radius(self) -> float:
        if self.law is not None and self.law.probability:
            return max(self._scan, self.law.truncation_radius())
        return self._scan

    def tail_rotation(self, R: float):
        return None if self._tail is None else self._tail(R)

    def describe(self) -> dict:
        return {"kind": self.name, "c": self.c}


def constant_u(value: float, law: RadialDensity | None = None) -> ExplicitU:
    """u == value: lines at distance |value| from the origin for the Gaussian, and more."""
    return ExplicitU(lambda r: np.full_like(r, value), lambda r: np.zeros_like(r),
                     c=0.0, law=law, tail=lambda R: math.asin(value / R), name=f"constant:{value:g}")


def solve_u(params: StationaryParams, method: str = "auto") -> USolution:
    """Closed-form u for the built-in laws, quadrature otherwise (or when ``method='quadrature'``)."""
    law, a, lam = params.law, params.a, params.lam
    if method == "quadrature":
        return QuadratureU(a, lam, law)
    name = law.name
    if name.startswith("power:"):
        return PowerLawU(law.params["alpha"], a, lam, law)
    if name == "gaussian":
        return GaussianU(a, lam, law)
    if name == "lebesgue":
        return LebesgueU(a, lam, law)
    if name == "inverse_r":
        return InverseRU(a, lam, law)
    return QuadratureU(a, lam, law)


# -- existence interval ------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Maximal interval where |u| <= r.

    Endpoint kinds: "crossing" (|u| = r, f' infinite), "origin" (r0 = 0),
    "infinity" (r1 = inf) or "domain" (support cutoff).
    """

    r0: float
    r1: float
    lo_kind: str
    hi_kind: str

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.r1)


def _gap(u):
    return lambda r: r - np.abs(u(r))


def _refine(h, lo, hi):
    r = optimize.brentq(lambda x: float(h(np.array(x))), lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    return r


def existence_interval(u: USolution, r_max: float | None = None) -> Interval:
    """First component of {r > 0 : |u(r)| < r} located on a log-spaced scan grid."""
    R = u.scan_radius() if r_max is None else r_max
    domain = u.law.domain_radius if u.law is not None else math.inf
    R = min(R, domain)
    grid = np.geomspace(SCAN_MIN, R, SCAN_POINTS)
    h = _gap(u)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = h(grid)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    inside = vals > 0
    if not inside.any() and r_max is None and R < min(domain, 1e6) and vals[-1] > vals[-2]:
        # |u| - r still shrinking at the scan edge: look further out
        return existence_interval(u, r_max=min(8.0 * R, 1e6, domain))
    if not inside.any():
        k = int(np.argmax(vals))
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
        res = optimize.minimize_scalar(lambda x: -float(h(np.array(x))), bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-12})
        if -res.fun >= -1e-9 * max(1.0, res.x):
            raise Tangent(float(res.x))
        raise EmptyInterval("|u(r)| > r for every scanned radius")
    first = int(np.argmax(inside))
    if first == 0:
        r0, lo_kind = 0.0, "origin"
    else:
        r0, lo_kind = _refine(h, grid[first - 1], grid[first]), "crossing"
    rest = np.nonzero(~inside[first:])[0]
    if rest.size == 0:
        if math.isfinite(domain) and R >= domain:
            r1, hi_kind = domain, "domain"
        else:
            r1, hi_kind = math.inf, "infinity"
    else:
        j = first + int(rest[0])
        r1, hi_kind = _refine(h, grid[j - 1], grid[j]), "crossing"
        if lo_kind == "crossing" and r1 - r0 < TANGENT_WIDTH * r1:
            # two crossings merging: below this width |u| - r is pure rounding noise
            raise Tangent(0.5 * (r0 + r1))
    return Interval(float(r0), float(r1), lo_kind, hi_kind)


# -- the angle function --------------------------------------------------------

def radial_gap(u, s, e=None, delta=None):
    """(s - |u(s)|, s + |u(s)|, u(s)), accurate near a crossing ``e`` of |u| = r.

    Close to the crossing ``s - |u|`` is formed from the exact offset
    ``delta = s - e`` and a midpoint derivative instead of by subtraction.
    """
    s = np.asarray(s, dtype=float)
    uu = u(s)
    minus = s - np.abs(uu)
    if e is not None and e > 0:
        delta = np.asarray(delta, dtype=float)
        near = np.abs(delta) < 1e-4 * e
        if np.any(near):
            # e is a root of r = |u| up to rounding; treat it as exact
            sg = 1.0 if float(u(np.array(e))) >= 0 else -1.0
            dn = delta[near]
            minus = np.array(minus, copy=True)
            minus[near] = dn * (1.0 - sg * u.deriv(e + 0.5 * dn))
    return minus, s + np.abs(uu), uu


def rotation_integrand(u):
    """f'(r) = u / (r sqrt(r^2 - u^2)); zero outside the admissible set.

    Accepts the endpoint-aware call ``g(s, e, delta)`` used by the quadrature.
    """

    def g(s, e=None, delta=None):
        s = np.asarray(s, dtype=float)
        minus, plus, uu = radial_gap(u, s, e, delta)
        d = minus * plus
        ok = d > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(ok, uu / (s * np.sqrt(np.where(ok, d, 1.0))), 0.0)
        return out

    return g


def _check_origin(u, start):
    eps = 1e-9
    q = abs(float(u(np.array(eps)))) / eps
    if q > 1e-6:
        raise Divergent(f"rotation diverges at the origin (|u(r)/r| -> {q:.6g})")


@dataclass(frozen=True, eq=False)
class CurveSolution:
    params: StationaryParams | None
    u: USolution
    r0: float
    r1: float
    lo_kind: str
    hi_kind: str
    start: str
    r: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    f_start: float
    rotation: float
    r_end: float
    tail: float
    stop_rule: str
    meta: dict = field(default_factory=dict)

    @property
    def end_slope_infinite(self) -> bool:
        return self.hi_kind == "crossing"

    @property
    def unbounded(self) -> bool:
        return not math.isfinite(self.r1)

    @property
    def f_end(self) -> float:
        return self.f_start + self.rotation

    @property
    def samples(self):
        return list(zip(self.r.tolist(), self.f.tolist(), self.fp.tolist()))

    @property
    def law(self):
        return self.u.law

    def f_at(self, r):
        """f at arbitrary radii in the existence interval by local quadrature from the nearest node."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        g = rotation_integrand(self.u)
        out = np.empty_like(r)
        lo_sing = self.lo_kind == "crossing"
        hi_sing = self.hi_kind == "crossing"
        fin_end = self.f_start + (self.rotation - self.tail if self.unbounded else self.rotation)
        for i, x in enumerate(r.ravel()):
            slack = 1e-12 * max(1.0, abs(x))
            if x < self.r0 - slack or x > self.r1 + slack:
                raise DomainError(f"r = {x} lies outside [{self.r0}, {self.r1}]")
            x = min(max(x, self.r0), self.r1)
            if hi_sing and (self.r1 - x) < 0.25 * (x - self.r0):
                out.flat[i] = fin_end - quadrature.integrate(g, x, self.r1, singular_hi=True,
                                                                endpoint_aware=True)
                continue
            k = int(np.searchsorted(self.r, x, side="right")) - 1
            k = min(max(k, 0), self.r.size - 1)
            base = self.r[k]
            out.flat[i] = self.f[k] + quadrature.integrate(
                g, base, x, singular_lo=(lo_sing and k == 0), endpoint_aware=True)
        return out

    def sample(self, n: int = 400):
        """Dense (r, f) sample for plotting; geometric spacing for unbounded curves."""
        if self.unbounded:
            rr = self.r0 + (self.r_end - self.r0) * np.linspace(0.0, 1.0, n) ** 2
        else:
            t = np.linspace(0.0, 1.0, n)
            rr = self.r0 + (self.r1 - self.r0) * (3 * t * t - 2 * t ** 3)
        ff = np.interp(rr, self.r, self.f)
        return rr, ff


def _truncation(u: USolution, r0: float) -> float:
    law = u.law
    R = law.truncation_radius() if law is not None else math.inf
    if math.isinf(R):
        R = 10.0 * max(1.0, r0)
    return max(R, 2.0 * r0 + 1.0)


def _generic_tail(g, R):
    with warnings.catch_warnings():
        warnings.simplefilter("error", sp_integrate.IntegrationWarning)
        try:
            val, _ = sp_integrate.quad(lambda s: float(g(np.array(s))), R, math.inf,
                                       epsabs=1e-12, epsrel=1e-10, limit=400)
        except sp_integrate.IntegrationWarning:
            val = math.nan
    k1 = abs(float(g(np.array(1e3 * R)))) * 1e3 * R
    k2 = abs(float(g(np.array(1e5 * R)))) * 1e5 * R
    if k2 > 1e-6 and k2 >= 0.5 * k1:
        return math.inf
    return val


def integrate_f(u: USolution, interval: Interval | None = None, start: str = INNER_TOUCH,
                params: StationaryParams | None = None) -> CurveSolution:
    """Sample f on the existence interval with square-root endpoint substitution."""
    if interval is None:
        interval = existence_interval(u)
    r0, r1 = interval.r0, interval.r1
    if start == ORIGIN and interval.lo_kind != "origin":
        raise DomainError("origin start requires |u| < r near r = 0")
    if interval.lo_kind == "origin":
        _check_origin(u, start)
    f_start = 0.5 * math.pi if start == ORIGIN else 0.0
    g = rotation_integrand(u)
    lo_sing = interval.lo_kind in ("crossing", "origin")
    if interval.bounded:
        hi = r1
        hi_sing = interval.hi_kind == "crossing"
    else:
        hi = _truncation(u, r0)
        hi_sing = False
    total, nodes, running = quadrature.integrate(g, r0, hi, singular_lo=lo_sing,
                                                 singular_hi=hi_sing, cumulative=True,
                                                 endpoint_aware=True)
    tail, rule = 0.0, "endpoint"
    if not interval.bounded:
        tail = u.tail_rotation(hi)
        rule = "closed-form tail"
        if tail is None:
            tail = _generic_tail(g, hi)
            rule = "quadrature tail"
        if not math.isfinite(tail) and not math.isnan(tail):
            rule = "divergent tail"
    fp = g(nodes)
    if interval.lo_kind == "crossing":
        fp[0] = math.copysign(math.inf, float(u(np.array(r0))))
    if interval.bounded and interval.hi_kind == "crossing":
        fp[-1] = math.copysign(math.inf, float(u(np.array(r1))))
    return CurveSolution(
        params=params, u=u, r0=r0, r1=r1, lo_kind=interval.lo_kind, hi_kind=interval.hi_kind,
        start=start, r=nodes, f=f_start + running, fp=fp, f_start=f_start,
        rotation=total + tail, r_end=hi, tail=tail, stop_rule=rule,
    )


def full_rotation(u: USolution, interval: Interval | None = None) -> float:
    """Total angle swept, math.inf when the tail integral diverges."""
    if interval is None:
        interval = existence_interval(u)
    return integrate_f(u, interval).rotation


def solve_curve(params: StationaryParams, method: str = "auto") -> CurveSolution:
    """solve_u, existence_interval and integrate_f in one call."""
    u = solve_u(params, method=method)
    return integrate_f(u, existence_interval(u), start=params.start, params=params)
