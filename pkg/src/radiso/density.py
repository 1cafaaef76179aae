"""Radially symmetric densities ``C * exp(sign * v(r))`` and their radial integrals."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError, RangeError

# absolute tolerance requested from every ball-mass quadrature
QUAD_ATOL = 1e-13
# neglected tail mass when truncating an infinite domain
TAIL_MASS = 1e-12


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^{d-1} in R^d."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True)
class RadialDensity:
    """Density ``normalization * exp(sign * potential(r))`` on a ball of radius ``domain_radius``.

    ``sign = -1`` is the convention for probability laws ``C exp(-r**alpha)``;
    ``sign = +1`` for log-convex weights ``exp(v(r))``.  The stationary-curve
    equations are written for ``exp(-V)``; :attr:`ode_potential` gives that V.
    """

    sign: int
    potential: Callable
    potential_deriv: Callable
    dimension: int = 2
    domain_radius: float = math.inf
    normalization: float = 1.0
    name: str = "custom"
    probability: bool = False
    potential_deriv2: Callable | None = None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise DomainError("sign must be +1 or -1")
        if self.dimension < 2:
            raise DomainError("dimension must be >= 2")
        if not self.normalization > 0:
            raise DomainError("normalization must be positive")
        if not self.domain_radius > 0:
            raise DomainError("domain_radius must be positive")

    # -- pointwise -----------------------------------------------------
    def density(self, r):
        """rho(r) including the normalization constant."""
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore", divide="ignore"):
            return self.normalization * np.exp(self.sign * self.potential(r))

    def ode_potential(self, r):
        """V with rho = C exp(-V)."""
        return -self.sign * self.potential(r)

    def ode_potential_deriv(self, r):
        return -self.sign * self.potential_deriv(r)

    def potential_second_deriv(self, r, h=None):
        """v''(r); analytic when supplied, central differences otherwise."""
        if self.potential_deriv2 is not None:
            return self.potential_deriv2(r)
        r = np.asarray(r, dtype=float)
        h = 1e-6 * np.maximum(1.0, np.abs(r)) if h is None else h
        return (self.potential_deriv(r + h) - self.potential_deriv(r - h)) / (2 * h)

    @property
    def unit_sphere(self) -> float:
        return sphere_area(self.dimension)

    # -- radial integrals ----------------------------------------------
    def _radial(self, s):
        return s ** (self.dimension - 1) * self.density(s)

    def _quad(self, fun, lo, hi):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _ = integrate.quad(fun, lo, hi, epsabs=QUAD_ATOL, epsrel=1e-13, limit=500)
            except integrate.IntegrationWarning as exc:
                val = math.nan
                reason = str(exc)
            else:
                reason = ""
        if not math.isfinite(val):
            raise DomainError(f"radial integrand is not integrable on [{lo}, {hi}] {reason}".strip())
        return val

    def _check_radius(self, r, allow_zero=True):
        if not (r > 0 or (allow_zero and r == 0)):
            raise DomainError(f"radius must be {'>=' if allow_zero else '>'} 0, got {r}")
        if r > self.domain_radius * (1 + 1e-15):
            raise DomainError(f"radius {r} exceeds domain radius {self.domain_radius}")

    def _segments(self, lo, hi):
        # split long ranges so quad sees the bulk of the mass
        if math.isinf(hi):
            cut = max(lo, 1.0) * 2.0
            return [(lo, cut), (cut, math.inf)]
        return [(lo, hi)]

    def ball_measure(self, r: float) -> float:
        """mu(B_r) by adaptive quadrature of the radial integrand."""
        self._check_radius(r)
        if r == 0:
            return 0.0
        total = sum(self._quad(self._radial, lo, hi) for lo, hi in self._segments(0.0, r))
        return self.unit_sphere * total

    def tail_measure(self, r: float) -> float:
        """mu(B_R \\ B_r) up to the domain radius, integrated directly (no cancellation)."""
        self._check_radius(r)
        if r >= self.domain_radius:
            return 0.0
        total = sum(self._quad(self._radial, lo, hi) for lo, hi in self._segments(r, self.domain_radius))
        return self.unit_sphere * total

    def total_mass(self) -> float:
        if self.probability:
            return 1.0
        return self.tail_measure(0.0)

    def ball_perimeter(self, r: float) -> float:
        """mu^+(d B_r) = |S^{d-1}| r^{d-1} rho(r)."""
        self._check_radius(r, allow_zero=False)
        return float(self.unit_sphere * r ** (self.dimension - 1) * self.density(r))

    def radius_for_measure(self, m: float) -> float:
        """Inverse of :meth:`ball_measure` by bracketing root-finding."""
        if not m > 0:
            raise RangeError(f"measure must be positive, got {m}")
        hi = self.truncation_radius()
        top = self.total_mass() if math.isinf(self.domain_radius) and self.probability else None
        if top is not None and m >= top:
            raise RangeError(f"measure {m} is not below the total mass {top}")
        if math.isinf(hi):
            hi = 1.0
            while self.ball_measure(hi) < m:
                hi *= 2.0
                if hi > 1e6:
                    raise RangeError(f"measure {m} not reached below radius 1e6")
        elif self.ball_measure(hi) < m:
            if math.isinf(self.domain_radius):
                # mass beyond the truncation radius: extend
                while self.ball_measure(hi) < m:
                    hi *= 1.5
                    if hi > 1e6:
                        raise RangeError(f"measure {m} not reached below radius 1e6")
            else:
                raise RangeError(f"measure {m} exceeds mu(B_R) for the domain radius")
        scale = max(1.0, m)
        if m < 0.5 * self.ball_measure(hi) or top is None:
            g = lambda r: self.ball_measure(r) - m
        else:
            # near the total mass, compare tails to keep relative accuracy
            g = lambda r: (top - m) - self.tail_measure(r)
        r = optimize.brentq(g, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=300)
        if abs(self.ball_measure(r) - m) > 1e-10 * scale:
            raise RangeError("radius_for_measure failed to reach the requested accuracy")
        return r

    def truncation_radius(self) -> float:
        """Radius beyond which the neglected mass is below ``TAIL_MASS`` (probability laws).

        Finite domains return their radius; infinite non-probability laws return inf.
        """
        if math.isfinite(self.domain_radius):
            return self.domain_radius
        if not self.probability:
            return math.inf
        cached = self.params.get("_rmax")
        if cached is not None:
            return cached
        hi = 1.0
        while self.tail_measure(hi) > TAIL_MASS:
            hi *= 2.0
        r = optimize.brentq(lambda s: self.tail_measure(s) - TAIL_MASS, hi / 2.0, hi, xtol=1e-10)
        self.params["_rmax"] = r
        return r

    def radial_tail(self, r):
        """P(r) = int_r^inf s rho(s) ds for d = 2 (vectorised; closed form where known)."""
        fn = self.params.get("_radial_tail")
        if fn is not None:
            return fn(np.asarray(r, dtype=float))
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.array([self.tail_measure(float(x)) / (2 * math.pi) if x < self.domain_radius else 0.0
                        for x in r.ravel()])
        return out.reshape(r.shape)

    def describe(self) -> dict:
        out = {"name": self.name, "sign": self.sign, "dimension": self.dimension,
               "domain_radius": self.domain_radius, "normalization": self.normalization}
        out.update({k: v for k, v in self.params.items() if not k.startswith("_")})
        return out


# -- built-in laws -------------------------------------------------------

def power_law_normalization(alpha: float) -> float:
    """C_alpha with 2 pi C_alpha int_0^inf r exp(-r**alpha) dr = 1."""
    if alpha < 1:
        raise DomainError("alpha must be >= 1")
    return alpha / (2.0 * math.pi * math.gamma(2.0 / alpha))


def power_law(alpha: float) -> RadialDensity:
    """Probability law C_alpha exp(-r**alpha) dx on the plane."""
    C = power_law_normalization(alpha)
    sig = 2.0 / alpha
    G = math.gamma(sig)

    def tail(r):
        return C * G * special.gammaincc(sig, r ** alpha) / alpha

    return RadialDensity(
        sign=-1,
        potential=lambda r: np.power(r, alpha),
        potential_deriv=lambda r: alpha * np.power(r, alpha - 1),
        potential_deriv2=lambda r: alpha * (alpha - 1) * np.power(r, alpha - 2),
        normalization=C,
        name=f"power:{alpha:g}",
        probability=True,
        params={"alpha": alpha, "_radial_tail": tail},
    )


def gaussian() -> RadialDensity:
    """Standard planar Gaussian (2 pi)^{-1} exp(-r^2/2)."""
    C = 1.0 / (2.0 * math.pi)
    return RadialDensity(
        sign=-1,
        potential=lambda r: 0.5 * np.square(r),
        potential_deriv=lambda r: np.asarray(r, dtype=float),
        potential_deriv2=lambda r: np.ones_like(np.asarray(r, dtype=float)),
        normalization=C,
        name="gaussian",
        probability=True,
        params={"_radial_tail": lambda r: C * np.exp(-0.5 * r * r)},
    )


def lebesgue(dimension: int = 2, domain_radius: float = math.inf) -> RadialDensity:
    zero = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return RadialDensity(sign=-1, potential=zero, potential_deriv=zero, potential_deriv2=zero,
                         dimension=dimension, domain_radius=domain_radius, name="lebesgue")


def inverse_r() -> RadialDensity:
    """dx / r on the plane (v = log r)."""
    return RadialDensity(
        sign=-1,
        potential=lambda r: np.log(r),
        potential_deriv=lambda r: 1.0 / np.asarray(r, dtype=float),
        potential_deriv2=lambda r: -1.0 / np.square(r),
        name="inverse_r",
    )


def exp_r(dimension: int = 2, domain_radius: float = math.inf) -> RadialDensity:
    """Log-convex weight exp(r) dx."""
    return exp_r_alpha(1.0, dimension=dimension, domain_radius=domain_radius)


def exp_r_alpha(alpha: float, dimension: int = 2, domain_radius: float = math.inf) -> RadialDensity:
    """Log-convex weight exp(r**alpha) dx (alpha >= 1)."""
    if alpha < 1:
        raise DomainError("alpha must be >= 1 for a convex potential")
    name = "exp_r" if alpha == 1 else f"exp_r_alpha:{alpha:g}"
    return RadialDensity(
        sign=1,
        potential=lambda r: np.power(r, alpha),
        potential_deriv=lambda r: alpha * np.power(r, alpha - 1),
        potential_deriv2=lambda r: alpha * (alpha - 1) * np.power(r, alpha - 2),
        dimension=dimension,
        domain_radius=domain_radius,
        name=name,
        params={"alpha": alpha},
    )


def log_convex(potential, potential_deriv, potential_deriv2=None, dimension=2,
               domain_radius=math.inf, name="log_convex") -> RadialDensity:
    return RadialDensity(sign=1, potential=potential, potential_deriv=potential_deriv,
                         potential_deriv2=potential_deriv2, dimension=dimension,
                         domain_radius=domain_radius, name=name)
