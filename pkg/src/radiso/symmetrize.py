"""Circular symmetrization of planar sets stored ring by ring."""

from __future__ import annotations

import math
import os
import tempfile
import warnings
from dataclasses import dataclass
from functools import cached_property
from itertools import pairwise

import numpy as np

from .density import RadialDensity
from .errors import DomainError

TWO_PI = 2.0 * math.pi
_SPACING_RTOL = 1e-9


def _norm_ring(intervals):
    out = tuple((float(lo), float(hi)) for lo, hi in intervals)
    for lo, hi in out:
        if not (-math.pi <= lo < hi <= math.pi):
            raise DomainError(f"interval ({lo}, {hi}) is empty or leaves [-pi, pi]")
    for (_, h0), (l1, _) in pairwise(out):
        if l1 < h0:
            raise DomainError("intervals in a ring must be sorted and disjoint")
    return out


@dataclass(frozen=True)
class AngularSet:
    """Union over rings r_i of {(r, theta): |r - r_i| < dr/2, theta in the ring's intervals}."""

    law: RadialDensity
    rings: tuple
    ring_spacing: float

    def __post_init__(self):
        if self.law.dimension != 2:
            raise DomainError("angular sets live in the plane")
        if not self.ring_spacing > 0:
            raise DomainError("ring_spacing must be positive")
        rings = tuple((float(r), _norm_ring(iv)) for r, iv in self.rings)
        for (r0, _), (r1, _) in pairwise(rings):
            if abs((r1 - r0) - self.ring_spacing) > _SPACING_RTOL * self.ring_spacing:
                raise DomainError("ring radii must be strictly increasing with uniform spacing")
        if rings and rings[0][0] <= 0:
            raise DomainError("ring radii must be positive")
        object.__setattr__(self, "rings", rings)

    @cached_property
    def radii(self) -> np.ndarray:
        return np.array([r for r, _ in self.rings])

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([sum(hi - lo for lo, hi in iv) for _, iv in self.rings])


def symmetrize_set(s: AngularSet) -> AngularSet:
    rings = []
    for (r, iv), L in zip(s.rings, s.lengths):
        if L >= TWO_PI:
            rings.append((r, ((-math.pi, math.pi),)))
        elif L > 0:
            rings.append((r, ((-0.5 * L, 0.5 * L),)))
        else:
            rings.append((r, ()))
    return AngularSet(s.law, tuple(rings), s.ring_spacing)


def set_measure(s: AngularSet) -> float:
    """Midpoint rule sum of rho(r_i) r_i L_i dr."""
    if not s.rings:
        return 0.0
    r = s.radii
    return float(np.sum(s.law.density(r) * r * s.lengths) * s.ring_spacing)


# -- perimeter ------------------------------------------------------------------

def _arcs(iv):
    """Circular arcs (start, end) mod 2 pi, merging pieces that meet across theta = pi."""
    iv = list(iv)
    if len(iv) >= 2 and iv[0][0] == -math.pi and iv[-1][1] == math.pi:
        first, last = iv.pop(0), iv.pop()
        iv.append((last[0], first[1] + TWO_PI))
    if len(iv) == 1 and iv[0][1] - iv[0][0] >= TWO_PI:
        return []  # full ring, no endpoints
    return iv


def _endpoints(iv):
    starts, ends = [], []
    for lo, hi in _arcs(iv):
        starts.append(lo % TWO_PI)
        ends.append(hi % TWO_PI)
    return np.array(starts), np.array(ends)


def _circ(d):
    d = np.abs(d) % TWO_PI
    return np.minimum(d, TWO_PI - d)


def _match_cost(a, b):
    """Smallest total angular travel pairing two equally sized endpoint families cyclically."""
    a = np.sort(a)
    b = np.sort(b)
    n = a.size
    best = None
    for k in range(n):
        c = _circ(a - np.roll(b, -k))
        if best is None or c.sum() < best.sum():
            best = c
    return best


def _symdiff_length(iv0, iv1):
    cuts = sorted({-math.pi, math.pi, *[x for p in iv0 for x in p], *[x for p in iv1 for x in p]})
    total = 0.0
    for lo, hi in pairwise(cuts):
        mid = 0.5 * (lo + hi)
        in0 = any(a < mid < b for a, b in iv0)
        in1 = any(a < mid < b for a, b in iv1)
        if in0 != in1:
            total += hi - lo
    return total


def _full(iv):
    return bool(iv) and sum(h - l for l, h in iv) >= TWO_PI


def set_perimeter(s: AngularSet, warn: bool = True) -> float:
    """Weighted length of the boundary, tracked between consecutive rings.

    When both rings carry the same number of endpoints they are matched in
    cyclic order and joined by straight segments.  Otherwise the boundary is a
    staircase: arcs of the symmetric difference at the mid radius plus a
    radial stub of length dr/2 from every endpoint.
    """
    if not s.rings:
        return 0.0
    dr = s.ring_spacing
    rho = s.law.density
    seq = [(s.rings[0][0] - dr, ())] + list(s.rings) + [(s.rings[-1][0] + dr, ())]
    total = 0.0
    mismatched = 0
    for (r0, iv0), (r1, iv1) in pairwise(seq):
        rm = 0.5 * (r0 + r1)
        a0, b0 = _endpoints(iv0)
        a1, b1 = _endpoints(iv1)
        if a0.size == a1.size and a0.size > 0:
            d = np.concatenate([_match_cost(a0, a1), _match_cost(b0, b1)])
            total += float(np.sum(np.sqrt(dr * dr + (rm * d) ** 2))) * float(rho(rm))
            continue
        if a0.size == a1.size == 0 and _full(iv0) == _full(iv1):
            continue
        if a0.size and a1.size:
            mismatched += 1
        rc = max(rm, 0.0)
        total += rc * _symdiff_length(iv0, iv1) * float(rho(rc)) if rc > 0 else 0.0
        for r_end, n in ((r0, a0.size), (r1, a1.size)):
            if n and r_end > 0:
                total += 2 * n * 0.5 * dr * float(rho(0.5 * (r_end + rm)))
    if mismatched and warn:
        warnings.warn(f"{mismatched} ring transitions changed topology; staircase rule applied",
                      RuntimeWarning, stacklevel=2)
    return total


# -- construction -----------------------------------------------------------------

def ring_radii(R: float, n: int) -> np.ndarray:
    dr = R / n
    return (np.arange(n) + 0.5) * dr


def from_profile(law: RadialDensity, F, R: float, n: int = 2048, r_min: float = 0.0) -> AngularSet:
    """Axial set {|theta| < F(r)} on rings covering (r_min, R)."""
    dr = (R - r_min) / n
    rings = []
    for r in r_min + (np.arange(n) + 0.5) * dr:
        w = min(float(F(r)), math.pi)
        rings.append((r, ((-w, w),) if w > 0 else ()))
    return AngularSet(law, tuple(rings), dr)


def from_curve(curve, n: int = 2048) -> AngularSet:
    """Rings sampled from a bounded stationary curve's region."""
    f = lambda r: abs(float(curve.f_at(min(max(r, curve.r0), curve.r1))))
    if curve.unbounded:
        raise DomainError("only bounded curves can be sampled onto rings")
    return from_profile(curve.law, f, curve.r1, n=n, r_min=curve.r0)


def _random_arcs(rng, count, phase, width):
    arcs = []
    for k in range(count):
        c = phase[k]
        w = width[k]
        lo, hi = c - w, c + w
        lo = (lo + math.pi) % TWO_PI - math.pi
        hi = lo + 2 * w
        if hi > math.pi:
            arcs += [(lo, math.pi), (-math.pi, hi - TWO_PI)]
        else:
            arcs.append((lo, hi))
    arcs.sort()
    merged = []
    for lo, hi in arcs:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


def random_angular_set(law: RadialDensity, R: float, rng: np.random.Generator, n: int = 2048,
                       intervals: int = 3) -> AngularSet:
    """Smoothly varying union of ``intervals`` arcs per ring, with random radial support."""
    dr = R / n
    r = (np.arange(n) + 0.5) * dr
    inner = rng.uniform(0.0, 0.4 * R)
    outer = rng.uniform(0.6 * R, R)
    freq = rng.uniform(0.5, 4.0, size=(intervals, 2)) / R
    phase0 = rng.uniform(-math.pi, math.pi, size=(intervals, 2))
    c0 = rng.uniform(-math.pi, math.pi, size=intervals)
    camp = rng.uniform(0.0, 1.5, size=intervals)
    w0 = rng.uniform(0.05, 0.8, size=intervals)
    wamp = rng.uniform(0.0, 0.6, size=intervals) * w0
    rings = []
    for x in r:
        if not inner <= x <= outer:
            rings.append((x, ()))
            continue
        centre = c0 + camp * np.sin(freq[:, 0] * x + phase0[:, 0])
        width = w0 + wamp * np.sin(freq[:, 1] * x + phase0[:, 1])
        rings.append((x, _random_arcs(rng, intervals, centre, width)))
    return AngularSet(law, tuple(rings), dr)


# -- text format ------------------------------------------------------------------

def format_set(s: AngularSet) -> str:
    lines = []
    for r, iv in s.rings:
        parts = [f"{r:.17g}"] + [f"{lo:.17g},{hi:.17g}" for lo, hi in iv]
        lines.append(";".join(parts))
    return "\n".join(lines) + "\n"


def parse_set(text: str, law: RadialDensity, ring_spacing: float | None = None) -> AngularSet:
    rings = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split(";")
        try:
            iv = tuple(tuple(float(x) for x in p.split(",")) for p in rest if p.strip())
            r = float(head)
        except ValueError as exc:
            raise DomainError(f"line {n}: {exc}") from None
        if any(len(p) != 2 for p in iv):
            raise DomainError(f"line {n}: intervals need two endpoints")
        rings.append((r, iv))
    if ring_spacing is None:
        if len(rings) < 2:
            raise DomainError("ring spacing cannot be inferred from fewer than two rings")
        ring_spacing = rings[1][0] - rings[0][0]
    return AngularSet(law, tuple(rings), ring_spacing)


def write_set(path, s: AngularSet) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(format_set(s))
    os.replace(tmp, path)


def read_set(path, law: RadialDensity, ring_spacing: float | None = None) -> AngularSet:
    with open(path, encoding="utf-8") as fh:
        return parse_set(fh.read(), law, ring_spacing)
