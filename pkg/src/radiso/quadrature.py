"""Adaptive Gauss-Legendre quadrature with square-root endpoint handling.

The stationary-curve integrands behave like ``C / sqrt(|s - s_end|)`` at
endpoints where ``|u| = r``.  Substituting ``s = s_end -+ h t**2`` turns that
into a bounded analytic integrand in ``t``, after which plain composite
Gauss-Legendre converges geometrically.  Panels are refined by comparing a
10-point rule on a panel against the same rule on its two halves.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(10)
STAGNATION_RTOL = 1e-10


def _gl(fun, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    t = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(fun(t), dtype=float)
    return half * (vals @ _WEIGHTS)


def adaptive_panels(fun, a, b, atol=1e-13, rtol=1e-12, initial=16, max_panels=4000):
    """Adaptively partition ``[a, b]`` and integrate ``fun`` on each panel.

    ``fun`` must be vectorised.  Returns ``(edges, values)`` where ``edges`` has
    one more entry than ``values`` and ``values[i]`` is the integral over
    ``[edges[i], edges[i+1]]``.

    A panel whose relative error is already below ``STAGNATION_RTOL`` and did
    not shrink under the last bisection is accepted: that is rounding noise
    in the integrand, which further splitting cannot remove.
    """
    width = b - a
    if width <= 0:
        return np.array([a, b]), np.zeros(1)
    edges = np.linspace(a, b, initial + 1)
    lo, hi = edges[:-1], edges[1:]
    prev = np.full(lo.size, np.inf)
    acc_lo, acc_val = [], []
    n_done = 0
    while lo.size:
        mid = 0.5 * (lo + hi)
        coarse = _gl(fun, lo, hi)
        left = _gl(fun, lo, mid)
        right = _gl(fun, mid, hi)
        fine = left + right
        err = np.abs(fine - coarse)
        h = hi - lo
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = err / np.abs(fine)
        ok = (err <= atol * h / width + rtol * np.abs(fine)) | (h <= 1e-14 * width)
        ok |= ~np.isfinite(err) & (h <= 1e-10 * width)
        ok |= (rel < STAGNATION_RTOL) & (rel >= 0.5 * prev)
        acc_lo.extend([lo[ok], mid[ok]])
        acc_val.extend([left[ok], right[ok]])
        n_done += 2 * int(ok.sum())
        bad = ~ok
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        prev = np.concatenate([rel[bad], rel[bad]])
        if n_done + lo.size > max_panels:
            raise QuadratureError("adaptive quadrature exceeded the panel budget")
    starts = np.concatenate(acc_lo)
    vals = np.concatenate(acc_val)
    order = np.argsort(starts)
    starts, vals = starts[order], vals[order]
    return np.append(starts, b), vals


def _pieces(lo, hi, singular_lo, singular_hi):
    """Split ``[lo, hi]`` into mapped pieces over ``t in [0, 1]``.

    Each piece is ``(s(t), ds/dt, endpoint, offset(t))`` where ``offset`` is the
    exact signed distance ``s - endpoint`` (``None`` for regular pieces).  The
    offset is needed because ``endpoint + L t**2`` rounds away small ``t``.
    """
    L = hi - lo
    if singular_lo and singular_hi:
        h = 0.5 * L
        m = lo + h
        return [
            (lambda t: lo + h * t * t, lambda t: 2.0 * h * t, lo, lambda t: h * t * t),
            (lambda t: hi - h * (1.0 - t) ** 2, lambda t: 2.0 * h * (1.0 - t), hi,
             lambda t: -h * (1.0 - t) ** 2),
        ]
    if singular_lo:
        return [(lambda t: lo + L * t * t, lambda t: 2.0 * L * t, lo, lambda t: L * t * t)]
    if singular_hi:
        return [(lambda t: hi - L * (1.0 - t) ** 2, lambda t: 2.0 * L * (1.0 - t), hi,
                 lambda t: -L * (1.0 - t) ** 2)]
    return [(lambda t: lo + L * t, lambda t: np.full_like(t, L), None, None)]


def integrate(fun, lo, hi, singular_lo=False, singular_hi=False, atol=1e-13, rtol=1e-12,
              cumulative=False, initial=16, endpoint_aware=False):
    """Integrate ``fun`` over ``[lo, hi]`` with optional inverse-square-root endpoints.

    With ``endpoint_aware=True`` the integrand is called as ``fun(s, e, delta)``
    on singular pieces, where ``e`` is the singular endpoint and ``delta = s - e``
    is exact; regular pieces still receive ``fun(s)``.

    With ``cumulative=True`` returns ``(total, s_nodes, running)`` where
    ``running[k]`` is the integral from ``lo`` to ``s_nodes[k]``; the nodes are
    the adaptive panel edges mapped back to the original variable.
    """
    if hi <= lo:
        if cumulative:
            return 0.0, np.array([lo]), np.array([0.0])
        return 0.0
    nodes = [np.array([lo])]
    running = [np.array([0.0])]
    total = 0.0
    for s_of, ds_of, end, off in _pieces(lo, hi, singular_lo, singular_hi):
        if endpoint_aware and end is not None:
            def mapped(t, s_of=s_of, ds_of=ds_of, end=end, off=off):
                return fun(s_of(t), end, off(t)) * ds_of(t)
        else:
            def mapped(t, s_of=s_of, ds_of=ds_of):
                return fun(s_of(t)) * ds_of(t)

        edges, vals = adaptive_panels(mapped, 0.0, 1.0, atol=atol, rtol=rtol, initial=initial)
        if cumulative:
            nodes.append(s_of(edges[1:]))
            running.append(total + np.cumsum(vals))
        total += float(vals.sum())
    if not cumulative:
        return total
    s_nodes = np.concatenate(nodes)
    s_nodes[-1] = hi
    return total, s_nodes, np.concatenate(running)
