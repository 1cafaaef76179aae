"""Numerical isoperimetry for radially symmetric planar densities."""

from __future__ import annotations

__version__ = "0.1.0"

from . import analysis, density, errors, logconvex, quadrature, shooting, stationary, symmetrize  # noqa: E402
from .analysis import classify, region_measure, region_perimeter, summarize  # noqa: E402
from .density import RadialDensity, exp_r, exp_r_alpha, gaussian, inverse_r, lebesgue, power_law  # noqa: E402
from .stationary import StationaryParams, solve_curve, solve_u  # noqa: E402

__all__ = [
    "RadialDensity", "StationaryParams", "analysis", "classify", "density", "errors", "exp_r",
    "exp_r_alpha", "gaussian", "inverse_r", "lebesgue", "logconvex", "power_law", "quadrature",
    "region_measure", "region_perimeter", "shooting", "solve_curve", "solve_u", "stationary",
    "summarize", "symmetrize",
]
