"""Deterministic CSV / JSON / SVG emission with atomic writes."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__


def write_atomic(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    if x is None:
        return ""
    return str(x)


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def json_text(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def svg_curve(curve, ball_radius: float | None = None, size: int = 480, max_points: int = 2000) -> str:
    """Curve branch and its mirror image, the symmetry axis and the equal-measure ball."""
    r = np.asarray(curve.r)
    f = np.asarray(curve.f)
    if r.size > max_points:
        idx = np.unique(np.linspace(0, r.size - 1, max_points).astype(int))
        r, f = r[idx], f[idx]
    x, y = r * np.cos(f), r * np.sin(f)
    ext = float(np.max(np.abs(np.concatenate([x, y])))) if r.size else 1.0
    if ball_radius is not None and math.isfinite(ball_radius):
        ext = max(ext, ball_radius)
    ext = 1.1 * max(ext, 1e-9)
    scale = size / (2 * ext)
    px = lambda v: (v + ext) * scale
    py = lambda v: (ext - v) * scale

    def poly(xs, ys, colour):
        pts = " ".join(f"{px(a):.6f},{py(b):.6f}" for a, b in zip(xs, ys))
        return f'  <polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- radiso {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'  <line x1="0" y1="{py(0):.6f}" x2="{size}" y2="{py(0):.6f}" stroke="#999" stroke-dasharray="4 3"/>',
    ]
    if ball_radius is not None and math.isfinite(ball_radius):
        out.append(f'  <circle cx="{px(0):.6f}" cy="{py(0):.6f}" r="{ball_radius * scale:.6f}" '
                   'fill="none" stroke="#c33" stroke-dasharray="2 2"/>')
    out.append(poly(x, y, "#136"))
    out.append(poly(x, -y, "#136"))
    out.append("</svg>")
    return "\n".join(out) + "\n"
