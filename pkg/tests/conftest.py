from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np
import pytest

from radiso import shooting

GOLDEN = json.loads((Path(__file__).parent / "golden" / "regression.json").read_text())

# wall-clock seconds spent building each shared fixture, so runtime budgets
# can be checked without recomputing
TIMINGS: dict[str, float] = {}


def _timed(key, fn):
    t0 = time.perf_counter()
    out = fn()
    TIMINGS[key] = time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


@pytest.fixture(scope="session")
def timings():
    return TIMINGS


@pytest.fixture(scope="session")
def smooth_exponential():
    """Smooth closed curve for alpha = 1, a = 0.5 (shared by several modules)."""
    return _timed("smooth_exponential", lambda: shooting.find_lambda_smooth(1.0, 0.5))


@pytest.fixture(scope="session")
def thresholds():
    return _timed("thresholds", lambda: shooting.estimate_alpha_thresholds(np.linspace(1.05, 1.95, 10)))
