from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radiso.density import gaussian, lebesgue
from radiso.errors import DomainError
from radiso.symmetrize import (AngularSet, format_set, from_profile, parse_set, random_angular_set,
                               read_set, ring_radii, set_measure, set_perimeter, symmetrize_set, write_set)

G = gaussian()


def wedge(law, lo, hi, R=3.0, n=512):
    return AngularSet(law, tuple((r, ((lo, hi),)) for r in ring_radii(R, n)), R / n)


def test_centred_ball_is_fixed():
    ball = from_profile(G, lambda r: math.pi, 2.0, 256)
    assert symmetrize_set(ball) == ball


def test_wedge_becomes_centred_wedge():
    s = symmetrize_set(wedge(G, 0.3, 1.1))
    for _, iv in s.rings:
        assert iv == ((-0.4, 0.4),) or iv[0] == pytest.approx((-0.4, 0.4), abs=1e-15)


def test_two_intervals_merge():
    s = AngularSet(lebesgue(), ((1.0, ((0.1, 0.4), (1.0, 1.2))),), 0.1)
    (r, iv), = symmetrize_set(s).rings
    assert iv[0] == pytest.approx((-0.25, 0.25), abs=1e-15)


def test_disk_area_and_circumference():
    R = 2.0
    disk = from_profile(lebesgue(), lambda r: math.pi, R, 2048)
    assert set_measure(disk) == pytest.approx(math.pi * R * R, abs=1e-5)
    assert set_perimeter(disk) == pytest.approx(2 * math.pi * R, abs=10 * R / 2048)


def test_empty_set():
    empty = AngularSet(G, (), 0.1)
    assert set_measure(empty) == 0.0
    assert set_perimeter(empty) == 0.0


def test_half_plane_under_gaussian():
    R = G.truncation_radius()
    hp = from_profile(G, lambda r: math.pi / 2, R, 2048)
    assert set_perimeter(hp) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-6)
    assert set_measure(hp) == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("lo,hi", [(0.3, 1.1), (-3.0, -2.2), (2.5, math.pi)])
def test_rotated_wedges_keep_their_perimeter(lo, hi):
    w = wedge(G, lo, hi)
    assert set_perimeter(w) == pytest.approx(set_perimeter(symmetrize_set(w)), abs=1e-12)


def test_wedge_across_the_negative_axis():
    w = AngularSet(G, tuple((r, ((-math.pi, -2.9), (2.5, math.pi))) for r in ring_radii(3, 512)), 3 / 512)
    assert set_perimeter(w) == pytest.approx(set_perimeter(symmetrize_set(w)), abs=1e-12)


def test_invalid_sets():
    with pytest.raises(DomainError):
        AngularSet(G, ((1.0, ((0.5, 0.2),)),), 0.1)
    with pytest.raises(DomainError):
        AngularSet(G, ((1.0, ((0.1, 0.5), (0.4, 0.6))),), 0.1)
    with pytest.raises(DomainError):
        AngularSet(G, ((1.0, ()), (1.3, ())), 0.1)
    with pytest.raises(DomainError):
        AngularSet(lebesgue(3), (), 0.1)


def test_topology_change_warns():
    s = AngularSet(lebesgue(), ((1.0, ((0.1, 0.4), (1.0, 1.2))), (1.1, ((0.1, 1.2),))), 0.1)
    with pytest.warns(RuntimeWarning):
        set_perimeter(s)


def test_text_round_trip(tmp_path):
    s = random_angular_set(G, 3.0, np.random.default_rng(5), n=64)
    assert parse_set(format_set(s), G) == s
    path = tmp_path / "set.txt"
    write_set(path, s)
    assert read_set(path, G) == s


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_symmetrization_properties(seed):
    R = 3.0
    n = 512
    s = random_angular_set(G, R, np.random.default_rng(seed), n=n)
    sym = symmetrize_set(s)
    assert set_measure(sym) == set_measure(s)
    assert symmetrize_set(sym) == sym
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        assert set_perimeter(sym) <= set_perimeter(s) + 10 * R / n
