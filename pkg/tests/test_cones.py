import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prewet.cones import (Decomposition, EffectiveWalk, InsufficientDataError,
                          LatticePath, NoConePointsError, classify, cone_points,
                          decompose, effective_walk, estimate_chi)
from prewet.interface import trace_contours
from prewet.model import BoxGeometry, SpinConfig

from oracles import brute_cone_points


def _path(pts):
    return LatticePath.from_points(pts)


def test_horizontal_path_all_cone_points():
    p = _path([(i, 0) for i in range(6)])
    assert cone_points(p) == [(i, 0) for i in range(6)]


def test_east_north_north_east():
    # the vertex before the double north violates the cone for the one after
    p = _path([(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)])
    assert cone_points(p) == brute_cone_points(p.vertices) == []


def test_degenerate_single_vertex():
    p = _path([(3, 5)])
    assert cone_points(p) == [(3, 5)]


@st.composite
def lattice_paths(draw):
    length = draw(st.integers(min_value=1, max_value=40))
    steps = draw(st.lists(st.sampled_from([(1, 0), (0, 1), (0, -1), (-1, 0)]),
                          min_size=length, max_size=length))
    pts = [(0, 0)]
    for dx, dy in steps:
        pts.append((pts[-1][0] + dx, pts[-1][1] + dy))
    return _path(pts)


@settings(max_examples=400, deadline=None)
@given(lattice_paths())
def test_cone_points_match_quadratic_oracle(p):
    assert cone_points(p) == brute_cone_points(p.vertices)


@settings(max_examples=300, deadline=None)
@given(lattice_paths())
def test_decompose_concatenate_identity(p):
    if not cone_points(p):
        with pytest.raises(NoConePointsError):
            decompose(p)
        return
    d = decompose(p)
    assert d.concatenated() == p.vertices


@st.composite
def staircase_paths(draw):
    # x-monotone paths (east/north/south, no immediate backtrack), the shape
    # class of contour pieces; spec properties quantify over these
    length = draw(st.integers(min_value=1, max_value=40))
    pts = [(0, 0)]
    last_dy = 0
    for _ in range(length):
        choices = [(1, 0), (0, 1), (0, -1)]
        if last_dy:
            choices = [(1, 0), (0, last_dy)]  # no up-down edge revisits
        dx, dy = draw(st.sampled_from(choices))
        pts.append((pts[-1][0] + dx, pts[-1][1] + dy))
        last_dy = dy
    return _path(pts)


@settings(max_examples=400, deadline=None)
@given(staircase_paths())
def test_staircase_decomposition_properties(p):
    assert cone_points(p) == brute_cone_points(p.vertices)
    if not cone_points(p):
        return
    d = decompose(p)
    assert d.concatenated() == p.vertices
    for piece in d.irreducibles:
        assert classify(piece).irreducible
    walk = effective_walk(d)   # steps must stay in the cone
    assert walk.points[0][0] >= p.vertices[0][0]


def test_effective_walk_rejects_cone_exit():
    # a west step makes the ordered breakpoints leave the cone
    p = _path([(0, 0), (-1, 0)])
    d = decompose(p)
    with pytest.raises(ValueError):
        effective_walk(d)


def test_classify_examples():
    single = classify(_path([(0, 0), (1, 0)]))
    assert single.irreducible
    assert single.f_witness == (0, 0) and single.b_witness == (1, 0)
    double = classify(_path([(0, 0), (1, 0), (2, 0)]))
    assert double.diamond_confined and not double.irreducible
    north = classify(_path([(0, 0), (0, 1)]))
    assert not north.forward_confined and not north.backward_confined


def test_decompose_horizontal():
    d = decompose(_path([(i, 0) for i in range(6)]))
    assert len(d.left) == 1 and len(d.right) == 1  # trivial end pieces
    assert len(d.irreducibles) == 5
    assert all(len(piece) == 2 for piece in d.irreducibles)


def test_decompose_ising_flat_contour():
    n = 4
    cs = trace_contours(SpinConfig.all_plus(BoxGeometry.half_box(n)))
    d = decompose(LatticePath.from_points(cs.open_gamma))
    assert len(d.irreducibles) == 2 * n + 1
    walk = effective_walk(d)
    assert len(walk) == 2 * n + 1
    assert np.all(walk.steps == [1, 0])


def test_excursion_is_single_block():
    # unit-high excursion flanked by flat runs: one irreducible block
    pts = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 0), (3, 0), (4, 0)]
    p = _path(pts)
    assert cone_points(p) == brute_cone_points(p.vertices) == [(0, 0), (3, 0), (4, 0)]
    d = decompose(p)
    blocks = [piece for piece in d.irreducibles if len(piece) > 2]
    assert len(blocks) == 1
    assert blocks[0].displacement == (3, 0)   # the whole excursion
    walk = effective_walk(d)
    assert (3, 0) in [tuple(s) for s in walk.steps]


def test_effective_walk_gap():
    w = EffectiveWalk(points=((0, 0), (1, 0), (4, 2)))
    assert w.gap == pytest.approx(math.sqrt(13))


def test_effective_walk_cone_invariant():
    with pytest.raises(ValueError):
        EffectiveWalk(points=((0, 0), (1, 2)))
    with pytest.raises(ValueError):
        EffectiveWalk(points=((0, 0), (0, 0)))


def test_estimate_chi_examples():
    flat = EffectiveWalk(points=((0, 0), (1, 0), (2, 0)))
    chi, _ = estimate_chi([flat])
    assert chi == 0.0
    w = EffectiveWalk(points=((0, 0), (1, 1), (2, 0)))  # steps (1,1),(1,-1)
    chi, _ = estimate_chi([w])
    assert chi == pytest.approx(1.0)
    w2 = EffectiveWalk(points=((0, 0), (2, 1), (4, 0), (6, 0), (8, 0)))
    chi2, _ = estimate_chi([w2])
    assert chi2 == pytest.approx(0.25)
    with pytest.raises(InsufficientDataError):
        estimate_chi([EffectiveWalk(points=((0, 0), (1, 0)))])


def test_estimate_chi_jackknife():
    rng = np.random.default_rng(0)
    walks = []
    for _ in range(30):
        pts = [(0, 5)]
        for _ in range(50):
            t = int(rng.integers(1, 3))
            z = int(rng.integers(-t, t + 1))
            pts.append((pts[-1][0] + t, pts[-1][1] + z))
        walks.append(EffectiveWalk(points=tuple(pts)))
    chi, se = estimate_chi(walks)
    assert chi > 0 and 0 < se < chi
