import math

import numpy as np
import pytest

from prewet.interface import (ContourStructureError, check_restricted_phase,
                              envelopes, hits_box, max_closed_diameter,
                              omega_gamma, s_cluster, trace_contours)
from prewet.model import BoxGeometry, SpinConfig

from oracles import all_configs, interface_of


def _half(n):
    return BoxGeometry.half_box(n)


def test_all_plus_straight_contour():
    g = _half(3)
    cs = trace_contours(SpinConfig.all_plus(g))
    assert cs.gamma_length == 2 * 3 + 1
    assert cs.closed == []
    assert cs.open_gamma[0] == (-4, -1) and cs.open_gamma[-1] == (3, -1)
    assert all(b == -1 for _, b in cs.open_gamma)
    # real dual coordinates of the corners
    assert tuple(cs.gamma_real()[0]) == (-3.5, -0.5)
    assert tuple(cs.gamma_real()[-1]) == (3.5, -0.5)


def test_single_bulk_flip_gives_plaquette_loop():
    g = _half(3)
    c = SpinConfig.all_plus(g)
    c.spins[2, 0 - g.x_min] = -1  # site (0, 2)
    cs = trace_contours(c)
    assert len(cs.closed) == 1
    assert len(cs.closed[0]) == 4
    assert max_closed_diameter(cs) == 1
    assert cs.gamma_length == 7  # open contour unaffected


def test_minus_row_contour():
    n = 3
    g = _half(n)
    c = SpinConfig.all_plus(g)
    c.spins[0, :] = -1
    cs = trace_contours(c)
    assert cs.closed == []
    # straight at height +1/2 joined to the corners by two unit vertical edges
    assert cs.gamma_length == 2 * n + 3
    p = envelopes(cs)
    assert np.all(p.gamma_plus == 1)
    assert p.minus_area == 2 * n + 1


def test_envelopes_flat():
    g = _half(4)
    p = envelopes(trace_contours(SpinConfig.all_plus(g)))
    assert np.all(p.gamma_plus == 0)
    assert np.all(p.gamma_minus == -1)
    assert p.minus_area == 0


def test_envelope_bump():
    # single upward square bump over column 0
    g = _half(2)
    c = SpinConfig.all_plus(g)
    c.spins[0, 0 - g.x_min] = -1
    cs = trace_contours(c)
    p = envelopes(cs)
    assert p.minus_area == 1
    assert p.gamma_plus[0 - g.x_min] == 1
    assert p.gamma_plus[1 - g.x_min] == 0
    assert p.gamma_plus[-1 - g.x_min] == 0


def test_envelope_interpolation_matches_paper_convention():
    g = _half(2)
    c = SpinConfig.all_plus(g)
    c.spins[0, 0 - g.x_min] = -1
    p = envelopes(trace_contours(c))
    assert p.plus_at(0.0) == 1.0
    assert p.plus_at(0.5) == 0.5  # linear between integer columns
    assert p.gamma_plus[0] > p.gamma_minus[0]


def test_s_cluster_examples():
    g = _half(3)
    assert s_cluster(SpinConfig.all_plus(g)) == set()
    c = SpinConfig.all_plus(g)
    c.spins[0, 0 - g.x_min] = -1
    assert s_cluster(c) == {(0, 0)}
    c2 = SpinConfig.all_plus(g)
    c2.spins[0, 1 - g.x_min] = -1   # (1, 0)
    c2.spins[1, 0 - g.x_min] = -1   # (0, 1): NW-SE diagonal from (1, 0)
    assert s_cluster(c2) == {(1, 0), (0, 1)}
    # NE-SW diagonals do not connect
    c3 = SpinConfig.all_plus(g)
    c3.spins[1, 1 - g.x_min] = -1   # (1, 1) floats: not s-connected to the row
    assert s_cluster(c3) == set()


def test_max_closed_diameter_contract():
    g = _half(4)
    c = SpinConfig.all_plus(g)
    assert max_closed_diameter(trace_contours(c)) == 0
    c.spins[2, 0 - g.x_min] = -1
    assert max_closed_diameter(trace_contours(c)) == 1
    c.spins[2, 2 - g.x_min] = -1
    c.spins[2, 3 - g.x_min] = -1
    c.spins[3, 2 - g.x_min] = -1
    cs = trace_contours(c)
    assert max_closed_diameter(cs) == max(max_closed_diameter(cs), 1)
    diams = sorted((max(np.ptp([v[0] for v in loop]), np.ptp([v[1] for v in loop])))
                   for loop in cs.closed)
    assert diams == [1, 2]
    assert max_closed_diameter(cs) == 2


def test_restricted_phase_thresholds():
    g = _half(4)
    cs = trace_contours(SpinConfig.all_plus(g))
    assert check_restricted_phase(cs, kappa=1.0, n=100)
    # synthetic: diameter 10 fails at kappa=1, N=100 (ln(100) ~ 4.6); 4 passes
    assert 10 > 1.0 * math.log(100) > 4


def test_hits_box():
    g = _half(4)
    flat = envelopes(trace_contours(SpinConfig.all_plus(g)))
    assert hits_box(flat, 2, 0)      # runs along the bottom
    assert hits_box(flat, 4, 0)
    c = SpinConfig.all_plus(g)
    c.spins[0:3, :] = -1             # gamma uniformly above height 2
    lifted = envelopes(trace_contours(c))
    assert np.all(lifted.gamma_minus == 2)
    assert not hits_box(lifted, 2, 0)
    assert not hits_box(lifted, 2, 2)
    assert hits_box(lifted, 2, 3)


def _no_closed(config):
    return not trace_contours(config).closed


def test_roundtrip_exhaustive_4x3():
    # config -> open contour -> omega_gamma reproduces the config exactly for
    # every closed-loop-free configuration of a 4x3 box
    g = BoxGeometry(x_min=-1, x_max=2, y_max=2)
    checked = 0
    for c in all_configs(g):
        cs = trace_contours(c)
        if cs.closed:
            continue
        w = omega_gamma(cs)
        assert np.array_equal(w.spins, c.spins)
        checked += 1
    assert checked > 100  # plenty of loop-free configs exist


def test_envelope_bounds_and_area_exhaustive_4x3():
    g = BoxGeometry(x_min=-1, x_max=2, y_max=2)
    for c in all_configs(g):
        cs = trace_contours(c)
        p = envelopes(cs)
        w = omega_gamma(cs)
        # one-sided envelope fills always hold for omega_gamma
        for cx in range(g.width):
            col = w.spins[:, cx]
            gp, gm = p.gamma_plus[cx], p.gamma_minus[cx]
            assert np.all(col[max(gp, 0):] == 1)
            assert np.all(col[:max(min(gm + 1, g.height), 0)] == -1)
        # area identities
        assert p.minus_area >= int(np.sum(np.maximum(p.gamma_minus + 1, 0)))
        cols_monotone = all(
            np.all(np.diff(w.spins[:, cx]) >= 0) for cx in range(g.width))
        if cols_monotone:
            assert p.minus_area == int(np.sum(np.clip(p.gamma_plus, 0, g.height)))


def test_s_cluster_equals_minus_set_of_omega_gamma_exhaustive():
    # the deformation convention makes every minus site of omega_gamma
    # s-connected to the bottom row
    g = BoxGeometry(x_min=-1, x_max=2, y_max=2)
    for c in all_configs(g):
        w = omega_gamma(trace_contours(c))
        minus = {(x, y) for y in range(g.height) for x in range(g.x_min, g.x_max + 1)
                 if w.spins[y, x - g.x_min] == -1}
        assert s_cluster(w) == minus


def test_edge_multiset_matches_disagreement_oracle():
    g = BoxGeometry(x_min=-1, x_max=1, y_max=2)
    rng = np.random.default_rng(8)
    from prewet.interface import _active_edges

    for _ in range(200):
        spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=(g.height, g.width))
        c = SpinConfig(g, spins)
        assert _active_edges(c) == set(interface_of(c))


def test_duality_edge_invariance():
    # flipping all spins and the boundary leaves the disagreement edges fixed
    g = BoxGeometry(x_min=-1, x_max=1, y_max=1)
    from prewet.interface import _active_edges

    rng = np.random.default_rng(9)
    for _ in range(100):
        spins = rng.choice(np.array([-1, 1], dtype=np.int8), size=(g.height, g.width))
        a = _active_edges(SpinConfig(g, spins))
        b = set(_active_edges_flipped(SpinConfig(g, -spins)))
        assert a == b


def _active_edges_flipped(config):
    """Disagreement edges when the boundary condition is also flipped."""
    g = config.geometry
    edges = set()

    def spin(x, y):
        if g.contains(x, y):
            return int(config.spins[y, x - g.x_min])
        return -1 if y >= 0 else 1   # flipped eta-+

    for y in range(0, g.height):
        for x in range(g.x_min - 1, g.x_max + 1):
            if spin(x, y) != spin(x + 1, y):
                edges.add(("v", x, y))
    for y in range(-1, g.height):
        for x in range(g.x_min, g.x_max + 1):
            if spin(x, y) != spin(x, y + 1):
                edges.add(("h", x, y))
    return edges


def test_corrupted_config_raises():
    with pytest.raises(ContourStructureError):
        trace_contours(ContourSetForgery(_half(2)))


class ContourSetForgery:
    """A config-like object whose padded array breaks the corner structure."""

    def __init__(self, geometry):
        self.geometry = geometry
        self.spins = np.ones((geometry.height, geometry.width), dtype=np.int8)

    def padded(self):
        g = self.geometry
        out = np.ones((g.height + 2, g.width + 2), dtype=np.int8)
        # no minus row at all: the left corner has no incident edge
        return out
