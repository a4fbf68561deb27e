import math

import numpy as np
import pytest
from scipy.integrate import quad, simpson

from prewet.fs import (AccuracyRangeError, FSParams, GridResolutionError,
                       ModesInsufficientError, StepTooCoarseError, airy,
                       airy_ai_deriv, airy_semigroup, airy_zero, airy_zero_deriv,
                       drift, ground_state, sample_path, stationary_density,
                       transition_kernel, trotter_kurtz, _phi_k, _phi_norm)
from prewet.walks import StepLaw, default_step_law


def bump(r, r0=2.0, w=1.2):
    u = (r - r0) / w
    return math.exp(-1.0 / (1.0 - u * u)) if abs(u) < 1 else 0.0


def test_airy_golden_values():
    ev = airy(0.0)
    # closed forms 3^(-2/3)/Gamma(2/3) and -3^(-1/3)/Gamma(1/3)
    assert ev.value == pytest.approx(0.3550280539, abs=1e-9)
    assert ev.deriv == pytest.approx(-0.2588194038, abs=1e-9)
    assert airy(5.0).value == pytest.approx(1.0834e-4, abs=1e-8)
    assert airy(0.0).method == "series"
    assert airy(50.0).method == "asymptotic"
    with pytest.raises(AccuracyRangeError):
        airy(101.0)


def test_airy_wronskian_consistency():
    # Ai'' = x Ai via central differences at scattered points
    h = 1e-4
    for x in (-7.3, -2.0, 0.0, 1.7, 4.2):
        second = (airy(x + h).value - 2 * airy(x).value + airy(x - h).value) / h ** 2
        assert second == pytest.approx(x * airy(x).value, abs=1e-6)


def test_airy_series_asymptotic_overlap():
    from prewet.fs import _airy_series, _airy_asymp_neg, _airy_asymp_pos

    for x in (5.2, 5.9):
        s, a = _airy_series(x), _airy_asymp_pos(x)
        assert s[0] == pytest.approx(a[0], abs=2e-12)
        assert s[1] == pytest.approx(a[1], abs=2e-12)
    for x in (-8.4, -8.9):
        s, a = _airy_series(x), _airy_asymp_neg(x)
        assert s[0] == pytest.approx(a[0], abs=1e-10)
        assert s[1] == pytest.approx(a[1], abs=1e-9)


def test_airy_vectorized_matches_scalar():
    xs = np.linspace(-60, 60, 257)
    ai, aip = airy_ai_deriv(xs)
    for i in (0, 40, 128, 200, 256):
        ev = airy(xs[i])
        assert ai[i] == pytest.approx(ev.value, abs=1e-12)
        assert aip[i] == pytest.approx(ev.deriv, abs=1e-12)


def test_airy_zeros():
    assert airy_zero(1) == pytest.approx(2.3381074105, abs=1e-8)
    assert airy_zero(2) == pytest.approx(4.0879494441, abs=1e-8)
    zs = [airy_zero(k) for k in range(1, 21)]
    assert all(airy(-z).value == pytest.approx(0.0, abs=1e-10) for z in zs)
    assert all(a < b for a, b in zip(zs, zs[1:]))
    # interlacing with the zeros of Ai'
    dzs = [airy_zero_deriv(k) for k in range(1, 20)]
    assert all(dzs[k] < zs[k] < dzs[k + 1] for k in range(10))


def test_ground_state():
    params = FSParams(c=0.5)
    phi0, a0 = ground_state(params)
    assert params.big_c == pytest.approx(1.0)
    assert a0 == pytest.approx(0.5 * airy_zero(1))
    assert phi0(0.0) == pytest.approx(0.0, abs=1e-10)
    rs = np.linspace(0.05, 8.0, 100)
    assert np.all(phi0(rs) > 0)
    with pytest.raises(ValueError):
        FSParams(c=0.0)


def test_eigen_residuals_five_point():
    # ||(1/2) phi'' - c r phi + a phi||_inf <= 1e-6, 5-point stencil
    h = 1e-2
    for c in (0.5, 1.0, 2.0):
        params = FSParams(c=c)
        rs = np.linspace(2 * h, 6.0, 241)
        for k in range(6):
            phi = _phi_k(params, k)
            ak = params.eigenvalue(k)
            second = (-phi(rs + 2 * h) + 16 * phi(rs + h) - 30 * phi(rs)
                      + 16 * phi(rs - h) - phi(rs - 2 * h)) / (12 * h ** 2)
            resid = np.abs(0.5 * second - c * rs * phi(rs) + ak * phi(rs))
            assert resid.max() <= 1e-6


def test_orthonormality():
    params = FSParams(c=1.3)
    gr = np.linspace(0, 30, 24001)
    phis = [_phi_k(params, k)(gr) for k in range(6)]
    for j in range(6):
        for k in range(j, 6):
            val = simpson(phis[j] * phis[k], x=gr)
            assert val == pytest.approx(1.0 if j == k else 0.0, abs=1e-6)


def test_norm_quadrature_matches_airy_identity():
    # closed form: int_{-w}^inf Ai^2 = Ai'(-w)^2, so ||phi||^2 = Ai'(-w)^2 / C
    for c in (0.5, 2.0):
        params = FSParams(c=c)
        for k in (0, 3):
            w = params.omegas[k]
            exact = abs(airy(-w).deriv) / math.sqrt(params.big_c)
            assert _phi_norm(params, k) == pytest.approx(exact, rel=1e-9)


def test_scale_covariance():
    # replacing c by 8c halves all C-lengths: phi0^{8c}(r) = phi0^{c}(2r)
    a, b = FSParams(c=0.7), FSParams(c=5.6)
    ga, _ = ground_state(a)
    gb, _ = ground_state(b)
    rs = np.linspace(0.0, 4.0, 50)
    assert np.allclose(gb(rs), ga(2 * rs), atol=1e-13)
    assert b.eigenvalue(0) == pytest.approx(4 * a.eigenvalue(0), rel=1e-13)


def test_stationary_density():
    params = FSParams(c=1.0)
    dens = stationary_density(params)
    total, _ = quad(dens, 0, dens.r_max, limit=300)
    assert total == pytest.approx(1.0, abs=1e-6)
    assert dens(0.0) == pytest.approx(0.0, abs=1e-12)
    # mode where Ai' vanishes: r* = (omega_1 - |a1'|)/C
    expect = (airy_zero(1) - 1.0187929716) / params.big_c
    assert dens.mode == pytest.approx(expect, abs=1e-8)
    grid = np.linspace(0.01, dens.r_max, 500)
    assert abs(grid[np.argmax(dens(grid))] - dens.mode) < 0.02
    # cdf evaluator consistent with quadrature
    mid = dens.mode
    part, _ = quad(dens, 0, mid, limit=200)
    assert dens.cdf(mid) == pytest.approx(part, abs=1e-6)


def test_drift():
    params = FSParams(c=1.0)
    with pytest.raises(ValueError):
        drift(params, 0.0)
    assert 1e-6 * drift(params, 1e-6) == pytest.approx(1.0, abs=1e-3)
    dens = stationary_density(params)
    assert drift(params, dens.mode) == pytest.approx(0.0, abs=1e-8)
    for r in np.linspace(dens.mode + 0.05, 4.0, 40):
        assert drift(params, r) < 0


def test_transition_kernel_contracts():
    params = FSParams(c=1.0)
    dens = stationary_density(params)
    ys = np.linspace(1e-4, dens.r_max, 2001)
    kern, tail = transition_kernel(params, 1.0, 1.0, ys, modes=14)
    assert simpson(kern, x=ys) == pytest.approx(1.0, abs=1e-4)
    k20, _ = transition_kernel(params, 20.0, 1.0, ys, modes=14)
    assert np.max(np.abs(k20 - dens(ys))) < 1e-6
    # Chapman-Kolmogorov on a test triple
    zs = np.linspace(1e-4, dens.r_max, 1501)
    ks_, _ = transition_kernel(params, 0.7, 0.8, zs, modes=16)
    kt_, _ = transition_kernel(params, 0.5, zs, 1.3, modes=16)
    lhs = simpson(ks_ * kt_, x=zs)
    rhs, _ = transition_kernel(params, 1.2, 0.8, 1.3, modes=16)
    assert lhs == pytest.approx(float(rhs), abs=1e-4)
    with pytest.raises(ModesInsufficientError):
        transition_kernel(params, 1.0, 1.0, 1.0, modes=25)  # only 20 zeros stored
    with pytest.raises(ModesInsufficientError):
        transition_kernel(params, 0.05, 0.9, 1.0, modes=12, tol=1e-12)


def test_sample_path_determinism_and_rules():
    params = FSParams(c=1.0)
    a = sample_path(params, 1.0, horizon=20.0, dt=0.01,
                    rng=np.random.Generator(np.random.Philox(key=3)))
    b = sample_path(params, 1.0, horizon=20.0, dt=0.01,
                    rng=np.random.Generator(np.random.Philox(key=3)))
    c = sample_path(params, 1.0, horizon=20.0, dt=0.01,
                    rng=np.random.Generator(np.random.Philox(key=4)))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    assert np.all(a.values > 0)
    with pytest.raises(ValueError):
        sample_path(params, 1.0, horizon=1.0, dt=0.5, rng=np.random.default_rng(0))


def test_zero_noise_flow_converges_to_mode():
    # deterministic drift flow: Euler integration lands on the density mode
    params = FSParams(c=1.0)
    dens = stationary_density(params)
    for x0 in (0.2, 3.5):
        x = x0
        for _ in range(40000):
            x = max(x + drift(params, x) * 1e-3, 1e-9)
        assert x == pytest.approx(dens.mode, abs=1e-5)


def test_sample_path_ks_decreasing_from_off_stationary():
    params = FSParams(c=2.0)
    dens = stationary_density(params)
    rng = np.random.Generator(np.random.Philox(key=11))
    n_paths = 1500
    marks = {1.0: [], 2.0: [], 5.0: []}
    for _ in range(n_paths):
        p = sample_path(params, 0.3, horizon=5.0, dt=0.005, rng=rng)
        for t in marks:
            marks[t].append(float(np.interp(t, p.times, p.values)))
    kss = []
    for t, vals in marks.items():
        v = np.sort(vals)
        n = len(v)
        f = dens.cdf(v)
        kss.append(max(np.max(np.arange(1, n + 1) / n - f),
                       np.max(f - np.arange(0, n) / n)))
    assert kss[0] > kss[1] > 0 and kss[2] < 0.08


def test_trotter_kurtz_t0_and_grid_guard():
    law = default_step_law(2)
    res = trotter_kurtz(law, lam=1.0, m_star=1.0, f=bump, t=0.0, n=256)
    fv = np.array([bump(r) for r in res.grid])
    assert np.array_equal(res.iterate, fv)
    with pytest.raises(GridResolutionError):
        trotter_kurtz(law, lam=1.0, m_star=1.0,
                      f=lambda r: bump(r, r0=2.0, w=0.001), t=0.5, n=64)


@pytest.mark.slow
def test_trotter_kurtz_gap_decreases():
    law = default_step_law(3)
    gaps = [trotter_kurtz(law, lam=1.0, m_star=1.0, f=bump, t=0.5, n=n).sup_gap
            for n in (2 ** 10, 2 ** 12, 2 ** 14)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_trotter_kurtz_heat_kernel_variant():
    law = default_step_law(2)
    res = trotter_kurtz(law, lam=0.0, m_star=1.0, f=bump, t=0.5, n=2 ** 12)
    assert res.sup_gap < 0.02
