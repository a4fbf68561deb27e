"""Statistical comparison of rescaled interfaces/walks with the diffusion reference.

Profiles are rescaled diffusively (horizontal n^(2/3), vertical
n^(1/3) sqrt(chi)) and compared to the stationary density phi_0^2 and to the
spectral transition kernel through one-sample KS statistics, joint-histogram
L1 gaps and event-rate diagnostics.  Every statistic is a deterministic
function of (samples, thresholds, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .interface import InterfaceProfile
from .walks import PiecewiseLinear

__all__ = [
    "RescaledEnsemble",
    "DiagnosticsReport",
    "InsufficientSamplesError",
    "rescale_interface",
    "ks_statistic",
    "ks_against_fs",
    "diagnostics",
    "default_thresholds",
    "two_time_check",
    "height_scaling_fit",
]


class InsufficientSamplesError(ValueError):
    pass


@dataclass
class RescaledEnsemble:
    """Per-sample continuous nonnegative profiles on a common window."""

    profiles: list[PiecewiseLinear]
    window: tuple[float, float]
    provenance: str                   # "ising" | "walk" | "fs"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.window
        for p in self.profiles:
            a, b = p.window
            if a > lo or b < hi:
                raise ValueError(f"profile domain [{a},{b}] does not cover window [{lo},{hi}]")
        if any(np.min(p.values) < 0 for p in self.profiles):
            raise ValueError("profiles must be nonnegative")

    def heights_at(self, t: float) -> np.ndarray:
        lo, hi = self.window
        if not lo <= t <= hi:
            raise ValueError(f"t={t} outside window {self.window}")
        return np.asarray([float(p(t)) for p in self.profiles])

    def __len__(self) -> int:
        return len(self.profiles)


def rescale_interface(profile: InterfaceProfile, n: int, chi: float) -> PiecewiseLinear:
    """Upper envelope under diffusive scaling, linearly interpolated."""
    if chi <= 0:
        raise ValueError("chi must be positive")
    times = profile.columns / n ** (2.0 / 3.0)
    vals = profile.gamma_plus / (n ** (1.0 / 3.0) * math.sqrt(chi))
    return PiecewiseLinear(np.asarray(times, dtype=float), np.asarray(vals, dtype=float))


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance against a reference CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    f = np.asarray(cdf(x), dtype=float)
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return float(max(upper, lower))


def ks_against_fs(ensemble: RescaledEnsemble, t0: float, density,
                  n_boot: int = 1000, seed: int = 0) -> tuple[float, tuple[float, float]]:
    """KS distance of the time-t0 heights against the stationary CDF, with a
    bootstrap percentile confidence interval."""
    if len(ensemble) < 100:
        raise InsufficientSamplesError(f"need >= 100 samples, got {len(ensemble)}")
    vals = ensemble.heights_at(t0)
    stat = ks_statistic(vals, density.cdf)
    rng = np.random.Generator(np.random.Philox(key=seed))
    boots = np.empty(n_boot)
    for b in range(n_boot):
        idx = rng.integers(0, len(vals), size=len(vals))
        boots[b] = ks_statistic(vals[idx], density.cdf)
    return stat, (float(np.quantile(boots, 0.025)), float(np.quantile(boots, 0.975)))


def default_thresholds(n: int, eps: float = 0.1) -> dict:
    """kappa, box half-width/height and the area/length constants."""
    return {
        "kappa": 4.0,
        "box_half_width": int(3 * n ** (1.0 - 5.0 * eps)),
        "box_height": int(math.ceil(n ** eps)),
        "c_area": 4.0,
        "c_len": 8.0,
    }


@dataclass
class DiagnosticsReport:
    n: int
    samples: int
    thresholds: dict
    restricted_phase_rate: float
    repulsion_hit_rate: float
    area_exceed_rate: float
    length_exceed_rate: float
    width_quantiles: list[float]
    area_quantiles: list[float]        # |Lambda^-| / N^(4/3)
    length_quantiles: list[float]      # |gamma| / N
    mean_zeta: float | None = None
    zeta_stderr: float | None = None
    ks_at_times: dict = field(default_factory=dict)
    two_time_gaps: dict = field(default_factory=dict)

    def __post_init__(self):
        for rate in (self.restricted_phase_rate, self.repulsion_hit_rate,
                     self.area_exceed_rate, self.length_exceed_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("rates must be in [0,1]")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "thresholds": dict(self.thresholds),
            "restricted_phase_rate": self.restricted_phase_rate,
            "repulsion_hit_rate": self.repulsion_hit_rate,
            "area_exceed_rate": self.area_exceed_rate,
            "length_exceed_rate": self.length_exceed_rate,
            "width_quantiles": list(self.width_quantiles),
            "area_quantiles": list(self.area_quantiles),
            "length_quantiles": list(self.length_quantiles),
            "mean_zeta": self.mean_zeta,
            "zeta_stderr": self.zeta_stderr,
            "ks_at_times": self.ks_at_times,
            "two_time_gaps": self.two_time_gaps,
        }


_QS = (0.5, 0.9, 0.99)


def diagnostics(profiles: list[InterfaceProfile], closed_diameters: list[int],
                n: int, thresholds: dict | None = None) -> DiagnosticsReport:
    """Event rates and quantiles for an ensemble of extracted interfaces.

    profiles and closed_diameters are parallel per-sample lists; the box-hit
    event uses the lower envelope as in hits_box.
    """
    from .interface import hits_box

    if len(profiles) != len(closed_diameters):
        raise ValueError("profiles and closed_diameters must be parallel")
    th = dict(default_thresholds(n))
    if thresholds:
        th.update(thresholds)
    m = len(profiles)
    log_n = math.log(n)
    restricted = sum(1 for d in closed_diameters if d <= th["kappa"] * log_n)
    hits = sum(1 for p in profiles
               if hits_box(p, th["box_half_width"], th["box_height"]))
    areas = np.array([p.minus_area for p in profiles], dtype=float)
    lengths = np.array([p.gamma_length for p in profiles], dtype=float)
    area_exc = int(np.sum(areas > th["c_area"] * n ** (4.0 / 3.0)))
    len_exc = int(np.sum(lengths > th["c_len"] * n))
    half = min(int(round(n ** (2.0 / 3.0))), (len(profiles[0].gamma_plus) - 1) // 2)
    widths = []
    for p in profiles:
        sel = np.abs(p.columns) <= half
        widths.append(float(np.max(p.gamma_plus[sel] - p.gamma_minus[sel])))
    return DiagnosticsReport(
        n=n, samples=m, thresholds=th,
        restricted_phase_rate=restricted / m,
        repulsion_hit_rate=hits / m,
        area_exceed_rate=area_exc / m,
        length_exceed_rate=len_exc / m,
        width_quantiles=[float(np.quantile(widths, q)) for q in _QS],
        area_quantiles=[float(np.quantile(areas / n ** (4.0 / 3.0), q)) for q in _QS],
        length_quantiles=[float(np.quantile(lengths / n, q)) for q in _QS],
    )


def two_time_check(ensemble: RescaledEnsemble, times: tuple[float, float],
                   params, kernel_fn=None, bins: int = 10,
                   r_max: float | None = None) -> float:
    """L1 gap between the empirical two-time histogram and rho x kernel.

    The reference cell mass is the midpoint value of
    rho(r) * kernel(t2 - t1, r, y) times the cell area.
    """
    from .fs import stationary_density, transition_kernel

    t1, t2 = times
    lo, hi = ensemble.window
    if not (lo <= t1 < t2 <= hi):
        raise ValueError("need t1 < t2 inside the window")
    if len(ensemble) < 100:
        raise InsufficientSamplesError("need >= 100 samples")
    a = ensemble.heights_at(t1)
    b = ensemble.heights_at(t2)
    dens = stationary_density(params)
    if r_max is None:
        r_max = float(dens.quantile(0.999))
    edges = np.linspace(0.0, r_max, bins + 1)
    emp, _, _ = np.histogram2d(a, b, bins=(edges, edges))
    emp = emp / len(a)
    mids = (edges[:-1] + edges[1:]) / 2.0
    cell = (edges[1] - edges[0]) ** 2
    if kernel_fn is None:
        kmat, _ = transition_kernel(params, t2 - t1, mids[:, None], mids[None, :],
                                    modes=min(12, params.n_modes))
    else:
        kmat = kernel_fn(t2 - t1, mids[:, None], mids[None, :])
    ref = dens(mids)[:, None] * kmat * cell
    return float(np.abs(emp - ref).sum())


def height_scaling_fit(levels: list[tuple[int, np.ndarray]], n_boot: int = 1000,
                       seed: int = 0) -> tuple[float, tuple[float, float]]:
    """OLS slope of log(mean height) against log n, bootstrap 95% CI.

    levels is a list of (n, per-sample midpoint heights).
    """
    if len(levels) < 4:
        raise ValueError("need at least 4 values of n")
    ns = np.array([n for n, _ in levels], dtype=float)
    logn = np.log(ns)

    def slope(means: np.ndarray) -> float:
        y = np.log(means)
        x = logn - logn.mean()
        return float(np.sum(x * (y - y.mean())) / np.sum(x * x))

    means = np.array([float(np.mean(h)) for _, h in levels])
    fit = slope(means)
    rng = np.random.Generator(np.random.Philox(key=seed))
    boots = np.empty(n_boot)
    for b in range(n_boot):
        bm = np.array([float(np.mean(rng.choice(h, size=len(h), replace=True)))
                       for _, h in levels])
        boots[b] = slope(bm)
    return fit, (float(np.quantile(boots, 0.025)), float(np.quantile(boots, 0.975)))
