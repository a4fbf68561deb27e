"""Exact dynamic programming for directed walks under linear area tilt.

A step law puts mass on finitely many increments (theta, zeta) in the cone
{theta >= max(1, |zeta|)} with zero vertical mean.  A walk from u to v in the
closed upper half-plane (height 0 allowed) is weighted by

    prod_i  p(theta_i, zeta_i) * exp(-c_tilt * theta_i * Z_{i-1}),

so the total tilt exponent is c_tilt * A(S) with A(S) = sum theta_i Z_{i-1},
and c_tilt = 2 * lambda * m_star / n.  Since theta >= 1, the horizontal
coordinate is strictly increasing and the weights can be accumulated column
by column; heights are truncated at a cap with a mass-leak monitor that turns
silent truncation error into a hard failure.

Bridges are sampled exactly by backward sampling on the column tables, and
pinned partition functions / marked finite-dimensional weights by a
step-indexed DP over (relative x, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "StepLaw",
    "TiltParams",
    "WalkEnsembleStats",
    "PiecewiseLinear",
    "CapTooSmallError",
    "ZeroBridgeWeightError",
    "NegativeHeightError",
    "default_step_law",
    "area",
    "column_dp",
    "ColumnDP",
    "BridgeTables",
    "n_step_partition",
    "n_step_partition_pinned",
    "fdd_weights",
    "sample_tilted_bridge",
    "sample_bridge_ensemble",
    "rescale_diffusive",
    "rescale_fixed_steps",
    "time_change_map",
    "ensemble_stats",
    "endpoint_insensitivity",
]

_NEG_INF = -np.inf


class CapTooSmallError(RuntimeError):
    """Too much weight reaches the top of the height cap."""


class ZeroBridgeWeightError(RuntimeError):
    """The requested endpoint carries zero bridge weight."""


class NegativeHeightError(ValueError):
    pass


@dataclass(frozen=True)
class StepLaw:
    """Finite increment distribution on the cone, E[zeta] = 0."""

    support: tuple[tuple[int, int], ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if len(p) != len(self.support) or len(p) == 0:
            raise ValueError("support/probs mismatch")
        if np.any(p < 0):
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        for theta, zeta in self.support:
            if theta < 1 or abs(zeta) > theta:
                raise ValueError(f"step ({theta},{zeta}) outside the cone")
        mean_zeta = float(sum(pi * z for (_, z), pi in zip(self.support, self.probs)))
        if abs(mean_zeta) > 1e-12:
            raise ValueError(f"E[zeta] = {mean_zeta} must vanish")

    @property
    def theta_max(self) -> int:
        return max(t for t, _ in self.support)

    @property
    def zeta_max(self) -> int:
        return max(abs(z) for _, z in self.support)

    @property
    def mean_theta(self) -> float:
        return float(sum(p * t for (t, _), p in zip(self.support, self.probs)))

    @property
    def chi(self) -> float:
        """Var(zeta)/E(theta) of the law (the vertical rescaling constant)."""
        var_zeta = float(sum(p * z * z for (_, z), p in zip(self.support, self.probs)))
        return var_zeta / self.mean_theta

    @classmethod
    def from_weights(cls, weighted: dict[tuple[int, int], float]) -> "StepLaw":
        items = sorted(weighted.items())
        total = sum(w for _, w in items)
        return cls(tuple(k for k, _ in items), tuple(w / total for _, w in items))

    @classmethod
    def from_empirical_steps(cls, steps, symmetrize: bool = True) -> "StepLaw":
        """Histogram of observed (theta, zeta) steps; symmetrized in zeta so
        the zero-mean invariant holds exactly."""
        weights: dict[tuple[int, int], float] = {}
        for t, z in np.asarray(steps, dtype=int):
            weights[(int(t), int(z))] = weights.get((int(t), int(z)), 0.0) + 1.0
            if symmetrize:
                weights[(int(t), -int(z))] = weights.get((int(t), -int(z)), 0.0) + 1.0
        return cls.from_weights(weights)


def default_step_law(theta_max: int = 3) -> StepLaw:
    """Cone-supported law with p ~ exp(-theta - |zeta|), |zeta| <= theta."""
    weighted = {(t, z): math.exp(-t - abs(z))
                for t in range(1, theta_max + 1) for z in range(-t, t + 1)}
    return StepLaw.from_weights(weighted)


@dataclass(frozen=True)
class TiltParams:
    """Area-tilt strength 2*lambda*m_star/n and the DP height cap."""

    lam: float
    m_star: float
    n: int
    h_max: int | None = None

    def __post_init__(self):
        if self.lam < 0 or not (0 <= self.m_star <= 1) or self.n < 1:
            raise ValueError("need lambda >= 0, m_star in [0,1], n >= 1")

    @property
    def c_tilt(self) -> float:
        return 2.0 * self.lam * self.m_star / self.n

    @property
    def height_cap(self) -> int:
        if self.h_max is not None:
            return self.h_max
        guard = max(8, math.ceil(4.0 * self.n ** (1.0 / 3.0)))
        if self.c_tilt > 0:
            # tilted heights live on the scale (1/c_tilt)^(1/3); keep several
            # of those below the cap so the leak monitor stays quiet
            guard = max(guard, math.ceil(6.5 * self.c_tilt ** (-1.0 / 3.0)))
        return guard


def area(walk) -> int:
    """A(S) = sum_i theta_i * Z_{i-1} for a walk in the upper half-plane."""
    heights = np.asarray(walk.heights, dtype=np.int64)
    if np.any(heights < 0):
        raise NegativeHeightError("walk dips below height 0")
    steps = walk.steps
    return int(np.sum(steps[:, 0] * heights[:-1]))


def _tilt_factors(law: StepLaw, c_tilt: float, h: int) -> dict[int, np.ndarray]:
    zgrid = np.arange(h + 1, dtype=float)
    return {theta: np.exp(-c_tilt * theta * zgrid)
            for theta in sorted({t for t, _ in law.support})}


def _by_theta(law: StepLaw) -> dict[int, list[tuple[int, float]]]:
    grouped: dict[int, list[tuple[int, float]]] = {}
    for (t, z), p in zip(law.support, law.probs):
        grouped.setdefault(t, []).append((z, p))
    return grouped


def _shift_add(dest: np.ndarray, src: np.ndarray, zeta: int, p: float):
    # dest[z] += p * src[z - zeta] wherever z - zeta is a valid height
    h = len(dest) - 1
    lo, hi = max(zeta, 0), h + min(zeta, 0)
    if lo <= hi:
        dest[lo:hi + 1] += p * src[lo - zeta:hi + 1 - zeta]


@dataclass
class ColumnDP:
    """Column-indexed weight table W[x][z], stored scaled: W = value * e^logscale."""

    law: StepLaw
    c_tilt: float
    z_start: int
    span: int
    h: int
    values: np.ndarray = field(repr=False)     # (span+1, h+1), each column max-normalized
    logscale: np.ndarray = field(repr=False)   # (span+1,)

    def log_weight(self, x: int, z: int) -> float:
        v = self.values[x, z]
        return float(self.logscale[x] + np.log(v)) if v > 0 else _NEG_INF

    def weight(self, x: int, z: int) -> float:
        v = self.values[x, z]
        return float(v * np.exp(self.logscale[x])) if v > 0 else 0.0

    def log_table(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.values) + self.logscale[:, None]


def column_dp(law: StepLaw, tilt: TiltParams, u: tuple[int, int], span: int,
              check_cap: bool = True, reverse: bool = False) -> ColumnDP:
    """Tilted weights of walks from u to every reachable (x, z), 0 <= z <= cap.

    x is the horizontal offset from u (0..span).  A step (theta, zeta) leaving
    height z' carries weight p * exp(-c_tilt * theta * z').  With reverse=True
    the table accumulates weights of walks *into* u from the left instead
    (used as the backward table of a bridge); the tilt still charges the left
    endpoint of each step.

    Raises CapTooSmall when >= 0.1% of the terminal mass sits in the top 10%
    of the cap (unsafe truncation); disable for models where the cap is a hard
    constraint of the instance itself.
    """
    h = tilt.height_cap
    z0 = u[1]
    if span < 1:
        raise ValueError("span must be >= 1")
    if not (0 <= z0 <= h):
        raise ValueError(f"start height {z0} outside [0, {h}]")
    c = tilt.c_tilt
    grouped = _by_theta(law)
    tiltvec = _tilt_factors(law, c, h)
    values = np.zeros((span + 1, h + 1))
    logscale = np.full(span + 1, _NEG_INF)
    values[0, z0] = 1.0
    logscale[0] = 0.0
    for x in range(1, span + 1):
        prev_scales = [logscale[x - t] for t in grouped if x - t >= 0]
        if not prev_scales or np.all(np.isneginf(prev_scales)):
            continue
        m = max(s for s in prev_scales if not np.isneginf(s))
        col = np.zeros(h + 1)
        for theta, pairs in grouped.items():
            xp = x - theta
            if xp < 0 or np.isneginf(logscale[xp]):
                continue
            boost = math.exp(logscale[xp] - m)
            if not reverse:
                # forward: the step left the source column, charge its height
                src = values[xp] * tiltvec[theta] * boost
                for zeta, p in pairs:
                    _shift_add(col, src, zeta, p)
            else:
                # backward: the step leaves *this* column rightward, charge
                # this column's height after unshifting
                src = values[xp] * boost
                scratch = np.zeros(h + 1)
                for zeta, p in pairs:
                    _shift_add(scratch, src, -zeta, p)
                col += tiltvec[theta] * scratch
        top = col.max()
        top = col.max()
        if top > 0:
            values[x] = col / top
            logscale[x] = m + math.log(top)
    table = ColumnDP(law=law, c_tilt=c, z_start=z0, span=span, h=h,
                     values=values, logscale=logscale)
    if check_cap:
        term = values[span]
        total = term.sum()
        if total > 0:
            top_slice = term[int(math.ceil(0.9 * h)):].sum()
            if top_slice >= 1e-3 * total:
                raise CapTooSmallError(
                    f"{top_slice / total:.2e} of terminal mass in the top decile of cap {h}")
    return table


@dataclass
class BridgeTables:
    """Forward table from u and backward table from v for bridges u -> v."""

    law: StepLaw
    tilt: TiltParams
    u: tuple[int, int]
    v: tuple[int, int]
    forward: ColumnDP
    backward: ColumnDP

    @property
    def span(self) -> int:
        return self.v[0] - self.u[0]

    def log_total(self) -> float:
        return self.forward.log_weight(self.span, self.v[1])


def bridge_tables(law: StepLaw, tilt: TiltParams, u: tuple[int, int],
                  v: tuple[int, int], check_cap: bool = True) -> BridgeTables:
    span = v[0] - u[0]
    dz = v[1] - u[1]
    if span < max(1, abs(dz)):
        raise ValueError(f"v - u = {(span, dz)} not in the cone")
    fwd = column_dp(law, tilt, u, span, check_cap=check_cap)
    bwd = column_dp(law, tilt, (0, v[1]), span, check_cap=False, reverse=True)
    if np.isneginf(fwd.log_weight(span, v[1])):
        raise ZeroBridgeWeightError(f"endpoint {v} unreachable from {u}")
    return BridgeTables(law=law, tilt=tilt, u=u, v=v, forward=fwd, backward=bwd)


def _segment_log_weight(tables: BridgeTables) -> tuple[np.ndarray, ...]:
    """Pre-gathered arrays describing all (x', z', theta, zeta) crossings."""
    law = tables.law
    thetas = np.array([t for t, _ in law.support])
    zetas = np.array([z for _, z in law.support])
    logp = np.log(np.asarray(law.probs))
    return thetas, zetas, logp


def sample_tilted_bridge(u, v, law: StepLaw, tilt: TiltParams, rng,
                         tables: BridgeTables | None = None):
    """One exact draw from the area-tilted bridge measure from u to v."""
    walks = sample_bridge_ensemble(u, v, law, tilt, rng, size=1, tables=tables)
    return walks[0]


def sample_bridge_ensemble(u, v, law: StepLaw, tilt: TiltParams, rng, size: int,
                           tables: BridgeTables | None = None) -> list:
    """Backward sampling on the column table, vectorized over the ensemble.

    Returns a list of EffectiveWalk objects in absolute coordinates.
    """
    from .cones import EffectiveWalk

    tb = tables if tables is not None else bridge_tables(law, tilt, u, v)
    span = tb.span
    logF = tb.forward.log_table()  # (span+1, h+1)
    h = tb.forward.h
    thetas, zetas, logp = _segment_log_weight(tb)
    c = tilt.c_tilt
    xs = np.full(size, span, dtype=np.int64)
    zs = np.full(size, v[1], dtype=np.int64)
    paths = [[(span, v[1])] for _ in range(size)]
    active = xs > 0
    while np.any(active):
        ax = xs[active]
        az = zs[active]
        px = ax[:, None] - thetas[None, :]
        pz = az[:, None] - zetas[None, :]
        valid = (px >= 0) & (pz >= 0) & (pz <= h)
        lw = np.full(px.shape, _NEG_INF)
        pxc = np.clip(px, 0, span)
        pzc = np.clip(pz, 0, h)
        gathered = logF[pxc, pzc] + logp[None, :] - c * thetas[None, :] * pzc
        lw[valid] = gathered[valid]
        mx = lw.max(axis=1, keepdims=True)
        if np.any(np.isneginf(mx)):
            raise ZeroBridgeWeightError("stranded state during backward sampling")
        w = np.exp(lw - mx)
        w /= w.sum(axis=1, keepdims=True)
        cdf = np.cumsum(w, axis=1)
        uu = rng.random(len(ax))
        choice = np.minimum((uu[:, None] > cdf).sum(axis=1), w.shape[1] - 1)
        new_x = px[np.arange(len(ax)), choice]
        new_z = pz[np.arange(len(ax)), choice]
        idx_active = np.nonzero(active)[0]
        for i, k in enumerate(idx_active):
            paths[k].append((int(new_x[i]), int(new_z[i])))
        xs[idx_active] = new_x
        zs[idx_active] = new_z
        active = xs > 0
    out = []
    for pth in paths:
        pts = [(u[0] + x, z) for x, z in reversed(pth)]
        out.append(EffectiveWalk(points=tuple(pts)))
    return out


def midpoint_marginal(tb: BridgeTables, mid: float, interpolated: bool = True,
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Exact distribution of the bridge height at horizontal position mid.

    mid is in offset coordinates (0..span).  With interpolated=True the value
    is the linear interpolation through the straddling step; otherwise the
    height at the last breakpoint at or before mid.  Returns (values, probs)
    sorted by value.
    """
    if not (0 <= mid <= tb.span):
        raise ValueError("mid outside the bridge span")
    logF = tb.forward.log_table()
    logB = tb.backward.log_table()
    h = tb.forward.h
    span = tb.span
    c = tb.tilt.c_tilt
    zg = np.arange(h + 1)
    acc: dict[float, float] = {}
    ref = tb.log_total()

    def add(value: float, logw: np.ndarray):
        w = np.exp(logw - ref)
        for val, wi in zip(np.atleast_1d(value), np.atleast_1d(w)):
            if wi > 0:
                acc[float(val)] = acc.get(float(val), 0.0) + float(wi)

    if mid == int(mid):
        # walks with a breakpoint exactly at mid
        m_int = int(mid)
        lw = logF[m_int] + logB[span - m_int]
        add(zg.astype(float), lw)
    for (theta, zeta), p in zip(tb.law.support, tb.law.probs):
        # segments (x', z') -> (x'+theta, z'+zeta) straddling mid: x' < mid < x'+theta
        x_lo = max(0, int(math.floor(mid - theta)) + 1)
        x_hi = min(span - theta, int(math.ceil(mid)) - 1)
        for xp in range(x_lo, x_hi + 1):
            z2 = zg + zeta
            ok = (z2 >= 0) & (z2 <= h)
            lw = np.where(ok, logF[xp] + math.log(p) - c * theta * zg
                          + logB[span - (xp + theta), np.clip(z2, 0, h)], _NEG_INF)
            vals = zg + zeta * (mid - xp) / theta if interpolated else zg.astype(float)
            keep = ~np.isneginf(lw)
            if np.any(keep):
                add(vals[keep].astype(float), lw[keep])
    values = np.array(sorted(acc))
    probs = np.array([acc[val] for val in values])
    total = probs.sum()
    if abs(total - 1.0) > 1e-6:
        raise RuntimeError(f"midpoint marginal mass {total:.8f} != 1; table inconsistency")
    return values, probs / total


def _joint_step_dp(law: StepLaw, tilt: TiltParams, z0: int, n_steps: int,
                   marks: dict[int, np.ndarray] | None = None) -> np.ndarray:
    """Step-indexed DP over (relative x, z); marks multiply f(z) after step k.

    Returns the table after n_steps, shape (n_steps*theta_max + 1, h + 1).
    """
    h = tilt.height_cap
    if not (0 <= z0 <= h):
        raise ValueError(f"start height {z0} outside [0, {h}]")
    tmax = law.theta_max
    c = tilt.c_tilt
    grouped = _by_theta(law)
    tiltvec = _tilt_factors(law, c, h)
    cur = np.zeros((n_steps * tmax + 1, h + 1))
    cur[0, z0] = 1.0
    if marks and 0 in marks:
        cur *= marks[0][None, :]
    for k in range(1, n_steps + 1):
        nxt = np.zeros_like(cur)
        xmax_prev = (k - 1) * tmax
        for theta, pairs in grouped.items():
            src = cur[:xmax_prev + 1] * tiltvec[theta][None, :]
            for zeta, p in pairs:
                blk = nxt[theta:theta + xmax_prev + 1]
                lo, hi = max(zeta, 0), h + min(zeta, 0)
                if lo <= hi:
                    blk[:, lo:hi + 1] += p * src[:, lo - zeta:hi + 1 - zeta]
        cur = nxt
        if marks and k in marks:
            cur *= marks[k][None, :]
    return cur


def n_step_partition(u, n_steps: int, f, law: StepLaw, tilt: TiltParams,
                     check_cap: bool = True) -> float:
    """G^n[f](u): tilted expectation of f at the n-th height, walk kept >= 0."""
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    h = tilt.height_cap
    fvals = np.asarray([f(z) for z in range(h + 1)], dtype=float)
    if n_steps == 0:
        return float(fvals[u[1]])
    table = _joint_step_dp(law, tilt, u[1], n_steps)
    zmass = table.sum(axis=0)
    if check_cap:
        total = zmass.sum()
        if total > 0 and zmass[int(math.ceil(0.9 * h)):].sum() >= 1e-3 * total:
            raise CapTooSmallError(f"n-step mass accumulating at the cap {h}")
    return float(zmass @ fvals)


def n_step_partition_pinned(u, v, n_steps: int, law: StepLaw, tilt: TiltParams) -> float:
    """G^{u,v;n}: tilted weight of n-step walks from u to v staying >= 0."""
    table = _joint_step_dp(law, tilt, u[1], n_steps)
    dx = v[0] - u[0]
    if not (0 <= dx < table.shape[0]) or not (0 <= v[1] <= tilt.height_cap):
        return 0.0
    return float(table[dx, v[1]])


def fdd_weights(u, v, n_steps: int, times, fns, law: StepLaw, tilt: TiltParams) -> float:
    """Marked pinned partition function: product of f_{n_i}(Z_{n_i}) inserted
    at intermediate steps 1 <= n_1 < ... < n_m < n_steps.

    With all f == 1 this telescopes to the pinned n-step partition function.
    """
    times = list(times)
    fns = list(fns)
    if len(times) != len(fns):
        raise ValueError("times/functions mismatch")
    if any(not (1 <= t < n_steps) for t in times) or sorted(set(times)) != times:
        raise ValueError("need strictly increasing mark times inside (0, n_steps)")
    h = tilt.height_cap
    marks = {t: np.asarray([fn(z) for z in range(h + 1)], dtype=float)
             for t, fn in zip(times, fns)}
    table = _joint_step_dp(law, tilt, u[1], n_steps, marks=marks)
    dx = v[0] - u[0]
    if not (0 <= dx < table.shape[0]) or not (0 <= v[1] <= h):
        return 0.0
    return float(table[dx, v[1]])


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function through (times, values)."""

    times: np.ndarray
    values: np.ndarray

    def __call__(self, t):
        return np.interp(t, self.times, self.values)

    @property
    def window(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])


def rescale_diffusive(walk, n: int, chi: float) -> PiecewiseLinear:
    """Linear interpolation through (T_k / n^(2/3), Z_k / (n^(1/3) sqrt(chi)))."""
    if chi <= 0:
        raise ValueError("chi must be positive")
    ts = walk.times / n ** (2.0 / 3.0)
    zs = walk.heights / (n ** (1.0 / 3.0) * math.sqrt(chi))
    return PiecewiseLinear(np.asarray(ts, dtype=float), np.asarray(zs, dtype=float))


def rescale_fixed_steps(walk, n: int, chi: float) -> PiecewiseLinear:
    """Fixed-time-step interpolation: same rescaled heights, uniform times."""
    if len(walk) < 1:
        raise ValueError("walk needs at least one step")
    diff = rescale_diffusive(walk, n, chi)
    s, t = diff.window
    times = np.linspace(s, t, len(walk) + 1)
    return PiecewiseLinear(times, diff.values)


def time_change_map(walk, n: int) -> PiecewiseLinear:
    """The map phi with j_N = i_N o phi: phi(s + k(t-s)/l) = T_k / n^(2/3)."""
    ts = walk.times / n ** (2.0 / 3.0)
    uniform = np.linspace(ts[0], ts[-1], len(walk) + 1)
    return PiecewiseLinear(uniform, np.asarray(ts, dtype=float))


@dataclass
class WalkEnsembleStats:
    areas: np.ndarray
    n_steps: np.ndarray
    gaps: np.ndarray
    lengths: np.ndarray
    midpoint_heights: np.ndarray
    midpoint_hist: tuple[np.ndarray, np.ndarray]

    def quantiles(self, qs=(0.5, 0.9, 0.99)) -> dict[str, list[float]]:
        return {name: [float(np.quantile(arr, q)) for q in qs]
                for name, arr in (("area", self.areas), ("n_steps", self.n_steps),
                                  ("gap", self.gaps), ("length", self.lengths))}


def _midpoint_height(walk) -> int:
    times = walk.times
    mid = (times[0] + times[-1]) / 2.0
    k = int(np.searchsorted(times, mid, side="right")) - 1
    return int(walk.heights[k])


def ensemble_stats(samples) -> WalkEnsembleStats:
    """Per-sample area / step count / gap / span plus a midpoint histogram."""
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample")
    areas = np.array([area(w) for w in samples])
    nsteps = np.array([len(w) for w in samples])
    gaps = np.array([w.gap for w in samples])
    lengths = np.array([int(w.times[-1] - w.times[0]) for w in samples])
    mids = np.array([_midpoint_height(w) for w in samples])
    counts = np.bincount(mids)
    return WalkEnsembleStats(areas=areas, n_steps=nsteps, gaps=gaps, lengths=lengths,
                             midpoint_heights=mids,
                             midpoint_hist=(np.arange(len(counts)), counts))


def endpoint_insensitivity(u, u2, v, v2, law: StepLaw, tilt: TiltParams,
                           window: tuple[int, int]) -> float:
    """Exact total-variation distance between the window-center height
    marginals of the bridges u->v and u2->v2.

    Endpoints must lie strictly outside the window on either side; the
    marginal is taken at the integer center of the window (heights at the last
    breakpoint at or before it, a common discrete grid for both bridges).
    """
    a, b = window
    if not (u[0] < a and u2[0] < a and v[0] > b and v2[0] > b):
        raise ValueError("endpoints must flank the window")
    center = (a + b) // 2
    dists = []
    for uu, vv in ((u, v), (u2, v2)):
        tb = bridge_tables(law, tilt, uu, vv, check_cap=False)
        vals, probs = midpoint_marginal(tb, center - uu[0], interpolated=False)
        grid = np.zeros(tb.forward.h + 1)
        grid[vals.astype(int)] = probs
        dists.append(grid)
    h = max(len(d) for d in dists)
    padded = [np.pad(d, (0, h - len(d))) for d in dists]
    return float(0.5 * np.abs(padded[0] - padded[1]).sum())
