"""Airy special functions and the limiting positive diffusion.

The reference operator is L f = (1/2) f'' - c r f on (0, inf) with Dirichlet
condition at 0 and slope c > 0.  Its eigenfunctions are shifted Airy
functions: with C = (2 c / sigma^2)^(1/3) and -omega_k the k-th zero of Ai,

    phi_k(r) = Ai(C r - omega_{k+1}),   eigenvalue a_k = c omega_{k+1} / C.

The diffusion with generator (1/2) psi'' + (phi_0'/phi_0) psi' is ergodic and
reversible for phi_0^2 dr.  Ai itself is evaluated from the Maclaurin series
of the two standard solutions of w'' = x w on [-9, 6] and from the
exponential / oscillatory asymptotic expansions outside (the series window is
widened past |x| = 6 on the negative axis, where the asymptotic expansion
alone cannot reach 1e-10); the two routes are cross-validated in the overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

__all__ = [
    "AiryEval",
    "FSParams",
    "FSPath",
    "AccuracyRangeError",
    "ModesInsufficientError",
    "StepTooCoarseError",
    "airy",
    "airy_zero",
    "airy_zero_deriv",
    "ground_state",
    "stationary_density",
    "drift",
    "transition_kernel",
    "airy_semigroup",
    "sample_path",
    "trotter_kurtz",
]

_SQRT_PI = math.sqrt(math.pi)
_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)       # Ai(0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)   # Ai'(0)
_AI0_LD = np.longdouble("0.3550280538878172392600631860041831763980")
_AIP0_LD = np.longdouble("-0.2588194037928067984051835601892039634793")
_SERIES_LO, _SERIES_HI = -9.0, 6.0


class AccuracyRangeError(ValueError):
    """Argument outside the documented |x| <= 100 accuracy range."""


class ModesInsufficientError(RuntimeError):
    pass


class StepTooCoarseError(RuntimeError):
    pass


@dataclass(frozen=True)
class AiryEval:
    value: float
    deriv: float
    method: str


def _airy_series(x: float) -> tuple[float, float]:
    """Ai, Ai' from the two Maclaurin solutions of w'' = x w.

    Accumulated in 80-bit floats: near the negative end of the series window
    the terms peak around 1e5, and double precision would lose the 1e-10
    contract in the derivative.
    """
    ld = np.longdouble
    xl = ld(x)
    x3 = xl * xl * xl
    # f: c0=1 branch; g: c1=1 branch.  Term recurrence c_{n+3} = c_n/((n+2)(n+3)).
    f = fp = g = gp = ld(0.0)
    tf = ld(1.0)   # current f term, degree 3k
    tg = xl        # current g term, degree 3k+1
    k = 0
    while True:
        f += tf
        g += tg
        if x != 0.0:
            if k > 0:
                fp += 3 * k * tf / xl
            gp += (3 * k + 1) * tg / xl
        elif k == 0:
            gp += 1.0
        step = abs(tf) + abs(tg)
        tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
        k += 1
        if (step < 1e-22 * (abs(f) + abs(g) + 1.0) and k > 4) or k > 250:
            break
    ai = _AI0_LD * f + _AIP0_LD * g
    aip = _AI0_LD * fp + _AIP0_LD * gp
    return float(ai), float(aip)


def _asymp_coeffs(max_k: int = 40):
    u = [1.0]
    v = [1.0]
    for k in range(max_k):
        uk = u[-1] * (3 * k + 0.5) * (3 * k + 1.5) * (3 * k + 2.5) / (54.0 * (k + 1) * (k + 0.5))
        u.append(uk)
        v.append(uk * (6 * (k + 1) + 1) / (1 - 6 * (k + 1)))
    return np.array(u), np.array(v)


_U_K, _V_K = _asymp_coeffs()


def _alternating_sum(coeffs: np.ndarray, xi: float, stride: int = 1, offset: int = 0) -> float:
    """Optimally truncated sum of (-1)^k coeffs[stride*k+offset] xi^-(stride*k+offset)."""
    total = 0.0
    prev = math.inf
    for j, k in enumerate(range(offset, len(coeffs), stride)):
        term = coeffs[k] / xi ** k
        if abs(term) >= prev:
            break
        total += (-1) ** j * term
        prev = abs(term)
    return total


def _airy_asymp_pos(x: float) -> tuple[float, float]:
    xi = (2.0 / 3.0) * x ** 1.5
    pre = math.exp(-xi) / (2.0 * _SQRT_PI * x ** 0.25)
    ai = pre * _alternating_sum(_U_K, xi)
    aip = -(x ** 0.25) * math.exp(-xi) / (2.0 * _SQRT_PI) * _alternating_sum(_V_K, xi)
    return ai, aip


def _airy_asymp_neg(x: float) -> tuple[float, float]:
    s = -x
    xi = (2.0 / 3.0) * s ** 1.5
    phase = xi - math.pi / 4.0
    cosx, sinx = math.cos(phase), math.sin(phase)
    ai = (cosx * _alternating_sum(_U_K, xi, stride=2, offset=0)
          + sinx * _alternating_sum(_U_K, xi, stride=2, offset=1)) / (_SQRT_PI * s ** 0.25)
    aip = (sinx * _alternating_sum(_V_K, xi, stride=2, offset=0)
           - cosx * _alternating_sum(_V_K, xi, stride=2, offset=1)) * (s ** 0.25) / _SQRT_PI
    return ai, aip


def airy(x: float) -> AiryEval:
    """Ai(x) and Ai'(x) to better than 1e-10 absolute for |x| <= 100."""
    x = float(x)
    if abs(x) > 100.0:
        raise AccuracyRangeError(f"|x| = {abs(x)} exceeds the documented range 100")
    if _SERIES_LO <= x <= _SERIES_HI:
        ai, aip = _airy_series(x)
        return AiryEval(ai, aip, "series")
    if x > 0:
        ai, aip = _airy_asymp_pos(x)
    else:
        ai, aip = _airy_asymp_neg(x)
    return AiryEval(ai, aip, "asymptotic")


def _series_vec(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Maclaurin evaluation on the series window, longdouble."""
    xl = x.astype(np.longdouble)
    x3 = xl ** 3
    f = np.zeros_like(xl)
    g = np.zeros_like(xl)
    fp = np.zeros_like(xl)
    gp = np.zeros_like(xl)
    tf = np.ones_like(xl)
    tg = xl.copy()
    safe = np.where(xl == 0.0, np.longdouble(1.0), xl)
    for k in range(260):
        f += tf
        g += tg
        if k > 0:
            fp += 3 * k * tf / safe
        gp += np.where(xl == 0.0, np.longdouble(1.0 if k == 0 else 0.0),
                       (3 * k + 1) * tg / safe)
        if k > 4 and float(np.max(np.abs(tf) + np.abs(tg))) < 1e-22:
            break
        tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
    ai = _AI0_LD * f + _AIP0_LD * g
    aip = _AI0_LD * fp + _AIP0_LD * gp
    return ai.astype(float), aip.astype(float)


def _optimal_alt_sum(coeffs: np.ndarray, xi: np.ndarray, stride: int, offset: int,
                     ) -> np.ndarray:
    """Vectorized optimally-truncated alternating asymptotic sums."""
    ks = np.arange(offset, len(coeffs), stride)
    terms = coeffs[ks][:, None] / xi[None, :] ** ks[:, None]
    signs = np.where(np.arange(len(ks)) % 2 == 0, 1.0, -1.0)[:, None]
    mag = np.abs(terms)
    growing = mag[1:] >= mag[:-1]
    any_growth = growing.any(axis=0)
    first = np.where(any_growth, growing.argmax(axis=0) + 1, len(ks))
    csum = np.cumsum(signs * terms, axis=0)
    idx = np.clip(first - 1, 0, len(ks) - 1)
    return csum[idx, np.arange(terms.shape[1])]


def airy_ai_deriv(x) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (Ai, Ai') to the same accuracy as airy(), any shape."""
    arr = np.asarray(x, dtype=float)
    flat = arr.ravel()
    if np.any(np.abs(flat) > 100.0):
        raise AccuracyRangeError("argument outside |x| <= 100")
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    ser = (flat >= _SERIES_LO) & (flat <= _SERIES_HI)
    if ser.any():
        ai[ser], aip[ser] = _series_vec(flat[ser])
    pos = flat > _SERIES_HI
    if pos.any():
        xp = flat[pos]
        xi = (2.0 / 3.0) * xp ** 1.5
        pre = np.exp(-xi) / (2.0 * _SQRT_PI * xp ** 0.25)
        ai[pos] = pre * _optimal_alt_sum(_U_K, xi, 1, 0)
        aip[pos] = -(xp ** 0.25) * np.exp(-xi) / (2.0 * _SQRT_PI) * _optimal_alt_sum(_V_K, xi, 1, 0)
    neg = flat < _SERIES_LO
    if neg.any():
        s = -flat[neg]
        xi = (2.0 / 3.0) * s ** 1.5
        phase = xi - math.pi / 4.0
        cosx, sinx = np.cos(phase), np.sin(phase)
        ai[neg] = (cosx * _optimal_alt_sum(_U_K, xi, 2, 0)
                   + sinx * _optimal_alt_sum(_U_K, xi, 2, 1)) / (_SQRT_PI * s ** 0.25)
        aip[neg] = (sinx * _optimal_alt_sum(_V_K, xi, 2, 0)
                    - cosx * _optimal_alt_sum(_V_K, xi, 2, 1)) * (s ** 0.25) / _SQRT_PI
    shape = arr.shape
    return ai.reshape(shape), aip.reshape(shape)


def airy_ai(x) -> np.ndarray:
    """Vectorized Ai values (any array shape)."""
    return airy_ai_deriv(x)[0]


def airy_zero(k: int) -> float:
    """Magnitude omega_k of the k-th negative zero of Ai (k >= 1, k <= 20)."""
    if not 1 <= k <= 20:
        raise ValueError("zeros tabulated for 1 <= k <= 20")
    t = 3.0 * math.pi * (4 * k - 1) / 8.0
    guess = t ** (2.0 / 3.0) * (1 + 5.0 / 48.0 / t ** 2)
    lo, hi = guess - 0.3, guess + 0.3
    flo, fhi = airy(-lo).value, airy(-hi).value
    widen = 0
    while flo * fhi > 0 and widen < 8:
        lo -= 0.2
        hi += 0.2
        flo, fhi = airy(-lo).value, airy(-hi).value
        widen += 1
    root = brentq(lambda s: airy(-s).value, lo, hi, xtol=1e-13, rtol=8.9e-16)
    return float(root)


def airy_zero_deriv(k: int) -> float:
    """Magnitude of the k-th negative zero of Ai'."""
    if not 1 <= k <= 20:
        raise ValueError("zeros tabulated for 1 <= k <= 20")
    t = 3.0 * math.pi * (4 * k - 3) / 8.0
    guess = t ** (2.0 / 3.0) * (1 - 7.0 / 48.0 / t ** 2) if k > 1 else 1.0188
    lo, hi = max(guess - 0.4, 1e-3), guess + 0.4
    root = brentq(lambda s: airy(-s).deriv, lo, hi, xtol=1e-13, rtol=8.9e-16)
    return float(root)


@dataclass(frozen=True)
class FSParams:
    """Slope c of the linear potential; sigma is fixed to 1 in this model."""

    c: float
    sigma: float = 1.0
    n_modes: int = 20

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("potential slope c must be positive")
        if self.sigma != 1.0:
            raise ValueError("sigma is fixed to 1; vary c instead")

    @property
    def big_c(self) -> float:
        return (2.0 * self.c / self.sigma ** 2) ** (1.0 / 3.0)

    @property
    def omegas(self) -> tuple[float, ...]:
        return _omegas(self.n_modes)

    def eigenvalue(self, k: int) -> float:
        """a_k = c * omega_{k+1} / C, the k-th eigenvalue of -(L)."""
        return self.c * self.omegas[k] / self.big_c


_OMEGA_CACHE: dict[int, tuple[float, ...]] = {}


def _omegas(n: int) -> tuple[float, ...]:
    if n not in _OMEGA_CACHE:
        _OMEGA_CACHE[n] = tuple(airy_zero(k) for k in range(1, n + 1))
    return _OMEGA_CACHE[n]


_NORM_CACHE: dict[tuple[float, int], float] = {}


def _phi_norm(params: FSParams, k: int) -> float:
    """L2 norm of r -> Ai(C r - omega_{k+1}) on (0, inf), by quadrature."""
    key = (params.big_c, k)
    if key not in _NORM_CACHE:
        omega = params.omegas[k]
        val, _ = quad(lambda t: airy(t).value ** 2, -omega, 12.0, limit=200,
                      epsabs=1e-12, epsrel=1e-11)
        _NORM_CACHE[key] = math.sqrt(val / params.big_c)
    return _NORM_CACHE[key]


@dataclass
class GroundState:
    params: FSParams
    a0: float
    _norm: float

    def __call__(self, r):
        big_c, omega1 = self.params.big_c, self.params.omegas[0]
        r = np.asarray(r, dtype=float)
        out = airy_ai(big_c * r - omega1)
        return out if r.ndim else float(out)

    def normalized(self, r):
        return self(r) / self._norm


def ground_state(params: FSParams) -> tuple[GroundState, float]:
    """phi_0 (unnormalized evaluator) and the ground eigenvalue a_0."""
    a0 = params.eigenvalue(0)
    return GroundState(params, a0, _phi_norm(params, 0)), a0


def _phi_k(params: FSParams, k: int):
    omega = params.omegas[k]
    norm = _phi_norm(params, k)
    big_c = params.big_c

    def phi(r):
        r = np.asarray(r, dtype=float)
        out = airy_ai(big_c * r - omega) / norm
        return out if r.ndim else float(out)

    return phi


@dataclass
class StationaryDensity:
    """rho = phi_0^2 / Z on (0, inf), with a dense cached CDF."""

    params: FSParams
    normalizer: float
    _grid: np.ndarray = field(repr=False)
    _cdf: np.ndarray = field(repr=False)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        big_c, omega1 = self.params.big_c, self.params.omegas[0]
        vals = airy_ai(big_c * r - omega1) ** 2 / self.normalizer
        vals = np.where(r < 0, 0.0, vals)
        return vals if r.ndim else float(vals)

    def cdf(self, y):
        return np.interp(y, self._grid, self._cdf, left=0.0, right=1.0)

    def quantile(self, q):
        return np.interp(q, self._cdf, self._grid)

    @property
    def mode(self) -> float:
        """Density maximum: where Ai'(C r - omega_1) vanishes."""
        return (self.params.omegas[0] - airy_zero_deriv(1)) / self.params.big_c

    @property
    def r_max(self) -> float:
        return float(self._grid[-1])


def stationary_density(params: FSParams) -> StationaryDensity:
    big_c, omega1 = params.big_c, params.omegas[0]
    z, _ = quad(lambda t: airy(t).value ** 2, -omega1, 12.0, limit=200,
                epsabs=1e-12, epsrel=1e-11)
    z /= big_c
    r_hi = (12.0 + omega1) / big_c
    grid = np.linspace(0.0, r_hi, 6001)
    dens = airy_ai(big_c * grid - omega1) ** 2 / z
    cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2.0 * np.diff(grid))])
    cdf /= cdf[-1]
    return StationaryDensity(params=params, normalizer=z, _grid=grid, _cdf=cdf)


def drift(params: FSParams, r: float) -> float:
    """phi_0'/phi_0 at r > 0; diverges like 1/r at the wall."""
    if r <= 0:
        raise ValueError("drift is singular at 0 and undefined for r <= 0")
    big_c, omega1 = params.big_c, params.omegas[0]
    ev = airy(big_c * r - omega1)
    return big_c * ev.deriv / ev.value


def transition_kernel(params: FSParams, t: float, r, y, modes: int = 12,
                      tol: float | None = None):
    """Spectral transition density of the diffusion after time t.

    kernel(t, r, y) = sum_k exp(-(a_k - a_0) t) phi_k(r) phi_k(y) phi_0(y)/phi_0(r)
    with L2-normalized phi_k.  The reported tail bound is the sup over the
    evaluation points of the magnitude of the last retained term.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if modes > params.n_modes:
        raise ModesInsufficientError(f"only {params.n_modes} modes available")
    r = np.asarray(r, dtype=float)
    y = np.asarray(y, dtype=float)
    a0 = params.eigenvalue(0)
    phi0 = _phi_k(params, 0)
    ratio = phi0(y) / phi0(r)
    total = np.zeros(np.broadcast(r, y).shape)
    tail = 0.0
    for k in range(modes):
        term = math.exp(-(params.eigenvalue(k) - a0) * t) * _phi_k(params, k)(r) * _phi_k(params, k)(y)
        total = total + term
        tail = float(np.max(np.abs(term * ratio)))
    if tol is not None and tail > tol:
        raise ModesInsufficientError(f"tail estimate {tail:.3e} exceeds tol {tol:.3e}")
    return total * ratio, tail


def airy_semigroup(params: FSParams, f_grid: np.ndarray, f_vals: np.ndarray,
                   t: float, modes: int = 20) -> np.ndarray:
    """exp(t L) f on the grid, L = (1/2)d^2 - c r, via the spectral expansion.

    Includes the exp(-a_k t) decay (no ground-state transform); this is the
    limit object of the iterated one-step operator.
    """
    out = np.zeros_like(f_grid, dtype=float)
    for k in range(min(modes, params.n_modes)):
        phi = _phi_k(params, k)
        phik = phi(f_grid)
        coeff = float(np.trapz(phik * f_vals, f_grid))
        out += math.exp(-params.eigenvalue(k) * t) * coeff * phik
    return out


@dataclass
class FSPath:
    times: np.ndarray
    values: np.ndarray
    dt: float
    near_zero_rule: str
    violations: int


def sample_path(params: FSParams, x0: float, horizon: float, dt: float, rng,
                ) -> FSPath:
    """Euler-Maruyama path of the diffusion with the Bessel(3) wall rule.

    Below 4*sqrt(dt) the exact Bessel(3) transition |x e_1 + dW_3| replaces
    the Euler step (the drift is ~ 1/r there); Euler proposals that still land
    at or below 0 are reflected and counted, and the path is rejected when the
    violation rate exceeds 1e-4 per step.
    """
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    if dt > 1e-3 * horizon:
        raise ValueError("need dt <= 1e-3 * horizon")
    n = int(round(horizon / dt))
    sdt = math.sqrt(dt)
    wall = 4.0 * sdt   # 4 sigma: Euler overshoots below 0 are ~1e-5 per wall step
    # drift on a dense grid; below the wall the Bessel rule never consults it
    dens = stationary_density(params)
    grid = np.linspace(wall / 2.0, dens.r_max * 1.5, 4096)
    arg = params.big_c * grid - params.omegas[0]
    gv, gd = airy_ai_deriv(arg)
    drift_grid = params.big_c * gd / gv
    out = np.empty(n + 1)
    out[0] = x = x0
    violations = 0
    block = 65536
    normals = rng.standard_normal((block, 3))
    bi = 0
    for i in range(1, n + 1):
        if bi == block:
            normals = rng.standard_normal((block, 3))
            bi = 0
        w = normals[bi]
        bi += 1
        if x < wall:
            x = math.sqrt((x + sdt * w[0]) ** 2 + dt * (w[1] ** 2 + w[2] ** 2))
        else:
            b = np.interp(x, grid, drift_grid)
            x_new = x + b * dt + sdt * w[0]
            if x_new <= 0:
                violations += 1
                x_new = -x_new if x_new < 0 else wall / 2.0
            x = x_new
        out[i] = x
    if violations > 1e-4 * n:
        raise StepTooCoarseError(f"{violations} positivity violations in {n} steps")
    return FSPath(times=np.arange(n + 1) * dt, values=out, dt=dt,
                  near_zero_rule=f"bessel3-below-{wall:.3g}", violations=violations)


class GridResolutionError(ValueError):
    pass


@dataclass
class TrotterResult:
    grid: np.ndarray
    iterate: np.ndarray
    reference: np.ndarray
    iterations: int

    @property
    def sup_gap(self) -> float:
        return float(np.max(np.abs(self.iterate - self.reference)))


def trotter_kurtz(law, lam: float, m_star: float, f, t: float, n: int,
                  r_max: float = 10.0, modes: int = 20) -> TrotterResult:
    """Iterate the one-step tilted operator against the Airy semigroup.

    The operator acts on the lattice grid r_j = j / (n^(1/3) sqrt(chi)):

        (T f)(r_j) = sum_{(theta,zeta)} p exp(-2 lam m* theta j / n) f(r_{j+zeta})

    killed below 0, applied floor(t n^(2/3) / E(theta)) times; the companion
    curve is exp(t L) f with slope c = 2 lam m* sqrt(chi).
    """
    chi = law.chi
    delta = 1.0 / (n ** (1.0 / 3.0) * math.sqrt(chi))
    jmax = int(math.ceil(r_max / delta))
    grid = np.arange(jmax + 1) * delta
    fvals = np.asarray([f(r) for r in grid], dtype=float)
    support_pts = int(np.count_nonzero(fvals))
    if support_pts < 8:
        raise GridResolutionError(f"only {support_pts} grid points inside supp f")
    c_step = 2.0 * lam * m_star / n
    iterations = int(math.floor(t * n ** (2.0 / 3.0) / law.mean_theta))
    cur = fvals.copy()
    jidx = np.arange(jmax + 1)
    decay = {theta: np.exp(-c_step * theta * jidx)
             for theta in sorted({th for th, _ in law.support})}
    for _ in range(iterations):
        nxt = np.zeros_like(cur)
        for (theta, zeta), p in zip(law.support, law.probs):
            shifted = np.zeros_like(cur)
            if zeta >= 0:
                shifted[:jmax + 1 - zeta] = cur[zeta:]
            else:
                shifted[-zeta:] = cur[:jmax + 1 + zeta]
            nxt += p * decay[theta] * shifted
        cur = nxt
    if lam * m_star > 0:
        params = FSParams(c=2.0 * lam * m_star * math.sqrt(chi))
        reference = airy_semigroup(params, grid, fvals, t, modes=modes)
    else:
        # free operator: Dirichlet heat semigroup via the reflection kernel
        reference = np.empty_like(fvals)
        for i, r in enumerate(grid):
            kern = (np.exp(-(r - grid) ** 2 / (2 * t))
                    - np.exp(-(r + grid) ** 2 / (2 * t))) / math.sqrt(2 * math.pi * t)
            reference[i] = np.trapezoid(kern * fvals, grid)
    return TrotterResult(grid=grid, iterate=cur, reference=reference,
                         iterations=iterations)
