"""Lattice geometry, boundary conditions and exact scalar constants.

The box is Lambda = {-N..N} x {0..N} with a frozen mixed boundary: every
outside site with second coordinate >= 0 carries spin +1, every site below
carries -1.  Energies follow

    H(sigma) = -beta * sum_{(i,j): |i-j|=1, {i,j} meets Lambda} (s_i s_j - 1)
               - h * sum_{i in Lambda} s_i

with h = lambda / N.  All values here are exact (closed forms), shared by the
sampler, the contour extraction and the tilted-walk reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelParams",
    "BoxGeometry",
    "SpinConfig",
    "critical_beta",
    "spontaneous_magnetization",
    "hamiltonian",
    "flip_energy_delta",
]


def critical_beta() -> float:
    """Inverse critical temperature of the 2d nearest-neighbor model.

    Solves sinh(2 beta) = 1, i.e. asinh(1)/2 = log(1 + sqrt(2))/2.
    """
    return math.asinh(1.0) / 2.0


def spontaneous_magnetization(beta: float) -> float:
    """Onsager-Yang closed form m* = (1 - sinh(2 beta)^-4)^(1/8).

    Only defined in the phase-coexistence region beta > critical_beta().
    """
    if beta <= critical_beta():
        raise ValueError(f"beta={beta} must exceed critical_beta()={critical_beta():.10f}")
    s = math.sinh(2.0 * beta)
    return (1.0 - s ** -4) ** 0.125


@dataclass(frozen=True)
class ModelParams:
    """Inverse temperature, tilt strength and box size; h = lam / n is derived."""

    beta: float
    lam: float
    n: int

    def __post_init__(self):
        if self.beta <= critical_beta():
            raise ValueError(f"beta={self.beta} below critical: need beta > {critical_beta():.10f}")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.n < 2:
            raise ValueError("box parameter n must be >= 2")

    @property
    def h(self) -> float:
        return self.lam / self.n

    @property
    def m_star(self) -> float:
        return spontaneous_magnetization(self.beta)


@dataclass(frozen=True)
class BoxGeometry:
    """Rectangular box {x_min..x_max} x {0..y_max} with the mixed boundary.

    The standard geometry is the half-box of parameter N (x in -N..N,
    y in 0..N); arbitrary rectangles are allowed for exhaustive small-box
    tests.  The boundary is virtual: spin(+1) on outside sites with y >= 0,
    spin(-1) below.  Dual corners sit at (x_min - 1/2, -1/2) and
    (x_max + 1/2, -1/2).
    """

    x_min: int
    x_max: int
    y_max: int
    plus_boundary: bool = False   # eta+ variant: +1 on the whole boundary

    @classmethod
    def half_box(cls, n: int) -> "BoxGeometry":
        if n < 1:
            raise ValueError("n must be >= 1")
        return cls(x_min=-n, x_max=n, y_max=n)

    @property
    def width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def height(self) -> int:
        return self.y_max + 1

    @property
    def n_sites(self) -> int:
        return self.width * self.height

    @property
    def dual_corners(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.x_min - 0.5, -0.5), (self.x_max + 0.5, -0.5))

    def contains(self, x: int, y: int) -> bool:
        return self.x_min <= x <= self.x_max and 0 <= y <= self.y_max

    def boundary_spin(self, x: int, y: int) -> int:
        """Boundary condition at an outside site: eta+- by default."""
        if self.contains(x, y):
            raise ValueError(f"site ({x},{y}) is interior, not boundary")
        if self.plus_boundary:
            return 1
        return 1 if y >= 0 else -1


@dataclass
class SpinConfig:
    """Spins on the box, stored row-major as spins[y - 0, x - x_min] in {-1,+1}."""

    geometry: BoxGeometry
    spins: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = self.geometry
        self.spins = np.asarray(self.spins, dtype=np.int8)
        if self.spins.shape != (g.height, g.width):
            raise ValueError(f"spins shape {self.spins.shape} != {(g.height, g.width)}")
        if not np.all(np.abs(self.spins) == 1):
            raise ValueError("spins must be +-1")

    @classmethod
    def all_plus(cls, geometry: BoxGeometry) -> "SpinConfig":
        return cls(geometry, np.ones((geometry.height, geometry.width), dtype=np.int8))

    def spin(self, x: int, y: int) -> int:
        """Spin at any lattice site: stored value inside, boundary value outside."""
        g = self.geometry
        if g.contains(x, y):
            return int(self.spins[y, x - g.x_min])
        return g.boundary_spin(x, y)

    def copy(self) -> "SpinConfig":
        return SpinConfig(self.geometry, self.spins.copy())

    def padded(self) -> np.ndarray:
        """Spins with the one-site boundary ring materialized, shape (h+2, w+2).

        Row index 0 is the -1 row below the box; interior site (x, y) lands at
        [y + 1, x - x_min + 1].
        """
        g = self.geometry
        out = np.ones((g.height + 2, g.width + 2), dtype=np.int8)
        if not g.plus_boundary:
            out[0, :] = -1
        out[1:-1, 1:-1] = self.spins
        return out


def hamiltonian(config: SpinConfig, params: ModelParams) -> float:
    """Energy of the configuration with the frozen eta+- boundary.

    Bond sum runs over nearest-neighbor pairs meeting the box; each
    disagreeing bond contributes 2*beta, agreeing bonds contribute 0.
    """
    pad = config.padded().astype(np.int64)
    inner = pad[1:-1, 1:-1]
    # Bonds with both ends inside or one end on the ring; each counted once.
    vert = inner * pad[:-2, 1:-1] + inner * pad[2:, 1:-1]
    horiz = inner * pad[1:-1, :-2] + inner * pad[1:-1, 2:]
    # Interior-interior bonds appear twice in the sums above, ring bonds once.
    interior_v = inner[1:, :] * inner[:-1, :]
    interior_h = inner[:, 1:] * inner[:, :-1]
    bond_sum = vert.sum() + horiz.sum() - interior_v.sum() - interior_h.sum()
    n_bonds = 2 * config.geometry.n_sites + config.geometry.width + config.geometry.height
    # sum (s_i s_j - 1) over the n_bonds pairs meeting the box
    energy = -params.beta * float(bond_sum - n_bonds) - params.h * float(inner.sum())
    return energy


def flip_energy_delta(config: SpinConfig, params: ModelParams, x: int, y: int) -> float:
    """Energy change from flipping the spin at interior site (x, y).

    Equals 2*s_i*(beta * sum of the four neighbor spins + h).
    """
    g = config.geometry
    if not g.contains(x, y):
        raise ValueError(f"({x},{y}) outside the box")
    s = config.spin(x, y)
    nb = (config.spin(x + 1, y) + config.spin(x - 1, y)
          + config.spin(x, y + 1) + config.spin(x, y - 1))
    return 2.0 * s * (params.beta * nb + params.h)
