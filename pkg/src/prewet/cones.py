"""Cone points, irreducible decomposition and the induced effective walk.

A vertex u of a lattice path is a cone point when the whole path lies in
u + (Y> u Y<), where Y< = {(x1, x2): x1 >= |x2|} and Y> = -Y<.  Splitting at
all cone points yields a left piece, a string of irreducible blocks and a
right piece; the block endpoints form a directed walk whose steps stay in Y<.
Pooled steps give the curvature estimator chi = Var(zeta) / E(theta).

Detection runs in O(len + x-range) using per-abscissa extremes of the two
diagonal coordinates p = x2 - x1 and q = x2 + x1: u is a cone point iff every
vertex strictly to its right satisfies p <= p(u) <= ... see _cone_flags.  The
quadratic definition-checking form lives in the test suite as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LatticePath",
    "PathClassification",
    "Decomposition",
    "EffectiveWalk",
    "NoConePointsError",
    "cone_points",
    "classify",
    "decompose",
    "effective_walk",
    "estimate_chi",
]


class NoConePointsError(ValueError):
    """Decomposition requested for a path without cone points."""


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class LatticePath:
    """Ordered lattice points with unit steps between consecutive vertices."""

    vertices: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("path must contain at least one vertex")
        for (x1, y1), (x2, y2) in zip(self.vertices, self.vertices[1:]):
            if abs(x1 - x2) + abs(y1 - y2) != 1:
                raise ValueError("consecutive vertices must be lattice neighbors")

    @classmethod
    def from_points(cls, pts) -> "LatticePath":
        return cls(tuple((int(x), int(y)) for x, y in pts))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def displacement(self) -> tuple[int, int]:
        """(theta, zeta): end minus start."""
        (x0, y0), (x1, y1) = self.vertices[0], self.vertices[-1]
        return (x1 - x0, y1 - y0)


def _in_left_cone(dx: int, dy: int) -> bool:
    return dx >= abs(dy)


def _cone_flags(path: LatticePath) -> np.ndarray:
    """Boolean flag per vertex: is it a cone point of the whole path.

    v is a cone point iff |w2 - v2| <= |w1 - v1| for every vertex w, i.e.
    every w strictly right of v has p(w) <= p(v) and q(w) >= q(v), every w
    strictly left has the reversed inequalities, and no other vertex shares
    its abscissa (p = x2 - x1, q = x2 + x1).
    """
    pts = np.asarray(path.vertices, dtype=np.int64)
    x, y = pts[:, 0], pts[:, 1]
    p, q = y - x, y + x
    x0, x1 = int(x.min()), int(x.max())
    nx = x1 - x0 + 1
    big = np.int64(1) << 60
    max_p = np.full(nx, -big)
    min_p = np.full(nx, big)
    max_q = np.full(nx, -big)
    min_q = np.full(nx, big)
    counts = np.zeros(nx, dtype=np.int64)
    idx = x - x0
    np.maximum.at(max_p, idx, p)
    np.minimum.at(min_p, idx, p)
    np.maximum.at(max_q, idx, q)
    np.minimum.at(min_q, idx, q)
    np.add.at(counts, idx, 1)
    # suffix extremes over strictly larger abscissae, prefix over smaller
    suf_max_p = np.concatenate([np.maximum.accumulate(max_p[::-1])[::-1][1:], [-big]])
    suf_min_q = np.concatenate([np.minimum.accumulate(min_q[::-1])[::-1][1:], [big]])
    pre_min_p = np.concatenate([[big], np.minimum.accumulate(min_p)[:-1]])
    pre_max_q = np.concatenate([[-big], np.maximum.accumulate(max_q)[:-1]])
    # distinct path vertices sharing an abscissa disqualify it (duplicates of
    # the same point, from repeated visits, do not)
    first = np.full(nx, -1, dtype=np.int64)
    only_one = np.ones(len(pts), dtype=bool)
    uniq = {}
    for k, (xi, yi) in enumerate(zip(x, y)):
        other = uniq.get(xi)
        if other is None:
            uniq[xi] = yi
        elif other != yi:
            only_one &= x != xi
    del first
    ok_right = (suf_max_p[idx] <= p) & (suf_min_q[idx] >= q)
    ok_left = (pre_min_p[idx] >= p) & (pre_max_q[idx] <= q)
    return ok_right & ok_left & only_one


def cone_points(path: LatticePath) -> list[tuple[int, int]]:
    """Cone points of the path, in path order (each vertex reported once)."""
    flags = _cone_flags(path)
    out, seen = [], set()
    for v, f in zip(path.vertices, flags):
        if f and v not in seen:
            seen.add(v)
            out.append(v)
    return out


@dataclass(frozen=True)
class PathClassification:
    forward_confined: bool
    backward_confined: bool
    diamond_confined: bool
    irreducible: bool
    f_witness: tuple[int, int] | None
    b_witness: tuple[int, int] | None


def classify(path: LatticePath) -> PathClassification:
    """Forward/backward/diamond confinement and irreducibility with witnesses.

    Forward-confined: the path lies in u + Y< for a (necessarily unique)
    vertex u; backward-confined uses the mirrored cone.
    """
    pts = path.vertices
    fw = next((u for u in set(pts)
               if all(_in_left_cone(w[0] - u[0], w[1] - u[1]) for w in pts)), None)
    bw = next((v for v in set(pts)
               if all(_in_left_cone(v[0] - w[0], v[1] - w[1]) for w in pts)), None)
    diamond = fw is not None and bw is not None
    irr = False
    if diamond:
        interior_cp = [c for c in cone_points(path) if c not in (fw, bw)]
        irr = not interior_cp
    return PathClassification(forward_confined=fw is not None,
                              backward_confined=bw is not None,
                              diamond_confined=diamond, irreducible=irr,
                              f_witness=fw, b_witness=bw)


@dataclass(frozen=True)
class Decomposition:
    left: LatticePath
    irreducibles: tuple[LatticePath, ...]
    right: LatticePath
    cone_pts: tuple[tuple[int, int], ...]

    def concatenated(self) -> tuple[tuple[int, int], ...]:
        """Vertex sequence re-assembled from the pieces (shared endpoints merged)."""
        out = list(self.left.vertices)
        for piece in (*self.irreducibles, self.right):
            out.extend(piece.vertices[1:])
        return tuple(out)


def decompose(path: LatticePath) -> Decomposition:
    """Split at every cone point; outer non-diamond parts become left/right."""
    cps = cone_points(path)
    if not cps:
        raise NoConePointsError("path has no cone points")
    cp_set = set(cps)
    cut_idx = [k for k, v in enumerate(path.vertices) if v in cp_set]
    pieces = []
    bounds = [0] + cut_idx + [len(path.vertices) - 1]
    for a, b in zip(bounds, bounds[1:]):
        if b > a:
            pieces.append(LatticePath(path.vertices[a:b + 1]))
    first_is_cp = path.vertices[0] in cp_set
    last_is_cp = path.vertices[-1] in cp_set
    start = path.vertices[0]
    end = path.vertices[-1]
    left = LatticePath((start,)) if first_is_cp else pieces[0]
    right = LatticePath((end,)) if last_is_cp else pieces[-1]
    mid = pieces[(0 if first_is_cp else 1):(len(pieces) if last_is_cp else -1)]
    return Decomposition(left=left, irreducibles=tuple(mid), right=right,
                         cone_pts=tuple(cps))


@dataclass(frozen=True)
class EffectiveWalk:
    """Breakpoints S_0..S_l of a decomposition with steps in the cone Y<."""

    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for (t0, z0), (t1, z1) in zip(self.points, self.points[1:]):
            if not (t1 - t0 >= abs(z1 - z0) and t1 - t0 >= 1):
                raise ValueError(f"step {(t1 - t0, z1 - z0)} leaves the cone")

    @property
    def steps(self) -> np.ndarray:
        pts = np.asarray(self.points, dtype=np.int64)
        return pts[1:] - pts[:-1]

    @property
    def heights(self) -> np.ndarray:
        return np.asarray([z for _, z in self.points], dtype=np.int64)

    @property
    def times(self) -> np.ndarray:
        return np.asarray([t for t, _ in self.points], dtype=np.int64)

    @property
    def gap(self) -> float:
        """Euclidean size of the maximal step."""
        st = self.steps
        return float(np.sqrt((st.astype(float) ** 2).sum(axis=1).max()))

    def __len__(self) -> int:
        return len(self.points) - 1


def effective_walk(dec: Decomposition) -> EffectiveWalk:
    """Walk through the decomposition breakpoints (trivial end pieces dropped)."""
    pts = []
    if len(dec.left) > 1:
        pts.append(dec.left.vertices[0])
    pts.extend(dec.cone_pts)
    if len(dec.right) > 1:
        pts.append(dec.right.vertices[-1])
    return EffectiveWalk(points=tuple(pts))


def estimate_chi(walks) -> tuple[float, float]:
    """Pooled curvature estimate Var(zeta)/E(theta) with a jackknife error.

    Pools the steps of all walks; the standard error leaves out one walk at a
    time (nan when only one walk is supplied).
    """
    walks = list(walks)
    all_steps = [w.steps for w in walks if len(w) > 0]
    if not all_steps or sum(len(s) for s in all_steps) < 2:
        raise InsufficientDataError("need at least 2 pooled steps")
    pooled = np.concatenate(all_steps, axis=0).astype(float)

    def chi_of(steps: np.ndarray) -> float:
        return float(np.var(steps[:, 1]) / np.mean(steps[:, 0]))

    chi = chi_of(pooled)
    m = len(all_steps)
    if m < 2:
        return chi, float("nan")
    offsets = np.cumsum([0] + [len(s) for s in all_steps])
    loo = []
    for i in range(m):
        keep = np.delete(pooled, np.s_[offsets[i]:offsets[i + 1]], axis=0)
        if len(keep) >= 2:
            loo.append(chi_of(keep))
    loo = np.asarray(loo)
    se = float(np.sqrt((len(loo) - 1) / len(loo) * np.sum((loo - loo.mean()) ** 2)))
    return chi, se
