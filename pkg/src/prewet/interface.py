"""Peierls contours on the dual lattice, envelopes and repulsion diagnostics.

Dual vertices are stored in integer coordinates: (a, b) stands for the point
(a + 1/2, b + 1/2).  A spin configuration with the mixed boundary induces one
open contour joining the two bottom dual corners plus a family of closed
loops.  Vertices where four disagreement edges meet are resolved by a fixed
splitting convention: the north edge pairs with the east edge and the south
edge with the west edge ("round the NE and SW corners").  This is the unique
choice under which a contour never crosses a constant-spin path augmented by
NW-SE diagonals, and it keeps NW/SE-diagonal minus pairs in one component.

The open contour gamma determines a filled configuration omega_gamma (the one
whose unique contour is gamma) by crossing parity along each column; envelopes
and the minus-phase area are read off from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import BoxGeometry, SpinConfig

__all__ = [
    "ContourSet",
    "InterfaceProfile",
    "trace_contours",
    "s_cluster",
    "omega_gamma",
    "envelopes",
    "max_closed_diameter",
    "check_restricted_phase",
    "hits_box",
]

SPLITTING_CONVENTION = "NE-SW"

# slot partners at a 4-edge dual vertex: N<->E, S<->W
_PARTNER4 = {"N": "E", "E": "N", "S": "W", "W": "S"}


class ContourStructureError(RuntimeError):
    """The disagreement-edge set has no corner-to-corner component."""


@dataclass
class ContourSet:
    geometry: BoxGeometry
    open_gamma: list[tuple[int, int]]           # dual-integer vertices, left corner first
    closed: list[list[tuple[int, int]]]         # closed loops, cyclic vertex lists
    splitting: str = SPLITTING_CONVENTION

    @property
    def gamma_length(self) -> int:
        return len(self.open_gamma) - 1

    def gamma_real(self) -> np.ndarray:
        """Open-contour vertices in real dual coordinates, shape (k, 2)."""
        return np.asarray(self.open_gamma, dtype=float) + 0.5


@dataclass
class InterfaceProfile:
    x_min: int
    gamma_plus: np.ndarray
    gamma_minus: np.ndarray
    minus_area: int
    gamma_length: int

    def __post_init__(self):
        if not np.all(self.gamma_plus > self.gamma_minus):
            raise ValueError("envelope ordering violated: need gamma_plus > gamma_minus")

    @property
    def columns(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_min + len(self.gamma_plus))

    def plus_at(self, t: float) -> float:
        """Upper envelope extended to real argument by linear interpolation."""
        return float(np.interp(t, self.columns, self.gamma_plus))

    def minus_at(self, t: float) -> float:
        return float(np.interp(t, self.columns, self.gamma_minus))


def _active_edges(config: SpinConfig) -> set[tuple[str, int, int]]:
    """Dual edges separating disagreeing spin pairs, boundary included.

    ('v', a, b): vertical edge from (a, b-1) to (a, b), dual to the primal
    bond (a, b)-(a+1, b).  ('h', a, b): horizontal edge from (a-1, b) to
    (a, b), dual to the bond (a, b)-(a, b+1).
    """
    g = config.geometry
    pad = config.padded()
    edges: set[tuple[str, int, int]] = set()
    dis_h = pad[1:-1, :-1] != pad[1:-1, 1:]           # (height, width+1)
    for b, col in zip(*np.nonzero(dis_h)):
        edges.add(("v", int(col) + g.x_min - 1, int(b)))
    dis_v = pad[:-1, 1:-1] != pad[1:, 1:-1]           # (height+1, width)
    for r, col in zip(*np.nonzero(dis_v)):
        edges.add(("h", int(col) + g.x_min, int(r) - 1))
    return edges


def _edge_slots(edge):
    """The two (vertex, slot) incidences of a dual edge."""
    kind, a, b = edge
    if kind == "v":
        return ((a, b - 1), "N"), ((a, b), "S")
    return ((a - 1, b), "E"), ((a, b), "W")


def _slot_edge(vertex, slot):
    a, b = vertex
    if slot == "N":
        return ("v", a, b + 1)
    if slot == "S":
        return ("v", a, b)
    if slot == "E":
        return ("h", a + 1, b)
    return ("h", a, b)


def _other_end(edge, vertex):
    (v1, _), (v2, _) = _edge_slots(edge)
    return v2 if v1 == vertex else v1


def _walk(start_vertex, start_edge, incid, used):
    """Follow partner edges from start_edge until an endpoint or loop closure.

    Returns the vertex sequence beginning at start_vertex.
    """
    path = [start_vertex]
    vertex, edge = start_vertex, start_edge
    while True:
        used.add(edge)
        vertex = _other_end(edge, vertex)
        path.append(vertex)
        slots = incid[vertex]
        arrived = next(s for s, e in slots.items() if e == edge)
        if len(slots) == 4:
            nxt = slots[_PARTNER4[arrived]]
        else:
            nxt = next((e for s, e in slots.items() if e != edge), None)
        if nxt is None or nxt in used:
            return path
        edge = nxt


def trace_contours(config: SpinConfig) -> ContourSet:
    """All Peierls contours of the configuration under the splitting rule."""
    g = config.geometry
    edges = _active_edges(config)
    incid: dict[tuple[int, int], dict[str, tuple]] = {}
    for e in edges:
        for vertex, slot in _edge_slots(e):
            incid.setdefault(vertex, {})[slot] = e

    left = (g.x_min - 1, -1)
    right = (g.x_max, -1)
    if left not in incid or len(incid[left]) != 1:
        raise ContourStructureError("no open contour leaving the left dual corner")
    used: set[tuple] = set()
    start_edge = next(iter(incid[left].values()))
    gamma = _walk(left, start_edge, incid, used)
    if gamma[-1] != right:
        raise ContourStructureError(f"open contour ended at {gamma[-1]}, expected {right}")

    closed = []
    for e in sorted(edges - used):
        if e in used:
            continue
        v0 = _edge_slots(e)[0][0]
        loop = _walk(v0, e, incid, used)
        closed.append(loop[:-1] if loop[-1] == loop[0] else loop)
    return ContourSet(geometry=g, open_gamma=gamma, closed=closed)


def s_cluster(config: SpinConfig) -> set[tuple[int, int]]:
    """Minus sites of the box s-connected to the minus row below it.

    s-adjacency is nearest-neighbor adjacency plus the NW-SE diagonal.
    """
    g = config.geometry
    minus = {(x, y) for y in range(g.height) for x in range(g.x_min, g.x_max + 1)
             if config.spins[y, x - g.x_min] == -1}
    frontier = [s for s in minus if s[1] == 0]  # vertically adjacent to the -1 row
    seen = set(frontier)
    offsets = ((1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1))
    while frontier:
        x, y = frontier.pop()
        for dx, dy in offsets:
            nxt = (x + dx, y + dy)
            if nxt in minus and nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def omega_gamma(contours: ContourSet) -> SpinConfig:
    """The configuration whose unique contour is the open gamma.

    Built by crossing parity: walking down a column flips the sign each time
    a horizontal gamma edge is crossed.
    """
    g = contours.geometry
    h_edges = np.zeros((g.width, g.height + 1), dtype=np.int64)  # [x - x_min, b + 1]
    for (a1, b1), (a2, b2) in zip(contours.open_gamma, contours.open_gamma[1:]):
        if b1 == b2:  # horizontal dual edge crossed by column max(a1, a2)
            h_edges[max(a1, a2) - g.x_min, b1 + 1] = 1
    # crossings at or above a given level, counted from the top
    above = np.cumsum(h_edges[:, ::-1], axis=1)[:, ::-1]  # above[cx, k] = sum_{j>=k} h
    if np.any(above[:, 0] % 2 != 1):
        bad = int(np.nonzero(above[:, 0] % 2 != 1)[0][0]) + g.x_min
        raise ContourStructureError(f"column {bad}: parity does not reach the minus row")
    spins = np.where(above[:, 1:].T % 2 == 0, 1, -1).astype(np.int8)  # spins[y, cx]
    return SpinConfig(g, spins)


def envelopes(contours: ContourSet) -> InterfaceProfile:
    """Upper/lower envelopes, minus-phase area and edge length of gamma.

    gamma_plus(i) = 1 + max height of a minus spin of omega_gamma in column i
    (boundary rows included), gamma_minus(i) = -1 + min height of a plus spin.
    """
    g = contours.geometry
    w = omega_gamma(contours)
    minus = w.spins == -1
    has_minus = minus.any(axis=0)
    last_minus = (g.height - 1) - np.argmax(minus[::-1, :], axis=0)
    gp = np.where(has_minus, last_minus, -1) + 1
    plus = ~minus
    has_plus = plus.any(axis=0)
    first_plus = np.argmax(plus, axis=0)
    gm = np.where(has_plus, first_plus, g.y_max + 1) - 1
    minus_area = int(minus.sum())
    return InterfaceProfile(x_min=g.x_min, gamma_plus=gp.astype(np.int64),
                            gamma_minus=gm.astype(np.int64),
                            minus_area=minus_area, gamma_length=contours.gamma_length)


def _loop_diameter(loop: list[tuple[int, int]]) -> int:
    pts = np.asarray(loop)
    return int(max(pts[:, 0].max() - pts[:, 0].min(), pts[:, 1].max() - pts[:, 1].min()))


def max_closed_diameter(contours: ContourSet) -> int:
    """Sup-norm diameter of the largest closed contour; 0 if none."""
    if not contours.closed:
        return 0
    return max(_loop_diameter(loop) for loop in contours.closed)


def check_restricted_phase(contours: ContourSet, kappa: float, n: int) -> bool:
    """True iff every closed contour has diameter <= kappa * log(n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return max_closed_diameter(contours) <= kappa * np.log(n)


def hits_box(profile: InterfaceProfile, half_width: int, height: int) -> bool:
    """True iff the interface touches {|i| <= half_width, 0 <= j <= height}.

    The lowest point of the interface over column i sits just above
    gamma_minus(i), so the box is hit iff min gamma_minus(i) + 1 <= height.
    """
    cols = profile.columns
    sel = np.abs(cols) <= half_width
    if not np.any(sel):
        raise ValueError("box wider than the profile")
    return bool(profile.gamma_minus[sel].min() + 1 <= height)
