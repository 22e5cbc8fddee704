"""The unified (Moebius-strip) matching graph.

Every face appears twice, once on each restricted lattice ("panel") that
contains its colour.  Single-qubit errors induce unit edges:

* bulk qubit: one weight-1 edge on each panel;
* boundary qubit of colour u: a weight-1 edge on the panel without u and a
  weight-2 edge across the u crease;
* corner qubit of colour u: a weight-3 edge joining the two copies of the
  corner face.

Edges induced by qubits on the green boundary (green crease edges plus the red
and blue corner edges) are flagged: a path's number of flagged edges mod 2 is
its commutator with the green Z logical.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import CodeLattice, Color, QubitKind, Syndrome, build_lattice

UNREACHABLE = 1 << 30


class Panel(enum.IntEnum):
    RG = 0
    GB = 1
    RB = 2

    @property
    def colors(self) -> tuple[Color, Color]:
        return _PANEL_COLORS[self]

    @classmethod
    def of(cls, a: Color, b: Color) -> "Panel":
        pair = frozenset((a, b))
        for p, cols in _PANEL_COLORS.items():
            if frozenset(cols) == pair:
                return p
        raise ValueError(f"no panel for colours {a}, {b}")

    @classmethod
    def containing(cls, c: Color) -> tuple["Panel", "Panel"]:
        return tuple(p for p in cls if c in _PANEL_COLORS[p])  # type: ignore[return-value]


_PANEL_COLORS = {
    Panel.RG: (Color.R, Color.G),
    Panel.GB: (Color.G, Color.B),
    Panel.RB: (Color.R, Color.B),
}

# position along the strip once it is torn open at the green crease
_STRIP_ORDER = {Panel.RG: 0, Panel.RB: 1, Panel.GB: 2}


class ViaKind(enum.Enum):
    BULK = "bulk"
    CREASE = "crease"
    CORNER = "corner"


@dataclass(frozen=True)
class Via:
    kind: ViaKind
    color: Color | None = None

    def __str__(self) -> str:
        if self.kind is ViaKind.BULK:
            return "bulk"
        return f"{self.kind.value}_{self.color.label}"


@dataclass(frozen=True)
class UNode:
    face: int
    panel: Panel


@dataclass(frozen=True)
class UnitEdge:
    a: int
    b: int
    weight: int
    crosses_green: bool
    via: Via
    source_qubits: tuple[int, ...]


@dataclass(frozen=True)
class TearSite:
    """A flagged unit edge; the alternative matching places its dummies here."""

    index: int
    edge: int
    left: int
    right: int
    weight: int
    qubit: int


@dataclass(frozen=True, eq=False)
class UnifiedLattice:
    lattice: CodeLattice
    nodes: tuple[UNode, ...]
    unit_edges: tuple[UnitEdge, ...]
    qubit_edges: tuple[tuple[int, ...], ...]
    face_nodes: np.ndarray
    dist_len: np.ndarray
    dist_parity: np.ndarray
    class_len: np.ndarray
    torn_len: np.ndarray
    tear_sites: tuple[TearSite, ...]

    @property
    def d(self) -> int:
        return self.lattice.d

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def node_id(self, face: int, panel: Panel) -> int:
        slot = Panel.containing(self.lattice.face_color[face]).index(panel)
        return 2 * face + slot

    def dist(self, a: int, b: int) -> tuple[int, int]:
        """(length, green crossing parity) of the canonical shortest path."""
        return int(self.dist_len[a, b]), int(self.dist_parity[a, b])

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "nodes": [
                {"id": i, "face": n.face, "panel": n.panel.name} for i, n in enumerate(self.nodes)
            ],
            "unit_edges": [
                {
                    "endpoints": [e.a, e.b],
                    "weight": e.weight,
                    "via": str(e.via),
                    "crosses_green": int(e.crosses_green),
                    "source_qubits": list(e.source_qubits),
                }
                for e in self.unit_edges
            ],
        }


def _induced_edges(lat: CodeLattice, q: int):
    """Yield ``(node_a, node_b, weight, via)`` for the unit edges of qubit ``q``."""

    def node(face: int, panel: Panel) -> int:
        slot = Panel.containing(lat.face_color[face]).index(panel)
        return 2 * face + slot

    cls = lat.qubit_class[q]
    by_color = {lat.face_color[f]: f for f in lat.qubit_faces[q]}
    if cls.kind is QubitKind.BULK:
        for panel in Panel:
            v, w = panel.colors
            yield node(by_color[v], panel), node(by_color[w], panel), 1, Via(ViaKind.BULK)
    elif cls.kind is QubitKind.BOUNDARY:
        u = cls.color
        v, w = u.others()
        a, b = by_color[v], by_color[w]
        yield node(a, Panel.of(v, w)), node(b, Panel.of(v, w)), 1, Via(ViaKind.BULK)
        yield node(a, Panel.of(u, v)), node(b, Panel.of(u, w)), 2, Via(ViaKind.CREASE, u)
    else:
        u = cls.color
        v, w = u.others()
        a = by_color[u]
        yield node(a, Panel.of(u, v)), node(a, Panel.of(u, w)), 3, Via(ViaKind.CORNER, u)


def _flagged(via: Via) -> bool:
    if via.kind is ViaKind.CREASE:
        return via.color == Color.G
    if via.kind is ViaKind.CORNER:
        return via.color != Color.G
    return False


def _dijkstra_lex(n: int, adj, src: int) -> tuple[list[int], list[int]]:
    """Shortest paths minimising (length, flagged-edge count); ties by node index."""
    best = [(UNREACHABLE, UNREACHABLE)] * n
    best[src] = (0, 0)
    heap = [(0, 0, src)]
    done = [False] * n
    while heap:
        length, cross, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        for y, w, flag in adj[x]:
            cand = (length + w, cross + flag)
            if cand < best[y]:
                best[y] = cand
                heapq.heappush(heap, (cand[0], cand[1], y))
    return [b[0] for b in best], [b[1] % 2 if b[0] < UNREACHABLE else 0 for b in best]


def _dijkstra_class(n: int, adj, src: int) -> np.ndarray:
    """Shortest even- and odd-crossing path lengths from ``src``."""
    best = np.full((2, n), UNREACHABLE, dtype=np.int64)
    best[0, src] = 0
    heap = [(0, src, 0)]
    while heap:
        length, x, par = heapq.heappop(heap)
        if length > best[par, x]:
            continue
        for y, w, flag in adj[x]:
            p2 = par ^ flag
            if length + w < best[p2, y]:
                best[p2, y] = length + w
                heapq.heappush(heap, (length + w, y, p2))
    return best


def all_pairs(n: int, edges: tuple[UnitEdge, ...], skip_flagged: bool = False):
    """Canonical all-pairs table: ``(length, parity)`` arrays of shape (n, n)."""
    adj = [[] for _ in range(n)]
    for e in edges:
        if skip_flagged and e.crosses_green:
            continue
        adj[e.a].append((e.b, e.weight, int(e.crosses_green)))
        adj[e.b].append((e.a, e.weight, int(e.crosses_green)))
    for lst in adj:
        lst.sort()
    length = np.empty((n, n), dtype=np.int64)
    parity = np.empty((n, n), dtype=np.uint8)
    for s in range(n):
        ls, ps = _dijkstra_lex(n, adj, s)
        length[s] = ls
        parity[s] = ps
    return length, parity


def class_distances(n: int, edges: tuple[UnitEdge, ...]) -> np.ndarray:
    """``out[p, a, b]``: shortest a-b path length among paths of crossing parity p."""
    adj = [[] for _ in range(n)]
    for e in edges:
        adj[e.a].append((e.b, e.weight, int(e.crosses_green)))
        adj[e.b].append((e.a, e.weight, int(e.crosses_green)))
    out = np.empty((2, n, n), dtype=np.int64)
    for s in range(n):
        out[:, s, :] = _dijkstra_class(n, adj, s)
    return out


def _build(lat: CodeLattice) -> UnifiedLattice:
    nodes = []
    for f, c in enumerate(lat.face_color):
        for panel in Panel.containing(c):
            nodes.append(UNode(f, panel))
    n = len(nodes)

    merged: dict[tuple[int, int, Via], list] = {}
    order: list[tuple[int, int, Via]] = []
    for q in range(lat.n_qubits):
        for a, b, w, via in _induced_edges(lat, q):
            key = (min(a, b), max(a, b), via)
            if key not in merged:
                merged[key] = [w, []]
                order.append(key)
            merged[key][1].append(q)
    order.sort(key=lambda k: (k[0], k[1], k[2].kind.value, -1 if k[2].color is None else k[2].color))
    edges = tuple(
        UnitEdge(a, b, merged[(a, b, via)][0], _flagged(via), via, tuple(merged[(a, b, via)][1]))
        for a, b, via in order
    )
    qubit_edges_lists: list[list[int]] = [[] for _ in range(lat.n_qubits)]
    for i, e in enumerate(edges):
        for q in e.source_qubits:
            qubit_edges_lists[q].append(i)

    face_nodes = np.arange(n, dtype=np.int64).reshape(-1, 2)
    dist_len, dist_parity = all_pairs(n, edges)
    torn_len, _ = all_pairs(n, edges, skip_flagged=True)
    class_len = class_distances(n, edges)

    green_order = {q: i for i, q in enumerate(lat.boundary[Color.G])}
    flagged = sorted(
        (green_order[e.source_qubits[0]], i) for i, e in enumerate(edges) if e.crosses_green
    )
    sites = []
    for k, (_, i) in enumerate(flagged):
        e = edges[i]
        left, right = sorted((e.a, e.b), key=lambda x: _STRIP_ORDER[nodes[x].panel])
        sites.append(TearSite(k, i, left, right, e.weight, e.source_qubits[0]))

    for arr in (face_nodes, dist_len, dist_parity, class_len, torn_len):
        arr.setflags(write=False)
    return UnifiedLattice(
        lattice=lat,
        nodes=tuple(nodes),
        unit_edges=edges,
        qubit_edges=tuple(tuple(x) for x in qubit_edges_lists),
        face_nodes=face_nodes,
        dist_len=dist_len,
        dist_parity=dist_parity,
        class_len=class_len,
        torn_len=torn_len,
        tear_sites=tuple(sites),
    )


@lru_cache(maxsize=None)
def _build_for_distance(d: int) -> UnifiedLattice:
    return _build(build_lattice(d))


def build_unified(lat: CodeLattice | int) -> UnifiedLattice:
    """Unified lattice with all distance tables precomputed (cached per distance)."""
    d = lat if isinstance(lat, int) else lat.d
    return _build_for_distance(d)


def defect_nodes(u: UnifiedLattice, s: Syndrome) -> list[int]:
    """Both panel copies of every defect, in face order."""
    out = []
    for f, _ in s.defects:
        out.extend((2 * f, 2 * f + 1))
    return out
