"""Edge-disjoint paths with terminals on one face, via degree reduction.

In a graph of maximum degree 3 two paths are vertex-disjoint iff they are
edge-disjoint (terminals being leaves), so the vertex-disjoint solver applies
after three local rewrites, all with zero-weight gadget edges:

1. every terminal ``s`` of degree >= 3 gets a new leaf ``s'`` attached in
   the corner of the designated face, and ``s'`` becomes the terminal;
2. a simple path visits a vertex once, so at most ``c = min(k, d/2)``
   optimal paths cross a vertex of degree ``d``.  A cycle with one port per
   corner routes any two non-crossing transitions disjointly, so vertices
   with ``c <= 2`` become such a cycle.  Otherwise the vertex becomes a grid
   with ``d`` columns and ``c`` rows whose top row carries the ports in
   rotation order; each pair of ports runs down its two columns and along
   the row just below the pairs nested inside it;
3. any other vertex of degree >= 4 becomes a cycle with one port per corner.

Optimal edge-disjoint systems can always be uncrossed at vertices without
changing their length or pairing, so nothing is lost by gadgets that only
support non-crossing transitions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .errors import CrossingDemands, InternalInconsistency
from .graph import EDGE_DISJOINT, ONE_FACE, VERTEX_DISJOINT, Instance, PlanarGraph, face_labels, validate_instance
from .oneface import input_pairing
from .pairings import is_noncrossing
from .search import DetectedFailure, Solution, greedy_search, isolation_search

log = logging.getLogger(__name__)


class _Builder:
    """Mutable edge list plus rotation system over stable dart ids."""

    def __init__(self, g: PlanarGraph) -> None:
        self.edges = [list(e) for e in g.edges]
        self.weights = list(g.weights)
        self.prov: list[int | None] = list(range(g.m))
        self.rot = [list(r) for r in g.rotation]

    @property
    def n(self) -> int:
        return len(self.rot)

    def new_vertex(self) -> int:
        self.rot.append([])
        return len(self.rot) - 1

    def new_edge(self, u: int, v: int) -> int:
        self.edges.append([u, v])
        self.weights.append(0)
        self.prov.append(None)
        return len(self.edges) - 1

    def retarget(self, dart: int, v: int) -> None:
        """Make ``v`` the tail of ``dart`` (the edge keeps its id)."""
        self.edges[dart >> 1][dart & 1] = v

    def build(self) -> PlanarGraph:
        return PlanarGraph(
            self.n,
            tuple(tuple(e) for e in self.edges),
            tuple(tuple(r) for r in self.rot),
            tuple(self.weights),
        )


def _attach_leaf(b: _Builder, s: int, after: int) -> int:
    """New leaf at ``s`` inserted right after dart ``after`` in its rotation;
    returns the leaf's outgoing dart."""
    leaf = b.new_vertex()
    e = b.new_edge(leaf, s)
    ring = b.rot[s]
    ring.insert(ring.index(after) + 1, 2 * e + 1)
    b.rot[leaf] = [2 * e]
    return 2 * e


def _grid_gadget(b: _Builder, v: int, rows: int) -> None:
    ports = list(b.rot[v])
    d = len(ports)
    cell = [[v if (r, c) == (0, 0) else b.new_vertex() for c in range(d)] for r in range(rows)]
    rings: dict[int, list[int]] = {}
    horiz: dict[tuple[int, int], int] = {}
    vert: dict[tuple[int, int], int] = {}
    for r in range(rows):
        for c in range(d - 1):
            horiz[r, c] = b.new_edge(cell[r][c], cell[r][c + 1])
    for r in range(rows - 1):
        for c in range(d):
            vert[r, c] = b.new_edge(cell[r][c], cell[r + 1][c])
    for r in range(rows):
        for c in range(d):
            ring = []
            # clockwise: up, right, down, left
            if r == 0:
                ring.append(ports[c])
                b.retarget(ports[c], cell[0][c])
            else:
                ring.append(2 * vert[r - 1, c] + 1)
            if c + 1 < d:
                ring.append(2 * horiz[r, c])
            if r + 1 < rows:
                ring.append(2 * vert[r, c])
            if c > 0:
                ring.append(2 * horiz[r, c - 1] + 1)
            rings[cell[r][c]] = ring
    for u, ring in rings.items():
        b.rot[u] = ring


def _cycle_gadget(b: _Builder, v: int) -> None:
    """Cycle with one port per corner; routes any two non-crossing transitions."""
    ports = list(b.rot[v])
    d = len(ports)
    corners = [v] + [b.new_vertex() for _ in range(d - 1)]
    side = [b.new_edge(corners[i], corners[(i + 1) % d]) for i in range(d)]
    for i, c in enumerate(corners):
        b.retarget(ports[i], c)
        # clockwise: port, towards the next port, towards the previous one
        b.rot[c] = [ports[i], 2 * side[i], 2 * side[(i - 1) % d] + 1]


@dataclass(frozen=True)
class GadgetMap:
    """``provenance[e]`` is the original edge of reduced edge ``e`` (``None``
    inside gadgets); ``terminal_of[v']`` is the original terminal."""

    original: Instance
    reduced: Instance
    provenance: tuple[int | None, ...]
    terminal_of: Mapping[int, int]

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.reduced.n,
            "m": self.reduced.graph.m,
            "max_degree": max(self.reduced.graph.degree(v) for v in range(self.reduced.n)),
            "gadget_edges": sum(p is None for p in self.provenance),
        }


def reduce_edpp(instance: Instance) -> GadgetMap:
    """Max-degree-3 one-face instance equivalent for shortest systems."""
    validate_instance(instance)
    if instance.case != ONE_FACE:
        raise CrossingDemands("edge-disjoint reduction needs a one-face instance")
    labels = face_labels(instance)
    if not is_noncrossing(input_pairing(labels, instance.terminals)):
        raise CrossingDemands("demand chords cross inside the face")
    g = instance.graph
    walk = g.walk_from(instance.faces[0])
    arriving = {g.head(d): d for d in walk}
    b = _Builder(g)
    leaf_dart: dict[int, int] = {}
    for s, t in instance.terminals:
        for v in (s, t):
            if g.degree(v) >= 3:
                # corner of the face at v: between twin(arriving) and its successor
                leaf_dart[v] = _attach_leaf(b, v, arriving[v] ^ 1)
    k = instance.k
    for v in range(b.n):
        d = len(b.rot[v])
        if d >= 4 and min(k, d // 2) <= 2:
            _cycle_gadget(b, v)
        elif d >= 4:
            _grid_gadget(b, v, min(k, d // 2))
    for v in range(b.n):
        if len(b.rot[v]) == 4:
            _cycle_gadget(b, v)
    reduced_graph = b.build()
    terminal_of = {}
    terminals = []
    for s, t in instance.terminals:
        s2, t2 = (reduced_graph.tail(leaf_dart[v]) if v in leaf_dart else v for v in (s, t))
        terminal_of[s2], terminal_of[t2] = s, t
        terminals.append((s2, t2))
    first = instance.terminals[0][0]
    # a degree <= 2 terminal keeps its face corner, and so does the walk
    # from the original anchor unless it starts at a vertex that was expanded
    anchor = leaf_dart[first] if first in leaf_dart else _face_dart(reduced_graph, first, g, walk)
    reduced = Instance(
        reduced_graph,
        tuple(terminals),
        ONE_FACE,
        (anchor,),
        VERTEX_DISJOINT,
        meta={"reduced_from": instance.digest()},
    )
    validate_instance(reduced)
    deg = max(reduced_graph.degree(v) for v in range(reduced_graph.n))
    if deg > 3:
        raise InternalInconsistency(f"reduced graph still has degree {deg}")
    return GadgetMap(instance, reduced, tuple(b.prov), terminal_of)


def _face_dart(reduced: PlanarGraph, v: int, g: PlanarGraph, walk: Sequence[int]) -> int:
    """Dart leaving unexpanded terminal ``v`` along the designated face."""
    d = next(d for d in walk if g.tail(d) == v)
    if reduced.tail(d) != v:
        raise InternalInconsistency(f"terminal {v} was expanded without a leaf")
    return d


def _loop_erase(verts: list[int], edges: list[int]) -> tuple[list[int], list[int]]:
    out_v = [verts[0]]
    out_e: list[int] = []
    pos = {verts[0]: 0}
    for v, e in zip(verts[1:], edges):
        if v in pos:
            cut = pos[v]
            for u in out_v[cut + 1 :]:
                del pos[u]
            out_v = out_v[: cut + 1]
            out_e = out_e[:cut]
        else:
            pos[v] = len(out_v)
            out_v.append(v)
            out_e.append(e)
    return out_v, out_e


def lift_solution(gm: GadgetMap, sol: Solution) -> Solution:
    """Map a reduced solution back to edge-disjoint paths of the original."""
    g = gm.original.graph
    paths, edge_lists = [], []
    used: set[int] = set()
    for (s, t), red_edges in zip(gm.original.terminals, sol.edges):
        orig = [gm.provenance[e] for e in red_edges if gm.provenance[e] is not None]
        verts = [s]
        u = s
        for e in orig:
            a, c = g.edges[e]
            if u not in (a, c):
                raise InternalInconsistency(f"lifted edge {e} does not continue the path at vertex {u}")
            u = c if a == u else a
            verts.append(u)
        if u != t:
            raise InternalInconsistency(f"lifted path ends at {u}, expected {t}")
        verts, orig = _loop_erase(verts, orig)
        if used & set(orig):
            raise InternalInconsistency("lifted paths share an edge")
        used.update(orig)
        paths.append(tuple(verts))
        edge_lists.append(tuple(orig))
    length = sum(g.weights[e] for p in edge_lists for e in p)
    if length != sol.length:
        raise InternalInconsistency(f"lifted length {length} differs from reduced length {sol.length}")
    return Solution(tuple(paths), tuple(edge_lists), length, {**dict(sol.meta), "mode": EDGE_DISJOINT})


def solve_edpp(
    instance: Instance,
    method: str = "greedy",
    seed: Any = None,
    jobs: int = 1,
) -> tuple[GadgetMap, Solution | DetectedFailure]:
    """Reduce, search the reduced instance, lift."""
    gm = reduce_edpp(instance)
    if method == "greedy":
        red = greedy_search(gm.reduced, batch=True, jobs=jobs)
    else:
        red = isolation_search(gm.reduced, seed, jobs=jobs)
        if isinstance(red, DetectedFailure):
            return gm, red
    return gm, lift_solution(gm, red)


def validate_edge_solution(instance: Instance, sol: Solution) -> bool:
    """Simple paths joining the prescribed pairs, pairwise edge-disjoint,
    with total weight ``sol.length``."""
    g = instance.graph
    if len(sol.paths) != instance.k or len(sol.edges) != instance.k:
        return False
    seen: set[int] = set()
    total = 0
    for (s, t), verts, es in zip(instance.terminals, sol.paths, sol.edges):
        if not verts or verts[0] != s or verts[-1] != t or len(es) != len(verts) - 1:
            return False
        if len(set(verts)) != len(verts):
            return False
        for a, c, e in zip(verts, verts[1:], es):
            if not 0 <= e < g.m or set(g.edges[e]) != {a, c} or e in seen:
                return False
            seen.add(e)
            total += g.weights[e]
    return total == sol.length


__all__: Sequence[str] = (
    "GadgetMap",
    "lift_solution",
    "reduce_edpp",
    "solve_edpp",
    "validate_edge_solution",
)
