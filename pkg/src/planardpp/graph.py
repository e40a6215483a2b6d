"""Planar graphs given by a rotation system, face tracing, duals and instances.

Darts: edge ``e = (u, v)`` owns dart ``2e`` (u -> v) and dart ``2e + 1``
(v -> u); ``d ^ 1`` is the reverse dart.  A rotation lists, for every vertex,
the darts leaving it in clockwise order.  Faces are traced by

    next(u -> v) = the dart following (v -> u) in the rotation at v,

and "counter-clockwise along a face" always means the order in which this
walk visits the face boundary.  Every orientation-dependent rule in the
package (labels, axis crossing signs) is stated relative to this walk, so the
results do not depend on whether the rotation is geometrically clockwise.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    BadCaseTag,
    DuplicateTerminal,
    InconsistentEmbedding,
    TerminalNotOnFace,
    TerminalRepeatsOnBoundary,
    WeightOutOfRange,
)

ONE_FACE = "one-face"
TWO_FACE = "two-face-parallel"
CASES = (ONE_FACE, TWO_FACE)
VERTEX_DISJOINT = "vertex-disjoint"
EDGE_DISJOINT = "edge-disjoint"


def twin(d: int) -> int:
    return d ^ 1


@dataclass(frozen=True)
class Face:
    id: int
    darts: tuple[int, ...]
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True, eq=False)
class PlanarGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...] = ()
    allow_loops: bool = False

    def __post_init__(self) -> None:
        if not self.weights:
            object.__setattr__(self, "weights", (1,) * len(self.edges))
        if len(self.weights) != len(self.edges):
            raise InconsistentEmbedding("one weight per edge required")
        if len(self.rotation) != self.n:
            raise InconsistentEmbedding(f"expected {self.n} rotations, got {len(self.rotation)}")
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InconsistentEmbedding(f"edge {e} has an endpoint outside 0..{self.n - 1}")
            if u == v and not self.allow_loops:
                raise InconsistentEmbedding(f"edge {e} is a self-loop")
        seen = [False] * (2 * len(self.edges))
        for v, darts in enumerate(self.rotation):
            for d in darts:
                if not 0 <= d < len(seen):
                    raise InconsistentEmbedding(f"unknown dart {d} at vertex {v}")
                if self.tail(d) != v:
                    raise InconsistentEmbedding(f"dart {d} does not leave vertex {v}")
                if seen[d]:
                    raise InconsistentEmbedding(f"dart {d} listed twice")
                seen[d] = True
        if not all(seen):
            missing = seen.index(False)
            raise InconsistentEmbedding(f"dart {missing} (edge {missing // 2}) missing from the rotation system")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edge_rotations(
        cls,
        n: int,
        edges: Sequence[tuple[int, int]],
        rotations: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
        weights: Sequence[int] | None = None,
    ) -> "PlanarGraph":
        """Build from per-vertex cyclic lists of *edge indices* (the file format)."""
        edges = tuple((int(u), int(v)) for u, v in edges)
        rot = []
        for v in range(n):
            if isinstance(rotations, Mapping):
                seq = rotations.get(v, rotations.get(str(v), ()))
            else:
                seq = rotations[v]
            darts = []
            for e in seq:
                e = int(e)
                if not 0 <= e < len(edges):
                    raise InconsistentEmbedding(f"rotation of vertex {v} names unknown edge {e}")
                u, w = edges[e]
                if u == v:
                    darts.append(2 * e)
                elif w == v:
                    darts.append(2 * e + 1)
                else:
                    raise InconsistentEmbedding(f"edge {e} is not incident to vertex {v}")
            rot.append(tuple(darts))
        return cls(n, edges, tuple(rot), tuple(weights) if weights is not None else ())

    @classmethod
    def from_coordinates(
        cls,
        coords: Sequence[tuple[float, float]],
        edges: Sequence[tuple[int, int]],
        weights: Sequence[int] | None = None,
    ) -> "PlanarGraph":
        """Rotation system of a straight-line drawing (darts sorted clockwise)."""
        n = len(coords)
        edges = tuple((int(u), int(v)) for u, v in edges)
        out: list[list[tuple[float, int]]] = [[] for _ in range(n)]
        for e, (u, v) in enumerate(edges):
            (ux, uy), (vx, vy) = coords[u], coords[v]
            out[u].append((math.atan2(vy - uy, vx - ux), 2 * e))
            out[v].append((math.atan2(uy - vy, ux - vx), 2 * e + 1))
        rot = tuple(tuple(d for _, d in sorted(lst, key=lambda t: (-t[0], t[1]))) for lst in out)
        return cls(n, edges, rot, tuple(weights) if weights is not None else ())

    # -- darts ------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def tail(self, d: int) -> int:
        u, v = self.edges[d >> 1]
        return v if d & 1 else u

    def head(self, d: int) -> int:
        return self.tail(d ^ 1)

    def out_dart(self, v: int, e: int) -> int:
        return 2 * e if self.edges[e][0] == v else 2 * e + 1

    @cached_property
    def _position(self) -> list[int]:
        pos = [0] * (2 * self.m)
        for darts in self.rotation:
            for i, d in enumerate(darts):
                pos[d] = i
        return pos

    def next_dart(self, d: int) -> int:
        r = d ^ 1
        ring = self.rotation[self.tail(r)]
        return ring[(self._position[r] + 1) % len(ring)]

    def prev_dart(self, d: int) -> int:
        ring = self.rotation[self.tail(d)]
        return ring[(self._position[d] - 1) % len(ring)] ^ 1

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """``(neighbor, edge index)`` pairs in rotation order."""
        return [(self.head(d), d >> 1) for d in self.rotation[v]]

    # -- faces ------------------------------------------------------------

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        face_of = [-1] * (2 * self.m)
        faces = []
        for start in range(2 * self.m):
            if face_of[start] >= 0:
                continue
            walk = []
            d = start
            while face_of[d] < 0:
                face_of[d] = len(faces)
                walk.append(d)
                d = self.next_dart(d)
            if d != start:
                raise InconsistentEmbedding("face walk does not close")
            faces.append(Face(len(faces), tuple(walk), tuple(self.tail(x) for x in walk)))
        object.__setattr__(self, "_face_of", face_of)
        self._check_euler(faces)
        return tuple(faces)

    def face_of(self, d: int) -> int:
        self.faces
        return self._face_of[d]  # type: ignore[attr-defined]

    @cached_property
    def components(self) -> list[int]:
        """Component id per vertex."""
        comp = [-1] * self.n
        c = 0
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            comp[s] = c
            stack = [s]
            while stack:
                v = stack.pop()
                for w, _ in self.neighbors(v):
                    if comp[w] < 0:
                        comp[w] = c
                        stack.append(w)
            c += 1
        return comp

    def _check_euler(self, faces: Sequence[Face]) -> None:
        comp = self.components
        nc = max(comp, default=-1) + 1
        nv = [0] * nc
        ne = [0] * nc
        nf = [0] * nc
        for v in range(self.n):
            nv[comp[v]] += 1
        for u, _ in self.edges:
            ne[comp[u]] += 1
        for f in faces:
            nf[comp[f.vertices[0]]] += 1
        for c in range(nc):
            euler = nv[c] - ne[c] + (nf[c] if ne[c] else 1)
            if euler != 2:
                raise InconsistentEmbedding(
                    f"rotation system is not planar (component {c}: V-E+F = {euler}, expected 2)"
                )

    def walk_from(self, d: int) -> list[int]:
        """Boundary darts of the face of ``d`` in walk order, starting at ``d``."""
        walk = [d]
        x = self.next_dart(d)
        while x != d:
            walk.append(x)
            x = self.next_dart(x)
        return walk

    def without_edges(self, removed: Iterable[int]) -> "PlanarGraph":
        """Same vertex set with some edges deleted (edge indices are renumbered)."""
        removed = set(removed)
        keep = [e for e in range(self.m) if e not in removed]
        new_index = {e: i for i, e in enumerate(keep)}
        rot = tuple(
            tuple(2 * new_index[d >> 1] + (d & 1) for d in ring if (d >> 1) in new_index)
            for ring in self.rotation
        )
        return PlanarGraph(
            self.n,
            tuple(self.edges[e] for e in keep),
            rot,
            tuple(self.weights[e] for e in keep),
            self.allow_loops,
        )


@dataclass(frozen=True)
class DualGraph:
    """Dual of a plane graph.

    Dual vertex ``f`` is primal face ``f``; dual edge ``e`` joins the faces on
    the two sides of primal edge ``e``.  Dual dart ``d`` runs from the face of
    primal dart ``d`` to the face of its reverse, i.e. a walk along dual dart
    ``d`` leaves the face lying on the walk side of ``d`` and crosses ``d``.
    """

    graph: PlanarGraph
    primal: PlanarGraph

    def crossed(self, dual_dart: int) -> int:
        """Primal dart whose face the dual dart leaves."""
        return dual_dart


def dual_graph(g: PlanarGraph) -> DualGraph:
    faces = g.faces
    edges = tuple((g.face_of(2 * e), g.face_of(2 * e + 1)) for e in range(g.m))
    # NB: rotation at a face is its boundary walk reversed, that keeps the
    # dual's own face walk convention consistent with the primal's.
    rot = tuple(tuple(reversed(f.darts)) for f in faces)
    dual = PlanarGraph(len(faces), edges, rot, g.weights, allow_loops=True)
    return DualGraph(dual, g)


@dataclass(frozen=True)
class Instance:
    """A graph plus terminal pairs on one face, or sources/sinks on two faces.

    ``faces`` holds anchor darts: one for ``one-face``; for
    ``two-face-parallel`` the source face then the sink face.
    """

    graph: PlanarGraph
    terminals: tuple[tuple[int, int], ...]
    case: str = ONE_FACE
    faces: tuple[int, ...] = ()
    mode: str = VERTEX_DISJOINT
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def k(self) -> int:
        return len(self.terminals)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def terminal_set(self) -> frozenset[int]:
        return frozenset(v for pair in self.terminals for v in pair)

    def face_ids(self) -> tuple[int, ...]:
        return tuple(self.graph.face_of(d) for d in self.faces)

    def with_graph(self, graph: PlanarGraph, faces: tuple[int, ...] | None = None) -> "Instance":
        return Instance(graph, self.terminals, self.case, self.faces if faces is None else faces, self.mode, self.meta)

    def with_terminals(self, terminals: Sequence[tuple[int, int]]) -> "Instance":
        return Instance(self.graph, tuple(map(tuple, terminals)), self.case, self.faces, self.mode, self.meta)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        g = self.graph
        rot = {str(v): [d >> 1 for d in g.rotation[v]] for v in range(g.n)}
        data: dict[str, Any] = {
            "n": g.n,
            "edges": [[u, v, w] for (u, v), w in zip(g.edges, g.weights)],
            "rotations": rot,
            "terminals": [list(p) for p in self.terminals],
            "case": self.case,
            "faces": [[d >> 1, d & 1] for d in self.faces],
        }
        if self.mode != VERTEX_DISJOINT:
            data["mode"] = self.mode
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Instance":
        try:
            n = int(data["n"])
            raw_edges = data["edges"]
            edges = [(int(e[0]), int(e[1])) for e in raw_edges]
            weights = [int(e[2]) if len(e) > 2 else 1 for e in raw_edges]
            graph = PlanarGraph.from_edge_rotations(n, edges, data["rotations"], weights)
            terminals = tuple((int(s), int(t)) for s, t in data["terminals"])
            faces = tuple(2 * int(e) + int(dr) for e, dr in data["faces"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InconsistentEmbedding(f"malformed instance file: {exc!r}") from exc
        return cls(graph, terminals, str(data.get("case", ONE_FACE)), faces, str(data.get("mode", VERTEX_DISJOINT)))

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def trace_faces(g: PlanarGraph) -> tuple[Face, ...]:
    return g.faces


def weight_limit(n: int) -> int:
    return max(n, 2) ** 3


def _boundary_order(g: PlanarGraph, darts: Sequence[int], terminals: Iterable[int]) -> list[int]:
    """Terminals in the order of ``tail(d)`` for ``d`` in ``darts``."""
    wanted = set(terminals)
    seen = []
    counts: dict[int, int] = {}
    for d in darts:
        v = g.tail(d)
        if v in wanted:
            counts[v] = counts.get(v, 0) + 1
            if counts[v] == 1:
                seen.append(v)
    for v, c in counts.items():
        if c > 1:
            raise TerminalRepeatsOnBoundary(f"terminal {v} occurs {c} times on the boundary of its face")
    missing = wanted - set(seen)
    if missing:
        raise TerminalNotOnFace(f"terminals {sorted(missing)} are not on the designated face")
    return seen


def face_labels(instance: Instance, axis: Any = None) -> dict[int, int]:
    """Terminal -> label in ``1..2k``.

    One face: labels follow the boundary walk from the anchor dart.  Two
    faces: sinks get ``1..k`` and sources ``k+1..2k``, each in counter-clockwise
    order as seen around the annulus starting at the axis (see ``twoface``).
    """
    g = instance.graph
    if instance.case == ONE_FACE:
        order = _boundary_order(g, g.walk_from(instance.faces[0]), instance.terminal_set)
        return {v: i + 1 for i, v in enumerate(order)}
    if instance.case != TWO_FACE:
        raise BadCaseTag(f"unknown case {instance.case!r}")
    if axis is None:
        from .twoface import find_axis

        axis = find_axis(instance)
    sources = [s for s, _ in instance.terminals]
    sinks = [t for _, t in instance.terminals]
    k = instance.k
    src_order = _boundary_order(g, source_side_walk(g, axis.source_dart), sources)
    snk_order = _boundary_order(g, sink_side_walk(g, axis.sink_dart), sinks)
    labels = {v: i + 1 for i, v in enumerate(snk_order)}
    labels.update({v: k + i + 1 for i, v in enumerate(src_order)})
    return labels


def source_side_walk(g: PlanarGraph, d: int) -> list[int]:
    """Darts whose tails list the source face counter-clockwise from the axis.

    The axis leaves the source face through dart ``d``; going around that face
    in walk order starting just after the crossing visits ``head(d)`` first.
    """
    return g.walk_from(g.next_dart(d))


def sink_side_walk(g: PlanarGraph, d: int) -> list[int]:
    """Darts whose tails list the sink face counter-clockwise from the axis.

    Seen from the annulus the sink face is traversed against its walk, so we
    walk backwards from the crossed dart ``d``, visiting ``tail(d)`` first.
    """
    walk = g.walk_from(d)
    return [walk[0]] + walk[:0:-1]


def validate_instance(instance: Instance) -> Instance:
    g = instance.graph
    g.faces  # raises InconsistentEmbedding
    if instance.case not in CASES:
        raise BadCaseTag(f"case must be one of {CASES}, got {instance.case!r}")
    if instance.k < 1:
        raise BadCaseTag("at least one terminal pair is required")
    flat = [v for pair in instance.terminals for v in pair]
    for v in flat:
        if not 0 <= v < g.n:
            raise TerminalNotOnFace(f"terminal {v} is not a vertex of the graph")
    if len(set(flat)) != len(flat):
        dup = sorted({v for v in flat if flat.count(v) > 1})
        raise DuplicateTerminal(f"terminals must be 2k distinct vertices; repeated: {dup}")
    limit = weight_limit(g.n)
    for e, w in enumerate(g.weights):
        if w < 0 or w > limit:
            raise WeightOutOfRange(f"weight {w} of edge {e} outside 0..{limit}")
    for d in instance.faces:
        if not 0 <= d < 2 * g.m:
            raise TerminalNotOnFace(f"face anchor dart {d} does not exist")
    if instance.case == ONE_FACE:
        if len(instance.faces) != 1:
            raise BadCaseTag("one-face instances designate exactly one face")
        _boundary_order(g, g.walk_from(instance.faces[0]), flat)
    else:
        if len(instance.faces) != 2:
            raise BadCaseTag("two-face instances designate a source face and a sink face")
        f1, f2 = instance.face_ids()
        if f1 == f2:
            raise BadCaseTag("source and sink faces must differ")
        src_face = set(g.faces[f1].vertices)
        snk_face = set(g.faces[f2].vertices)
        for s, t in instance.terminals:
            if s not in src_face or t not in snk_face:
                raise BadCaseTag(
                    f"pair ({s}, {t}): sources must lie on face {f1} and sinks on face {f2}"
                )
        _boundary_order(g, g.faces[f1].darts, [s for s, _ in instance.terminals])
        _boundary_order(g, g.faces[f2].darts, [t for _, t in instance.terminals])
    return instance
