"""Counting shortest disjoint paths between two faces (sources on one, sinks
on the other).

An axis is a dual path from the source face to the sink face.  Every arc of
the modified graph that crosses it picks up ``y`` or ``y^-1`` depending on the
crossing direction, so the y-exponent of a cover is its net number of trips
around the annulus.  Covers realising the wrong source/sink matching land in
other residue classes modulo ``k``; the class of the input matching is fixed
by the angular offset between sources and sinks.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .errors import BadCaseTag, NoDualPath
from .graph import TWO_FACE, Instance, PlanarGraph, face_labels, twin, validate_instance
from .oneface import CountResult, WeightEncoding, input_pairing, modify, summarize
from .rings import Poly, det_cyclo_poly_matrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Axis:
    """Dual path ``f1 -> f2``.

    ``darts[i]`` is the primal dart crossed at step ``i``; it lies on the face
    being left, and the arc along it carries ``y`` (its reverse ``y^-1``).
    """

    darts: tuple[int, ...]
    faces: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.darts)

    @property
    def source_dart(self) -> int:
        return self.darts[0]

    @property
    def sink_dart(self) -> int:
        return twin(self.darts[-1])

    def sign(self, dart: int) -> int:
        """+1, -1 or 0: the unreduced y exponent of the arc along ``dart``."""
        for d in self.darts:
            if dart == d:
                return 1
            if dart == twin(d):
                return -1
        return 0

    def y_exponents(self, k: int) -> dict[int, int]:
        out = {}
        for d in self.darts:
            out[d] = 1 % k
            out[twin(d)] = (k - 1) % k
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "faces": list(self.faces),
            "crossed": [[d >> 1, d & 1] for d in self.darts],
        }


def find_axis(instance: Instance) -> Axis:
    """Shortest dual path from the source face to the sink face.

    Ties are broken towards the lexicographically least sequence of crossed
    edges, which makes the axis (and hence the labels) deterministic.
    """
    if instance.case != TWO_FACE or len(instance.faces) != 2:
        raise BadCaseTag("an axis needs a two-face instance")
    g = instance.graph
    f1, f2 = instance.face_ids()
    faces = g.faces
    dist = {f2: 0}
    queue = deque([f2])
    while queue:
        f = queue.popleft()
        for d in faces[f].darts:
            h = g.face_of(twin(d))
            if h not in dist:
                dist[h] = dist[f] + 1
                queue.append(h)
    if f1 not in dist:
        raise NoDualPath(f"faces {f1} and {f2} are not connected in the dual")
    darts: list[int] = []
    path = [f1]
    f = f1
    while f != f2:
        step = min(
            (d for d in faces[f].darts if dist.get(g.face_of(twin(d)), -2) == dist[f] - 1),
            key=lambda d: (d >> 1, d),
        )
        darts.append(step)
        f = g.face_of(twin(step))
        path.append(f)
    return Axis(tuple(darts), tuple(path))


@dataclass(frozen=True)
class OffsetSpec:
    k: int
    offsets: tuple[int, ...]
    common: int | None

    @property
    def consistent(self) -> bool:
        return self.common is not None

    def to_json(self) -> dict[str, Any]:
        return {"k": self.k, "offsets": list(self.offsets), "common": self.common}


def offset(instance: Instance, axis: Axis, labels: Mapping[int, int] | None = None) -> OffsetSpec:
    """Per-demand ``(q - p) mod k`` for source position ``p`` and sink position
    ``q``, both counted from the axis."""
    if labels is None:
        labels = face_labels(instance, axis)
    k = instance.k
    offs = tuple(((labels[t] - 1) - (labels[s] - k - 1)) % k for s, t in instance.terminals)
    common = offs[0] if len(set(offs)) == 1 else None
    return OffsetSpec(k, offs, common)


def two_face_entries(mg: Any) -> dict[tuple[int, int], dict[tuple[int, int], int]]:
    out: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
    for a in mg.arcs:
        cell = out.setdefault((a.tail, a.head), {})
        key = (a.exp, a.ypow)
        cell[key] = cell.get(key, 0) + 1
    return out


def good_polynomial(
    instance: Instance,
    *,
    removed: frozenset[int] = frozenset(),
    exponents: Sequence[int] | None = None,
    axis: Axis | None = None,
) -> tuple[Poly, dict[str, Any]]:
    """x-polynomial of the offset class of ``det(B)``, plus diagnostics.
    Zero when the per-demand offsets disagree."""
    g = instance.graph
    k = instance.k
    if exponents is None:
        enc = WeightEncoding.for_graph(g.weights, g.n)
        exponents = [enc.exponent(w) for w in g.weights]
    if axis is None:
        axis = find_axis(instance)
    labels = face_labels(instance, axis)
    spec = offset(instance, axis, labels)
    diagnostics: dict[str, Any] = {"axis": axis.to_json(), "offset": spec.to_json()}
    if not spec.consistent:
        log.debug("offsets %s disagree: no routing exists", spec.offsets)
        return Poly(), diagnostics
    m0 = input_pairing(labels, instance.terminals)
    diagnostics["pairing"] = str(m0)
    mg = modify(instance, m0, labels, exponents, removed, axis.y_exponents(k))
    classes = det_cyclo_poly_matrix(mg.n_prime, k, two_face_entries(mg))
    return classes[spec.common], diagnostics


def count_two_face(
    instance: Instance,
    *,
    removed: frozenset[int] = frozenset(),
    axis: Axis | None = None,
    validate: bool = True,
) -> CountResult:
    """Shortest length and number of shortest systems, two-face parallel case."""
    if validate:
        validate_instance(instance)
        if instance.case != TWO_FACE:
            raise BadCaseTag("count_two_face needs a two-face-parallel instance")
    g = instance.graph
    enc = WeightEncoding.for_graph(g.weights, g.n)
    poly, diagnostics = good_polynomial(instance, removed=removed, axis=axis)
    return summarize(poly, instance.k, enc, g.weights, diagnostics)


def y_classes(instance: Instance, axis: Axis | None = None) -> list[Poly]:
    """All y-classes of ``det(B)`` for the input matching (diagnostics only)."""
    axis = axis or find_axis(instance)
    labels = face_labels(instance, axis)
    mg = modify(instance, input_pairing(labels, instance.terminals), labels, axis_signs=axis.y_exponents(instance.k))
    return det_cyclo_poly_matrix(mg.n_prime, instance.k, two_face_entries(mg))


def _dart_between(g: PlanarGraph, u: int, v: int, edge: int | None) -> int:
    if edge is not None:
        a, b = g.edges[edge]
        if (a, b) == (u, v):
            return 2 * edge
        if (b, a) == (u, v):
            return 2 * edge + 1
        raise ValueError(f"edge {edge} does not join {u} and {v}")
    cands = [d for d in g.rotation[u] if g.head(d) == v]
    if len(cands) != 1:
        raise ValueError(f"{len(cands)} edges join {u} and {v}; pass edge ids")
    return cands[0]


def axis_cross(
    g: PlanarGraph,
    paths: Sequence[Sequence[int]],
    axis: Axis,
    edges: Sequence[Sequence[int]] | None = None,
) -> int:
    """Net signed number of axis crossings of a set of paths (vertex lists)."""
    total = 0
    for i, p in enumerate(paths):
        for j, (u, v) in enumerate(zip(p, p[1:])):
            e = edges[i][j] if edges is not None else None
            total += axis.sign(_dart_between(g, u, v, e))
    return total
