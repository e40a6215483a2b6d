"""Counting shortest disjoint paths with all terminals on one face.

For a pairing ``M`` the modified graph adds a vertex ``r`` on every demand
``a -> r -> b`` (label order), doubles every edge into two arcs weighted
``x^w'``, and puts unit self-loops on the non-terminal vertices.  Its
determinant ``det(B_M)`` is the signed sum over all cycle covers; the signed
sum over the *good* covers of the input pairing is recovered as an integer
combination of such determinants (:func:`planardpp.pairings.telescope`).
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .errors import CrossingPairing, SignMismatch
from .graph import ONE_FACE, Instance, face_labels, validate_instance
from .pairings import Pairing, TelescopeExpansion, is_noncrossing, parallel_pairing, telescope
from .rings import Poly, det_poly_matrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightEncoding:
    """Edge weight ``w`` -> exponent of ``x``.

    ``scale == 0`` is the unit-weight case (exponent 1 per edge).  Otherwise
    the exponent is ``scale * w + 1``; a cover uses at most ``n`` weighted arcs
    and ``scale > n``, so an exponent sum ``T`` decodes uniquely as
    ``scale * weight + edges``.
    """

    scale: int = 0

    @classmethod
    def for_graph(cls, weights: Sequence[int], n: int) -> "WeightEncoding":
        if all(w == 1 for w in weights):
            return cls(0)
        return cls(n + 1)

    def exponent(self, w: int) -> int:
        return 1 if self.scale == 0 else self.scale * w + 1

    def decode(self, total: int) -> tuple[int, int]:
        """``(weight, edges)`` of an exponent sum."""
        if self.scale == 0:
            return total, total
        return divmod(total, self.scale)


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    exp: int
    edge: int | None = None
    ypow: int = 0

    @property
    def kind(self) -> str:
        if self.edge is not None:
            return "edge"
        return "loop" if self.tail == self.head else "demand"


@dataclass(frozen=True)
class ModifiedGraph:
    instance: Instance
    pairing: Pairing
    labels: Mapping[int, int]
    arcs: tuple[Arc, ...]
    n_prime: int
    special: frozenset[int]

    @property
    def subdivision_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.instance.n, self.n_prime))

    def entries(self) -> dict[tuple[int, int], dict[int, int]]:
        out: dict[tuple[int, int], dict[int, int]] = {}
        for a in self.arcs:
            cell = out.setdefault((a.tail, a.head), {})
            cell[a.exp] = cell.get(a.exp, 0) + 1
        return out

    def diagonal_ones(self) -> int:
        return sum(1 for a in self.arcs if a.kind == "loop")


def modify(
    instance: Instance,
    pairing: Pairing,
    labels: Mapping[int, int] | None = None,
    exponents: Sequence[int] | None = None,
    removed: frozenset[int] = frozenset(),
    axis_signs: Mapping[int, int] | None = None,
) -> ModifiedGraph:
    """Build the directed modified graph for ``pairing`` over ``instance``.

    ``exponents`` gives the x-exponent per edge (default: the weight encoding);
    ``removed`` edges are left out; ``axis_signs`` maps darts to a y power.
    """
    if not is_noncrossing(pairing) and instance.case == ONE_FACE:
        raise CrossingPairing(f"pairing {pairing} has interlacing demands")
    g = instance.graph
    if labels is None:
        labels = face_labels(instance)
    if exponents is None:
        enc = WeightEncoding.for_graph(g.weights, g.n)
        exponents = [enc.exponent(w) for w in g.weights]
    vertex_of = {lab: v for v, lab in labels.items()}
    axis_signs = axis_signs or {}
    arcs: list[Arc] = []
    for e, (u, v) in enumerate(g.edges):
        if e in removed:
            continue
        arcs.append(Arc(u, v, exponents[e], e, axis_signs.get(2 * e, 0)))
        arcs.append(Arc(v, u, exponents[e], e, axis_signs.get(2 * e + 1, 0)))
    n = g.n
    special = set(labels)
    for i, (a, b) in enumerate(pairing.pairs):
        r = n + i
        special.add(r)
        arcs.append(Arc(vertex_of[a], r, 0))
        arcs.append(Arc(r, vertex_of[b], 0))
    for v in range(n):
        if v not in special:
            arcs.append(Arc(v, v, 0))
    return ModifiedGraph(instance, pairing, dict(labels), tuple(arcs), n + pairing.k, frozenset(special))


def pairing_determinant(mg: ModifiedGraph) -> Poly:
    """``det(B_M)`` as an exact polynomial in x."""
    return det_poly_matrix(mg.n_prime, mg.entries())


@dataclass(frozen=True)
class CountResult:
    """Shortest length (original weight units), number of shortest systems.

    ``length`` and ``edges`` are ``None`` when no system exists.
    """

    length: int | None
    count: int
    polynomial: Poly
    min_degree: int | None = None
    edges: int | None = None
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.count > 0

    def to_json(self) -> dict[str, Any]:
        return {
            "length": self.length,
            "count": self.count,
            "edges": self.edges,
            "min_degree": self.min_degree,
            **{k: v for k, v in self.diagnostics.items()},
        }


def summarize(poly: Poly, k: int, enc: WeightEncoding, weights: Sequence[int], diagnostics: Mapping[str, Any] | None = None) -> CountResult:
    """Read the optimum off the good-cover polynomial and check its sign.

    The lowest monomial ``x^T`` comes from shortest systems with self-loops
    everywhere else; such a cover with ``c`` edges has sign ``(-1)^(k - c)``.
    With positive weights every cover of the minimum weight is of this form,
    so all edge-count classes of that weight are added up.  Zero-weight edges
    admit zero-weight cycles, so then only the lowest class is counted.
    """
    diagnostics = dict(diagnostics or {})
    t_min = poly.min_degree
    if t_min is None:
        return CountResult(None, 0, poly, None, None, diagnostics)
    weight, edges = enc.decode(t_min)
    if enc.scale == 0 or min(weights, default=1) == 0:
        classes = [t_min]
    else:
        classes = range(t_min, (weight + 1) * enc.scale)
    total = 0
    for t in classes:
        c = poly.coefficient(t)
        if not c:
            continue
        expected = -1 if (k - enc.decode(t)[1]) % 2 else 1
        if (c > 0) != (expected > 0):
            raise SignMismatch(
                f"coefficient {c} of x^{t} has the wrong sign; shortest good covers must have sign {expected:+d}"
            )
        total += abs(c)
    return CountResult(weight, total, poly, t_min, edges, diagnostics)


def input_pairing(labels: Mapping[int, int], terminals: Sequence[tuple[int, int]]) -> Pairing:
    return Pairing(tuple((labels[s], labels[t]) for s, t in terminals))


def rotate_labels(labels: Mapping[int, int], shift: int) -> dict[int, int]:
    size = len(labels)
    return {v: (lab - 1 + shift) % size + 1 for v, lab in labels.items()}


def best_labels(instance: Instance, rotate: bool = True) -> tuple[dict[int, int], Pairing, TelescopeExpansion | None]:
    """Boundary labels with the cheapest telescoping.

    Any cyclic starting point on the face is a valid labeling; we take the one
    whose expansion has the fewest determinants (a parallel-order instance
    then needs exactly one).
    """
    base = face_labels(instance)
    best = None
    for shift in range(len(base) if rotate else 1):
        labels = rotate_labels(base, shift)
        m0 = input_pairing(labels, instance.terminals)
        if not is_noncrossing(m0):
            return labels, m0, None
        exp = telescope(m0)
        if best is None or len(exp.entries) < len(best[2].entries):
            best = (labels, m0, exp)
        if len(exp.entries) == 1:
            break
    assert best is not None
    return best


def good_polynomial(
    instance: Instance,
    *,
    removed: frozenset[int] = frozenset(),
    exponents: Sequence[int] | None = None,
    jobs: int = 1,
    rotate_labels: bool = True,
) -> tuple[Poly, dict[str, Any]]:
    """Signed sum over the good cycle covers, ``W(<M0, M0>)``, for the input
    pairing ``M0``, plus diagnostics.  Zero when ``M0`` crosses."""
    g = instance.graph
    if exponents is None:
        enc = WeightEncoding.for_graph(g.weights, g.n)
        exponents = [enc.exponent(w) for w in g.weights]
    labels, m0, expansion = best_labels(instance, rotate_labels)
    if expansion is None:
        log.debug("input pairing %s crosses: no routing exists", m0)
        return Poly(), {"pairing": str(m0), "crossing": True}

    def det_for(item: tuple[Pairing, int]) -> Poly:
        pairing, coef = item
        return pairing_determinant(modify(instance, pairing, labels, exponents, removed)) * coef

    items = list(expansion.entries)
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(det_for, items))
    else:
        parts = [det_for(it) for it in items]
    total = Poly()
    for p in parts:
        total = total + p
    diagnostics = {
        "pairing": str(m0),
        "parallel": m0 == parallel_pairing(m0.k),
        "telescope": [[str(p), c] for p, c in items],
    }
    return total, diagnostics


def count_one_face(
    instance: Instance,
    *,
    removed: frozenset[int] = frozenset(),
    jobs: int = 1,
    validate: bool = True,
    rotate_labels: bool = True,
) -> CountResult:
    """Shortest length and number of shortest systems for the input pairing.

    ``rotate_labels=False`` keeps the labeling that starts at the anchor dart
    instead of searching for the cheapest starting point.
    """
    if validate:
        validate_instance(instance)
    g = instance.graph
    enc = WeightEncoding.for_graph(g.weights, g.n)
    poly, diagnostics = good_polynomial(instance, removed=removed, jobs=jobs, rotate_labels=rotate_labels)
    return summarize(poly, instance.k, enc, g.weights, diagnostics)


def decide_one_face(instance: Instance, budget: int) -> bool:
    res = count_one_face(instance)
    return res.count > 0 and res.length is not None and res.length <= budget
