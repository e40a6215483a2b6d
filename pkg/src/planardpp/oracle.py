"""Brute-force ground truth and seeded instance generators.

Everything here is exponential and meant for small instances only.  None of
it shares code with the solvers beyond the data model.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Mapping, Sequence

from .errors import BadParams, InstanceTooLarge
from .graph import EDGE_DISJOINT, ONE_FACE, TWO_FACE, VERTEX_DISJOINT, Instance, PlanarGraph
from .pairings import Pairing, enumerate_noncrossing, is_noncrossing
from .rings import Poly, det_poly_matrix

PATH_BOUND = 16
COVER_BOUND = 12


# ---------------------------------------------------------------------------
# disjoint path systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathSystem:
    paths: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, ...], ...]
    length: int

    @property
    def edge_count(self) -> int:
        return sum(len(p) for p in self.edges)

    def edge_set(self) -> frozenset[int]:
        return frozenset(e for p in self.edges for e in p)


@dataclass(frozen=True)
class Enumeration:
    """Every system for the prescribed pairs, summarised.

    ``count`` is the number of systems of minimum length; ``lex_count`` those
    that also use the fewest edges (the two differ only with zero weights).
    """

    minimum: int | None
    count: int
    lex_count: int
    min_edges: int | None
    histogram: Mapping[int, int]
    optimal: tuple[PathSystem, ...]
    systems: tuple[PathSystem, ...] = ()

    def to_json(self) -> dict[str, Any]:
        return {
            "minimum": self.minimum,
            "count": self.count,
            "lex_count": self.lex_count,
            "min_edges": self.min_edges,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "optimal": [[list(p) for p in s.paths] for s in self.optimal],
        }


def _adjacency(g: PlanarGraph) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e, (u, v) in enumerate(g.edges):
        adj[u].append((v, e))
        adj[v].append((u, e))
    return adj


def _simple_paths(
    adj: Sequence[Sequence[tuple[int, int]]],
    s: int,
    t: int,
    blocked_v: set[int],
    blocked_e: set[int],
) -> Iterator[tuple[list[int], list[int]]]:
    verts = [s]
    edges: list[int] = []
    on_path = {s}

    def rec(u: int) -> Iterator[tuple[list[int], list[int]]]:
        if u == t:
            yield list(verts), list(edges)
            return
        for v, e in adj[u]:
            if v in on_path or v in blocked_v or e in blocked_e:
                continue
            verts.append(v)
            edges.append(e)
            on_path.add(v)
            yield from rec(v)
            on_path.discard(v)
            verts.pop()
            edges.pop()

    yield from rec(s)


def enum_disjoint_paths(
    instance: Instance,
    bound: int = PATH_BOUND,
    mode: str | None = None,
    keep_all: bool = False,
) -> Enumeration:
    """All k-tuples of disjoint simple paths ``s_i -> t_i``.

    Vertex-disjoint by default; edge-disjoint when ``mode`` (or the
    instance's mode) says so, in which case paths may share vertices.
    """
    g = instance.graph
    if g.n > bound:
        raise InstanceTooLarge(f"oracle bound is n <= {bound}, got {g.n}")
    mode = mode or instance.mode
    edge_mode = mode == EDGE_DISJOINT
    adj = _adjacency(g)
    terms = list(instance.terminals)
    all_terms = {v for p in terms for v in p}
    hist: Counter[int] = Counter()
    best: list[PathSystem] = []
    kept: list[PathSystem] = []
    best_key: tuple[int, int] | None = None
    chosen_v: list[list[int]] = []
    chosen_e: list[list[int]] = []
    used_v: set[int] = set()
    used_e: set[int] = set()

    def rec(i: int) -> None:
        nonlocal best_key, best
        if i == len(terms):
            length = sum(g.weights[e] for p in chosen_e for e in p)
            system = PathSystem(
                tuple(tuple(p) for p in chosen_v), tuple(tuple(p) for p in chosen_e), length
            )
            hist[length] += 1
            if keep_all:
                kept.append(system)
            key = (length, system.edge_count)
            if best_key is None or key[0] < best_key[0]:
                best_key, best = key, [system]
            elif key[0] == best_key[0]:
                best.append(system)
                if key[1] < best_key[1]:
                    best_key = key
            return
        s, t = terms[i]
        if edge_mode:
            blocked_v: set[int] = set()
        else:
            blocked_v = used_v | (all_terms - {s, t})
        for verts, edges in _simple_paths(adj, s, t, blocked_v, used_e):
            chosen_v.append(verts)
            chosen_e.append(edges)
            if edge_mode:
                used_e.update(edges)
            else:
                used_v.update(verts)
            rec(i + 1)
            if edge_mode:
                used_e.difference_update(edges)
            else:
                used_v.difference_update(verts)
            chosen_v.pop()
            chosen_e.pop()

    rec(0)
    if best_key is None:
        return Enumeration(None, 0, 0, None, {}, (), tuple(kept))
    lex = tuple(s for s in best if s.edge_count == best_key[1])
    return Enumeration(best_key[0], len(best), len(lex), best_key[1], dict(hist), tuple(best), tuple(kept))


def validate_edge_disjoint(instance: Instance, paths: Sequence[Sequence[int]], edges: Sequence[Sequence[int]]) -> bool:
    """Edge-disjoint simple paths joining the prescribed pairs, edge by edge."""
    g = instance.graph
    if len(paths) != instance.k or len(edges) != instance.k:
        return False
    seen: set[int] = set()
    for (s, t), vs, es in zip(instance.terminals, paths, edges):
        if not vs or vs[0] != s or vs[-1] != t or len(es) != len(vs) - 1 or len(set(vs)) != len(vs):
            return False
        for a, b, e in zip(vs, vs[1:], es):
            if not 0 <= e < g.m or set(g.edges[e]) != {a, b} or e in seen:
                return False
            seen.add(e)
    return True


# ---------------------------------------------------------------------------
# cycle covers of a modified graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cover:
    """One cycle cover: ``arcs[v]`` is the index of the arc leaving ``v``."""

    arcs: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    sign: int
    xdeg: int
    ypow: int


@dataclass(frozen=True)
class CoverTally:
    """Signed count per ``(x degree, y exponent)``; the y exponent is reduced
    modulo ``k`` when a modulus was given."""

    terms: Mapping[tuple[int, int], int]
    covers: tuple[Cover, ...] = field(default=(), repr=False)

    def x_polynomial(self, ycls: int | None = None) -> Poly:
        acc: dict[int, int] = {}
        for (xd, yc), c in self.terms.items():
            if ycls is None or yc == ycls:
                acc[xd] = acc.get(xd, 0) + c
        return Poly.from_terms(acc)


def iter_cycle_covers(n_prime: int, arcs: Sequence[Any]) -> Iterator[Cover]:
    """Every permutation supported on ``arcs`` (objects with tail/head/exp/ypow)."""
    out: list[list[int]] = [[] for _ in range(n_prime)]
    for i, a in enumerate(arcs):
        out[a.tail].append(i)
    choice = [-1] * n_prime
    taken = [False] * n_prime

    def rec(u: int) -> Iterator[Cover]:
        if u == n_prime:
            succ = [arcs[i].head for i in choice]
            seen = [False] * n_prime
            cycles = []
            for v in range(n_prime):
                if seen[v]:
                    continue
                cyc = []
                w = v
                while not seen[w]:
                    seen[w] = True
                    cyc.append(w)
                    w = succ[w]
                cycles.append(tuple(cyc))
            sign = -1 if (n_prime + len(cycles)) % 2 else 1
            xdeg = sum(arcs[i].exp for i in choice)
            ypow = sum(getattr(arcs[i], "ypow", 0) for i in choice)
            yield Cover(tuple(choice), tuple(cycles), sign, xdeg, ypow)
            return
        for i in out[u]:
            h = arcs[i].head
            if taken[h]:
                continue
            taken[h] = True
            choice[u] = i
            yield from rec(u + 1)
            taken[h] = False
        choice[u] = -1

    yield from rec(0)


def enum_cycle_covers(mg: Any, k: int | None = None, bound: int = COVER_BOUND, keep: bool = False) -> CoverTally:
    """Signed tally of all cycle covers of a modified graph."""
    if mg.n_prime > bound:
        raise InstanceTooLarge(f"cover oracle bound is n' <= {bound}, got {mg.n_prime}")
    terms: dict[tuple[int, int], int] = {}
    kept = []
    for cov in iter_cycle_covers(mg.n_prime, mg.arcs):
        y = cov.ypow % k if k else cov.ypow
        key = (cov.xdeg, y)
        terms[key] = terms.get(key, 0) + cov.sign
        if keep:
            kept.append(cov)
    return CoverTally({key: c for key, c in terms.items() if c}, tuple(kept))


def cover_routing(mg: Any, cover: Cover) -> Pairing | None:
    """Pairing of terminal labels realised by the paths of a cover.

    Each path leaves a demand head ``b`` on graph arcs and stops at the first
    special vertex; the pair is ``{b, label reached}``.  Returns ``None`` if
    some cycle through a terminal is a closed graph cycle (impossible for a
    cover of the modified graph; terminals carry no loops).
    """
    arcs = mg.arcs
    succ = {a.tail: a for a in (arcs[i] for i in cover.arcs)}
    labels = mg.labels
    n = mg.instance.n
    pairs = []
    for a, b in mg.pairing.pairs:
        head_vertex = next(v for v, lab in labels.items() if lab == b)
        v = succ[head_vertex].head
        steps = 0
        while v < n and v not in labels:
            v = succ[v].head
            steps += 1
            if steps > mg.n_prime:
                return None
        if v >= n:
            return None
        pairs.append((b, labels[v]))
    return Pairing(tuple(pairs))


def min_weight_covers(mg: Any, bound: int = COVER_BOUND) -> tuple[int | None, int]:
    """``(minimum x degree, number of covers attaining it)``."""
    if mg.n_prime > bound:
        raise InstanceTooLarge(f"cover oracle bound is n' <= {bound}, got {mg.n_prime}")
    best: int | None = None
    count = 0
    for cov in iter_cycle_covers(mg.n_prime, mg.arcs):
        if best is None or cov.xdeg < best:
            best, count = cov.xdeg, 1
        elif cov.xdeg == best:
            count += 1
    return best, count


# ---------------------------------------------------------------------------
# reference determinants
# ---------------------------------------------------------------------------


def _perm_sign(perm: Sequence[int]) -> int:
    p = list(perm)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def det_by_permutation(mat: Sequence[Sequence[Any]], one: Any = 1, zero: Any = 0) -> Any:
    """Leibniz expansion over any commutative ring."""
    n = len(mat)
    total = zero
    for perm in itertools.permutations(range(n)):
        term = one
        for i, j in enumerate(perm):
            term = term * mat[i][j]
        total = total + term if _perm_sign(perm) > 0 else total - term
    return total


def reference_two_face(mg: Any, k: int) -> list[Poly]:
    """y-class polynomials of ``det(B)`` computed with exact y exponents.

    Every arc carries ``y^e`` with ``e`` in ``{-1, 0, 1}``; multiplying all
    entries by ``y`` makes them polynomial, the determinant is evaluated at
    ``y = 0..2N'`` with exact x-polynomials, interpolated in y, shifted back
    by ``N'`` and only then reduced modulo ``k``.
    """
    n = mg.n_prime
    ypows = {a.ypow for a in mg.arcs}
    if not ypows <= {-1, 0, 1, k - 1} and k > 2:
        raise ValueError("reference expects y exponents in {-1, 0, 1}")
    shifted = []
    for a in mg.arcs:
        e = a.ypow
        if k > 2 and e == k - 1:
            e = -1
        shifted.append((a.tail, a.head, a.exp, e + 1))
    ydeg = 2 * n
    by_y = []
    for yv in range(ydeg + 1):
        entries: dict[tuple[int, int], dict[int, int]] = {}
        for u, v, xe, ye in shifted:
            cell = entries.setdefault((u, v), {})
            cell[xe] = cell.get(xe, 0) + yv**ye
        by_y.append(det_poly_matrix(n, entries))
    xdeg = max((p.degree for p in by_y), default=-1)
    classes = [dict() for _ in range(k)]
    for xe in range(xdeg + 1):
        pts = [(yv, by_y[yv].coefficient(xe)) for yv in range(ydeg + 1)]
        ypoly = _exact_interpolate(pts)
        for ye, c in ypoly.items():
            cls = (ye - n) % k
            classes[cls][xe] = classes[cls].get(xe, 0) + c
    return [Poly.from_terms(c) for c in classes]


def _exact_interpolate(points: Sequence[tuple[int, int]]) -> dict[int, int]:
    # Lagrange form with Fractions; kept separate from the library routine
    xs = [x for x, _ in points]
    m = len(points)
    coeffs = [Fraction(0)] * m
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t, b in enumerate(basis):
            coeffs[t] += yi * b / denom
    out = {}
    for t, c in enumerate(coeffs):
        if c:
            if c.denominator != 1:
                raise ValueError("reference interpolation is not integral")
            out[t] = c.numerator
    return out


# ---------------------------------------------------------------------------
# instance generators
# ---------------------------------------------------------------------------

FAMILIES = ("grid", "annulus", "random-planar")
ORDERS = ("parallel", "serial", "general", "any")


def _signed_area(coords: Sequence[tuple[float, float]], g: PlanarGraph, darts: Sequence[int]) -> float:
    area = 0.0
    for d in darts:
        (x1, y1), (x2, y2) = coords[g.tail(d)], coords[g.head(d)]
        area += x1 * y2 - x2 * y1
    return area / 2


def outer_dart(coords: Sequence[tuple[float, float]], g: PlanarGraph) -> int:
    """First dart of the face of least signed area (the outer face)."""
    best = min(g.faces, key=lambda f: (_signed_area(coords, g, f.darts), f.id))
    return best.darts[0]


def _weights(rng: random.Random, m: int, params: Mapping[str, Any]) -> list[int]:
    wmax = int(params.get("max_weight", 1))
    zero_p = float(params.get("zero_prob", 0.0))
    if wmax < 1 or not 0 <= zero_p < 1:
        raise BadParams("max_weight must be >= 1 and zero_prob in [0, 1)")
    out = []
    for _ in range(m):
        if zero_p and rng.random() < zero_p:
            out.append(0)
        else:
            out.append(rng.randint(1, wmax) if wmax > 1 else 1)
    return out


def _mode(params: Mapping[str, Any]) -> str:
    mode = str(params.get("mode", VERTEX_DISJOINT))
    if mode not in (VERTEX_DISJOINT, EDGE_DISJOINT):
        raise BadParams(f"mode must be {VERTEX_DISJOINT!r} or {EDGE_DISJOINT!r}")
    return mode


def _pairs_for_order(rng: random.Random, k: int, order: str) -> list[tuple[int, int]]:
    """Index pairs into a cyclic list of ``2k`` boundary slots."""
    if order == "parallel":
        pairs = [(i, 2 * k - 1 - i) for i in range(k)]
    elif order == "serial":
        pairs = [(2 * i, 2 * i + 1) for i in range(k)]
    elif order == "general":
        m = rng.choice(enumerate_noncrossing(k))
        pairs = [(a - 1, b - 1) for a, b in m.pairs]
    elif order == "any":
        slots = list(range(2 * k))
        rng.shuffle(slots)
        pairs = [(slots[2 * i], slots[2 * i + 1]) for i in range(k)]
    else:
        raise BadParams(f"order must be one of {ORDERS}, got {order!r}")
    out = []
    for a, b in pairs:
        out.append((a, b) if rng.random() < 0.5 else (b, a))
    rng.shuffle(out)
    return out


def _one_face_terminals(
    rng: random.Random, g: PlanarGraph, anchor: int, k: int, order: str
) -> tuple[tuple[int, int], ...] | None:
    walk = g.walk_from(anchor)
    tails = [g.tail(d) for d in walk]
    once = [v for v in dict.fromkeys(tails) if tails.count(v) == 1]
    if len(once) < 2 * k:
        return None
    slots = sorted(rng.sample(range(len(once)), 2 * k))
    chosen = [once[i] for i in slots]
    return tuple((chosen[a], chosen[b]) for a, b in _pairs_for_order(rng, k, order))


def _grid(rng: random.Random, params: Mapping[str, Any]) -> Instance:
    rows, cols, k = int(params.get("rows", 3)), int(params.get("cols", 3)), int(params.get("k", 2))
    order = str(params.get("order", "parallel"))
    if rows < 1 or cols < 2 or k < 1:
        raise BadParams("grid needs rows >= 1, cols >= 2, k >= 1")
    coords = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    diag_p = float(params.get("diagonal_prob", 0.0))
    for r in range(rows - 1):
        for c in range(cols - 1):
            if diag_p and rng.random() < diag_p:
                v = r * cols + c
                edges.append((v, v + cols + 1) if rng.random() < 0.5 else (v + 1, v + cols))
    g = PlanarGraph.from_coordinates(coords, edges, _weights(rng, len(edges), params))
    anchor = outer_dart(coords, g)
    terminals = _one_face_terminals(rng, g, anchor, k, order)
    if terminals is None:
        raise BadParams(f"outer face of a {rows}x{cols} grid has fewer than {2 * k} vertices")
    return Instance(g, terminals, ONE_FACE, (anchor,), _mode(params), meta={"family": "grid", "order": order})


def _segments_cross(p: tuple[float, float], q: tuple[float, float], r: tuple[float, float], s: tuple[float, float]) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 1e-12) - (v < -1e-12)

    if len({p, q, r, s}) < 4:
        return False
    return orient(p, q, r) * orient(p, q, s) < 0 and orient(r, s, p) * orient(r, s, q) < 0


def _random_planar(rng: random.Random, params: Mapping[str, Any]) -> Instance:
    n, k = int(params.get("n", 8)), int(params.get("k", 2))
    order = str(params.get("order", "general"))
    keep = float(params.get("keep", 0.7))
    if n < 3 or k < 1 or 2 * k > n or not 0 < keep <= 1:
        raise BadParams("random-planar needs n >= 3, 1 <= k <= n/2, keep in (0, 1]")
    for _ in range(200):
        coords = [(round(rng.random(), 6), round(rng.random(), 6)) for _ in range(n)]
        if len(set(coords)) < n:
            continue
        cand = sorted(
            itertools.combinations(range(n), 2),
            key=lambda e: (math.dist(coords[e[0]], coords[e[1]]), e),
        )
        edges: list[tuple[int, int]] = []
        for u, v in cand:
            if not any(_segments_cross(coords[u], coords[v], coords[a], coords[b]) for a, b in edges):
                edges.append((u, v))
        # thin the triangulation but keep it connected
        order_e = list(range(len(edges)))
        rng.shuffle(order_e)
        kept = set(range(len(edges)))
        for e in order_e:
            if rng.random() < keep:
                continue
            trial = kept - {e}
            if _connected(n, [edges[i] for i in trial]):
                kept = trial
        edges = [edges[i] for i in sorted(kept)]
        g = PlanarGraph.from_coordinates(coords, edges, _weights(rng, len(edges), params))
        anchor = outer_dart(coords, g)
        terminals = _one_face_terminals(rng, g, anchor, k, order)
        if terminals is not None:
            return Instance(
                g, terminals, ONE_FACE, (anchor,), _mode(params), meta={"family": "random-planar", "order": order}
            )
    raise BadParams("could not place terminals on the outer face; try a larger n or keep")


def _connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(n)}) == 1


def _annulus(rng: random.Random, params: Mapping[str, Any]) -> Instance:
    rings, spokes, k = int(params.get("rings", 2)), int(params.get("spokes", 4)), int(params.get("k", 2))
    shift = params.get("shift", 0)
    if rings < 2 or spokes < 3 or k < 1:
        raise BadParams("annulus needs rings >= 2, spokes >= 3, k >= 1")
    if k > spokes:
        raise BadParams(f"k = {k} exceeds the number of spokes {spokes}")
    coords = []
    for j in range(rings):
        for i in range(spokes):
            a = 2 * math.pi * i / spokes
            coords.append((round((j + 1) * math.cos(a), 9), round((j + 1) * math.sin(a), 9)))
    edges = []
    for j in range(rings):
        for i in range(spokes):
            v = j * spokes + i
            edges.append((v, j * spokes + (i + 1) % spokes))
            if j + 1 < rings:
                edges.append((v, v + spokes))
    diag_p = float(params.get("diagonal_prob", 0.0))
    for j in range(rings - 1):
        for i in range(spokes):
            if diag_p and rng.random() < diag_p:
                v = j * spokes + i
                w = (j + 1) * spokes + (i + 1) % spokes
                edges.append((v, w))
    g = PlanarGraph.from_coordinates(coords, edges, _weights(rng, len(edges), params))
    inner = set(range(spokes))
    outer = set(range((rings - 1) * spokes, rings * spokes))
    f_in = next(f for f in g.faces if set(f.vertices) <= inner)
    f_out = next(f for f in g.faces if set(f.vertices) <= outer)
    src = sorted(rng.sample(range(spokes), k))
    snk = sorted(rng.sample(range(spokes), k))
    if shift == "random":
        perm = list(range(k))
        rng.shuffle(perm)
    else:
        perm = [(i + int(shift)) % k for i in range(k)]
    terminals = tuple((src[i], (rings - 1) * spokes + snk[perm[i]]) for i in range(k))
    return Instance(
        g,
        terminals,
        TWO_FACE,
        (f_in.darts[0], f_out.darts[0]),
        meta={"family": "annulus", "shift": shift},
    )


def gen_instance(seed: int, family: str, params: Mapping[str, Any] | None = None) -> Instance:
    """Reproducible instance of a named family (same inputs, same bytes)."""
    params = dict(params or {})
    rng = random.Random(f"{family}:{seed}")
    if family == "grid":
        return _grid(rng, params)
    if family == "annulus":
        return _annulus(rng, params)
    if family == "random-planar":
        return _random_planar(rng, params)
    raise BadParams(f"family must be one of {FAMILIES}, got {family!r}")


def is_crossing_input(instance: Instance) -> bool:
    from .graph import face_labels

    labels = face_labels(instance)
    return not is_noncrossing(Pairing(tuple((labels[s], labels[t]) for s, t in instance.terminals)))
