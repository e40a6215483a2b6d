"""Constructing one shortest disjoint path system.

Both searches use the counting solvers as a black box over edge subsets.
Deleted edges are dropped from the modified graph while labels, face and
axis stay those of the full instance, so every recount is for the same
problem on a subgraph.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import oneface, twoface
from .errors import InternalInconsistency, NoSolution
from .graph import ONE_FACE, TWO_FACE, Instance, validate_instance
from .rings import Poly

log = logging.getLogger(__name__)

GREEDY = "greedy"
ISOLATION = "isolation"


@dataclass(frozen=True)
class Solution:
    """``paths[i]`` runs from ``s_i`` to ``t_i``; ``edges[i]`` are its edge ids."""

    paths: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, ...], ...]
    length: int
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def edge_set(self) -> frozenset[int]:
        return frozenset(e for p in self.edges for e in p)

    def to_json(self) -> dict[str, Any]:
        return {
            "paths": [list(p) for p in self.paths],
            "edges": [list(p) for p in self.edges],
            "length": self.length,
            **dict(self.meta),
        }


@dataclass(frozen=True)
class DetectedFailure:
    """An isolation attempt that did not produce a certified solution."""

    reason: str
    seed: Any = None

    def to_json(self) -> dict[str, Any]:
        return {"failure": self.reason, "seed": self.seed}


@dataclass(frozen=True)
class RandomWeights:
    """Perturbations ``r_e`` in ``1..2m`` and the separation base.

    Encoded exponent ``base * w(e) + r_e``; a system has at most ``n`` edges,
    so its perturbation sum stays below ``base = 2m(n+1)`` and never reorders
    systems of different true length.
    """

    r: tuple[int, ...]
    base: int

    @classmethod
    def draw(cls, instance: Instance, rng: random.Random) -> "RandomWeights":
        m, n = instance.graph.m, instance.graph.n
        return cls(tuple(rng.randint(1, 2 * m) for _ in range(m)), 2 * m * (n + 1))

    def exponents(self, weights: Sequence[int]) -> list[int]:
        return [self.base * w + r for w, r in zip(weights, self.r)]


PolyFn = Callable[[frozenset[int], Sequence[int] | None], Poly]


def _poly_fn(instance: Instance, jobs: int = 1) -> PolyFn:
    if instance.case == ONE_FACE:
        def fn(removed: frozenset[int], exponents: Sequence[int] | None) -> Poly:
            return oneface.good_polynomial(instance, removed=removed, exponents=exponents, jobs=jobs)[0]
    elif instance.case == TWO_FACE:
        axis = twoface.find_axis(instance)

        def fn(removed: frozenset[int], exponents: Sequence[int] | None) -> Poly:
            return twoface.good_polynomial(instance, removed=removed, exponents=exponents, axis=axis)[0]
    else:
        raise InternalInconsistency(f"unsupported case {instance.case!r}")
    return fn


def count(instance: Instance, jobs: int = 1) -> oneface.CountResult:
    if instance.case == ONE_FACE:
        return oneface.count_one_face(instance, jobs=jobs)
    return twoface.count_two_face(instance)


def edge_order(instance: Instance) -> list[int]:
    """Ascending (min endpoint, max endpoint, multiplicity index)."""
    seen: dict[tuple[int, int], int] = {}
    keyed = []
    for e, (u, v) in enumerate(instance.graph.edges):
        key = (min(u, v), max(u, v))
        seen[key] = seen.get(key, 0) + 1
        keyed.append((key[0], key[1], seen[key] - 1, e))
    return [e for *_, e in sorted(keyed)]


def decompose(instance: Instance, kept: Iterable[int]) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Split an edge set into the ``k`` paths ``s_i -> t_i``, following each
    source; any branching or leftover edge is an internal error."""
    g = instance.graph
    kept = set(kept)
    inc: dict[int, list[int]] = {}
    for e in kept:
        u, v = g.edges[e]
        inc.setdefault(u, []).append(e)
        inc.setdefault(v, []).append(e)
    used: set[int] = set()
    paths, edge_lists = [], []
    for s, t in instance.terminals:
        verts, es = [s], []
        u, prev = s, None
        while u != t:
            nxt = [e for e in inc.get(u, []) if e != prev and e not in used]
            if len(nxt) != 1:
                raise InternalInconsistency(
                    f"edge set does not decompose into paths: {len(nxt)} continuations at vertex {u}"
                )
            e = nxt[0]
            used.add(e)
            es.append(e)
            a, b = g.edges[e]
            u, prev = (b if a == u else a), e
            verts.append(u)
            if len(verts) > g.n + 1:
                raise InternalInconsistency("path decomposition does not terminate")
        paths.append(tuple(verts))
        edge_lists.append(tuple(es))
    if used != kept:
        raise InternalInconsistency(f"{len(kept - used)} surviving edges lie on no path")
    return tuple(paths), tuple(edge_lists)


def validate_solution(instance: Instance, sol: Solution) -> bool:
    """Simple, pairwise vertex-disjoint paths in the graph joining the
    prescribed pairs, with total weight ``sol.length``."""
    g = instance.graph
    if len(sol.paths) != instance.k or len(sol.edges) != instance.k:
        return False
    seen: set[int] = set()
    total = 0
    for (s, t), verts, es in zip(instance.terminals, sol.paths, sol.edges):
        if not verts or verts[0] != s or verts[-1] != t:
            return False
        if len(es) != len(verts) - 1 or len(set(verts)) != len(verts):
            return False
        if seen & set(verts):
            return False
        seen.update(verts)
        for a, b, e in zip(verts, verts[1:], es):
            if not 0 <= e < g.m or set(g.edges[e]) != {a, b}:
                return False
            total += g.weights[e]
    return total == sol.length


def _solution(instance: Instance, kept: Iterable[int], length: int, meta: Mapping[str, Any]) -> Solution:
    paths, edges = decompose(instance, kept)
    return Solution(paths, edges, length, dict(meta))


def greedy_search(instance: Instance, *, batch: bool = False, jobs: int = 1) -> Solution:
    """Delete edges one by one while a system of the optimal exponent survives.

    The edges left at the end all lie on every optimal system of the
    remaining graph, which therefore is a single system.  ``batch=True``
    first tries to delete whole blocks of edges and halves a block that
    fails; the result has the same property and usually needs far fewer
    recounts.
    """
    validate_instance(instance)
    res = count(instance, jobs)
    if res.count == 0:
        raise NoSolution("no disjoint path system exists")
    target = res.min_degree
    poly = _poly_fn(instance, jobs)
    removed: set[int] = set()
    recounts = 0

    def survives(extra: Iterable[int]) -> bool:
        nonlocal recounts
        recounts += 1
        return poly(frozenset(removed | set(extra)), None).coefficient(target) != 0

    order = edge_order(instance)
    if batch:
        stack = [order]
        while stack:
            block = stack.pop()
            if survives(block):
                removed.update(block)
            elif len(block) > 1:
                mid = len(block) // 2
                stack.append(block[mid:])
                stack.append(block[:mid])
    else:
        for e in order:
            if survives([e]):
                removed.add(e)
    kept = set(range(instance.graph.m)) - removed
    sol = _solution(instance, kept, res.length, {"method": GREEDY, "recounts": recounts})
    if not validate_solution(instance, sol):
        raise InternalInconsistency("greedy search produced an invalid system")
    return sol


def isolation_search(
    instance: Instance,
    seed: Any = None,
    *,
    batch: bool = True,
    jobs: int = 1,
) -> Solution | DetectedFailure:
    """Random perturbation, then read the unique optimum off degree shifts.

    If the lowest coefficient is not +-1 the optimum is not isolated and a
    :class:`DetectedFailure` is returned; a candidate that fails validation
    is reported the same way, never returned.
    """
    validate_instance(instance)
    res = count(instance, jobs)
    if res.count == 0:
        raise NoSolution("no disjoint path system exists")
    rng = random.Random(seed)
    rw = RandomWeights.draw(instance, rng)
    exps = rw.exponents(instance.graph.weights)
    poly = _poly_fn(instance, jobs)
    full = poly(frozenset(), exps)
    t_star = full.min_degree
    if t_star is None:
        raise InternalInconsistency("perturbed weights lost every system")
    if abs(full.coefficient(t_star)) != 1:
        return DetectedFailure(f"optimum not isolated (coefficient {full.coefficient(t_star)})", seed)

    def keeps_optimum(block: Sequence[int]) -> bool:
        return poly(frozenset(block), exps).coefficient(t_star) != 0

    m = instance.graph.m
    members: set[int] = set()
    if batch:
        stack = [edge_order(instance)]
        while stack:
            block = stack.pop()
            if keeps_optimum(block):
                continue
            if len(block) == 1:
                members.add(block[0])
            else:
                mid = len(block) // 2
                stack.extend((block[mid:], block[:mid]))
    else:
        singles = [[e] for e in range(m)]
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                flags = list(pool.map(keeps_optimum, singles))
        else:
            flags = [keeps_optimum(b) for b in singles]
        members = {e for e, ok in enumerate(flags) if not ok}
    try:
        sol = _solution(instance, members, res.length, {"method": ISOLATION, "seed": seed})
    except InternalInconsistency as exc:
        return DetectedFailure(f"isolated edge set is not a path system: {exc}", seed)
    if not validate_solution(instance, sol):
        return DetectedFailure("isolated edge set failed validation", seed)
    return sol


def search(instance: Instance, method: str = GREEDY, seed: Any = None, jobs: int = 1, batch: bool = False) -> Solution | DetectedFailure:
    if method == GREEDY:
        return greedy_search(instance, batch=batch, jobs=jobs)
    if method == ISOLATION:
        return isolation_search(instance, seed, jobs=jobs)
    raise ValueError(f"unknown search method {method!r}")


__all__ = [
    "DetectedFailure",
    "RandomWeights",
    "Solution",
    "decompose",
    "edge_order",
    "greedy_search",
    "isolation_search",
    "search",
    "validate_solution",
]
