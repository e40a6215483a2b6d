"""Pairings of the boundary labels ``1..2k``.

A pairing is always stored in standard form: every pair ``(a, b)`` has
``a < b`` and is read as the demand edge ``a -> b``.  A routing outside the
face joins the heads ``b`` back to the tails ``a``, which is why compatibility
only asks whether a second pairing matches heads with tails.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import CrossingPairing, SharedLabel


@dataclass(frozen=True, order=True)
class Pairing:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        canon = tuple(sorted((min(a, b), max(a, b)) for a, b in self.pairs))
        object.__setattr__(self, "pairs", canon)
        flat = [x for p in canon for x in p]
        if len(set(flat)) != len(flat):
            raise SharedLabel(f"pairing {canon} repeats a label")

    @classmethod
    def of(cls, pairs: Iterable[Sequence[int]]) -> "Pairing":
        return cls(tuple((int(a), int(b)) for a, b in pairs))

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def tails(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.pairs)

    @property
    def heads(self) -> frozenset[int]:
        return frozenset(b for _, b in self.pairs)

    def mate(self) -> dict[int, int]:
        m = {}
        for a, b in self.pairs:
            m[a] = b
            m[b] = a
        return m

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __str__(self) -> str:
        return "{" + ",".join(f"({a},{b})" for a, b in self.pairs) + "}"


class CrossingClass(enum.Enum):
    SERIES = "series"
    PARALLEL = "parallel"
    INTERLACING = "interlacing"


def classify(h1: tuple[int, int], h2: tuple[int, int]) -> CrossingClass:
    u1, v1 = sorted(h1)
    u2, v2 = sorted(h2)
    if len({u1, v1, u2, v2}) < 4:
        raise SharedLabel(f"demands {h1} and {h2} share a label")
    if v1 < u2 or v2 < u1:
        return CrossingClass.SERIES
    if (u1 < u2 and v2 < v1) or (u2 < u1 and v1 < v2):
        return CrossingClass.PARALLEL
    return CrossingClass.INTERLACING


def is_noncrossing(m: Pairing) -> bool:
    ps = m.pairs
    return all(
        classify(ps[i], ps[j]) is not CrossingClass.INTERLACING
        for i in range(len(ps))
        for j in range(i + 1, len(ps))
    )


def length(m: Pairing) -> int:
    """Sum of ``b - a`` over the pairs."""
    return sum(b - a for a, b in m.pairs)


def parallel_pairing(k: int) -> Pairing:
    return Pairing(tuple((i, 2 * k + 1 - i) for i in range(1, k + 1)))


def _noncrossing(labels: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
    if not labels:
        yield ()
        return
    a = labels[0]
    for i in range(1, len(labels), 2):
        for inner in _noncrossing(labels[1:i]):
            for outer in _noncrossing(labels[i + 1 :]):
                yield ((a, labels[i]),) + inner + outer


@lru_cache(maxsize=None)
def enumerate_noncrossing(k: int) -> tuple[Pairing, ...]:
    """All non-crossing perfect matchings of ``1..2k`` (Catalan many), sorted."""
    if k < 1:
        raise ValueError("k must be positive")
    return tuple(sorted(Pairing(p) for p in _noncrossing(tuple(range(1, 2 * k + 1)))))


@dataclass(frozen=True)
class CompatibilityWitness:
    cycles: tuple[tuple[int, ...], ...]

    @property
    def c(self) -> int:
        """Cycles of the union through at least one demand edge (all of them)."""
        return len(self.cycles)


def compatible(inner: Pairing, outer: Pairing) -> CompatibilityWitness | None:
    """Witness that ``inner`` (standard form) and ``outer`` form directed cycles.

    ``outer`` must join every head of ``inner`` to a tail; the union is then a
    disjoint union of cycles, listed as label sequences starting at each
    cycle's smallest tail.
    """
    if inner.k != outer.k:
        raise ValueError("pairings have different k")
    heads, tails = inner.heads, inner.tails
    if heads | tails != outer.heads | outer.tails:
        raise ValueError("pairings are over different label sets")
    for a, b in outer.pairs:
        if not ((a in heads and b in tails) or (b in heads and a in tails)):
            return None
    forward = dict(inner.pairs)
    back = outer.mate()
    seen: set[int] = set()
    cycles = []
    for start in sorted(tails):
        if start in seen:
            continue
        cyc = []
        u = start
        while u not in seen:
            v = forward[u]
            seen.add(u)
            cyc.extend((u, v))
            u = back[v]
        cycles.append(tuple(cyc))
    return CompatibilityWitness(tuple(cycles))


def cover_sign(inner: Pairing, outer: Pairing) -> int:
    """``(-1)^(k - c)`` relating a routing's cover under ``inner`` to its own pure cover."""
    w = compatible(inner, outer)
    if w is None:
        raise ValueError(f"{inner} and {outer} are not compatible")
    return -1 if (inner.k - w.c) % 2 else 1


@dataclass(frozen=True)
class TelescopeExpansion:
    """``W(<base, base>) = sum(coef * W(<M, *>))`` over the entries."""

    base: Pairing
    entries: tuple[tuple[Pairing, int], ...]

    def as_dict(self) -> dict[Pairing, int]:
        return dict(self.entries)

    def to_json(self) -> dict:
        return {
            "base": [list(p) for p in self.base.pairs],
            "entries": [
                {"pairing": [list(p) for p in m.pairs], "coefficient": c, "len": length(m)}
                for m, c in self.entries
            ],
        }


@lru_cache(maxsize=None)
def _expansion(m: Pairing) -> tuple[tuple[Pairing, int], ...]:
    # W<M,M> = det(B_M) - sum_{M' != M compatible} (-1)^(k - c) W<M',M'>;
    # compatible M' have strictly larger length, so the recursion terminates.
    acc: dict[Pairing, int] = {m: 1}
    for other in enumerate_noncrossing(m.k):
        if other == m:
            continue
        w = compatible(m, other)
        if w is None:
            continue
        sign = -1 if (m.k - w.c) % 2 else 1
        for p, g in _expansion(other):
            acc[p] = acc.get(p, 0) - sign * g
    return tuple((p, g) for p, g in acc.items() if g)


def telescope(m0: Pairing) -> TelescopeExpansion:
    if m0.heads | m0.tails != frozenset(range(1, 2 * m0.k + 1)):
        raise ValueError("pairing must use the labels 1..2k")
    if not is_noncrossing(m0):
        raise CrossingPairing(f"pairing {m0} has interlacing demands")
    entries = sorted(_expansion(m0), key=lambda t: (length(t[0]), t[0].pairs))
    return TelescopeExpansion(m0, tuple(entries))
