from __future__ import annotations

import pytest

from planardpp.errors import BadCaseTag, NoDualPath
from planardpp.graph import TWO_FACE, Instance, PlanarGraph, face_labels
from planardpp.oneface import input_pairing, modify
from planardpp.oracle import cover_routing, enum_cycle_covers, enum_disjoint_paths, gen_instance, outer_dart, reference_two_face
from planardpp.twoface import (
    OffsetSpec,
    axis_cross,
    count_two_face,
    find_axis,
    offset,
    y_classes,
)


def ladder(k: int = 2, spokes: int = 4, rings: int = 2) -> Instance:
    return gen_instance(1, "annulus", {"rings": rings, "spokes": spokes, "k": k})


def test_ladder_axis_crosses_inner_and_outer_ring():
    inst = ladder()
    axis = find_axis(inst)
    assert axis.length == 2
    f1, f2 = inst.face_ids()
    assert axis.faces[0] == f1 and axis.faces[-1] == f2


def _triangle_two_face() -> Instance:
    coords = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    g = PlanarGraph.from_coordinates(coords, [(0, 1), (1, 2), (2, 0)])
    outer = outer_dart(coords, g)
    inner = next(f for f in g.faces if f.id != g.face_of(outer))
    return Instance(g, ((0, 1),), TWO_FACE, (inner.darts[0], outer))


def test_adjacent_faces_give_axis_of_length_one():
    assert find_axis(_triangle_two_face()).length == 1


def test_disconnected_primal_has_no_dual_path():
    coords = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (5.0, 0.0), (6.0, 0.0), (5.0, 1.0)]
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    g = PlanarGraph.from_coordinates(coords, edges)
    fa = next(f for f in g.faces if 0 in f.vertices)
    fb = next(f for f in g.faces if 3 in f.vertices)
    inst = Instance(g, ((0, 3),), TWO_FACE, (fa.darts[0], fb.darts[0]))
    with pytest.raises(NoDualPath):
        find_axis(inst)


def test_find_axis_rejects_one_face_instance():
    with pytest.raises(BadCaseTag):
        find_axis(gen_instance(1, "grid", {"rows": 3, "cols": 3, "k": 1}))


def test_offset_examples():
    for shift in range(3):
        inst = gen_instance(2, "annulus", {"rings": 2, "spokes": 3, "k": 3, "shift": shift})
        spec = offset(inst, find_axis(inst))
        assert spec.common == shift
    inst = gen_instance(2, "annulus", {"rings": 3, "spokes": 3, "k": 3}).with_terminals(((0, 6), (1, 8), (2, 7)))
    spec = offset(inst, find_axis(inst))
    assert not spec.consistent
    assert count_two_face(inst).count == 0
    assert not OffsetSpec(2, (0, 1), None).consistent


def test_ladder_counts():
    inst = ladder()
    straight = inst.with_terminals(((0, 4), (1, 5)))
    res = count_two_face(straight)
    assert (res.length, res.count) == (2, 1)
    rotated = inst.with_terminals(((0, 5), (1, 4)))
    assert count_two_face(rotated).count == 0
    assert enum_disjoint_paths(rotated).count == 0


@pytest.mark.parametrize("seed", range(4))
def test_single_pair_annulus_counts_shortest_paths(seed):
    inst = gen_instance(seed, "annulus", {"rings": 3, "spokes": 4, "k": 1})
    res, ora = count_two_face(inst), enum_disjoint_paths(inst)
    assert (res.length, res.count) == (ora.minimum, ora.count)


def test_axis_cross_examples():
    inst = ladder()
    axis = find_axis(inst)
    g = inst.graph
    crossed = axis.darts[0]
    u, v = g.tail(crossed), g.head(crossed)
    assert axis_cross(g, [[u, v]], axis, [[crossed >> 1]]) == 1
    assert axis_cross(g, [[v, u]], axis, [[crossed >> 1]]) == -1
    # a spoke is never crossed by an axis that runs through ring edges
    spoke = next(e for e, (a, b) in enumerate(g.edges) if abs(a - b) == 4 and 2 * e not in axis.darts and 2 * e + 1 not in axis.darts)
    a, b = g.edges[spoke]
    assert axis_cross(g, [[a, b]], axis, [[spoke]]) == 0


@pytest.mark.parametrize("seed", range(6))
def test_pure_covers_hit_offset_class(seed):
    inst = gen_instance(seed, "annulus", {"rings": 2, "spokes": 4, "k": 2, "shift": "random"})
    axis = find_axis(inst)
    labels = face_labels(inst, axis)
    spec = offset(inst, axis, labels)
    m0 = input_pairing(labels, inst.terminals)
    mg = modify(inst, m0, labels, axis_signs=axis.y_exponents(inst.k))
    tally = enum_cycle_covers(mg, k=inst.k, keep=True)
    for cov in tally.covers:
        routing = cover_routing(mg, cov)
        if routing == m0:
            assert cov.ypow % inst.k == spec.common
        else:
            assert cov.ypow % inst.k != spec.common
    # the class polynomials equal the cover tally class by class
    classes = y_classes(inst, axis)
    assert classes == [tally.x_polynomial(c) for c in range(inst.k)]


@pytest.mark.parametrize("seed", range(3))
def test_quotient_matches_unreduced_reference(seed):
    inst = gen_instance(seed, "annulus", {"rings": 2, "spokes": 3, "k": 2, "shift": "random"})
    axis = find_axis(inst)
    labels = face_labels(inst, axis)
    signs = {d: axis.sign(d) for d in range(2 * inst.graph.m) if axis.sign(d)}
    mg = modify(inst, input_pairing(labels, inst.terminals), labels, axis_signs=signs)
    assert reference_two_face(mg, inst.k) == y_classes(inst, axis)
