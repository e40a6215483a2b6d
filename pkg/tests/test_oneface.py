from __future__ import annotations

import pytest

from conftest import grid_graph, path_instance
from planardpp.errors import TerminalNotOnFace
from planardpp.graph import ONE_FACE, Instance, PlanarGraph, face_labels
from planardpp.oneface import (
    WeightEncoding,
    best_labels,
    count_one_face,
    decide_one_face,
    good_polynomial,
    input_pairing,
    modify,
    pairing_determinant,
)
from planardpp.oracle import cover_routing, enum_cycle_covers, enum_disjoint_paths, gen_instance
from planardpp.pairings import compatible, parallel_pairing
from planardpp.rings import Poly


def _grid_instance(rows: int, cols: int, terminals) -> Instance:
    g, anchor = grid_graph(rows, cols)
    return Instance(g, tuple(terminals), ONE_FACE, (anchor,))


def test_modify_sizes():
    # 2x3 grid, all six vertices on the outer face; k = 2 leaves 2 non-special
    inst = _grid_instance(2, 3, [(0, 1), (4, 3)])
    labels = face_labels(inst)
    mg = modify(inst, input_pairing(labels, inst.terminals), labels)
    assert mg.n_prime == 8
    assert mg.diagonal_ones() == 2
    entries = mg.entries()
    assert entries[0, 1] == {1: 1}
    demand = [a for a in mg.arcs if a.kind == "demand"]
    assert len(demand) == 4 and all(a.exp == 0 for a in demand)


def test_path_determinant_min_term():
    inst = path_instance()
    labels = face_labels(inst)
    poly = pairing_determinant(modify(inst, input_pairing(labels, inst.terminals), labels))
    assert poly.min_degree == 2
    assert abs(poly.coefficient(2)) == 1


def test_square_serial(square_serial):
    # starting the labels at the anchor, the serial cover cancels against the
    # parallel routing's cover (one 6-cycle, opposite sign) at degree 2
    labels = face_labels(square_serial)
    poly = pairing_determinant(modify(square_serial, input_pairing(labels, square_serial.terminals), labels))
    assert poly.coefficient(2) == 0
    # rotated so the demands form the parallel pairing, one determinant suffices
    labels, m0, _ = best_labels(square_serial)
    assert m0 == parallel_pairing(2)
    poly = pairing_determinant(modify(square_serial, m0, labels))
    assert poly.min_degree == 2 and abs(poly.coefficient(2)) == 1
    res = count_one_face(square_serial)
    assert (res.length, res.count) == (2, 1)


def test_square_crossing_counts_zero(square_crossing):
    res = count_one_face(square_crossing)
    assert res.count == 0 and res.length is None


def test_grid_parallel_matches_oracle():
    inst = gen_instance(1, "grid", {"rows": 3, "cols": 3, "k": 2, "order": "parallel"})
    res, ora = count_one_face(inst), enum_disjoint_paths(inst)
    assert (res.length, res.count) == (ora.minimum, ora.count)
    assert res.diagnostics["parallel"]
    assert len(res.diagnostics["telescope"]) == 1


def test_decide_examples(square_serial):
    assert decide_one_face(square_serial, 2)
    assert not decide_one_face(square_serial, 1)
    assert not decide_one_face(square_instance_no_solution(), 100)


def square_instance_no_solution() -> Instance:
    from planardpp.cli import square_instance

    return square_instance([(0, 2), (1, 3)])


def test_disconnected_terminals_count_zero():
    # deleting the middle edge of s - a - t separates the pair
    res = count_one_face(path_instance(), removed=frozenset({1}))
    assert res.count == 0 and res.length is None


def test_terminal_in_other_component_is_not_on_face():
    coords = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]
    g = PlanarGraph.from_coordinates(coords, [(0, 1), (2, 3)])
    with pytest.raises(TerminalNotOnFace):
        count_one_face(Instance(g, ((0, 3),), ONE_FACE, (0,)))


def test_weight_encoding_round_trip():
    enc = WeightEncoding.for_graph([1, 2, 3], 5)
    assert enc.scale == 6
    total = sum(enc.exponent(w) for w in (2, 3, 3))
    assert enc.decode(total) == (8, 3)
    assert WeightEncoding.for_graph([1, 1], 5).decode(4) == (4, 4)


def test_weighted_and_zero_weight_instances_match_oracle():
    for seed in range(8):
        params = {"n": 8, "k": 2, "order": "any", "max_weight": 3, "zero_prob": 0.25 if seed % 2 else 0.0}
        inst = gen_instance(seed, "random-planar", params)
        res, ora = count_one_face(inst), enum_disjoint_paths(inst)
        if min(inst.graph.weights) == 0:
            assert (res.length, res.count) == (ora.minimum, ora.lex_count)
        else:
            assert (res.length, res.count) == (ora.minimum, ora.count)


@pytest.mark.parametrize("seed", range(6))
def test_label_rotation_does_not_change_counts(seed):
    inst = gen_instance(seed, "grid", {"rows": 3, "cols": 3, "k": 3, "order": "general"})
    a = count_one_face(inst)
    b = count_one_face(inst, rotate_labels=False)
    assert (a.length, a.count) == (b.length, b.count)


def test_best_labels_picks_single_determinant_for_parallel_rotation():
    inst = gen_instance(2, "grid", {"rows": 2, "cols": 4, "k": 2, "order": "serial"})
    labels, m0, expansion = best_labels(inst)
    assert expansion is not None and len(expansion.entries) == 1
    assert m0 == parallel_pairing(2)


@pytest.mark.parametrize("seed", range(5))
def test_telescope_identity_against_cover_oracle(seed):
    inst = gen_instance(seed, "grid", {"rows": 2, "cols": 3, "k": 2, "order": "general"})
    labels = face_labels(inst)
    m0 = input_pairing(labels, inst.terminals)
    mg = modify(inst, m0, labels)
    tally = enum_cycle_covers(mg, keep=True)
    good: dict[int, int] = {}
    for cov in tally.covers:
        routing = cover_routing(mg, cov)
        assert routing == m0 or compatible(m0, routing) is not None
        if routing == m0:
            good[cov.xdeg] = good.get(cov.xdeg, 0) + cov.sign
    poly, _ = good_polynomial(inst, rotate_labels=False)
    assert poly == Poly.from_terms(good)


def test_edge_deletion_is_monotone():
    checked = 0
    for seed in range(40):
        inst = gen_instance(seed, "grid", {"rows": 3, "cols": 3, "k": 2, "order": "general"})
        full = count_one_face(inst)
        if not full.count:
            continue
        checked += 1
        for e in range(inst.graph.m):
            part = count_one_face(inst, removed=frozenset({e}))
            if part.count:
                assert part.length >= full.length
                if part.length == full.length:
                    assert part.count <= full.count
        if checked == 4:
            break
    assert checked == 4
