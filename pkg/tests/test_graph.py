from __future__ import annotations

import json

import pytest

from conftest import grid_graph, path_instance
from planardpp.cli import square_instance
from planardpp.errors import (
    BadCaseTag,
    DuplicateTerminal,
    InconsistentEmbedding,
    InputError,
    TerminalRepeatsOnBoundary,
    WeightOutOfRange,
)
from planardpp.graph import ONE_FACE, Instance, PlanarGraph, dual_graph, face_labels, trace_faces, validate_instance
from planardpp.oracle import gen_instance


def _square() -> PlanarGraph:
    return square_instance([(0, 1), (2, 3)]).graph


def test_square_has_two_faces_of_length_four():
    faces = trace_faces(_square())
    assert sorted(len(f) for f in faces) == [4, 4]


def test_single_edge_has_one_face_of_length_two():
    g = PlanarGraph.from_coordinates([(0.0, 0.0), (1.0, 0.0)], [(0, 1)])
    faces = trace_faces(g)
    assert [len(f) for f in faces] == [2]


def test_grid_2x3_has_three_faces():
    g, _ = grid_graph(2, 3)
    assert (g.n, g.m, len(g.faces)) == (6, 7, 3)


@pytest.mark.parametrize("rows,cols", [(2, 2), (3, 3), (3, 4)])
def test_darts_partitioned_by_faces(rows, cols):
    g, _ = grid_graph(rows, cols)
    darts = [d for f in g.faces for d in f.darts]
    assert sorted(darts) == list(range(2 * g.m))
    assert g.n - g.m + len(g.faces) == 2


def test_dual_counts():
    d = dual_graph(_square()).graph
    assert (d.n, d.m) == (2, 4)
    tri = PlanarGraph.from_coordinates([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0, 1), (1, 2), (2, 0)])
    d = dual_graph(tri).graph
    assert (d.n, d.m) == (2, 3)
    g, _ = grid_graph(2, 3)
    d = dual_graph(g).graph
    assert (d.n, d.m) == (3, 7)


def test_dual_of_dual_swaps_counts_back():
    g, _ = grid_graph(3, 3)
    d = dual_graph(g).graph
    dd = dual_graph(d).graph
    assert (dd.n, dd.m, len(dd.faces)) == (g.n, g.m, len(g.faces))


def test_face_labels_follow_boundary_order():
    # boundary walk 0,1,2,3 with s1=0, s2=1, t2=2, t1=3
    inst = square_instance([(0, 3), (1, 2)])
    labels = face_labels(inst)
    walk = [inst.graph.tail(d) for d in inst.graph.walk_from(inst.faces[0])]
    assert [labels[v] for v in walk] == [1, 2, 3, 4]


def test_face_labels_two_face_sinks_first():
    inst = gen_instance(1, "annulus", {"rings": 2, "spokes": 4, "k": 2})
    labels = face_labels(inst)
    assert sorted(labels[t] for _, t in inst.terminals) == [1, 2]
    assert sorted(labels[s] for s, _ in inst.terminals) == [3, 4]


def test_terminal_repeating_on_boundary_rejected():
    # 1 is a cut vertex on the outer face of two triangles sharing it
    coords = [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0), (2.0, 0.0), (1.5, 1.0)]
    edges = [(0, 1), (1, 2), (2, 0), (1, 3), (3, 4), (4, 1)]
    g = PlanarGraph.from_coordinates(coords, edges)
    outer = next(f for f in g.faces if len(f) == 6)
    inst = Instance(g, ((1, 3),), ONE_FACE, (outer.darts[0],))
    with pytest.raises(TerminalRepeatsOnBoundary):
        validate_instance(inst)


def test_validate_examples():
    inst = gen_instance(1, "grid", {"rows": 3, "cols": 3, "k": 2})
    assert validate_instance(inst) is inst
    with pytest.raises(DuplicateTerminal):
        validate_instance(square_instance([(0, 1), (2, 0)]))
    ann = gen_instance(1, "annulus", {"rings": 2, "spokes": 4, "k": 2})
    (s1, t1), (s2, t2) = ann.terminals
    with pytest.raises(BadCaseTag):
        validate_instance(ann.with_terminals([(s1, t1), (t2, s2)]))
    with pytest.raises(BadCaseTag):
        validate_instance(Instance(ann.graph, ann.terminals, "three-face", ann.faces))


def test_weight_bound_enforced():
    g = PlanarGraph.from_coordinates([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], [(0, 1), (1, 2)], [1, 10**6])
    with pytest.raises(WeightOutOfRange):
        validate_instance(Instance(g, ((0, 2),), ONE_FACE, (0,)))


def test_inconsistent_rotation_rejected():
    with pytest.raises(InconsistentEmbedding):
        PlanarGraph.from_edge_rotations(3, [(0, 1), (1, 2)], {0: [0], 1: [0], 2: [1]})
    with pytest.raises(InconsistentEmbedding):
        PlanarGraph.from_edge_rotations(3, [(0, 1), (1, 2)], {0: [1], 1: [0, 1], 2: [1]})


def test_input_self_loops_rejected():
    with pytest.raises(InputError):
        PlanarGraph.from_edge_rotations(2, [(0, 1), (1, 1)], {0: [0], 1: [0, 1, 1]})


def test_json_round_trip_and_digest():
    inst = gen_instance(3, "random-planar", {"n": 8, "k": 2, "max_weight": 3})
    data = json.loads(json.dumps(inst.to_json()))
    back = Instance.from_json(data)
    assert back.to_json() == inst.to_json()
    assert back.digest() == inst.digest()


def test_malformed_json_is_input_error():
    with pytest.raises(InputError):
        Instance.from_json({"n": 2, "edges": [[0]], "rotations": {}, "terminals": [], "faces": []})


def test_path_instance_is_valid():
    inst = path_instance()
    assert validate_instance(inst).case == ONE_FACE
