from __future__ import annotations

import random

import pytest

from planardpp.errors import NoSolution
from planardpp.oracle import enum_disjoint_paths, gen_instance
from planardpp.search import (
    DetectedFailure,
    RandomWeights,
    Solution,
    decompose,
    edge_order,
    greedy_search,
    isolation_search,
    search,
    validate_solution,
)


def multi_optimum():
    """3x3 grid with three shortest systems of length 5."""
    return gen_instance(3, "grid", {"rows": 3, "cols": 3, "k": 2, "order": "any"})


def test_greedy_square(square_serial):
    sol = greedy_search(square_serial)
    assert sol.paths == ((0, 1), (2, 3)) and sol.length == 2
    assert validate_solution(square_serial, sol)


def test_greedy_returns_an_oracle_optimum():
    inst = multi_optimum()
    ora = enum_disjoint_paths(inst)
    assert ora.count == 3
    for batch in (False, True):
        sol = greedy_search(inst, batch=batch)
        assert sol.length == ora.minimum
        assert sol.paths in [s.paths for s in ora.optimal]


def test_greedy_interlacing_has_no_solution(square_crossing):
    with pytest.raises(NoSolution):
        greedy_search(square_crossing)
    with pytest.raises(NoSolution):
        isolation_search(square_crossing, 0)


def test_isolation_unique_optimum_matches_greedy(square_serial):
    for seed in range(5):
        sol = isolation_search(square_serial, seed)
        assert isinstance(sol, Solution)
        assert sol.paths == greedy_search(square_serial).paths
        assert sol.meta["seed"] == seed


def test_isolation_multi_optimum_success_rate_and_soundness():
    inst = multi_optimum()
    outcomes = [isolation_search(inst, seed) for seed in range(20)]
    wins = [o for o in outcomes if isinstance(o, Solution)]
    assert len(wins) >= 7
    assert all(validate_solution(inst, o) and o.length == 5 for o in wins)
    failures = [o for o in outcomes if isinstance(o, DetectedFailure)]
    assert all("not isolated" in f.reason for f in failures)
    assert len(wins) + len(failures) == len(outcomes)


def test_isolation_exhaustive_and_batched_agree():
    inst = multi_optimum()
    for seed in range(6):
        a = isolation_search(inst, seed, batch=True)
        b = isolation_search(inst, seed, batch=False)
        assert type(a) is type(b)
        if isinstance(a, Solution):
            assert a.paths == b.paths


def test_jobs_do_not_change_results():
    inst = gen_instance(4, "grid", {"rows": 3, "cols": 4, "k": 3, "order": "general"})
    if enum_disjoint_paths(inst).count == 0:
        pytest.fail("expected a solvable instance")
    assert greedy_search(inst, jobs=1).paths == greedy_search(inst, jobs=3).paths


def test_two_face_search():
    inst = gen_instance(1, "annulus", {"rings": 2, "spokes": 4, "k": 2}).with_terminals(((0, 6), (2, 4)))
    ora = enum_disjoint_paths(inst)
    sol = greedy_search(inst)
    assert sol.length == ora.minimum and validate_solution(inst, sol)
    outcomes = [isolation_search(inst, s) for s in range(6)]
    assert any(isinstance(o, Solution) for o in outcomes)
    assert all(validate_solution(inst, o) for o in outcomes if isinstance(o, Solution))


def test_validate_solution_rejects_bad_systems(square_serial):
    good = greedy_search(square_serial)
    assert not validate_solution(square_serial, Solution(((0, 1), (1, 2)), ((0,), (1,)), 2))
    assert not validate_solution(square_serial, Solution(((1, 0), (2, 3)), ((0,), (2,)), 2))
    assert not validate_solution(square_serial, Solution(good.paths, good.edges, 3))
    assert not validate_solution(square_serial, Solution(((0, 3), (2, 3)), ((3,), (2,)), 2))


def test_decompose_and_edge_order(square_serial):
    assert edge_order(square_serial) == [0, 3, 1, 2]
    paths, edges = decompose(square_serial, {0, 2})
    assert paths == ((0, 1), (2, 3)) and edges == ((0,), (2,))


def test_random_weights_never_reorder_lengths():
    inst = multi_optimum()
    rw = RandomWeights.draw(inst, random.Random(1))
    m, n = inst.graph.m, inst.graph.n
    assert all(1 <= r <= 2 * m for r in rw.r)
    # at most n edges per system, each perturbation below 2m
    assert n * 2 * m < rw.base


def test_search_dispatch(square_serial):
    assert search(square_serial, "greedy").length == 2
    assert isinstance(search(square_serial, "isolation", seed=1), Solution)
    with pytest.raises(ValueError):
        search(square_serial, "annealing")
