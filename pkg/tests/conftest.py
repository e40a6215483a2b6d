from __future__ import annotations

import pytest

from planardpp.cli import square_instance
from planardpp.graph import ONE_FACE, Instance, PlanarGraph
from planardpp.oracle import outer_dart


def path_instance() -> Instance:
    """s=0 -- a=1 -- t=2."""
    coords = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]
    g = PlanarGraph.from_coordinates(coords, [(0, 1), (1, 2)])
    return Instance(g, ((0, 2),), ONE_FACE, (0,))


def grid_graph(rows: int, cols: int) -> tuple[PlanarGraph, int]:
    coords = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    g = PlanarGraph.from_coordinates(coords, edges)
    return g, outer_dart(coords, g)


@pytest.fixture
def square_serial() -> Instance:
    return square_instance([(0, 1), (2, 3)])


@pytest.fixture
def square_crossing() -> Instance:
    return square_instance([(0, 2), (1, 3)])
