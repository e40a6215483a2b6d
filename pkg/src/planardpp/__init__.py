"""Exact counting and construction of shortest disjoint paths in planar
graphs with terminals on one face or on two faces."""

from __future__ import annotations

__version__ = "0.1.0"

from .graph import Instance, PlanarGraph
from .oneface import CountResult, count_one_face, decide_one_face
from .pairings import Pairing, telescope
from .twoface import count_two_face

__all__ = [
    "CountResult",
    "Instance",
    "Pairing",
    "PlanarGraph",
    "__version__",
    "count_one_face",
    "count_two_face",
    "decide_one_face",
    "telescope",
]
