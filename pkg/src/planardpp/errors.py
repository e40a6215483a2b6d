"""Exception hierarchy.

Input problems derive from :class:`InputError` (CLI exit code 2); broken
internal invariants derive from :class:`InternalInconsistency` (exit code 3).
"""

from __future__ import annotations


class PlanarDPPError(Exception):
    """Base class for all errors raised by the package."""


class InputError(PlanarDPPError):
    pass


class InconsistentEmbedding(InputError):
    pass


class TerminalNotOnFace(InputError):
    pass


class TerminalRepeatsOnBoundary(InputError):
    pass


class DuplicateTerminal(InputError):
    pass


class BadCaseTag(InputError):
    pass


class WeightOutOfRange(InputError):
    pass


class BadParams(InputError):
    pass


class InstanceTooLarge(InputError):
    pass


class CrossingPairing(InputError):
    pass


class CrossingDemands(InputError):
    pass


class SharedLabel(InputError):
    pass


class ModulusMismatch(PlanarDPPError):
    pass


class DuplicatePoint(PlanarDPPError):
    pass


class NoSolution(PlanarDPPError):
    pass


class InternalInconsistency(PlanarDPPError):
    pass


class NonIntegerResult(InternalInconsistency):
    pass


class SignMismatch(InternalInconsistency):
    pass


class NoDualPath(InternalInconsistency):
    pass
