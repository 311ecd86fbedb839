"""
Exceptions raised by the transportation polytope toolkit.

Every error derives from TransportPolytopeError so callers (the CLI and
the REST API) can map the whole family onto exit codes and HTTP statuses.
"""

from django.db import models


class TransportPolytopeError(Exception):
    """Base class for all toolkit errors."""


class InvalidShape(TransportPolytopeError, ValueError):
    """A bipartite shape with m < 1 or n < 1, or an edge outside it."""


class InvalidMargins(TransportPolytopeError, ValueError):
    """Margins that are non-positive, non-rational or unbalanced."""


class NotAForest(TransportPolytopeError, ValueError):
    """An edge set that contains a cycle where a forest is required."""


class NotSpanningTree(TransportPolytopeError, ValueError):
    """A forest that is disconnected where a spanning tree is required."""


class AugmentationFailure(models.TextChoices):
    """Why a set of edges cannot augment a forest into a single cycle."""

    EDGE_IN_FOREST = 'edge-in-forest', 'Edge already in forest'
    NO_CYCLE = 'no-cycle', 'No cycle created'
    MULTI_CYCLE = 'multi-cycle', 'More than one cycle created'
    EDGE_OFF_CYCLE = 'edge-off-cycle', 'Edge not on the cycle'
    ODD_DISTANCE = 'odd-distance', 'Edges at odd distance on the cycle'


class InvalidAugmentation(TransportPolytopeError, ValueError):
    """The pair (forest, edges) does not define a cycle ray."""

    def __init__(self, reason: str, message: str = ''):
        self.reason = AugmentationFailure(reason)
        super().__init__(message or self.reason.label)


class Infeasible(TransportPolytopeError):
    """Leaf elimination on a forest forced a negative entry."""


class NotUnique(TransportPolytopeError):
    """A forest component whose row and column margins do not balance."""


class SameVertex(TransportPolytopeError, ValueError):
    """Adjacency was asked for a vertex against itself."""


class NotCentral(TransportPolytopeError, ValueError):
    """Margins that are not central (all rows equal, all columns equal)."""


class NonIntegral(TransportPolytopeError, ValueError):
    """Integral margins are required."""


class Degenerate(TransportPolytopeError, ValueError):
    """A non-degenerate polytope is required."""


class PoleAt(TransportPolytopeError, ZeroDivisionError):
    """An evaluation point makes the denominator of a term vanish."""

    def __init__(self, term_index: int, ray_index: int):
        self.term_index = term_index
        self.ray_index = ray_index
        super().__init__(f"pole at term {term_index}, ray {ray_index}")


class PoleDirection(TransportPolytopeError, ValueError):
    """A direction vector pairs to zero with some ray."""


class MixedDimension(TransportPolytopeError, ValueError):
    """Terms of one expression carry different numbers of rays."""


class DirectionExhausted(TransportPolytopeError):
    """No admissible moment direction was found in the allowed bases."""


class NotInST(TransportPolytopeError, ValueError):
    """A tree outside ST_{k,n} was given to the inverse bijection."""


class InconsistentTable(TransportPolytopeError):
    """A count table has a point off the interpolating polynomial."""


class OracleTooLarge(TransportPolytopeError, ValueError):
    """The brute-force oracle was asked for more than desk scale."""


class InvariantViolation(TransportPolytopeError):
    """An internal invariant failed; this signals a bug, not bad input."""


class NotAVertex(TransportPolytopeError, ValueError):
    """A matrix that is not a vertex of the polytope it was paired with."""


class InvalidRunConfig(TransportPolytopeError, ValueError):
    """A run request without exactly one input mode, or with an unknown command."""


class VerificationFailure(TransportPolytopeError):
    """An oracle cross-check disagreed; `counterexample` describes the first mismatch."""

    def __init__(self, check: str, counterexample: dict):
        self.check = check
        self.counterexample = counterexample
        super().__init__(f"{check} check failed")
