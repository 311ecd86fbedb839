"""
Shared fixtures: the 3x3 example with margins (1, 1, 2) and the small
Birkhoff polytopes.
"""

from fractions import Fraction

import pytest

from django_transport_polytopes.polytopes.graph import BipartiteShape, Edge, LabeledForest
from django_transport_polytopes.polytopes.polytope import Margins, TransportMatrix


def forest(m, n, *pairs):
    return LabeledForest(BipartiteShape(m, n), frozenset(Edge(i, j) for i, j in pairs))


def matrix(*rows):
    return TransportMatrix(tuple(tuple(Fraction(x) for x in row) for row in rows))


def margins(r, c):
    return Margins(tuple(Fraction(x) for x in r), tuple(Fraction(x) for x in c))


@pytest.fixture
def margins_112():
    return margins((1, 1, 2), (1, 1, 2))


@pytest.fixture
def birkhoff_2():
    return margins((1, 1), (1, 1))


@pytest.fixture
def birkhoff_3():
    return margins((1, 1, 1), (1, 1, 1))


@pytest.fixture
def t0():
    """Auxiliary graph of diag(1, 1, 2)."""
    return forest(3, 3, (1, 1), (2, 2), (3, 3))


@pytest.fixture
def t6():
    return forest(3, 3, (1, 3), (2, 3), (3, 1), (3, 2))


@pytest.fixture
def vertices_112():
    """The seven vertices of T((1, 1, 2), (1, 1, 2))."""
    return [
        matrix((1, 0, 0), (0, 1, 0), (0, 0, 2)),
        matrix((0, 1, 0), (1, 0, 0), (0, 0, 2)),
        matrix((1, 0, 0), (0, 0, 1), (0, 1, 1)),
        matrix((0, 1, 0), (0, 0, 1), (1, 0, 1)),
        matrix((0, 0, 1), (1, 0, 0), (0, 1, 1)),
        matrix((0, 0, 1), (0, 1, 0), (1, 0, 1)),
        matrix((0, 0, 1), (0, 0, 1), (1, 1, 0)),
    ]
