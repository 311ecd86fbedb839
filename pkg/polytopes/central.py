"""
Central transportation polytopes of order kn x n.

With r = (a, ..., a) of length kn and c = (ak, ..., ak) of length n, the
vertices are a * M for the k-to-1 matching matrices M, and the perturbed
vertex trees are exactly ST_{k,n}: the spanning trees of K_{kn,n} whose
right degree sequence is (k+1, ..., k+1, k). Those trees are built
directly from (matching, rooted tree on the right vertices, branch
choices) triples, so this path never pivots.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import networkx as nx
from sympy.utilities.iterables import multiset_permutations

from django_transport_polytopes.polytopes.ehrhart import (
    EhrhartPolynomial,
    VolumeReport,
    ehrhart_from_mgf,
    normalized_volume,
    pick_direction,
)
from django_transport_polytopes.polytopes.exceptions import (
    InvalidShape,
    NotInST,
    NotSpanningTree,
)
from django_transport_polytopes.polytopes.graph import (
    BipartiteShape,
    Edge,
    LabeledForest,
    right,
    right_degree_sequence,
    root_at_wn,
)
from django_transport_polytopes.polytopes.mgf import MgfExpression, tree_term
from django_transport_polytopes.polytopes.perturb import make_spec, max_vertex_formula
from django_transport_polytopes.polytopes.polytope import Margins, TransportMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CentralSpec:
    k: int
    n: int
    a: int

    def __post_init__(self):
        for name in ('k', 'n', 'a'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidShape(f"{name} must be a positive integer, got {value!r}")

    @property
    def m(self) -> int:
        return self.k * self.n

    @property
    def b(self) -> int:
        return self.a * self.k

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(self.m, self.n)

    def margins(self) -> Margins:
        return Margins((Fraction(self.a),) * self.m, (Fraction(self.b),) * self.n)

    def to_json(self) -> dict:
        return {'k': self.k, 'n': self.n, 'a': self.a}


@dataclass(frozen=True, order=True)
class MatchingMatrix:
    """A kn x n 0/1 matrix stored as the column matched to each row."""

    assignment: tuple[int, ...]
    k: int
    n: int

    def __post_init__(self):
        if len(self.assignment) != self.k * self.n:
            raise ValueError(f"Matching needs {self.k * self.n} rows, got {len(self.assignment)}")
        for j in range(1, self.n + 1):
            if self.assignment.count(j) != self.k:
                raise ValueError(f"Column {j} must be matched exactly {self.k} times")

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(Edge(i, j) for i, j in enumerate(self.assignment, start=1))

    def rows_of(self, j: int) -> list[int]:
        """Left indices matched to w_j, ascending."""
        return [i for i, col in enumerate(self.assignment, start=1) if col == j]

    @property
    def entries(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(1 if col == j else 0 for j in range(1, self.n + 1)) for col in self.assignment
        )

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def enumerate_matchings(k: int, n: int) -> list[MatchingMatrix]:
    columns = [j for j in range(1, n + 1) for _ in range(k)]
    return [MatchingMatrix(tuple(p), k, n) for p in multiset_permutations(columns)]


@dataclass(frozen=True, order=True)
class RootedRightTree:
    """A tree on w_1..w_n rooted at w_n; parent[j-1] is the parent of w_j for j < n."""

    parent: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent) + 1

    def __post_init__(self):
        n = self.n
        for j in range(1, n):
            seen = {j}
            node = j
            while node != n:
                node = self.parent[node - 1]
                if not 1 <= node <= n or node in seen:
                    raise ValueError(f"Parent map {self.parent} is not a tree rooted at {n}")
                seen.add(node)


def enumerate_rooted_trees(n: int) -> list[RootedRightTree]:
    """All n^(n-2) labeled trees on n vertices, rooted at w_n (Prufer decoding)."""
    if n == 1:
        return [RootedRightTree(())]
    if n == 2:
        return [RootedRightTree((2,))]
    trees = []
    for sequence in product(range(n), repeat=n - 2):
        graph = nx.from_prufer_sequence(list(sequence))
        parent = dict(nx.bfs_predecessors(graph, n - 1))
        trees.append(RootedRightTree(tuple(parent[j] + 1 for j in range(n - 1))))
    return sorted(trees)


def enumerate_branch_choices(k: int, n: int) -> list[tuple[int, ...]]:
    return list(product(range(1, k + 1), repeat=n - 1))


def phi(matching: MatchingMatrix, tree: RootedRightTree, choices: tuple[int, ...]) -> LabeledForest:
    """
    Build the ST_{k,n} tree for (M, R, f).

    Every non-root w_j with parent w_{j0} in R is joined to the f_j-th
    (by left index) left vertex matched to w_{j0}.
    """
    k, n = matching.k, matching.n
    if tree.n != n or len(choices) != n - 1:
        raise InvalidShape(f"Tree and choices must cover {n - 1} non-root right vertices")
    if any(not 1 <= f <= k for f in choices):
        raise InvalidShape(f"Branch choices {choices} must lie in 1..{k}")
    edges = set(matching.edges)
    for j in range(1, n):
        rows = matching.rows_of(tree.parent[j - 1])
        edges.add(Edge(rows[choices[j - 1] - 1], j))
    return LabeledForest(BipartiteShape(k * n, n), edges)


def _st_degrees(k: int, n: int) -> tuple[int, ...]:
    return (k + 1,) * (n - 1) + (k,)


class PhiPreimage(NamedTuple):
    matching: MatchingMatrix
    tree: RootedRightTree
    choices: tuple[int, ...]


def phi_inverse(forest: LabeledForest, k: int) -> PhiPreimage:
    """Split the edges into right-parent and left-parent ones and read back (M, R, f)."""
    shape = forest.shape
    if shape.m != k * shape.n:
        raise NotInST(f"Shape {shape.m}x{shape.n} is not of order {k}n x n")
    n = shape.n
    if right_degree_sequence(forest) != _st_degrees(k, n):
        raise NotInST(f"Right degree sequence {right_degree_sequence(forest)} is not ST_{k},{n}")
    try:
        rooted = root_at_wn(forest)
    except NotSpanningTree as exc:
        raise NotInST(str(exc)) from exc

    assignment = [0] * shape.m
    for edge in forest.edges:
        if rooted.right_is_parent(edge):
            assignment[edge.i - 1] = edge.j
    try:
        matching = MatchingMatrix(tuple(assignment), k, n)
    except ValueError as exc:
        raise NotInST(str(exc)) from exc

    parents, choices = [], []
    for j in range(1, n):
        u = rooted.parent[right(j)]
        j0 = rooted.parent[u][1]
        parents.append(j0)
        choices.append(matching.rows_of(j0).index(u[1]) + 1)
    return PhiPreimage(matching, RootedRightTree(tuple(parents)), tuple(choices))


def pert_aux_of_matching(matching: MatchingMatrix) -> list[LabeledForest]:
    """Phi_M(R_n x [k]^(n-1)): the perturbed trees converging to a * M."""
    trees = enumerate_rooted_trees(matching.n)
    choices = enumerate_branch_choices(matching.k, matching.n)
    image = [phi(matching, tree, f) for tree in trees for f in choices]
    return sorted(image, key=lambda t: t.key)


def enumerate_ST(k: int, n: int) -> list[LabeledForest]:
    trees = [tree for matching in enumerate_matchings(k, n) for tree in pert_aux_of_matching(matching)]
    logger.info(f"ST_{k},{n} has {len(trees)} trees")
    return sorted(trees, key=lambda t: t.key)


class CentralVertex(NamedTuple):
    tree: LabeledForest
    matrix: TransportMatrix
    limit: TransportMatrix
    t: Fraction


def central_vertex(tree: LabeledForest, spec: CentralSpec, t=None) -> CentralVertex:
    """
    M_T(t) in closed form: a - l(T_{u_i}) t where w_j is the parent of u_i,
    l(T_{w_j}) t where u_i is the parent of w_j. The limit is a * M.
    """
    phi_inverse(tree, spec.k)
    t = make_spec(spec.margins()).t0 if t is None else Fraction(t)
    rooted = root_at_wn(tree)
    at_t = [[Fraction(0)] * spec.n for _ in range(spec.m)]
    limit = [[Fraction(0)] * spec.n for _ in range(spec.m)]
    for edge in tree.edges:
        shift = rooted.subtree_left_count(edge) * t
        if rooted.right_is_parent(edge):
            at_t[edge.i - 1][edge.j - 1] = spec.a - shift
            limit[edge.i - 1][edge.j - 1] = Fraction(spec.a)
        else:
            at_t[edge.i - 1][edge.j - 1] = shift
    return CentralVertex(
        tree=tree,
        matrix=TransportMatrix(tuple(tuple(row) for row in at_t)),
        limit=TransportMatrix(tuple(tuple(row) for row in limit)),
        t=t,
    )


def central_mgf(spec: CentralSpec) -> MgfExpression:
    terms = []
    for matching in enumerate_matchings(spec.k, spec.n):
        apex = tuple(tuple(spec.a * x for x in row) for row in matching.entries)
        terms.extend(tree_term(tree, apex) for tree in pert_aux_of_matching(matching))
    return MgfExpression(spec.shape, tuple(sorted(terms)))


def central_feasible_cone_mgf(spec: CentralSpec, matching: MatchingMatrix) -> MgfExpression:
    zero = spec.shape.zero_matrix()
    terms = sorted(tree_term(tree, zero) for tree in pert_aux_of_matching(matching))
    return MgfExpression(spec.shape, tuple(terms))


class CentralCounts(NamedTuple):
    vertices: int
    max_vertices: int

    def to_json(self) -> dict:
        return {'vertices': self.vertices, 'max_vertices': self.max_vertices}


def central_counts(k: int, n: int) -> CentralCounts:
    CentralSpec(k, n, 1)
    vertices = math.factorial(k * n) // math.factorial(k) ** n
    return CentralCounts(vertices, max_vertex_formula(k, n))


def central_ehrhart(spec: CentralSpec, max_bases: int = 25) -> tuple[EhrhartPolynomial, VolumeReport]:
    expr = central_mgf(spec)
    direction = pick_direction(expr, max_bases=max_bases)
    return ehrhart_from_mgf(expr, direction), normalized_volume(expr, direction)
