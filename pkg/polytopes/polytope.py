"""
The transportation polytope T(r, c): margins, vertices, cones and adjacency.

A vertex is determined by its auxiliary graph, the support of the matrix
seen as a subgraph of K_{m,n}. Vertices are in bijection with the spanning
forests that can carry the margins, which is what `solve_on_forest`
exploits.
"""

import logging
from bisect import bisect_right
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import networkx as nx

from django_transport_polytopes.polytopes.exceptions import (
    Infeasible,
    InvalidMargins,
    InvariantViolation,
    NotUnique,
    SameVertex,
)
from django_transport_polytopes.polytopes.graph import (
    LEFT,
    BipartiteShape,
    BipartiteSubgraph,
    CycleKind,
    Edge,
    LabeledForest,
    RayMatrix,
    enumerate_augmentations,
    unique_cycle_of_union,
)
from django_transport_polytopes.polytopes.rational import (
    format_matrix,
    format_rational,
    is_integral,
    parse_rational,
)

logger = logging.getLogger(__name__)

# Above this many margin entries the subset sums of each side are built in
# two halves and merged.
SUBSET_SUM_DIRECT_LIMIT = 24


@dataclass(frozen=True)
class Margins:
    """Row sums r and column sums c of a transportation polytope."""

    r: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self):
        r = tuple(parse_rational(x) for x in self.r)
        c = tuple(parse_rational(x) for x in self.c)
        if not r or not c:
            raise InvalidMargins("Margins need at least one row and one column")
        if any(x <= 0 for x in r + c):
            raise InvalidMargins(f"Margins must be positive: r={r}, c={c}")
        if sum(r) != sum(c):
            raise InvalidMargins(f"Row total {sum(r)} differs from column total {sum(c)}")
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'c', c)

    @classmethod
    def from_json(cls, data: dict) -> 'Margins':
        try:
            return cls(tuple(data['r']), tuple(data['c']))
        except (KeyError, TypeError) as exc:
            raise InvalidMargins(f"Margins need 'r' and 'c' lists: {exc}") from exc

    @property
    def m(self) -> int:
        return len(self.r)

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(self.m, self.n)

    @property
    def total(self) -> Fraction:
        return sum(self.r, Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(is_integral(x) for x in self.r + self.c)

    @property
    def is_central(self) -> bool:
        return len(set(self.r)) == 1 and len(set(self.c)) == 1

    def scaled(self, factor) -> 'Margins':
        """Margins of the dilation factor * T(r, c)."""
        factor = parse_rational(factor)
        return Margins(tuple(x * factor for x in self.r), tuple(x * factor for x in self.c))

    def to_json(self) -> dict:
        return {
            'r': [format_rational(x) for x in self.r],
            'c': [format_rational(x) for x in self.c],
        }


@dataclass(frozen=True, order=True)
class TransportMatrix:
    """A nonnegative m x n rational matrix, ordered lexicographically by rows."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if not entries or len({len(row) for row in entries}) != 1 or not entries[0]:
            raise ValueError("Matrix must be a non-empty rectangle")
        if any(x < 0 for row in entries for x in row):
            raise ValueError(f"Transport matrix has a negative entry: {entries}")
        object.__setattr__(self, 'entries', entries)

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(len(self.entries), len(self.entries[0]))

    def __getitem__(self, edge: Edge) -> Fraction:
        return self.entries[edge.i - 1][edge.j - 1]

    @property
    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, Fraction(0)) for row in self.entries)

    @property
    def column_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(col, Fraction(0)) for col in zip(*self.entries))

    def satisfies(self, margins: Margins) -> bool:
        return self.row_sums == margins.r and self.column_sums == margins.c

    @property
    def support(self) -> frozenset[Edge]:
        return frozenset(
            Edge(i, j)
            for i, row in enumerate(self.entries, start=1)
            for j, x in enumerate(row, start=1)
            if x > 0
        )

    @property
    def is_integral(self) -> bool:
        return all(is_integral(x) for row in self.entries for x in row)

    def integer_entries(self) -> tuple[tuple[int, ...], ...]:
        if not self.is_integral:
            raise ValueError("Matrix has non-integral entries")
        return tuple(tuple(int(x) for x in row) for row in self.entries)

    def to_json(self) -> list[list[str]]:
        return format_matrix(self.entries)


def aux(matrix: TransportMatrix) -> BipartiteSubgraph:
    """Support graph of a matrix; a LabeledForest whenever it is acyclic."""
    return BipartiteSubgraph.build(matrix.shape, matrix.support)


@dataclass(frozen=True)
class VertexRecord:
    matrix: TransportMatrix
    aux: LabeledForest

    @classmethod
    def of(cls, matrix: TransportMatrix) -> 'VertexRecord':
        support = aux(matrix)
        if not isinstance(support, LabeledForest):
            raise InvariantViolation(f"Vertex support {support!r} is not a forest")
        return cls(matrix=matrix, aux=support)

    @property
    def degenerate(self) -> bool:
        return len(self.aux.edges) < self.aux.shape.tree_size

    def __lt__(self, other: 'VertexRecord') -> bool:
        return self.matrix < other.matrix

    def to_json(self) -> dict:
        return {
            'matrix': self.matrix.to_json(),
            'aux': self.aux.to_json(),
            'degenerate': self.degenerate,
        }


def _subset_sums(values: Sequence[Fraction]) -> set[Fraction]:
    sums = {Fraction(0)}
    for value in values:
        sums |= {s + value for s in sums}
    return sums


def _signed_sums(items: Sequence[tuple[Fraction, Fraction]]) -> set[tuple[Fraction, Fraction]]:
    """(signed sum, row part) over every subset of `items`."""
    sums = {(Fraction(0), Fraction(0))}
    for signed, row in items:
        sums |= {(s + signed, p + row) for s, p in sums}
    return sums


def _direct_nondegenerate(margins: Margins) -> bool:
    trivial = {Fraction(0), margins.total}
    rows = _subset_sums(margins.r) - trivial
    cols = _subset_sums(margins.c) - trivial
    return rows.isdisjoint(cols)


def _split_nondegenerate(margins: Margins) -> bool:
    """
    Meet in the middle over the signed list (r_1, .., r_m, -c_1, .., -c_n).

    A subset with signed sum 0 and row part strictly between 0 and the
    total is a balanced pair of proper subsets. The high half is grouped by
    signed sum with its row parts sorted, so each low-half sum needs one
    dictionary lookup and one binary search.
    """
    items = [(x, x) for x in margins.r] + [(-x, Fraction(0)) for x in margins.c]
    half = len(items) // 2
    by_signed: dict[Fraction, list[Fraction]] = defaultdict(list)
    for signed, row in _signed_sums(items[half:]):
        by_signed[signed].append(row)
    for rows in by_signed.values():
        rows.sort()

    total = margins.total
    for signed, row in _signed_sums(items[:half]):
        rows = by_signed.get(-signed)
        if not rows:
            continue
        k = bisect_right(rows, -row)
        if k < len(rows) and row + rows[k] < total:
            return False
    return True


def is_nondegenerate(margins: Margins) -> bool:
    """
    True iff no proper nonempty I, J have sum(r_I) == sum(c_J).

    Only sums strictly between 0 and the total can come from proper
    subsets, since every margin is positive.
    """
    if margins.m + margins.n <= SUBSET_SUM_DIRECT_LIMIT:
        return _direct_nondegenerate(margins)
    return _split_nondegenerate(margins)


def solve_on_forest(margins: Margins, forest: LabeledForest) -> TransportMatrix:
    """
    The unique matrix supported on `forest` with the given margins.

    Each component must balance (row total equals column total) or
    NotUnique is raised; leaves are then peeled off in canonical vertex
    order, and a negative forced entry raises Infeasible.
    """
    if forest.shape != margins.shape:
        raise InvalidMargins(
            f"Margins of shape {margins.m}x{margins.n} on forest {forest.shape.m}x{forest.shape.n}"
        )

    residual = {('u', i): x for i, x in enumerate(margins.r, start=1)}
    residual.update({('w', j): x for j, x in enumerate(margins.c, start=1)})

    for comp in forest.components():
        rows = sum((residual[v] for v in comp if v[0] == LEFT), Fraction(0))
        cols = sum((residual[v] for v in comp if v[0] != LEFT), Fraction(0))
        if rows != cols:
            raise NotUnique(f"Component {sorted(comp)} has row total {rows} != column total {cols}")

    graph = forest.graph.copy()
    entries = [[Fraction(0)] * margins.n for _ in range(margins.m)]
    while graph.number_of_edges():
        leaf = min(v for v in graph if graph.degree(v) == 1)
        (other,) = graph.neighbors(leaf)
        value = residual[leaf]
        if value < 0:
            raise Infeasible(f"Forced entry {value} on {Edge.between(leaf, other)!r} is negative")
        edge = Edge.between(leaf, other)
        entries[edge.i - 1][edge.j - 1] = value
        residual[leaf] = Fraction(0)
        residual[other] -= value
        graph.remove_edge(leaf, other)

    matrix = TransportMatrix(tuple(tuple(row) for row in entries))
    if not matrix.satisfies(margins):
        raise InvariantViolation(f"Leaf elimination on {forest!r} missed the margins")
    return matrix


def enumerate_vertices(margins: Margins) -> list[VertexRecord]:
    """All vertices of T(r, c), as limits of the perturbed polytope's vertices."""
    from django_transport_polytopes.polytopes.perturb import (
        enumerate_perturbed_vertices,
        make_spec,
    )

    spec = make_spec(margins)
    limits = {pv.limit for pv in enumerate_perturbed_vertices(spec)}
    vertices = sorted(VertexRecord.of(matrix) for matrix in limits)
    logger.info(f"T(r, c) of order {margins.m}x{margins.n} has {len(vertices)} vertices")
    return vertices


def vert_aux(margins: Margins) -> frozenset[LabeledForest]:
    return frozenset(v.aux for v in enumerate_vertices(margins))


def feasible_cone_rays(vertex: VertexRecord) -> list[RayMatrix]:
    rays = {augmentation.ray for augmentation in enumerate_augmentations(vertex.aux)}
    return sorted(rays)


class Adjacency(NamedTuple):
    adjacent: bool
    ray: RayMatrix | None = None


def adjacent(first: VertexRecord, second: VertexRecord) -> Adjacency:
    """
    Whether two vertices span an edge of the polytope.

    When they do, `ray` is the cycle matrix pointing from `first` to
    `second`; their difference is a positive multiple of it.
    """
    if first.matrix == second.matrix:
        raise SameVertex(f"{first.matrix.entries} compared with itself")

    found = unique_cycle_of_union(first.aux, second.aux)
    if found.kind != CycleKind.UNIQUE:
        return Adjacency(False)

    shape = first.aux.shape
    entries = [[0] * shape.n for _ in range(shape.m)]
    for idx, edge in enumerate(found.edges):
        entries[edge.i - 1][edge.j - 1] = 1 if idx % 2 == 0 else -1
    ray = RayMatrix(tuple(tuple(row) for row in entries))

    start = found.edges[0]
    step = second.matrix[start] - first.matrix[start]
    if step < 0:
        ray, step = -ray, -step
    for i, row in enumerate(ray.entries, start=1):
        for j, sign in enumerate(row, start=1):
            edge = Edge(i, j)
            if second.matrix[edge] - first.matrix[edge] != sign * step:
                raise InvariantViolation(
                    f"Difference of adjacent vertices is not along the cycle {found.edges}"
                )
    return Adjacency(True, ray)


def vertex_graph(vertices: Iterable[VertexRecord]) -> nx.Graph:
    """Edge graph of the polytope over vertex indices; edges carry their ray."""
    vertices = list(vertices)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(vertices)))
    for a in range(len(vertices)):
        for b in range(a + 1, len(vertices)):
            result = adjacent(vertices[a], vertices[b])
            if result.adjacent:
                graph.add_edge(a, b, ray=result.ray)
    return graph
