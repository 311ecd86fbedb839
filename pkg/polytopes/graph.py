"""
Combinatorics of the complete bipartite graph K_{m,n}.

Left vertices are u_1..u_m (one per row), right vertices w_1..w_n (one per
column); the edge e_{i,j} stands for matrix cell (i, j). Vertices are
represented as ("u", i) / ("w", j) tuples so they can be fed to networkx.

Edges are ordered canonically by (j, i) everywhere, which makes every
enumeration and serialized output deterministic.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import NamedTuple

import networkx as nx
from django.db import models
from networkx.utils import UnionFind

from django_transport_polytopes.polytopes.exceptions import (
    AugmentationFailure,
    InvalidAugmentation,
    InvalidShape,
    NotAForest,
    NotSpanningTree,
)

logger = logging.getLogger(__name__)

LEFT = 'u'
RIGHT = 'w'

Vertex = tuple[str, int]


def left(i: int) -> Vertex:
    return (LEFT, i)


def right(j: int) -> Vertex:
    return (RIGHT, j)


@dataclass(frozen=True)
class Edge:
    """The edge e_{i,j} joining u_i and w_j (1-based)."""

    i: int
    j: int

    @property
    def key(self) -> tuple[int, int]:
        return (self.j, self.i)

    @property
    def left(self) -> Vertex:
        return left(self.i)

    @property
    def right(self) -> Vertex:
        return right(self.j)

    def __lt__(self, other: 'Edge') -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"e{self.i},{self.j}"

    @classmethod
    def between(cls, a: Vertex, b: Vertex) -> 'Edge':
        """Build the edge joining two vertices given in either order."""
        if a[0] == RIGHT:
            a, b = b, a
        if a[0] != LEFT or b[0] != RIGHT:
            raise InvalidShape(f"{a} and {b} are not joined by a bipartite edge")
        return cls(a[1], b[1])


def edges_from_pairs(pairs: Iterable[Iterable[int]]) -> frozenset[Edge]:
    return frozenset(Edge(int(i), int(j)) for i, j in pairs)


@dataclass(frozen=True)
class BipartiteShape:
    """K_{m,n}: m left vertices and n right vertices."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InvalidShape(f"Shape needs m, n >= 1, got {self.m}x{self.n}")

    @property
    def vertices(self) -> list[Vertex]:
        return [left(i) for i in range(1, self.m + 1)] + [
            right(j) for j in range(1, self.n + 1)
        ]

    @property
    def vertex_count(self) -> int:
        return self.m + self.n

    @property
    def tree_size(self) -> int:
        """Edge count of a spanning tree, m + n - 1."""
        return self.m + self.n - 1

    @property
    def cone_dimension(self) -> int:
        """(m-1)(n-1): rays per vertex of a non-degenerate polytope."""
        return (self.m - 1) * (self.n - 1)

    def all_edges(self) -> list[Edge]:
        return [Edge(i, j) for j in range(1, self.n + 1) for i in range(1, self.m + 1)]

    def contains(self, edge: Edge) -> bool:
        return 1 <= edge.i <= self.m and 1 <= edge.j <= self.n

    def zero_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple((0,) * self.n for _ in range(self.m))


@dataclass(frozen=True)
class BipartiteSubgraph:
    """A spanning subgraph of K_{m,n} given by its edge set."""

    shape: BipartiteShape
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, 'edges', frozenset(self.edges))
        for edge in self.edges:
            if not self.shape.contains(edge):
                raise InvalidShape(f"{edge!r} lies outside K_{self.shape.m},{self.shape.n}")

    @classmethod
    def build(cls, shape: BipartiteShape, edges: Iterable[Edge]) -> 'BipartiteSubgraph':
        """Return a LabeledForest when the edge set is acyclic."""
        edges = frozenset(edges)
        if is_acyclic(edges):
            return LabeledForest(shape, edges)
        return BipartiteSubgraph(shape, edges)

    @classmethod
    def from_pairs(cls, m: int, n: int, pairs: Iterable[Iterable[int]]):
        return cls(BipartiteShape(m, n), edges_from_pairs(pairs))

    @property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @property
    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(edge.key for edge in self.sorted_edges)

    @cached_property
    def graph(self) -> nx.Graph:
        """networkx view over all m + n vertices. Do not mutate."""
        graph = nx.Graph()
        graph.add_nodes_from(self.shape.vertices)
        graph.add_edges_from((edge.left, edge.right) for edge in self.edges)
        return graph

    @property
    def component_count(self) -> int:
        return nx.number_connected_components(self.graph)

    @property
    def cyclomatic_number(self) -> int:
        """Independent cycles: |E| - |V| + #components."""
        return len(self.edges) - self.shape.vertex_count + self.component_count

    def __contains__(self, edge: Edge) -> bool:
        return edge in self.edges

    def __le__(self, other: 'BipartiteSubgraph') -> bool:
        return self.edges <= other.edges

    def to_json(self) -> dict:
        return {
            'm': self.shape.m,
            'n': self.shape.n,
            'edges': [[edge.i, edge.j] for edge in self.sorted_edges],
        }

    def __repr__(self) -> str:
        inner = ', '.join(repr(edge) for edge in self.sorted_edges)
        return f"{type(self).__name__}({self.shape.m}x{self.shape.n}: {{{inner}}})"


@dataclass(frozen=True, repr=False)
class LabeledForest(BipartiteSubgraph):
    """An acyclic spanning subgraph of K_{m,n}; isolated vertices allowed."""

    def __post_init__(self):
        super().__post_init__()
        if not is_acyclic(self.edges):
            raise NotAForest(f"Edge set {sorted(self.edges)} contains a cycle")

    @property
    def is_spanning_tree(self) -> bool:
        return len(self.edges) == self.shape.tree_size

    def components(self) -> list[frozenset[Vertex]]:
        comps = [frozenset(c) for c in nx.connected_components(self.graph)]
        return sorted(comps, key=lambda c: min(c))

    def component_index(self) -> dict[Vertex, int]:
        return {v: idx for idx, comp in enumerate(self.components()) for v in comp}

    def add(self, *edges: Edge) -> BipartiteSubgraph:
        return BipartiteSubgraph.build(self.shape, self.edges | frozenset(edges))


def is_acyclic(edges: Iterable[Edge]) -> bool:
    sets = UnionFind()
    for edge in edges:
        if sets[edge.left] == sets[edge.right]:
            return False
        sets.union(edge.left, edge.right)
    return True


def spanning_trees_containing(forest: LabeledForest) -> list[LabeledForest]:
    """Every spanning tree of K_{m,n} that contains `forest`, in key order."""
    index = forest.component_index()
    bridges = [
        edge for edge in forest.shape.all_edges() if index[edge.left] != index[edge.right]
    ]
    missing = forest.shape.tree_size - len(forest.edges)
    trees = [
        LabeledForest(forest.shape, forest.edges | frozenset(extra))
        for extra in combinations(bridges, missing)
        if is_acyclic(forest.edges | frozenset(extra))
    ]
    return sorted(trees, key=lambda t: t.key)


def right_degree_sequence(graph: BipartiteSubgraph) -> tuple[int, ...]:
    counts = Counter(edge.j for edge in graph.edges)
    return tuple(counts.get(j, 0) for j in range(1, graph.shape.n + 1))


@dataclass(frozen=True)
class RootedTreeView:
    """
    A spanning tree hung from w_n.

    `parent` maps every vertex to its parent (None for w_n); `left_count`
    maps every vertex v to l(T_v), the number of left vertices in the
    subtree below and including v.
    """

    tree: LabeledForest
    parent: Mapping[Vertex, Vertex | None]
    left_count: Mapping[Vertex, int]
    order: tuple[Vertex, ...]

    @property
    def root(self) -> Vertex:
        return right(self.tree.shape.n)

    def children(self, vertex: Vertex) -> list[Vertex]:
        kids = [v for v in self.order if self.parent[v] == vertex]
        return sorted(kids)

    def right_is_parent(self, edge: Edge) -> bool:
        """True when w_j is the parent of u_i along this tree edge."""
        if edge not in self.tree:
            raise ValueError(f"{edge!r} is not a tree edge")
        return self.parent[edge.left] == edge.right

    def subtree_left_count(self, edge: Edge) -> int:
        """l(T_v) for the child endpoint v of a tree edge."""
        child = edge.left if self.right_is_parent(edge) else edge.right
        return self.left_count[child]


def root_at_wn(tree: BipartiteSubgraph) -> RootedTreeView:
    if not isinstance(tree, LabeledForest):
        raise NotSpanningTree(f"{tree!r} contains a cycle")
    if not tree.is_spanning_tree or tree.component_count != 1:
        raise NotSpanningTree(f"{tree!r} is not a spanning tree")

    root = right(tree.shape.n)
    parent: dict[Vertex, Vertex | None] = {root: None}
    order = [root]
    for child, pred in nx.bfs_predecessors(tree.graph, root, sort_neighbors=sorted):
        parent[child] = pred
        order.append(child)

    counts = {v: (1 if v[0] == LEFT else 0) for v in order}
    for v in reversed(order):
        if parent[v] is not None:
            counts[parent[v]] += counts[v]
    return RootedTreeView(tree=tree, parent=parent, left_count=counts, order=tuple(order))


@dataclass(frozen=True)
class RayMatrix:
    """An m x n {-1, 0, 1} matrix with zero line sums, supported on one even cycle."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, 'entries', entries)
        if any(x not in (-1, 0, 1) for row in entries for x in row):
            raise ValueError(f"Ray entries must lie in {{-1, 0, 1}}: {entries}")
        if any(sum(row) for row in entries) or any(sum(col) for col in zip(*entries)):
            raise ValueError(f"Ray line sums must vanish: {entries}")

    @property
    def shape(self) -> BipartiteShape:
        return BipartiteShape(len(self.entries), len(self.entries[0]))

    @property
    def support(self) -> frozenset[Edge]:
        return frozenset(
            Edge(i, j)
            for i, row in enumerate(self.entries, start=1)
            for j, x in enumerate(row, start=1)
            if x
        )

    def __neg__(self) -> 'RayMatrix':
        return RayMatrix(tuple(tuple(-x for x in row) for row in self.entries))

    def __lt__(self, other: 'RayMatrix') -> bool:
        return self.entries < other.entries

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


class CycleKind(models.TextChoices):
    NONE = 'none', 'No cycle'
    UNIQUE = 'unique', 'Unique cycle'
    MULTIPLE = 'multiple', 'More than one cycle'


class UnionCycle(NamedTuple):
    kind: CycleKind
    edges: tuple[Edge, ...] = ()


def _classify_cycles(graph: BipartiteSubgraph) -> UnionCycle:
    rank = graph.cyclomatic_number
    if rank == 0:
        return UnionCycle(CycleKind.NONE)
    if rank > 1:
        return UnionCycle(CycleKind.MULTIPLE)

    (nodes,) = nx.cycle_basis(graph.graph)
    ring = [Edge.between(a, b) for a, b in zip(nodes, nodes[1:] + nodes[:1])]
    # start at the smallest edge, walk towards its smaller neighbour
    start = ring.index(min(ring))
    ring = ring[start:] + ring[:start]
    if len(ring) > 2 and ring[-1] < ring[1]:
        ring = [ring[0]] + ring[:0:-1]
    return UnionCycle(CycleKind.UNIQUE, tuple(ring))


def unique_cycle_of_union(first: BipartiteSubgraph, second: BipartiteSubgraph) -> UnionCycle:
    """Classify the cycles of the union of two subgraphs of one K_{m,n}."""
    if first.shape != second.shape:
        raise InvalidShape("Subgraphs of different complete bipartite graphs")
    union = BipartiteSubgraph(first.shape, first.edges | second.edges)
    return _classify_cycles(union)


def cyc(forest: LabeledForest, augmenting: Iterable[Edge]) -> RayMatrix:
    """
    The ray of the cycle that `augmenting` closes in `forest`.

    The cycle is listed from the smallest augmenting edge; edges at even
    distance from it get +1 and the others -1, so every augmenting edge
    carries +1.
    """
    augmenting = frozenset(augmenting)
    shape = forest.shape
    for edge in augmenting:
        if not shape.contains(edge):
            raise InvalidShape(f"{edge!r} lies outside K_{shape.m},{shape.n}")
    if augmenting & forest.edges:
        overlap = sorted(augmenting & forest.edges)
        raise InvalidAugmentation(
            AugmentationFailure.EDGE_IN_FOREST, f"{overlap} already in the forest"
        )

    found = _classify_cycles(BipartiteSubgraph(shape, forest.edges | augmenting))
    if found.kind == CycleKind.NONE:
        raise InvalidAugmentation(AugmentationFailure.NO_CYCLE)
    if found.kind == CycleKind.MULTIPLE:
        raise InvalidAugmentation(AugmentationFailure.MULTI_CYCLE)

    ring = list(found.edges)
    missing = augmenting.difference(ring)
    if missing:
        raise InvalidAugmentation(
            AugmentationFailure.EDGE_OFF_CYCLE, f"{sorted(missing)} not on the cycle"
        )

    start = ring.index(min(augmenting))
    position = {edge: (idx - start) % len(ring) for idx, edge in enumerate(ring)}
    if any(position[edge] % 2 for edge in augmenting):
        raise InvalidAugmentation(AugmentationFailure.ODD_DISTANCE)

    entries = [[0] * shape.n for _ in range(shape.m)]
    for edge, pos in position.items():
        entries[edge.i - 1][edge.j - 1] = 1 if pos % 2 == 0 else -1
    return RayMatrix(tuple(tuple(row) for row in entries))


class Augmentation(NamedTuple):
    edges: tuple[Edge, ...]
    ray: RayMatrix


def enumerate_augmentations(forest: LabeledForest) -> list[Augmentation]:
    """
    All edge sets satisfying the cycle-ray conditions for `forest`, with rays.

    For spanning trees this is one augmentation per non-tree edge. For
    forests with c components the search runs over edge subsets of size at
    most c; multi-edge candidates must join distinct components in a ring.
    """
    outside = [edge for edge in forest.shape.all_edges() if edge not in forest.edges]
    if forest.is_spanning_tree:
        return [Augmentation((edge,), cyc(forest, (edge,))) for edge in outside]

    comp = forest.component_index()
    crossing = [edge for edge in outside if comp[edge.left] != comp[edge.right]]
    found = []
    for size in range(1, forest.component_count + 1):
        pool = outside if size == 1 else crossing
        for candidate in combinations(pool, size):
            if size > 1:
                touched = Counter()
                for edge in candidate:
                    touched[comp[edge.left]] += 1
                    touched[comp[edge.right]] += 1
                if len(touched) != size or any(v != 2 for v in touched.values()):
                    continue
            try:
                ray = cyc(forest, candidate)
            except InvalidAugmentation:
                continue
            found.append(Augmentation(tuple(sorted(candidate)), ray))
    logger.debug(f"{len(found)} augmentations for {forest!r}")
    return found
