"""
Universal perturbation of a transportation polytope.

For margins (r, c) with K the lcm of all denominators and 0 < t < 1/(K m),
the margins r(t) = (r_i - t), c(t) = (c_1, ..., c_{n-1}, c_n - m t) give a
non-degenerate polytope whose vertex trees do not depend on t. Every
perturbed vertex converges to a vertex of T(r, c) as t -> 0, and the
trees are grouped by that limit.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from django_transport_polytopes.polytopes.exceptions import (
    InvalidMargins,
    InvariantViolation,
    NotCentral,
)
from django_transport_polytopes.polytopes.graph import (
    BipartiteShape,
    Edge,
    LabeledForest,
    RootedTreeView,
    cyc,
    root_at_wn,
)
from django_transport_polytopes.polytopes.polytope import (
    Margins,
    TransportMatrix,
    VertexRecord,
    solve_on_forest,
)
from django_transport_polytopes.polytopes.rational import denominator_lcm, parse_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PerturbationSpec:
    base: Margins
    K: int
    t0: Fraction

    def __post_init__(self):
        object.__setattr__(self, 't0', parse_rational(self.t0))
        self._check(self.t0)

    @property
    def shape(self) -> BipartiteShape:
        return self.base.shape

    @property
    def upper_bound(self) -> Fraction:
        """Every t in (0, 1/(K m)) is admissible."""
        return Fraction(1, self.K * self.base.m)

    def _check(self, t: Fraction):
        if not 0 < t < self.upper_bound:
            raise InvalidMargins(f"Perturbation {t} outside (0, {self.upper_bound})")

    def margins_at(self, t=None) -> Margins:
        t = self.t0 if t is None else parse_rational(t)
        self._check(t)
        m = self.base.m
        r = tuple(x - t for x in self.base.r)
        c = self.base.c[:-1] + (self.base.c[-1] - m * t,)
        return Margins(r, c)

    @property
    def perturbed(self) -> Margins:
        return self.margins_at(self.t0)

    def to_json(self) -> dict:
        return {
            'base': self.base.to_json(),
            'K': self.K,
            't0': str(self.t0),
            'perturbed': self.perturbed.to_json(),
        }


def make_spec(margins: Margins) -> PerturbationSpec:
    """
    The universal perturbation of `margins`.

    Args:
        margins: Positive rational margins

    Returns:
        A spec with K the lcm of all margin denominators and t0 = 1/(2 K m)
    """
    K = denominator_lcm(margins.r + margins.c)
    return PerturbationSpec(base=margins, K=K, t0=Fraction(1, 2 * K * margins.m))


def northwest_corner(margins: Margins) -> LabeledForest:
    """Greedy row-major starting basis; a spanning tree for non-degenerate margins."""
    r, c = list(margins.r), list(margins.c)
    i = j = 0
    edges = []
    while i < margins.m and j < margins.n:
        edges.append(Edge(i + 1, j + 1))
        step = min(r[i], c[j])
        r[i] -= step
        c[j] -= step
        if r[i] == 0 and c[j] == 0 and (i, j) != (margins.m - 1, margins.n - 1):
            raise InvariantViolation(f"Northwest corner hit a degenerate step at ({i + 1}, {j + 1})")
        if r[i] == 0:
            i += 1
        else:
            j += 1
    return LabeledForest(margins.shape, edges)


def pivot_search(margins: Margins) -> dict[LabeledForest, TransportMatrix]:
    """
    All vertices of a non-degenerate polytope by breadth-first pivoting.

    From each tree, every non-tree edge e is entered along cyc(T, e) until
    the smallest entry on a -1 position drops to zero; that edge leaves.
    """
    start = northwest_corner(margins)
    found = {start: solve_on_forest(margins, start)}
    queue = deque([start])
    while queue:
        tree = queue.popleft()
        matrix = found[tree]
        for entering in margins.shape.all_edges():
            if entering in tree:
                continue
            ray = cyc(tree, (entering,))
            decreasing = [
                edge for edge in tree.sorted_edges if ray.entries[edge.i - 1][edge.j - 1] < 0
            ]
            theta = min(matrix[edge] for edge in decreasing)
            leaving = [edge for edge in decreasing if matrix[edge] == theta]
            if len(leaving) != 1:
                raise InvariantViolation(
                    f"Pivot on {entering!r} from {tree!r} has tied leaving edges {leaving}"
                )
            neighbour = LabeledForest(margins.shape, (tree.edges - {leaving[0]}) | {entering})
            if neighbour in found:
                continue
            found[neighbour] = TransportMatrix(
                tuple(
                    tuple(x + theta * sign for x, sign in zip(row, ray_row))
                    for row, ray_row in zip(matrix.entries, ray.entries)
                )
            )
            queue.append(neighbour)
        logger.debug(f"pivoted around {tree!r}, {len(found)} trees so far")
    return found


@dataclass(frozen=True)
class PerturbedVertex:
    tree: LabeledForest
    rooted: RootedTreeView
    matrix_at_t0: TransportMatrix
    limit: TransportMatrix

    def __hash__(self):
        return hash(self.tree)

    def __eq__(self, other):
        return isinstance(other, PerturbedVertex) and self.tree == other.tree

    def to_json(self) -> dict:
        return {
            'tree': self.tree.to_json()['edges'],
            'matrix_at_t0': self.matrix_at_t0.to_json(),
            'limit': self.limit.to_json(),
        }


def limit_vertex(tree: LabeledForest, spec: PerturbationSpec, matrix_at_t0=None) -> TransportMatrix:
    """
    Closed-form limit of the perturbed vertex on `tree` as t -> 0.

    With T rooted at w_n, an entry on an edge where w_j is the parent of u_i
    is rounded up to the next multiple of 1/K, and one where u_i is the
    parent of w_j is rounded down. Off-tree entries are zero.
    """
    if matrix_at_t0 is None:
        matrix_at_t0 = solve_on_forest(spec.perturbed, tree)
    rooted = root_at_wn(tree)
    K = spec.K
    entries = [[Fraction(0)] * spec.shape.n for _ in range(spec.shape.m)]
    for edge in tree.edges:
        scaled = K * matrix_at_t0[edge]
        rounded = math.ceil(scaled) if rooted.right_is_parent(edge) else math.floor(scaled)
        entries[edge.i - 1][edge.j - 1] = Fraction(rounded, K)
    return TransportMatrix(tuple(tuple(row) for row in entries))


def matrix_at(vertex: PerturbedVertex, t) -> TransportMatrix:
    """Reconstruct M_T(t) from the limit and the subtree left counts."""
    t = parse_rational(t)
    entries = [list(row) for row in vertex.limit.entries]
    for edge in vertex.tree.edges:
        shift = vertex.rooted.subtree_left_count(edge) * t
        if vertex.rooted.right_is_parent(edge):
            entries[edge.i - 1][edge.j - 1] -= shift
        else:
            entries[edge.i - 1][edge.j - 1] += shift
    return TransportMatrix(tuple(tuple(row) for row in entries))


def enumerate_perturbed_vertices(spec: PerturbationSpec) -> list[PerturbedVertex]:
    found = pivot_search(spec.perturbed)
    vertices = []
    for tree in sorted(found, key=lambda t: t.key):
        vertices.append(
            PerturbedVertex(
                tree=tree,
                rooted=root_at_wn(tree),
                matrix_at_t0=found[tree],
                limit=limit_vertex(tree, spec, found[tree]),
            )
        )
    logger.info(f"perturbed polytope at t0={spec.t0} has {len(vertices)} vertices")
    return vertices


def vertex_tree_set(spec: PerturbationSpec, t=None) -> frozenset[LabeledForest]:
    """VertAux(r(t), c(t)); the same set for every admissible t."""
    return frozenset(pivot_search(spec.margins_at(t)))


def group_by_limit(
    spec: PerturbationSpec, perturbed: list[PerturbedVertex] | None = None
) -> dict[VertexRecord, tuple[PerturbedVertex, ...]]:
    """
    Partition the perturbed vertices by the base vertex they converge to.

    A tree belongs to the unique base vertex whose auxiliary graph it
    contains; zero or several candidates is an internal error.
    """
    if perturbed is None:
        perturbed = enumerate_perturbed_vertices(spec)
    bases = sorted({VertexRecord.of(pv.limit) for pv in perturbed})
    groups: dict[VertexRecord, list[PerturbedVertex]] = {v: [] for v in bases}
    for pv in perturbed:
        owners = [v for v in bases if v.aux.edges <= pv.tree.edges]
        if len(owners) != 1:
            raise InvariantViolation(
                f"Tree {pv.tree!r} contains {len(owners)} base auxiliary graphs"
            )
        if owners[0].matrix != pv.limit:
            raise InvariantViolation(f"Tree {pv.tree!r} converges outside its group")
        groups[owners[0]].append(pv)
    for vertex, members in groups.items():
        logger.debug(f"PertAux of {vertex.matrix.entries} has {len(members)} trees")
    return {v: tuple(members) for v, members in groups.items()}


def max_vertex_formula(k: int, n: int) -> int:
    """(kn)! / (k!)^n * n^(n-2) * k^(n-1), the vertex maximum for order kn x n."""
    vertices = math.factorial(k * n) // math.factorial(k) ** n
    trees = n ** (n - 2) if n >= 2 else 1
    return vertices * trees * k ** (n - 1)


class MaxVertexCheck(NamedTuple):
    count: int
    expected: int | None
    ok: bool


def max_vertex_count_check(spec: PerturbationSpec) -> MaxVertexCheck:
    base = spec.base
    if not base.is_central:
        raise NotCentral(f"Margins r={base.r}, c={base.c} are not central")
    count = len(pivot_search(spec.perturbed))
    if base.m % base.n:
        return MaxVertexCheck(count, None, True)
    expected = max_vertex_formula(base.m // base.n, base.n)
    return MaxVertexCheck(count, expected, count == expected)
