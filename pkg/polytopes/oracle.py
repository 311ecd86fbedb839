"""
Brute-force ground truth for the polytope pipelines.

Everything here enumerates directly (lattice points row by row, vertices
over all spanning forests) and is only meant for desk-scale instances.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import sympy

from django_transport_polytopes.polytopes.ehrhart import EhrhartPolynomial
from django_transport_polytopes.polytopes.exceptions import (
    Infeasible,
    InconsistentTable,
    NonIntegral,
    NotUnique,
    OracleTooLarge,
)
from django_transport_polytopes.polytopes.graph import BipartiteShape, LabeledForest, is_acyclic
from django_transport_polytopes.polytopes.mgf import monomial
from django_transport_polytopes.polytopes.polytope import Margins, VertexRecord, solve_on_forest

logger = logging.getLogger(__name__)

LatticePoint = tuple[tuple[int, ...], ...]


def _integral(margins: Margins) -> tuple[list[int], list[int]]:
    if not margins.is_integral:
        raise NonIntegral(f"Lattice points need integral margins, got r={margins.r}, c={margins.c}")
    return [int(x) for x in margins.r], [int(x) for x in margins.c]


def _compositions(total: int, bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Ways to write total as an ordered sum bounded entrywise by `bounds`."""
    if len(bounds) == 1:
        if total <= bounds[0]:
            yield (total,)
        return
    rest = sum(bounds[1:])
    for first in range(max(0, total - rest), min(total, bounds[0]) + 1):
        for tail in _compositions(total - first, bounds[1:]):
            yield (first,) + tail


def brute_lattice_points(margins: Margins) -> list[LatticePoint]:
    rows, cols = _integral(margins)
    points = []

    def fill(index: int, budget: tuple[int, ...], prefix: list):
        if index == len(rows) - 1:
            points.append(tuple(prefix) + (budget,))
            return
        for row in _compositions(rows[index], budget):
            fill(index + 1, tuple(b - x for b, x in zip(budget, row)), prefix + [row])

    fill(0, tuple(cols), [])
    return sorted(points)


def count_lattice_points(margins: Margins) -> int:
    """Number of lattice points, memoized on the remaining column budget."""
    rows, cols = _integral(margins)

    @lru_cache(maxsize=None)
    def count(index: int, budget: tuple[int, ...]) -> int:
        if index == len(rows) - 1:
            return 1
        return sum(
            count(index + 1, tuple(sorted(b - x for b, x in zip(budget, row))))
            for row in _compositions(rows[index], budget)
        )

    return count(0, tuple(sorted(cols)))


def lattice_monomial_sum(margins: Margins, point: Sequence[Sequence]) -> Fraction:
    """Sum of z^alpha over all lattice points alpha: the expanded MGF."""
    point = tuple(tuple(Fraction(z) for z in row) for row in point)
    return sum((monomial(point, alpha) for alpha in brute_lattice_points(margins)), Fraction(0))


class CountTable(NamedTuple):
    points: tuple[tuple[int, int], ...]

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.points]


def count_table(margins: Margins, ts: Iterable[int]) -> CountTable:
    """Lattice counts of the dilations t * T(r, c); t = 0 counts the origin."""
    pairs = []
    for t in ts:
        pairs.append((t, 1 if t == 0 else count_lattice_points(margins.scaled(t))))
    return CountTable(tuple(pairs))


def spanning_forests(shape: BipartiteShape, min_edges: int | None = None) -> Iterator[LabeledForest]:
    """Acyclic edge sets covering every vertex, by increasing size."""
    low = max(shape.m, shape.n) if min_edges is None else min_edges
    edges = shape.all_edges()
    for size in range(low, shape.tree_size + 1):
        for subset in combinations(edges, size):
            covered = {e.left for e in subset} | {e.right for e in subset}
            if len(covered) == shape.vertex_count and is_acyclic(subset):
                yield LabeledForest(shape, subset)


def brute_vertices(margins: Margins, max_edges: int = 16) -> list[VertexRecord]:
    shape = margins.shape
    if shape.m * shape.n > max_edges:
        raise OracleTooLarge(f"K_{shape.m},{shape.n} has more than {max_edges} edges")
    found = set()
    for forest in spanning_forests(shape):
        try:
            found.add(solve_on_forest(margins, forest))
        except (Infeasible, NotUnique):
            continue
    vertices = sorted(VertexRecord.of(matrix) for matrix in found)
    logger.debug(f"oracle found {len(vertices)} vertices of order {shape.m}x{shape.n}")
    return vertices


def interpolate(table: CountTable | Sequence[tuple[int, int]], d: int) -> EhrhartPolynomial:
    """
    Degree <= d interpolant through the first d + 1 distinct points;
    every further point must lie on it.
    """
    pairs = table.points if isinstance(table, CountTable) else tuple(table)
    distinct = {}
    for t, count in pairs:
        distinct.setdefault(t, count)
    if len(distinct) < d + 1:
        raise ValueError(f"Need {d + 1} distinct points, got {len(distinct)}")
    nodes = list(distinct.items())[: d + 1]

    t = sympy.Symbol('t')
    poly = sympy.Poly(sympy.interpolate(nodes, t), t)
    coeffs = [Fraction(0)] * (d + 1)
    for (power,), value in poly.terms():
        coeffs[power] = Fraction(int(value.p), int(value.q))
    result = EhrhartPolynomial(tuple(coeffs), d)

    for x, count in pairs:
        if result(x) != count:
            raise InconsistentTable(f"Point ({x}, {count}) is off the interpolant {result.pretty()}")
    return result
