"""
Multivariate generating functions of transportation polytopes.

An MGF is kept as a formal signed sum of unimodular cone terms

    sign * z^apex / prod_j (1 - z^ray_j)

over the mn variables z_ij, never expanded into monomials. Expressions
come from Brion's theorem: one term per vertex of a non-degenerate
polytope, or one term per perturbed vertex tree in general.
"""

import logging
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from django_transport_polytopes.polytopes.exceptions import (
    Degenerate,
    MixedDimension,
    NonIntegral,
    NotAVertex,
    PoleAt,
)
from django_transport_polytopes.polytopes.graph import BipartiteShape, LabeledForest, cyc
from django_transport_polytopes.polytopes.perturb import (
    PerturbationSpec,
    PerturbedVertex,
    enumerate_perturbed_vertices,
    group_by_limit,
    make_spec,
    pivot_search,
)
from django_transport_polytopes.polytopes.polytope import (
    Margins,
    VertexRecord,
    is_nondegenerate,
)

logger = logging.getLogger(__name__)

ExponentMatrix = tuple[tuple[int, ...], ...]

# Numerators and denominators of sampled evaluation points.
SAMPLE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)
SAMPLE_ATTEMPTS = 50


def _exponents(matrix) -> ExponentMatrix:
    return tuple(tuple(int(x) for x in row) for row in matrix)


@dataclass(frozen=True, order=True)
class MgfTerm:
    apex: ExponentMatrix
    rays: tuple[ExponentMatrix, ...] = ()
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"Term sign must be +1 or -1, got {self.sign}")
        rays = tuple(_exponents(ray) for ray in self.rays)
        if any(not any(x for row in ray for x in row) for ray in rays):
            raise ValueError("A cone ray cannot be the zero matrix")
        object.__setattr__(self, 'apex', _exponents(self.apex))
        object.__setattr__(self, 'rays', rays)

    @property
    def dimension(self) -> int:
        return len(self.rays)

    def shifted(self, apex: ExponentMatrix) -> 'MgfTerm':
        return MgfTerm(apex=apex, rays=self.rays, sign=self.sign)

    def to_json(self) -> dict:
        return {
            'sign': self.sign,
            'apex': [list(row) for row in self.apex],
            'rays': [[list(row) for row in ray] for ray in self.rays],
        }


@dataclass(frozen=True)
class MgfExpression:
    shape: BipartiteShape
    terms: tuple[MgfTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def dimension(self) -> int:
        """Common ray count of all terms."""
        counts = {term.dimension for term in self.terms}
        if len(counts) > 1:
            raise MixedDimension(f"Terms carry {sorted(counts)} rays")
        return counts.pop() if counts else 0

    @property
    def rays(self) -> list[ExponentMatrix]:
        return [ray for term in self.terms for ray in term.rays]

    def to_json(self) -> dict:
        return {
            'm': self.shape.m,
            'n': self.shape.n,
            'terms': [term.to_json() for term in self.terms],
        }

    def pretty(self) -> str:
        def power(matrix: ExponentMatrix) -> str:
            return 'z^[' + '; '.join(' '.join(str(x) for x in row) for row in matrix) + ']'

        lines = []
        for term in self.terms:
            denominator = ''.join(f"(1 - {power(ray)})" for ray in term.rays) or '1'
            sign = '+' if term.sign > 0 else '-'
            lines.append(f"{sign} {power(term.apex)} / {denominator}")
        return '\n'.join(lines)


def unimodular_cone_mgf(rays: Iterable, shape: BipartiteShape | None = None) -> MgfTerm:
    """The term 1 / prod (1 - z^r) of a unimodular cone with apex at the origin."""
    rays = [getattr(ray, 'entries', ray) for ray in rays]
    if shape is None:
        if not rays:
            raise ValueError("Shape is needed for a cone without rays")
        shape = BipartiteShape(len(rays[0]), len(rays[0][0]))
    return MgfTerm(apex=shape.zero_matrix(), rays=tuple(rays))


def tree_term(tree: LabeledForest, apex) -> MgfTerm:
    """Unimodular cone of a spanning tree, one cycle ray per non-tree edge, shifted to `apex`."""
    rays = [cyc(tree, (edge,)).entries for edge in tree.shape.all_edges() if edge not in tree]
    return unimodular_cone_mgf(rays, tree.shape).shifted(_exponents(apex))


def _require_integral(margins: Margins):
    if not margins.is_integral:
        raise NonIntegral(f"Integral margins required, got r={margins.r}, c={margins.c}")


def polytope_mgf_nondegenerate(margins: Margins) -> MgfExpression:
    """One vertex-cone term per vertex; only valid for non-degenerate margins."""
    _require_integral(margins)
    if not is_nondegenerate(margins):
        raise Degenerate(f"T(r, c) with r={margins.r}, c={margins.c} is degenerate")
    found = pivot_search(margins)
    terms = sorted(
        tree_term(tree, matrix.integer_entries()) for tree, matrix in found.items()
    )
    return MgfExpression(margins.shape, tuple(terms))


def polytope_mgf(margins: Margins, spec: PerturbationSpec | None = None) -> MgfExpression:
    """
    Generating function of the lattice points of T(r, c).

    Args:
        margins: Integral margins
        spec: Perturbation to take the trees from; `make_spec(margins)` when None

    Returns:
        One term per perturbed vertex tree, with apex at the tree's limit vertex

    Raises:
        NonIntegral: If a margin is not an integer
    """
    _require_integral(margins)
    spec = spec or make_spec(margins)
    terms = sorted(
        tree_term(pv.tree, pv.limit.integer_entries())
        for pv in enumerate_perturbed_vertices(spec)
    )
    logger.info(f"MGF of order {margins.m}x{margins.n} has {len(terms)} terms")
    return MgfExpression(margins.shape, tuple(terms))


LimitGroups = Mapping[VertexRecord, tuple[PerturbedVertex, ...]]


def _pert_aux(vertex: VertexRecord, spec: PerturbationSpec, groups: LimitGroups | None):
    if groups is None:
        groups = group_by_limit(spec)
    if vertex not in groups:
        raise NotAVertex(f"{vertex.matrix.entries} is not a vertex of T(r, c)")
    return groups[vertex]


def feasible_cone_mgf(
    vertex: VertexRecord, spec: PerturbationSpec, groups: LimitGroups | None = None
) -> MgfExpression:
    """
    Signed sum of the unimodular cones of the trees converging to `vertex`.

    Args:
        vertex: A vertex of the base polytope.
        spec: The perturbation the trees come from.
        groups: Output of `group_by_limit(spec)`, computed once by callers
            that need several cones. Recomputed when omitted.

    Returns:
        An expression with every apex at the origin.
    """
    zero = spec.shape.zero_matrix()
    terms = sorted(tree_term(pv.tree, zero) for pv in _pert_aux(vertex, spec, groups))
    return MgfExpression(spec.shape, tuple(terms))


def tangent_cone_mgf(
    vertex: VertexRecord, spec: PerturbationSpec, groups: LimitGroups | None = None
) -> MgfExpression:
    """Feasible cone terms shifted to the (integral) vertex itself."""
    apex = vertex.matrix.integer_entries()
    cone = feasible_cone_mgf(vertex, spec, groups)
    return MgfExpression(spec.shape, tuple(term.shifted(apex) for term in cone.terms))


def monomial(point: Sequence[Sequence[Fraction]], exponents: ExponentMatrix) -> Fraction:
    value = Fraction(1)
    for point_row, exp_row in zip(point, exponents):
        for z, e in zip(point_row, exp_row):
            if e:
                value *= Fraction(z) ** e
    return value


def evaluate(expr: MgfExpression, point: Sequence[Sequence]) -> Fraction:
    """Exact value of the expression at a point with nonzero rational entries."""
    point = tuple(tuple(Fraction(z) for z in row) for row in point)
    if any(z == 0 for row in point for z in row):
        raise ValueError("Evaluation points need nonzero entries")
    total = Fraction(0)
    for term_index, term in enumerate(expr.terms):
        value = term.sign * monomial(point, term.apex)
        for ray_index, ray in enumerate(term.rays):
            denominator = 1 - monomial(point, ray)
            if denominator == 0:
                raise PoleAt(term_index, ray_index)
            value /= denominator
        total += value
    return total


def dilate(expr: MgfExpression, t: int) -> MgfExpression:
    if isinstance(t, bool) or not isinstance(t, int) or t < 1:
        raise ValueError(f"Dilation factor must be a positive integer, got {t!r}")
    terms = tuple(
        term.shifted(tuple(tuple(t * x for x in row) for row in term.apex))
        for term in expr.terms
    )
    return MgfExpression(expr.shape, terms)


def _is_pole(expr: MgfExpression, point) -> bool:
    return any(monomial(point, ray) == 1 for ray in expr.rays)


def sample_points(expr: MgfExpression, count: int = 5, seed: int = 0) -> list[tuple]:
    """Seeded rational points p/q over small primes that avoid every pole."""
    rng = random.Random(seed)
    m, n = expr.shape.m, expr.shape.n
    points = []
    for _ in range(count):
        for attempt in range(SAMPLE_ATTEMPTS):
            point = tuple(
                tuple(
                    Fraction(rng.choice(SAMPLE_PRIMES), rng.choice(SAMPLE_PRIMES))
                    for _ in range(n)
                )
                for _ in range(m)
            )
            if not _is_pole(expr, point):
                break
            logger.warning(f"sampled point hits a pole, retrying (attempt {attempt + 1})")
        else:
            raise PoleAt(-1, -1)
        points.append(point)
    return points
