"""
Ehrhart polynomials and volumes from an MGF.

Substituting z = exp(-s c) into each unimodular term and reading off the
constant term in s gives, for a direction c that pairs to nonzero values
with every ray,

    i(P, t) = sum_k t^k / k! * sum_i sign_i (-<c, v_i>)^k td_{d-k}(a_i) / prod_j a_ij

where a_ij = <c, r_ij> and td_j is the degree-j part of
prod_i x_i h / (1 - exp(-x_i h)).
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from django_transport_polytopes.polytopes.exceptions import (
    DirectionExhausted,
    PoleDirection,
)
from django_transport_polytopes.polytopes.graph import BipartiteShape
from django_transport_polytopes.polytopes.mgf import MgfExpression
from django_transport_polytopes.polytopes.rational import format_rational

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def todd_series(degree: int) -> tuple[Fraction, ...]:
    """Coefficients of x / (1 - exp(-x)) up to x^degree: 1, 1/2, 1/12, 0, -1/720, ..."""
    coeffs = [Fraction(1)]
    for k in range(1, degree + 1):
        if k == 1:
            # x / (1 - exp(-x)) uses B_1 = +1/2
            bernoulli = Fraction(1, 2)
        else:
            value = sympy.bernoulli(k)
            bernoulli = Fraction(int(value.p), int(value.q))
        coeffs.append(bernoulli / math.factorial(k))
    return tuple(coeffs)


@dataclass(frozen=True)
class ToddEvaluator:
    """Truncated products of Todd series at a fixed degree."""

    degree: int

    @property
    def series(self) -> tuple[Fraction, ...]:
        return todd_series(self.degree)

    def values(self, xs: Sequence) -> list[Fraction]:
        product = [Fraction(1)] + [Fraction(0)] * self.degree
        for x in xs:
            x = Fraction(x)
            factor = [b * x**k for k, b in enumerate(self.series)]
            product = [
                sum((product[a] * factor[j - a] for a in range(j + 1)), Fraction(0))
                for j in range(self.degree + 1)
            ]
        return product


def todd_values(xs: Sequence, degree: int | None = None) -> list[Fraction]:
    """td_0 .. td_degree evaluated at xs; degree defaults to len(xs)."""
    return ToddEvaluator(len(xs) if degree is None else degree).values(xs)


@dataclass(frozen=True)
class DirectionVector:
    entries: tuple[tuple[Fraction, ...], ...]
    base: int | None = None

    def pair(self, matrix) -> Fraction:
        return sum(
            (Fraction(c) * x for c_row, row in zip(self.entries, matrix) for c, x in zip(c_row, row)),
            Fraction(0),
        )

    def is_admissible(self, expr: MgfExpression) -> bool:
        return all(self.pair(ray) != 0 for ray in expr.rays)


def moment_direction(shape: BipartiteShape, base: int) -> DirectionVector:
    """c(i, j) = base^((i-1) n + (j-1))."""
    entries = tuple(
        tuple(Fraction(base) ** (i * shape.n + j) for j in range(shape.n)) for i in range(shape.m)
    )
    return DirectionVector(entries, base)


def pick_direction(expr: MgfExpression, max_bases: int = 25) -> DirectionVector:
    for index in range(1, max_bases + 1):
        direction = moment_direction(expr.shape, int(sympy.prime(index)))
        if direction.is_admissible(expr):
            logger.info(f"direction base {direction.base} pairs nonzero with every ray")
            return direction
    raise DirectionExhausted(f"No admissible moment direction among the first {max_bases} primes")


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Coefficients in ascending powers of the dilation t."""

    coeffs: tuple[Fraction, ...]
    dim: int

    def __post_init__(self):
        coeffs = tuple(Fraction(x) for x in self.coeffs)
        if len(coeffs) != self.dim + 1:
            raise ValueError(f"Expected {self.dim + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, 'coeffs', coeffs)

    def __call__(self, t) -> Fraction:
        value = Fraction(0)
        for coeff in reversed(self.coeffs):
            value = value * t + coeff
        return value

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    @property
    def normalized_volume(self) -> Fraction:
        return math.factorial(self.dim) * self.leading

    def to_json(self) -> dict:
        return {
            'ehrhart': [format_rational(x) for x in self.coeffs],
            'dim': self.dim,
            'leading': format_rational(self.leading),
            'normalized_volume': format_rational(self.normalized_volume),
        }

    def pretty(self) -> str:
        parts = []
        for k in range(self.dim, -1, -1):
            coeff = self.coeffs[k]
            if coeff:
                parts.append(f"({coeff})" + ('' if k == 0 else 't' if k == 1 else f"t^{k}"))
        return ' + '.join(parts) or '0'


@dataclass(frozen=True)
class VolumeReport:
    dim: int
    leading: Fraction
    normalized_volume: Fraction
    direction_base: int | None = None

    def to_json(self) -> dict:
        return {
            'dim': self.dim,
            'leading': format_rational(self.leading),
            'normalized_volume': format_rational(self.normalized_volume),
            'direction_base': self.direction_base,
        }


def _pairings(expr: MgfExpression, direction: DirectionVector):
    for term_index, term in enumerate(expr.terms):
        pairs = [direction.pair(ray) for ray in term.rays]
        if any(a == 0 for a in pairs):
            raise PoleDirection(f"Direction pairs to zero with a ray of term {term_index}")
        yield term, direction.pair(term.apex), pairs


def ehrhart_from_mgf(expr: MgfExpression, direction: DirectionVector) -> EhrhartPolynomial:
    """
    Ehrhart polynomial of the polytope whose lattice points `expr` enumerates.

    Args:
        expr: A signed sum of simplicial cones of common dimension d
        direction: A moment direction pairing to nonzero with every ray

    Returns:
        The polynomial with coefficients for t^0 .. t^d

    Raises:
        PoleDirection: If `direction` pairs to zero with some ray
        MixedDimension: If the terms carry different ray counts
    """
    d = expr.dimension
    if not expr.terms:
        raise ValueError("Cannot take the Ehrhart polynomial of an empty expression")
    evaluator = ToddEvaluator(d)
    sums = [Fraction(0)] * (d + 1)
    for term, apex, pairs in _pairings(expr, direction):
        todd = evaluator.values(pairs)
        scale = Fraction(term.sign) / math.prod(pairs)
        for k in range(d + 1):
            sums[k] += scale * (-apex) ** k * todd[d - k]
    coeffs = tuple(s / math.factorial(k) for k, s in enumerate(sums))
    return EhrhartPolynomial(coeffs, d)


def normalized_volume(expr: MgfExpression, direction: DirectionVector) -> VolumeReport:
    """Leading Ehrhart coefficient and d! times it, without the lower terms."""
    d = expr.dimension
    if not expr.terms:
        raise ValueError("Cannot take the volume of an empty expression")
    total = sum(
        (Fraction(term.sign) * (-apex) ** d / math.prod(pairs) for term, apex, pairs in _pairings(expr, direction)),
        Fraction(0),
    )
    leading = total / math.factorial(d)
    return VolumeReport(d, leading, total, direction.base)
