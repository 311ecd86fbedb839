"""
Pipeline service shared by the management command and the REST API.

Each command maps to one method returning a JSON-ready report. The service
is the only layer that reads the TRANSPORT_POLYTOPES settings; the
polytope modules receive them as keyword arguments.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from django.db import models

from django_transport_polytopes.conf import get_settings
from django_transport_polytopes.polytopes.central import (
    CentralSpec,
    central_counts,
    central_mgf,
    enumerate_matchings,
)
from django_transport_polytopes.polytopes.ehrhart import (
    EhrhartPolynomial,
    ehrhart_from_mgf,
    normalized_volume,
    pick_direction,
)
from django_transport_polytopes.polytopes.exceptions import (
    InvalidRunConfig,
    InvariantViolation,
    VerificationFailure,
)
from django_transport_polytopes.polytopes.mgf import (
    MgfExpression,
    evaluate,
    polytope_mgf,
    sample_points,
)
from django_transport_polytopes.polytopes.oracle import (
    brute_vertices,
    count_table,
    lattice_monomial_sum,
)
from django_transport_polytopes.polytopes.perturb import (
    enumerate_perturbed_vertices,
    group_by_limit,
    make_spec,
)
from django_transport_polytopes.polytopes.polytope import (
    Margins,
    TransportMatrix,
    enumerate_vertices,
    feasible_cone_rays,
    is_nondegenerate,
)
from django_transport_polytopes.polytopes.rational import format_matrix

logger = logging.getLogger(__name__)


class Command(models.TextChoices):
    VERTICES = 'vertices', 'Vertices'
    CONES = 'cones', 'Feasible cones'
    PERTURB = 'perturb', 'Perturbation'
    MGF = 'mgf', 'Generating function'
    EHRHART = 'ehrhart', 'Ehrhart polynomial'
    VOLUME = 'volume', 'Normalized volume'
    CENTRAL = 'central', 'Central fast path'
    VERIFY = 'verify', 'Oracle verification'


class CentralEmit(models.TextChoices):
    COUNTS = 'counts', 'Vertex counts'
    VERTICES = 'vertices', 'Vertices'
    MGF = 'mgf', 'Generating function'
    EHRHART = 'ehrhart', 'Ehrhart polynomial'
    VOLUME = 'volume', 'Normalized volume'


@dataclass(frozen=True)
class RunConfig:
    """One pipeline invocation: a command plus exactly one input mode."""

    command: str
    margins: Optional[Margins] = None
    central: Optional[CentralSpec] = None
    emit: str = CentralEmit.COUNTS
    seed: Optional[int] = None

    def __post_init__(self):
        if self.command not in Command.values:
            raise InvalidRunConfig(f"Unknown command {self.command!r}")
        if (self.margins is None) == (self.central is None):
            raise InvalidRunConfig("Give exactly one of margins or a central (k, n, a) triple")
        if self.command == Command.CENTRAL and self.central is None:
            raise InvalidRunConfig("The central command needs (k, n, a)")
        if self.emit not in CentralEmit.values:
            raise InvalidRunConfig(f"Unknown central output {self.emit!r}")

    @property
    def input_margins(self) -> Margins:
        return self.margins if self.margins is not None else self.central.margins()


def matrix_key(matrix: TransportMatrix) -> str:
    return ';'.join(','.join(row) for row in format_matrix(matrix.entries))


class TransportPolytopeService:
    """
    Runs the polytope pipelines and shapes their reports.

    Usage:
        service = get_polytope_service()
        report = service.run(RunConfig(command='vertices', margins=margins))
    """

    def __init__(self, config: Optional[dict] = None):
        self._config = config

    @property
    def config(self) -> dict:
        return self._config if self._config is not None else get_settings()

    def run(self, run: RunConfig) -> dict:
        """
        Dispatch one pipeline invocation.

        Args:
            run: The command with its margins or central triple

        Returns:
            The JSON-ready report the command prints and the API returns

        Raises:
            TransportPolytopeError: Malformed input or a domain failure
            VerificationFailure: `verify` found a mismatch
            InvariantViolation: An internal check failed
        """
        logger.info(f"running {run.command} on {'central' if run.central else 'margins'} input")
        if run.command == Command.CENTRAL:
            return self.central(run.central, run.emit)
        if run.command == Command.VERIFY:
            return self.verify(run.input_margins, central=run.central, seed=run.seed)
        if run.command in (Command.MGF, Command.EHRHART, Command.VOLUME):
            expr = self.expression(run.input_margins, central=run.central)
            if run.command == Command.MGF:
                return self.mgf_report(expr)
            if run.command == Command.EHRHART:
                return self.ehrhart(expr)
            return self.volume(expr)
        handler = {
            Command.VERTICES: self.vertices,
            Command.CONES: self.cones,
            Command.PERTURB: self.perturb,
        }[run.command]
        return handler(run.input_margins)

    def vertices(self, margins: Margins) -> dict:
        """
        Vertices of T(r, c) with their auxiliary graphs.

        Args:
            margins: Positive rational margins with equal totals

        Returns:
            Margins, degeneracy flag, vertex count and one record per vertex
        """
        vertices = enumerate_vertices(margins)
        return {
            'margins': margins.to_json(),
            'nondegenerate': is_nondegenerate(margins),
            'count': len(vertices),
            'vertices': [v.to_json() for v in vertices],
        }

    def cones(self, margins: Margins) -> dict:
        vertices = enumerate_vertices(margins)
        return {
            'margins': margins.to_json(),
            'cones': [
                {
                    'vertex': v.matrix.to_json(),
                    'rays': [ray.to_json() for ray in feasible_cone_rays(v)],
                }
                for v in vertices
            ],
        }

    def perturb(self, margins: Margins) -> dict:
        """
        Perturbed vertex trees and their grouping by limit vertex.

        Args:
            margins: Positive rational margins with equal totals

        Returns:
            The perturbation, the perturbed vertices, and for each limit
            vertex the indices of the trees converging to it
        """
        spec = make_spec(margins)
        perturbed = enumerate_perturbed_vertices(spec)
        index = {pv.tree: idx for idx, pv in enumerate(perturbed)}
        groups = group_by_limit(spec, perturbed)
        return {
            'spec': spec.to_json(),
            'perturbed_vertices': [pv.to_json() for pv in perturbed],
            'groups': {
                matrix_key(vertex.matrix): [index[pv.tree] for pv in members]
                for vertex, members in groups.items()
            },
        }

    def expression(self, margins: Margins, central: Optional[CentralSpec] = None) -> MgfExpression:
        """The MGF of the input, through the central fast path when possible."""
        if central is not None:
            return central_mgf(central)
        return polytope_mgf(margins)

    def mgf_report(self, expr: MgfExpression) -> dict:
        return {'terms_count': len(expr), 'dim': expr.dimension, **expr.to_json()}

    def ehrhart_polynomial(self, expr: MgfExpression) -> tuple[EhrhartPolynomial, int]:
        direction = pick_direction(expr, max_bases=self.config['DIRECTION_MAX_BASES'])
        polynomial = ehrhart_from_mgf(expr, direction)
        if polynomial.coeffs[0] != 1 or polynomial.leading <= 0:
            raise InvariantViolation(f"Ehrhart polynomial {polynomial.pretty()} is malformed")
        return polynomial, direction.base

    def ehrhart(self, expr: MgfExpression) -> dict:
        polynomial, base = self.ehrhart_polynomial(expr)
        return {**polynomial.to_json(), 'direction_base': base}

    def volume(self, expr: MgfExpression) -> dict:
        direction = pick_direction(expr, max_bases=self.config['DIRECTION_MAX_BASES'])
        return normalized_volume(expr, direction).to_json()

    def central(self, spec: CentralSpec, emit: str = CentralEmit.COUNTS) -> dict:
        """
        Fast path for the central kn x n polytope.

        Args:
            spec: The (k, n, a) triple
            emit: Which report to build; counts need no enumeration

        Returns:
            The report for `emit`
        """
        if emit == CentralEmit.COUNTS:
            return central_counts(spec.k, spec.n).to_json()
        report = {'central': spec.to_json()}
        if emit == CentralEmit.VERTICES:
            matchings = enumerate_matchings(spec.k, spec.n)
            report['vertices'] = [
                [[spec.a * x for x in row] for row in matching.entries] for matching in matchings
            ]
            report['count'] = len(matchings)
        elif emit == CentralEmit.MGF:
            report.update(self.mgf_report(central_mgf(spec)))
        elif emit == CentralEmit.EHRHART:
            report.update(self.ehrhart(central_mgf(spec)))
        else:
            report.update(self.volume(central_mgf(spec)))
        return report

    def verify(
        self,
        margins: Margins,
        central: Optional[CentralSpec] = None,
        seed: Optional[int] = None,
    ) -> dict:
        """
        Cross-check the pipelines against the oracle, stopping at the first
        mismatch with a VerificationFailure.

        Args:
            margins: The polytope to check
            central: Triple to build the MGF from through the fast path
            seed: Seed for the evaluation points; EVALUATION_SEED when None

        Returns:
            {"ok": True, "seed": ..., "checks": [...]} with one entry per
            check that ran

        Raises:
            VerificationFailure: On the first mismatch, carrying the check
                name and the counterexample
        """
        seed = self.config['EVALUATION_SEED'] if seed is None else seed
        checks = []

        if margins.m * margins.n <= self.config['ORACLE_MAX_EDGES']:
            fast = [v.matrix for v in enumerate_vertices(margins)]
            slow = [v.matrix for v in brute_vertices(margins, max_edges=self.config['ORACLE_MAX_EDGES'])]
            if fast != slow:
                missing = sorted(set(slow) - set(fast)) or sorted(set(fast) - set(slow))
                raise VerificationFailure('vertices', {'vertex': missing[0].to_json()})
            checks.append({'check': 'vertices', 'ok': True, 'count': len(fast)})
        else:
            checks.append({'check': 'vertices', 'ok': True, 'skipped': 'above oracle limit'})

        if not margins.is_integral:
            return {'ok': True, 'seed': seed, 'checks': checks}

        expr = polytope_mgf(margins)
        points = sample_points(expr, count=self.config['EVALUATION_POINTS'], seed=seed)
        with ThreadPoolExecutor(max_workers=self.config['WORKERS']) as pool:
            values = list(pool.map(lambda p: (evaluate(expr, p), lattice_monomial_sum(margins, p)), points))
        for point, (value, expected) in zip(points, values):
            if value != expected:
                raise VerificationFailure(
                    'mgf',
                    {'point': format_matrix(point), 'mgf': str(value), 'oracle': str(expected)},
                )
        checks.append({'check': 'mgf', 'ok': True, 'points': len(points)})

        if central is not None:
            fast_expr = central_mgf(central)
            for point in points:
                if evaluate(fast_expr, point) != evaluate(expr, point):
                    raise VerificationFailure('central', {'point': format_matrix(point)})
            checks.append({'check': 'central', 'ok': True})

        polynomial, _ = self.ehrhart_polynomial(expr)
        table = count_table(margins, range(polynomial.dim + 2))
        for t, count in table.points:
            if polynomial(t) != count:
                raise VerificationFailure(
                    'ehrhart', {'t': t, 'ehrhart': str(polynomial(t)), 'oracle': count}
                )
        checks.append({'check': 'ehrhart', 'ok': True, 'counts': table.to_json()})

        return {'ok': True, 'seed': seed, 'checks': checks}


# Singleton instance
_polytope_service: Optional[TransportPolytopeService] = None


def get_polytope_service() -> TransportPolytopeService:
    """Get the singleton polytope service instance."""
    global _polytope_service
    if _polytope_service is None:
        _polytope_service = TransportPolytopeService()
    return _polytope_service
