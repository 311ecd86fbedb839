"""
Management command running the transportation polytope pipelines.

Examples:

    python manage.py transport vertices --margins ex.json
    python manage.py transport ehrhart --central 1 3 1
    python manage.py transport central --k 1 --n 3 --a 1 --emit counts
    python manage.py transport verify --margins ex.json --seed 7 --format text

Exit status is 1 for malformed input, 2 when `verify` finds a mismatch
and 3 for an internal invariant violation.
"""

import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from django_transport_polytopes.api.serializers import MarginsSerializer
from django_transport_polytopes.conf import get_settings
from django_transport_polytopes.polytopes.central import CentralSpec
from django_transport_polytopes.polytopes.exceptions import (
    InvariantViolation,
    TransportPolytopeError,
    VerificationFailure,
)
from django_transport_polytopes.services.pipeline import (
    CentralEmit,
    Command as PipelineCommand,
    RunConfig,
    get_polytope_service,
)

logger = logging.getLogger(__name__)

EXIT_MALFORMED = 1
EXIT_VERIFICATION = 2
EXIT_INTERNAL = 3


def _is_matrix(value) -> bool:
    return (
        isinstance(value, list)
        and bool(value)
        and all(isinstance(row, list) and row and not isinstance(row[0], (list, dict)) for row in value)
    )


def render_text(value, indent: int = 0) -> list[str]:
    """Plain-text report: nested keys, matrices as aligned rows."""
    pad = '  ' * indent
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {item}")
        return lines
    if _is_matrix(value):
        cells = [[str(x) for x in row] for row in value]
        width = max(len(cell) for row in cells for cell in row)
        return [pad + '[ ' + '  '.join(cell.rjust(width) for cell in row) + ' ]' for row in cells]
    if isinstance(value, list):
        lines = []
        for idx, item in enumerate(value):
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}- [{idx}]")
                lines.extend(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
        return lines
    return [f"{pad}{value}"]


class Command(BaseCommand):
    help = "Vertices, cones, generating functions and Ehrhart polynomials of transportation polytopes"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        for name in PipelineCommand.values:
            if name == PipelineCommand.CENTRAL:
                continue
            sub = subparsers.add_parser(name, help=PipelineCommand(name).label)
            source = sub.add_mutually_exclusive_group(required=True)
            source.add_argument('--margins', help='JSON file {"r": ["p/q", ...], "c": [...]}')
            source.add_argument(
                '--central',
                nargs=3,
                type=int,
                metavar=('K', 'N', 'A'),
                help='Central kn x n polytope with row sums A',
            )
            self._add_common(sub)

        central = subparsers.add_parser('central', help=PipelineCommand.CENTRAL.label)
        central.add_argument('--k', type=int, required=True)
        central.add_argument('--n', type=int, required=True)
        central.add_argument('--a', type=int, default=1)
        central.add_argument('--emit', choices=CentralEmit.values, default=CentralEmit.COUNTS)
        self._add_common(central)

    def _add_common(self, sub):
        sub.add_argument('--format', dest='output_format', choices=['json', 'text'], default=None)
        sub.add_argument('--seed', type=int, default=None, help='Seed for evaluation points')

    def handle(self, *args, **options):
        run = self._run_config(options)
        output_format = options.get('output_format') or get_settings()['DEFAULT_FORMAT']

        try:
            report = get_polytope_service().run(run)
        except VerificationFailure as exc:
            self._emit({'ok': False, 'check': exc.check, 'counterexample': exc.counterexample}, output_format)
            raise CommandError(str(exc), returncode=EXIT_VERIFICATION)
        except InvariantViolation as exc:
            logger.exception(f"internal invariant violated: {exc}")
            raise CommandError(f"Internal error: {exc}", returncode=EXIT_INTERNAL)
        except TransportPolytopeError as exc:
            raise CommandError(str(exc), returncode=EXIT_MALFORMED)
        except Exception as exc:
            logger.exception(f"unexpected failure in {run.command}: {exc}")
            raise CommandError(f"Internal error: {exc}", returncode=EXIT_INTERNAL) from exc

        self._emit(report, output_format)

    def _emit(self, report: dict, output_format: str):
        if output_format == 'text':
            self.stdout.write('\n'.join(render_text(report)))
        else:
            self.stdout.write(json.dumps(report, indent=2))

    def _run_config(self, options) -> RunConfig:
        try:
            if options['subcommand'] == PipelineCommand.CENTRAL:
                spec = CentralSpec(options['k'], options['n'], options['a'])
                return RunConfig(
                    command=PipelineCommand.CENTRAL,
                    central=spec,
                    emit=options['emit'],
                    seed=options['seed'],
                )
            if options.get('central'):
                return RunConfig(
                    command=options['subcommand'],
                    central=CentralSpec(*options['central']),
                    seed=options['seed'],
                )
            return RunConfig(
                command=options['subcommand'],
                margins=self._load_margins(options['margins']),
                seed=options['seed'],
            )
        except TransportPolytopeError as exc:
            raise CommandError(str(exc), returncode=EXIT_MALFORMED)

    def _load_margins(self, path: str):
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CommandError(f"Cannot read margins file {path}: {exc}", returncode=EXIT_MALFORMED)

        serializer = MarginsSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"Invalid margins: {serializer.errors}", returncode=EXIT_MALFORMED)
        return serializer.validated_data['margins']
