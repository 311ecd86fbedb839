"""
API views for django_transport_polytopes.
"""

import logging

from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from django_transport_polytopes.api.permissions import WithinDeskScale
from django_transport_polytopes.api.serializers import CentralSpecSerializer, RunRequestSerializer
from django_transport_polytopes.polytopes.central import central_counts
from django_transport_polytopes.polytopes.exceptions import (
    InvariantViolation,
    TransportPolytopeError,
    VerificationFailure,
)
from django_transport_polytopes.services.pipeline import get_polytope_service

logger = logging.getLogger(__name__)


def error_response(exc: TransportPolytopeError) -> Response:
    """
    Map a domain error to an HTTP response.

    Args:
        exc: The error raised by the service

    Returns:
        500 for an invariant violation, 409 with the counterexample for a
        failed verification, 400 otherwise
    """
    if isinstance(exc, InvariantViolation):
        logger.exception(f"internal invariant violated: {exc}")
        return Response(
            {'error': type(exc).__name__, 'detail': str(exc)},
            status=status.HTTP_500_INTERNAL_SERVER_ERROR,
        )
    if isinstance(exc, VerificationFailure):
        return Response(
            {'ok': False, 'check': exc.check, 'counterexample': exc.counterexample},
            status=status.HTTP_409_CONFLICT,
        )
    return Response(
        {'error': type(exc).__name__, 'detail': str(exc)},
        status=status.HTTP_400_BAD_REQUEST,
    )


class RunView(APIView):
    """
    Run one pipeline and return its report.

    POST /api/run/
    """

    permission_classes = [WithinDeskScale]

    def post(self, request):
        serializer = RunRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)

        try:
            report = get_polytope_service().run(serializer.to_run_config())
        except TransportPolytopeError as exc:
            return error_response(exc)
        return Response(report)


class CentralCountsView(APIView):
    """
    Vertex and maximum vertex counts of central kn x n polytopes.

    GET /api/central/{k}/{n}/counts/
    """

    permission_classes = [WithinDeskScale]

    def get(self, request, k, n):
        serializer = CentralSpecSerializer(data={'k': k, 'n': n, 'a': 1})
        serializer.is_valid(raise_exception=True)
        return Response(central_counts(k, n).to_json())
