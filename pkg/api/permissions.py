"""
DRF permission classes for the polytope API.

Every pipeline is exponential in the matrix size, and the lattice oracle
behind `verify` also grows with the margin total, so requests are limited
to desk-scale polytopes on both counts.
"""

from fractions import Fraction

from rest_framework import permissions
from rest_framework.request import Request
from rest_framework.views import APIView

from django_transport_polytopes.conf import get_settings
from django_transport_polytopes.polytopes.rational import parse_rational

UNREADABLE = (AttributeError, KeyError, TypeError, ValueError)


def requested_cells(request: Request, view: APIView) -> int | None:
    """m * n of the polytope a request asks for, or None if it cannot be read."""
    try:
        if 'k' in view.kwargs:
            k, n = int(view.kwargs['k']), int(view.kwargs['n'])
            return k * n * n
        data = request.data
        if data.get('margins'):
            return len(data['margins']['r']) * len(data['margins']['c'])
        if data.get('central'):
            k, n = int(data['central']['k']), int(data['central']['n'])
            return k * n * n
    except UNREADABLE:
        return None
    return None


def requested_total(request: Request, view: APIView) -> Fraction | None:
    """
    Sum of the row margins a request asks for.

    Args:
        request: The incoming request.
        view: The view handling it. Count-only routes carry no margins.

    Returns:
        The total as a Fraction, or None when there is none to read.
    """
    if 'k' in view.kwargs:
        return None
    try:
        data = request.data
        if data.get('margins'):
            return sum((parse_rational(x) for x in data['margins']['r']), Fraction(0))
        if data.get('central'):
            central = data['central']
            return Fraction(int(central.get('a', 1)) * int(central['k']) * int(central['n']))
    except UNREADABLE:
        return None
    return None


class WithinDeskScale(permissions.BasePermission):
    """
    Reject polytopes with more than API_MAX_CELLS matrix entries or a
    margin total above API_MAX_MARGIN_TOTAL.
    """

    message = "The requested polytope is larger than this server computes."

    def has_permission(self, request: Request, view: APIView) -> bool:
        config = get_settings()
        # unreadable bodies are left to the serializer
        cells = requested_cells(request, view)
        if cells is not None and cells > config['API_MAX_CELLS']:
            return False
        total = requested_total(request, view)
        return total is None or total <= config['API_MAX_MARGIN_TOTAL']
