"""
Services for Django Transport Polytopes.
"""

from django_transport_polytopes.services.pipeline import (
    CentralEmit,
    Command,
    RunConfig,
    TransportPolytopeService,
    get_polytope_service,
)

__all__ = [
    'CentralEmit',
    'Command',
    'RunConfig',
    'TransportPolytopeService',
    'get_polytope_service',
]
