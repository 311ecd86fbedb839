"""
Django app configuration for django_transport_polytopes.
"""

from django.apps import AppConfig


class TransportPolytopesConfig(AppConfig):
    """Configuration for the Transport Polytopes app."""

    name = "django_transport_polytopes"
    verbose_name = "Transport Polytopes"

    def ready(self):
        """Fail fast on a bad TRANSPORT_POLYTOPES setting."""
        from django_transport_polytopes.conf import validate_settings

        validate_settings()
