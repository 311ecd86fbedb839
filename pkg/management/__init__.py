"""Management commands for django_transport_polytopes."""
