"""
API module for django_transport_polytopes.
"""
