"""
Django Transport Polytopes - exact combinatorics of transportation polytopes.

A Django app that computes vertices, feasible cones, multivariate generating
functions, Ehrhart polynomials and volumes of transportation polytopes in
exact rational arithmetic, with a fast path for central kn x n polytopes
and a brute-force oracle for verification. Exposed as a management command
and a small REST API.
"""

__version__ = "0.1.0"

default_app_config = "django_transport_polytopes.apps.TransportPolytopesConfig"
