"""
Settings for django_transport_polytopes.

Defaults can be overridden in Django settings via the TRANSPORT_POLYTOPES
dictionary.

Example settings.py configuration:

    TRANSPORT_POLYTOPES = {
        'DEFAULT_FORMAT': 'text',
        'EVALUATION_SEED': 7,
        'API_MAX_CELLS': 12,
    }

The worker count used by the `verify` pipeline can also be set through the
TRANSPORT_POLYTOPES_WORKERS environment variable, which wins over WORKERS.
"""

import os

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

WORKERS_ENV = 'TRANSPORT_POLYTOPES_WORKERS'

DEFAULT_SETTINGS = {
    # Output format of the management command: 'json' or 'text'
    'DEFAULT_FORMAT': 'json',

    # Seed and number of random points for MGF evaluation checks
    'EVALUATION_SEED': 20240611,
    'EVALUATION_POINTS': 5,

    # Moment directions tried by the Ehrhart computation (one per prime base)
    'DIRECTION_MAX_BASES': 25,

    # Largest m * n the brute-force vertex oracle accepts
    'ORACLE_MAX_EDGES': 16,

    # Largest m * n the HTTP API accepts
    'API_MAX_CELLS': 16,

    # Largest margin total (sum of r) the HTTP API accepts
    'API_MAX_MARGIN_TOTAL': 64,

    # Threads used by `verify`
    'WORKERS': 1,
}

POSITIVE_INTEGER_KEYS = (
    'EVALUATION_POINTS',
    'DIRECTION_MAX_BASES',
    'ORACLE_MAX_EDGES',
    'API_MAX_CELLS',
    'API_MAX_MARGIN_TOTAL',
    'WORKERS',
)


def get_settings() -> dict:
    """
    Get the merged settings.

    Merges user settings from TRANSPORT_POLYTOPES with defaults, then
    applies the worker-count environment variable.
    """
    merged = {**DEFAULT_SETTINGS, **getattr(settings, 'TRANSPORT_POLYTOPES', {})}

    workers = os.environ.get(WORKERS_ENV)
    if workers:
        try:
            merged['WORKERS'] = int(workers)
        except ValueError as exc:
            raise ImproperlyConfigured(f"{WORKERS_ENV} must be an integer, got {workers!r}") from exc

    return merged


def validate_settings(config: dict | None = None) -> dict:
    config = get_settings() if config is None else config

    unknown = set(config) - set(DEFAULT_SETTINGS)
    if unknown:
        raise ImproperlyConfigured(f"Unknown TRANSPORT_POLYTOPES keys: {sorted(unknown)}")

    if config['DEFAULT_FORMAT'] not in ('json', 'text'):
        raise ImproperlyConfigured(
            f"DEFAULT_FORMAT must be 'json' or 'text', got {config['DEFAULT_FORMAT']!r}"
        )
    if not isinstance(config['EVALUATION_SEED'], int):
        raise ImproperlyConfigured("EVALUATION_SEED must be an integer")
    for key in POSITIVE_INTEGER_KEYS:
        value = config[key]
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ImproperlyConfigured(f"{key} must be a positive integer, got {value!r}")
    return config
