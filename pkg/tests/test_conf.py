"""
Tests for the TRANSPORT_POLYTOPES settings layer.
"""

import pytest
from django.core.exceptions import ImproperlyConfigured

from django_transport_polytopes.conf import (
    DEFAULT_SETTINGS,
    WORKERS_ENV,
    get_settings,
    validate_settings,
)


def test_user_settings_override_defaults():
    config = get_settings()
    assert config['EVALUATION_SEED'] == 11
    assert config['DIRECTION_MAX_BASES'] == DEFAULT_SETTINGS['DIRECTION_MAX_BASES']


def test_project_settings_override(settings):
    settings.TRANSPORT_POLYTOPES = {'DEFAULT_FORMAT': 'text'}
    assert get_settings()['DEFAULT_FORMAT'] == 'text'


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, '4')
    assert get_settings()['WORKERS'] == 4


def test_workers_environment_must_be_an_integer(monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, 'many')
    with pytest.raises(ImproperlyConfigured):
        get_settings()


def test_defaults_are_valid():
    assert validate_settings(dict(DEFAULT_SETTINGS)) == DEFAULT_SETTINGS


@pytest.mark.parametrize(
    'override',
    [
        {'DEFAULT_FORMAT': 'yaml'},
        {'EVALUATION_SEED': '7'},
        {'WORKERS': 0},
        {'API_MAX_CELLS': True},
        {'API_MAX_MARGIN_TOTAL': -1},
        {'ORACLE_MAX_EDGES': 2.5},
        {'COLOR': 'blue'},
    ],
)
def test_invalid_settings(override):
    with pytest.raises(ImproperlyConfigured):
        validate_settings({**DEFAULT_SETTINGS, **override})
