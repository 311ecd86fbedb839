"""
Tests for the REST API.
"""

import pytest
from django.urls import reverse
from rest_framework.test import APIClient

from django_transport_polytopes.polytopes.exceptions import InvariantViolation
from django_transport_polytopes.services import pipeline


@pytest.fixture
def api():
    return APIClient()


@pytest.fixture
def run_url():
    return reverse('transport_polytopes:run')


def test_vertices(api, run_url):
    response = api.post(
        run_url,
        {'command': 'vertices', 'margins': {'r': [1, 1, 2], 'c': ['1', '1', '2/1']}},
        format='json',
    )
    assert response.status_code == 200
    assert response.data['count'] == 7
    assert response.data['nondegenerate'] is False
    assert response.data['vertices'][0]['matrix'] == [
        ['0/1', '0/1', '1/1'],
        ['0/1', '0/1', '1/1'],
        ['1/1', '1/1', '0/1'],
    ]


def test_central_counts_through_run(api, run_url):
    response = api.post(
        run_url,
        {'command': 'central', 'central': {'k': 1, 'n': 3, 'a': 1}, 'emit': 'counts'},
        format='json',
    )
    assert response.status_code == 200
    assert response.data == {'vertices': 6, 'max_vertices': 18}


def test_ehrhart_of_central_input(api, run_url):
    response = api.post(
        run_url, {'command': 'ehrhart', 'central': {'k': 1, 'n': 2, 'a': 1}}, format='json'
    )
    assert response.status_code == 200
    assert response.data['ehrhart'] == ['1/1', '1/1']


def test_verify(api, run_url):
    response = api.post(
        run_url, {'command': 'verify', 'margins': {'r': [1, 1], 'c': [1, 1]}}, format='json'
    )
    assert response.status_code == 200
    assert response.data['ok'] is True
    assert response.data['seed'] == 11
    assert [check['check'] for check in response.data['checks']] == ['vertices', 'mgf', 'ehrhart']


@pytest.mark.parametrize(
    'payload',
    [
        {'command': 'vertices', 'margins': {'r': [1, 1], 'c': [1, 2]}},
        {'command': 'vertices', 'margins': {'r': [0.5, 1.5], 'c': [1, 1]}},
        {'command': 'vertices'},
        {
            'command': 'vertices',
            'margins': {'r': [1], 'c': [1]},
            'central': {'k': 1, 'n': 1, 'a': 1},
        },
        {'command': 'central', 'margins': {'r': [1], 'c': [1]}},
        {'command': 'shuffle', 'margins': {'r': [1], 'c': [1]}},
        {'command': 'central', 'central': {'k': 0, 'n': 2, 'a': 1}},
    ],
)
def test_malformed_requests(api, run_url, payload):
    assert api.post(run_url, payload, format='json').status_code == 400


def test_domain_error_is_a_bad_request(api, run_url):
    response = api.post(
        run_url, {'command': 'mgf', 'margins': {'r': ['1/2', '1/2'], 'c': [1]}}, format='json'
    )
    assert response.status_code == 400
    assert response.data['error'] == 'NonIntegral'


def test_too_large(api, run_url):
    response = api.post(
        run_url, {'command': 'vertices', 'margins': {'r': [1] * 5, 'c': [1] * 5}}, format='json'
    )
    assert response.status_code == 403


@pytest.mark.parametrize(
    'payload',
    [
        {'command': 'verify', 'margins': {'r': [10**6, 10**6], 'c': [10**6, 10**6]}},
        {'command': 'verify', 'margins': {'r': ['129/2'], 'c': [64, '1/2']}},
        {'command': 'ehrhart', 'central': {'k': 1, 'n': 2, 'a': 40}},
    ],
)
def test_margin_total_too_large(api, run_url, payload):
    assert api.post(run_url, payload, format='json').status_code == 403


def test_margin_total_limit_is_configurable(api, run_url, settings):
    settings.TRANSPORT_POLYTOPES = {'EVALUATION_SEED': 11, 'API_MAX_MARGIN_TOTAL': 1}
    payload = {'command': 'vertices', 'margins': {'r': [1, 1], 'c': [1, 1]}}
    assert api.post(run_url, payload, format='json').status_code == 403
    settings.TRANSPORT_POLYTOPES = {'EVALUATION_SEED': 11, 'API_MAX_MARGIN_TOTAL': 2}
    assert api.post(run_url, payload, format='json').status_code == 200


def test_verification_failure_is_a_conflict(api, run_url, monkeypatch):
    monkeypatch.setattr(pipeline, 'brute_vertices', lambda margins, max_edges: [])
    response = api.post(
        run_url, {'command': 'verify', 'margins': {'r': [1, 1], 'c': [1, 1]}}, format='json'
    )
    assert response.status_code == 409
    assert response.data['ok'] is False
    assert response.data['check'] == 'vertices'


def test_invariant_violation_is_a_server_error(api, run_url, monkeypatch):
    def broken(margins):
        raise InvariantViolation("pivot tie")

    monkeypatch.setattr(pipeline, 'enumerate_vertices', broken)
    response = api.post(
        run_url, {'command': 'vertices', 'margins': {'r': [1, 1], 'c': [1, 1]}}, format='json'
    )
    assert response.status_code == 500
    assert response.data['error'] == 'InvariantViolation'


class TestCentralCountsView:
    def test_counts(self, api):
        url = reverse('transport_polytopes:central_counts', kwargs={'k': 1, 'n': 4})
        response = api.get(url)
        assert response.status_code == 200
        assert response.data == {'vertices': 24, 'max_vertices': 384}

    def test_too_large(self, api):
        url = reverse('transport_polytopes:central_counts', kwargs={'k': 2, 'n': 3})
        assert api.get(url).status_code == 403

    def test_rejects_zero(self, api):
        url = reverse('transport_polytopes:central_counts', kwargs={'k': 0, 'n': 3})
        assert api.get(url).status_code == 400
