"""
Tests for the `transport` management command.
"""

import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from django_transport_polytopes.management.commands.transport import (
    EXIT_INTERNAL,
    EXIT_MALFORMED,
    EXIT_VERIFICATION,
    render_text,
)
from django_transport_polytopes.polytopes.exceptions import InvariantViolation
from django_transport_polytopes.services import pipeline


@pytest.fixture
def margins_file(tmp_path):
    def write(r, c):
        path = tmp_path / 'margins.json'
        path.write_text(json.dumps({'r': r, 'c': c}))
        return str(path)

    return write


def run(*args) -> str:
    out = StringIO()
    call_command('transport', *args, stdout=out)
    return out.getvalue()


def test_vertices_json(margins_file):
    report = json.loads(run('vertices', '--margins', margins_file([1, 1, 2], [1, 1, 2])))
    assert report['count'] == 7
    assert report['margins'] == {'r': ['1/1', '1/1', '2/1'], 'c': ['1/1', '1/1', '2/1']}


def test_vertices_text(margins_file):
    text = run('vertices', '--margins', margins_file([1, 1], [1, 1]), '--format', 'text')
    assert 'count: 2' in text
    assert '[ 1/1  0/1 ]' in text


def test_central_counts():
    assert json.loads(run('central', '--k', '1', '--n', '3')) == {'vertices': 6, 'max_vertices': 18}


def test_central_ehrhart():
    report = json.loads(run('central', '--k', '1', '--n', '3', '--emit', 'ehrhart'))
    assert report['ehrhart'] == ['1/1', '9/4', '15/8', '3/4', '1/8']
    assert report['normalized_volume'] == '3/1'


def test_ehrhart_of_central_input():
    report = json.loads(run('ehrhart', '--central', '1', '3', '1'))
    assert report['ehrhart'] == ['1/1', '9/4', '15/8', '3/4', '1/8']
    assert report['dim'] == 4


def test_perturb_groups(margins_file):
    report = json.loads(run('perturb', '--margins', margins_file([1, 1, 2], [1, 1, 2])))
    assert len(report['perturbed_vertices']) == 18
    assert sorted(len(members) for members in report['groups'].values()) == [2, 2, 2, 2, 3, 3, 4]
    assert len(report['groups']['1/1,0/1,0/1;0/1,1/1,0/1;0/1,0/1,2/1']) == 3


def test_verify_is_deterministic(margins_file):
    path = margins_file([1, 1, 2], [1, 1, 2])
    first = run('verify', '--margins', path, '--seed', '5')
    assert json.loads(first)['ok'] is True
    assert run('verify', '--margins', path, '--seed', '5') == first


class TestExitCodes:
    def test_missing_file(self, tmp_path):
        with pytest.raises(CommandError) as excinfo:
            run('vertices', '--margins', str(tmp_path / 'missing.json'))
        assert excinfo.value.returncode == EXIT_MALFORMED

    def test_unbalanced_margins(self, margins_file):
        with pytest.raises(CommandError) as excinfo:
            run('vertices', '--margins', margins_file([1, 1], [1, 2]))
        assert excinfo.value.returncode == EXIT_MALFORMED

    def test_bad_central_triple(self):
        with pytest.raises(CommandError) as excinfo:
            run('central', '--k', '0', '--n', '3')
        assert excinfo.value.returncode == EXIT_MALFORMED

    def test_rational_margins_for_mgf(self, margins_file):
        with pytest.raises(CommandError) as excinfo:
            run('mgf', '--margins', margins_file(['1/2', '1/2'], [1]))
        assert excinfo.value.returncode == EXIT_MALFORMED

    def test_verification_failure(self, margins_file, monkeypatch):
        monkeypatch.setattr(pipeline, 'brute_vertices', lambda margins, max_edges: [])
        out = StringIO()
        with pytest.raises(CommandError) as excinfo:
            call_command('transport', 'verify', '--margins', margins_file([1, 1], [1, 1]), stdout=out)
        assert excinfo.value.returncode == EXIT_VERIFICATION
        report = json.loads(out.getvalue())
        assert report['ok'] is False
        assert report['check'] == 'vertices'

    def test_internal_error(self, margins_file, monkeypatch):
        def broken(margins):
            raise InvariantViolation("pivot tie")

        monkeypatch.setattr(pipeline, 'enumerate_vertices', broken)
        with pytest.raises(CommandError) as excinfo:
            run('vertices', '--margins', margins_file([1, 1], [1, 1]))
        assert excinfo.value.returncode == EXIT_INTERNAL

    def test_unexpected_error_is_internal(self, margins_file, monkeypatch):
        def broken(margins):
            raise ValueError("Matrix has non-integral entries")

        monkeypatch.setattr(pipeline, 'enumerate_vertices', broken)
        with pytest.raises(CommandError) as excinfo:
            run('vertices', '--margins', margins_file([1, 1], [1, 1]))
        assert excinfo.value.returncode == EXIT_INTERNAL
        assert 'non-integral' in str(excinfo.value)


def test_render_text_nests_keys_and_matrices():
    lines = render_text({'dim': 1, 'vertex': [['1/1', '0/1'], ['0/1', '1/1']]})
    assert lines == ['dim: 1', 'vertex:', '  [ 1/1  0/1 ]', '  [ 0/1  1/1 ]']
