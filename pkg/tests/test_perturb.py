"""
Tests for the universal perturbation and the grouping of perturbed vertices.
"""

from collections import Counter
from fractions import Fraction

import pytest

from conftest import margins, matrix
from django_transport_polytopes.polytopes.exceptions import InvalidMargins, NotCentral
from django_transport_polytopes.polytopes.graph import spanning_trees_containing
from django_transport_polytopes.polytopes.perturb import (
    PerturbationSpec,
    enumerate_perturbed_vertices,
    group_by_limit,
    limit_vertex,
    make_spec,
    matrix_at,
    max_vertex_count_check,
    max_vertex_formula,
    northwest_corner,
    vertex_tree_set,
)
from django_transport_polytopes.polytopes.polytope import VertexRecord, is_nondegenerate


class TestMakeSpec:
    def test_integral_margins(self, margins_112):
        spec = make_spec(margins_112)
        assert spec.K == 1
        assert spec.t0 == Fraction(1, 6)
        assert spec.upper_bound == Fraction(1, 3)

    def test_rational_margins(self):
        spec = make_spec(margins(('1/2', '3/2'), (1, 1)))
        assert spec.K == 2
        assert spec.t0 == Fraction(1, 8)

    def test_perturbed_margins(self, margins_112):
        perturbed = make_spec(margins_112).perturbed
        t = Fraction(1, 6)
        assert perturbed.r == (1 - t, 1 - t, 2 - t)
        assert perturbed.c == (1, 1, 2 - 3 * t)
        assert is_nondegenerate(perturbed)

    @pytest.mark.parametrize('t', [0, Fraction(1, 3), Fraction(1, 2), -1])
    def test_rejects_inadmissible_t(self, margins_112, t):
        spec = make_spec(margins_112)
        with pytest.raises(InvalidMargins):
            spec.margins_at(t)

    def test_rejects_inadmissible_t0(self, margins_112):
        with pytest.raises(InvalidMargins):
            PerturbationSpec(base=margins_112, K=1, t0=Fraction(1, 2))


def test_northwest_corner_is_a_spanning_tree(margins_112):
    tree = northwest_corner(make_spec(margins_112).perturbed)
    assert tree.is_spanning_tree


class TestPerturbedVertices:
    def test_example_has_eighteen(self, margins_112):
        assert len(enumerate_perturbed_vertices(make_spec(margins_112))) == 18

    def test_every_tree_is_spanning(self, margins_112):
        for pv in enumerate_perturbed_vertices(make_spec(margins_112)):
            assert pv.tree.is_spanning_tree

    def test_limits_are_base_vertices(self, margins_112, vertices_112):
        limits = {pv.limit for pv in enumerate_perturbed_vertices(make_spec(margins_112))}
        assert limits == set(vertices_112)

    def test_first_tree_converges_to_diagonal(self, margins_112):
        first = enumerate_perturbed_vertices(make_spec(margins_112))[0]
        assert first.limit == matrix((1, 0, 0), (0, 1, 0), (0, 0, 2))

    def test_limit_vertex_recomputes_from_tree(self, margins_112):
        spec = make_spec(margins_112)
        for pv in enumerate_perturbed_vertices(spec):
            assert limit_vertex(pv.tree, spec) == pv.limit

    @pytest.mark.parametrize('t', [Fraction(1, 6), Fraction(1, 10), Fraction(1, 1000)])
    def test_reconstruction_matches_margins(self, margins_112, t):
        spec = make_spec(margins_112)
        for pv in enumerate_perturbed_vertices(spec):
            assert matrix_at(pv, t).satisfies(spec.margins_at(t))

    def test_reconstruction_at_t0(self, margins_112):
        spec = make_spec(margins_112)
        for pv in enumerate_perturbed_vertices(spec):
            assert matrix_at(pv, spec.t0) == pv.matrix_at_t0


@pytest.mark.parametrize(
    'r, c',
    [
        ((1, 1, 2), (1, 1, 2)),
        ((1, 1, 1), (1, 1, 1)),
        ((2, 2), (1, 1, 2)),
        (('1/2', '3/2'), (1, 1)),
        ((3, 1, 2), (2, 4)),
    ],
)
def test_vertex_trees_do_not_depend_on_t(r, c):
    spec = make_spec(margins(r, c))
    reference = vertex_tree_set(spec)
    for divisor in (3, 7, 50):
        assert vertex_tree_set(spec, spec.upper_bound / divisor) == reference


class TestGroupByLimit:
    def test_group_sizes(self, margins_112):
        groups = group_by_limit(make_spec(margins_112))
        assert sorted(len(members) for members in groups.values()) == [2, 2, 2, 2, 3, 3, 4]

    def test_named_groups(self, margins_112, vertices_112):
        groups = group_by_limit(make_spec(margins_112))
        assert len(groups[VertexRecord.of(vertices_112[0])]) == 3
        assert len(groups[VertexRecord.of(vertices_112[6])]) == 4

    def test_members_contain_the_base_support(self, margins_112):
        for vertex, members in group_by_limit(make_spec(margins_112)).items():
            candidates = set(spanning_trees_containing(vertex.aux))
            for pv in members:
                assert pv.tree in candidates
                assert pv.limit == vertex.matrix

    def test_groups_partition_the_trees(self):
        spec = make_spec(margins((2, 1, 1), (1, 1, 2)))
        perturbed = enumerate_perturbed_vertices(spec)
        members = [pv for group in group_by_limit(spec, perturbed).values() for pv in group]
        assert Counter(members) == Counter(perturbed)


class TestMaxVertexCount:
    @pytest.mark.parametrize(
        'r, c, expected',
        [
            ((1, 1, 1), (1, 1, 1), 18),
            ((1, 1, 1, 1), (2, 2), 12),
            ((1, 1), (1, 1), 2),
        ],
    )
    def test_central_counts_reach_the_formula(self, r, c, expected):
        check = max_vertex_count_check(make_spec(margins(r, c)))
        assert check.count == expected
        assert check.expected == expected
        assert check.ok

    def test_formula_values(self):
        assert max_vertex_formula(1, 3) == 18
        assert max_vertex_formula(1, 4) == 384
        assert max_vertex_formula(2, 2) == 12
        assert max_vertex_formula(3, 1) == 1

    def test_non_multiple_order_has_no_formula(self):
        check = max_vertex_count_check(make_spec(margins((2, 2, 2), (3, 3))))
        assert check.expected is None

    def test_rejects_non_central(self, margins_112):
        with pytest.raises(NotCentral):
            max_vertex_count_check(make_spec(margins_112))
