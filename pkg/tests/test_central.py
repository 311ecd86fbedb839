"""
Tests for the central kn x n fast path.
"""

from fractions import Fraction

import pytest

from conftest import forest
from django_transport_polytopes.polytopes.central import (
    CentralSpec,
    MatchingMatrix,
    RootedRightTree,
    central_counts,
    central_ehrhart,
    central_feasible_cone_mgf,
    central_mgf,
    central_vertex,
    enumerate_branch_choices,
    enumerate_matchings,
    enumerate_rooted_trees,
    enumerate_ST,
    phi,
    phi_inverse,
)
from django_transport_polytopes.polytopes.exceptions import InvalidShape, NotInST
from django_transport_polytopes.polytopes.graph import right_degree_sequence
from django_transport_polytopes.polytopes.mgf import evaluate, polytope_mgf, sample_points
from django_transport_polytopes.polytopes.oracle import brute_vertices
from django_transport_polytopes.polytopes.perturb import make_spec, max_vertex_formula


class TestCentralSpec:
    def test_margins(self):
        mar = CentralSpec(2, 3, 5).margins()
        assert mar.r == (5,) * 6
        assert mar.c == (10,) * 3
        assert mar.is_central

    @pytest.mark.parametrize('k, n, a', [(0, 2, 1), (1, 0, 1), (1, 2, 0), (1, 2, True), (1.0, 2, 1)])
    def test_rejects_bad_parameters(self, k, n, a):
        with pytest.raises(InvalidShape):
            CentralSpec(k, n, a)


class TestEnumerations:
    @pytest.mark.parametrize('k, n, count', [(1, 3, 6), (2, 2, 6), (3, 2, 20), (1, 1, 1)])
    def test_matchings(self, k, n, count):
        matchings = enumerate_matchings(k, n)
        assert len(matchings) == count
        assert len(set(matchings)) == count

    @pytest.mark.parametrize('n, count', [(1, 1), (2, 1), (3, 3), (4, 16), (5, 125)])
    def test_rooted_trees(self, n, count):
        trees = enumerate_rooted_trees(n)
        assert len(trees) == count
        assert len(set(trees)) == count

    def test_branch_choices(self):
        assert enumerate_branch_choices(2, 3) == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_rooted_tree_rejects_cycles(self):
        with pytest.raises(ValueError):
            RootedRightTree((2, 1))

    @pytest.mark.parametrize('k, n', [(1, 2), (1, 3), (1, 4), (2, 2), (3, 2), (2, 3)])
    def test_st_size_is_the_maximum(self, k, n):
        trees = enumerate_ST(k, n)
        assert len(trees) == max_vertex_formula(k, n)
        assert len(set(trees)) == len(trees)

    def test_st_degree_sequences(self):
        for tree in enumerate_ST(2, 3):
            assert right_degree_sequence(tree) == (3, 3, 2)
            assert tree.is_spanning_tree


class TestPhi:
    @pytest.mark.parametrize('k, n', [(1, 2), (1, 3), (2, 2), (2, 3)])
    def test_round_trip(self, k, n):
        images = set()
        for matching in enumerate_matchings(k, n):
            for tree in enumerate_rooted_trees(n):
                for choices in enumerate_branch_choices(k, n):
                    image = phi(matching, tree, choices)
                    assert phi_inverse(image, k) == (matching, tree, choices)
                    images.add(image)
        assert len(images) == max_vertex_formula(k, n)

    def test_example_tree(self):
        matching = MatchingMatrix((1, 2, 3), 1, 3)
        image = phi(matching, RootedRightTree((3, 3)), (1, 1))
        assert image == forest(3, 3, (1, 1), (2, 2), (3, 3), (3, 1), (3, 2))

    def test_rejects_bad_choices(self):
        matching = MatchingMatrix((1, 2, 3), 1, 3)
        with pytest.raises(InvalidShape):
            phi(matching, RootedRightTree((3, 3)), (2, 1))

    def test_inverse_rejects_wrong_degrees(self, t0):
        with pytest.raises(NotInST):
            phi_inverse(t0, 1)

    def test_inverse_rejects_wrong_order(self):
        with pytest.raises(NotInST):
            phi_inverse(forest(3, 2, (1, 1), (2, 1), (3, 2), (3, 1)), 1)


class TestCentralVertex:
    def test_margins_and_limit(self):
        spec = CentralSpec(2, 2, 3)
        perturbed = make_spec(spec.margins())
        t = Fraction(1, 50)
        for tree in enumerate_ST(2, 2):
            vertex = central_vertex(tree, spec, t)
            assert vertex.matrix.satisfies(perturbed.margins_at(t))
            matching = phi_inverse(tree, 2).matching
            expected = tuple(tuple(3 * x for x in row) for row in matching.entries)
            assert vertex.limit.entries == expected

    def test_default_t_is_the_spec_t0(self):
        spec = CentralSpec(1, 2, 1)
        tree = enumerate_ST(1, 2)[0]
        assert central_vertex(tree, spec).t == make_spec(spec.margins()).t0


class TestCentralMgf:
    @pytest.mark.parametrize('k, n, a', [(1, 2, 1), (1, 3, 1), (2, 2, 1), (1, 3, 2)])
    def test_matches_general_pipeline(self, k, n, a):
        spec = CentralSpec(k, n, a)
        fast = central_mgf(spec)
        general = polytope_mgf(spec.margins())
        assert fast == general
        for point in sample_points(general, count=3, seed=k + n + a):
            assert evaluate(fast, point) == evaluate(general, point)

    @pytest.mark.parametrize('k, n', [(1, 2), (1, 3), (1, 4), (2, 2), (3, 2)])
    def test_trees_are_the_perturbed_vertices(self, k, n):
        spec = CentralSpec(k, n, 1)
        perturbed = make_spec(spec.margins()).perturbed
        oracle = {vertex.aux for vertex in brute_vertices(perturbed, max_edges=16)}
        assert set(enumerate_ST(k, n)) == oracle

    @pytest.mark.parametrize('k, n, count', [(1, 3, 3), (2, 2, 2), (1, 4, 16)])
    def test_feasible_cone_term_count(self, k, n, count):
        spec = CentralSpec(k, n, 1)
        matching = enumerate_matchings(k, n)[0]
        cone = central_feasible_cone_mgf(spec, matching)
        assert len(cone) == count
        assert cone.dimension == (k * n - 1) * (n - 1)

    def test_ehrhart_of_birkhoff_3(self):
        polynomial, volume = central_ehrhart(CentralSpec(1, 3, 1))
        assert polynomial.coeffs == tuple(Fraction(x, 8) for x in (8, 18, 15, 6, 1))
        assert volume.normalized_volume == 3


class TestCentralCounts:
    @pytest.mark.parametrize(
        'k, n, vertices, maximum',
        [(1, 3, 6, 18), (1, 4, 24, 384), (2, 2, 6, 12), (1, 1, 1, 1)],
    )
    def test_counts(self, k, n, vertices, maximum):
        assert central_counts(k, n).to_json() == {'vertices': vertices, 'max_vertices': maximum}

    def test_rejects_bad_order(self):
        with pytest.raises(InvalidShape):
            central_counts(0, 3)
