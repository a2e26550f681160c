import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zel.errors import (
    AsymmetryWitness,
    DimensionMismatch,
    NegativeEntry,
    NonSquare,
    NonzeroDiagonal,
    TerminalsMerged,
)
from zel.graph import Graph, shortest_distances
from zel.instance import Instance, build_instance
from zel.metricspace import (
    Membership,
    SemiMetric,
    check_agk_feasibility,
    check_terminal_preservation,
    terminal_vector,
    tight_span_membership,
    validate_semimetric,
)

from oracles import random_connected_graph


def metric_2(d=2.0):
    return SemiMetric([[0.0, d], [d, 0.0]])


class TestValidateSemimetric:
    def test_all_zero_ok(self):
        assert validate_semimetric(np.zeros((4, 4))) is None

    def test_shortest_path_matrices_ok(self):
        rng = random.Random(1)
        for _ in range(10):
            n = rng.randint(2, 12)
            g = Graph(n, random_connected_graph(rng, n, max_len=4))
            m = np.array([shortest_distances(g, s) for s in range(n)])
            assert validate_semimetric(m) is None

    def test_triangle_violation_witness(self):
        m = [[0, 1, 3], [1, 0, 1], [3, 1, 0]]
        assert validate_semimetric(m) == (0, 2, 1)

    def test_non_square(self):
        with pytest.raises(NonSquare):
            validate_semimetric(np.zeros((2, 3)))

    def test_asymmetry(self):
        with pytest.raises(AsymmetryWitness):
            validate_semimetric([[0, 1], [2, 0]])

    def test_negative(self):
        with pytest.raises(NegativeEntry):
            validate_semimetric([[0, -1], [-1, 0]])

    def test_nonzero_diagonal(self):
        with pytest.raises(NonzeroDiagonal):
            validate_semimetric([[1.0]])

    def test_zero_distance_between_distinct_ok(self):
        m = [[0, 0, 2], [0, 0, 2], [2, 2, 0]]
        assert validate_semimetric(m) is None

    @given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=40, deadline=None)
    def test_random_shortest_path_always_ok(self, n, seed):
        rng = random.Random(seed)
        g = Graph(n, random_connected_graph(rng, n, max_len=3))
        m = np.array([shortest_distances(g, s) for s in range(n)])
        assert validate_semimetric(m) is None


@pytest.fixture
def path_instance():
    # path t0 - s - t1, terminals at the ends
    g = Graph(3, [(0, 1), (1, 2)])
    return Instance.from_graph(g, [0, 2])


class TestTerminalPreservation:
    def test_exact_copy_true(self, path_instance):
        delta = SemiMetric([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        assert check_terminal_preservation(delta, [0, 2], path_instance)

    def test_perturbed_false(self, path_instance):
        delta = SemiMetric([[0, 1, 2.5], [1, 0, 1.5], [2.5, 1.5, 0]])
        assert not check_terminal_preservation(delta, [0, 2], path_instance)

    def test_merged_terminals_raise(self, path_instance):
        delta = SemiMetric(np.zeros((2, 2)))
        with pytest.raises(TerminalsMerged):
            check_terminal_preservation(delta, [0, 0], path_instance)


class TestAgkFeasibility:
    def test_equality_passes(self, path_instance):
        delta = SemiMetric([[0, 2], [2, 0]])
        demand = np.ones((2, 2)) - np.eye(2)
        assert check_agk_feasibility(delta, [0, 1], path_instance, demand)

    def test_scaling_up_passes(self, path_instance):
        delta = SemiMetric([[0, 4], [4, 0]])
        demand = np.ones((2, 2)) - np.eye(2)
        assert check_agk_feasibility(delta, [0, 1], path_instance, demand)

    def test_halving_fails(self, path_instance):
        delta = SemiMetric([[0, 1], [1, 0]])
        demand = np.ones((2, 2)) - np.eye(2)
        assert not check_agk_feasibility(delta, [0, 1], path_instance, demand)

    def test_dimension_mismatch(self, path_instance):
        delta = SemiMetric([[0, 2], [2, 0]])
        with pytest.raises(DimensionMismatch):
            check_agk_feasibility(delta, [0, 1], path_instance, np.ones((3, 3)))

    def test_preservation_implies_agk_on_random_demands(self):
        inst = build_instance(64, seed=2)
        delta = inst.terminal_metric
        ids = list(range(inst.k))
        rng = np.random.default_rng(0)
        for _ in range(5):
            raw = rng.uniform(0, 3, size=(inst.k, inst.k))
            demand = (raw + raw.T) / 2
            np.fill_diagonal(demand, 0.0)
            assert check_agk_feasibility(delta, ids, inst, demand)


class TestTerminalVector:
    def test_k2_example(self, path_instance):
        x = terminal_vector(path_instance, 0)
        assert list(x.coords) == [0, 2]

    def test_own_coordinate_zero(self):
        inst = build_instance(64, seed=1)
        for i in (0, 3, inst.k - 1):
            assert terminal_vector(inst, i)[i] == 0

    def test_membership_tight_everywhere(self, path_instance):
        x = terminal_vector(path_instance, 1)
        D = path_instance.terminal_metric
        s = x.coords[:, None] + x.coords[None, :] - D.matrix
        assert (np.abs(s[1, :]) < 1e-9).all()


class TestTightSpanMembership:
    def test_member(self):
        res = tight_span_membership([1.0, 1.0], metric_2())
        assert res.status is Membership.MEMBER

    def test_not_minimal(self):
        res = tight_span_membership([2.0, 2.0], metric_2())
        assert res.status is Membership.IN_POLYTOPE_NOT_MINIMAL
        assert res.loose_index == 0

    def test_outside(self):
        res = tight_span_membership([0.5, 1.0], metric_2())
        assert res.status is Membership.OUTSIDE_POLYTOPE
        assert res.witness == (0, 1)

    def test_negative_coordinate_outside(self):
        res = tight_span_membership([-0.5, 2.5], metric_2())
        assert res.status is Membership.OUTSIDE_POLYTOPE
        assert res.witness == (0, 0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            tight_span_membership([1.0, 1.0, 1.0], metric_2())


class TestSemiMetricType:
    def test_structural_errors(self):
        with pytest.raises(NonzeroDiagonal):
            SemiMetric([[1.0]])
        with pytest.raises(AsymmetryWitness):
            SemiMetric([[0, 1], [2, 0]])

    def test_immutability(self):
        m = SemiMetric([[0, 1], [1, 0]])
        with pytest.raises(ValueError):
            m.matrix[0, 1] = 5
