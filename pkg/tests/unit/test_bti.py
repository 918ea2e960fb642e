"""
Unit tests for binary tree inequalities, separation and the convex envelope.
"""

import numpy as np
import pytest

from btiepi.epigraph.bti import (
    InEpigraph,
    SeparationResult,
    certified_envelope,
    coefficients,
    envelope,
    separate,
    separate_many,
    subtree_offline_lengths,
    tight_points,
)
from btiepi.epigraph.ranktree import OperationCounter, RankTree, enumerate_trees, subtree_sizes
from btiepi.epigraph.schedule import FracPoint, all_schedules, dcu_sum, delta_sum
from btiepi.errors import DomainError

from tests.factories import CostFactory, GridFactory

pytestmark = pytest.mark.unit


def brute_max(u, cost, grid):
    return max(coefficients(tree, cost, grid).rhs(u) for tree in enumerate_trees(grid.periods))


class TestCoefficients:
    """Tests for the BTI coefficients of a tree."""

    def test_single_period(self, exp_cost):
        """With one period the only BTI is c >= CU(T^pre) u_1."""
        grid = GridFactory.create(periods=1, pre_offline=2.0)
        cut = coefficients(RankTree.from_text("(1)"), exp_cost, grid)
        assert cut.coefficients == pytest.approx((exp_cost.eval(2.0),))

    def test_matches_delta_sum(self):
        """a_t = delta_sum(t, lambda(t), rho(t)) for every tree."""
        cost = CostFactory.create(heating_cost=40.0, fixed_cost=3.0, heat_loss=0.7)
        grid = GridFactory.create(periods=6, pre_offline=1.0, delta=[1.0, 0.5, 2.0, 1.0, 1.5, 1.0])
        for tree in enumerate_trees(6):
            sizes = subtree_sizes(tree)
            cut = coefficients(tree, cost, grid)
            expected = [delta_sum(cost, grid, t, sizes.left[t], sizes.right[t]) for t in range(1, 7)]
            assert cut.coefficients == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_offline_lengths_of_subtrees(self):
        grid = GridFactory.create(periods=3, pre_offline=2.0)
        lengths = subtree_offline_lengths(RankTree.from_text("((1) 2 (3))"), grid)
        # node 2: L covers node 1 and the time before the horizon, R covers node 3
        assert lengths.left[2] == pytest.approx(3.0)
        assert lengths.right[2] == pytest.approx(1.0)
        assert lengths.principal[2] == pytest.approx(5.0)

    def test_tree_size_must_match_grid(self, exp_cost):
        with pytest.raises(DomainError):
            coefficients(RankTree.right_spine(3), exp_cost, GridFactory.create(periods=4))

    def test_validity_on_all_vertices(self, exp_cost, grid4):
        for tree in enumerate_trees(4):
            cut = coefficients(tree, exp_cost, grid4)
            for u in all_schedules(4):
                assert cut.rhs(u.on_off) <= dcu_sum(exp_cost, grid4, u) + 1e-9

    def test_tight_points(self, table_cost):
        grid = GridFactory.create(periods=5, pre_offline=1.0)
        for tree in enumerate_trees(5):
            cut = coefficients(tree, table_cost, grid)
            points = tight_points(tree)
            assert len(points) == 5
            for u in points:
                assert cut.rhs(u.on_off) == pytest.approx(dcu_sum(table_cost, grid, u))

    def test_to_dict(self, exp_cost):
        cut = coefficients(RankTree.from_text("((1) 2)"), exp_cost, GridFactory.create(periods=2))
        data = cut.to_dict()
        assert data["tree"] == "((1) 2)"
        assert len(data["a"]) == 2


class TestSeparation:
    """Tests for exact separation with the Cartesian tree."""

    def test_matches_brute_force(self, rng):
        for periods in range(1, 6):
            cost = CostFactory.random(rng)
            grid = GridFactory.irregular(rng, periods)
            for _ in range(20):
                u = rng.uniform(0.0, 1.0, periods)
                result = separate(FracPoint.of(u, 0.0), cost, grid)
                assert result.rhs_at_point == pytest.approx(brute_max(u, cost, grid), rel=1e-9, abs=1e-9)

    def test_point_inside(self, exp_cost, grid4):
        u = [0.3, 0.6, 0.1, 0.9]
        result = separate(FracPoint.of(u, envelope(u, exp_cost, grid4) + 1.0), exp_cost, grid4)
        assert isinstance(result, InEpigraph)
        assert not result.separated
        assert result.to_dict() == {"in_epigraph": True}

    def test_point_outside(self, exp_cost, grid4):
        u = [0.3, 0.6, 0.1, 0.9]
        result = separate(FracPoint.of(u, 0.0), exp_cost, grid4)
        assert isinstance(result, SeparationResult)
        assert result.separated
        assert result.violation == pytest.approx(result.rhs_at_point)
        assert result.cut.violation(u, 0.0) == pytest.approx(result.violation)
        payload = result.to_dict()["cut"]
        assert set(payload) == {"a", "rhs_at_point", "violation", "tree"}
        assert payload["tree"] == result.tree.to_text()

    def test_tolerance(self, exp_cost, grid4):
        """Violations at or below the tolerance do not produce cuts."""
        u = [0.3, 0.6, 0.1, 0.9]
        value = envelope(u, exp_cost, grid4)
        assert not separate(FracPoint.of(u, value - 1e-3), exp_cost, grid4, tolerance=1e-2).separated
        assert separate(FracPoint.of(u, value - 1e-3), exp_cost, grid4, tolerance=1e-4).separated

    def test_relative_tolerance(self, exp_cost, grid4):
        u = [1.0, 1.0, 1.0, 1.0]
        value = envelope(u, exp_cost, grid4)
        point = FracPoint.of(u, value - 1e-9 * value)
        assert not separate(point, exp_cost, grid4, tolerance=1e-8, relative=True).separated

    def test_period_mismatch(self, exp_cost, grid4):
        with pytest.raises(DomainError):
            separate(FracPoint.of([0.5, 0.5], 0.0), exp_cost, grid4)

    def test_work_is_linear(self, exp_cost, rng):
        """Counted work stays below a fixed multiple of T."""
        for periods in (100, 1000, 5000):
            grid = GridFactory.create(periods=periods, pre_offline=1.0)
            result = separate(FracPoint.of(rng.uniform(0, 1, periods), 0.0), exp_cost, grid)
            assert result.counter.total <= 10 * periods

    def test_separate_many_keeps_order(self, exp_cost, grid4):
        inside = FracPoint.of([0.0, 0.0, 0.0, 0.0], 0.0)
        outside = FracPoint.of([1.0, 0.0, 1.0, 0.0], 0.0)
        results = separate_many([(inside, exp_cost, grid4), (outside, exp_cost, grid4)])
        assert [r.separated for r in results] == [False, True]


class TestEnvelope:
    """Tests for the convex envelope formula."""

    def test_equals_cost_at_vertices(self, exp_cost, grid4):
        for u in all_schedules(4):
            assert envelope(u.on_off, exp_cost, grid4) == pytest.approx(dcu_sum(exp_cost, grid4, u))

    def test_homogeneous(self, exp_cost, rng):
        grid = GridFactory.create(periods=8, pre_offline=0.5)
        for _ in range(50):
            u = rng.uniform(0.0, 1.0, 8)
            alpha = float(rng.uniform(0.0, 1.0))
            assert envelope(alpha * u, exp_cost, grid) == pytest.approx(
                alpha * envelope(u, exp_cost, grid), abs=1e-9
            )

    def test_certificate(self, exp_cost, grid4):
        u = np.array([0.2, 0.9, 0.5, 0.4])
        result = certified_envelope(u, exp_cost, grid4)
        assert result.cut.source_tree.root == 2
        assert result.value == pytest.approx(result.cut.rhs(u))

    def test_out_of_box(self, exp_cost, grid4):
        with pytest.raises(DomainError):
            envelope([0.5, 0.5, 0.5, 1.5], exp_cost, grid4)
