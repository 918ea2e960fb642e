"""
Unit tests for start-up cost models and time grids.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from btiepi.epigraph.cost_model import (
    CostTable,
    ExpStartupCost,
    TabulatedConcaveCost,
    TimeGrid,
    cost_from_spec,
    discrete_cost,
    load_cost,
)
from btiepi.errors import ConfigurationError, DomainError

from tests.factories import CostFactory, GridFactory

pytestmark = pytest.mark.unit


class TestExpStartupCost:
    """Tests for the exponential start-up cost."""

    def test_zero_offline_time_costs_nothing(self):
        """A unit that was never off pays no start-up cost."""
        assert CostFactory.create().eval(0.0) == 0.0

    def test_positive_offline_time(self):
        """CU(L) = V(1 - exp(-lambda L)) + f."""
        cost = CostFactory.create(heating_cost=25.0, fixed_cost=8.0, heat_loss=0.3)
        assert cost.eval(2.0) == pytest.approx(25.0 * (1 - math.exp(-0.6)) + 8.0)

    def test_supremum_and_concavity(self):
        cost = CostFactory.create(heating_cost=25.0, fixed_cost=8.0)
        assert cost.supremum == 33.0
        assert cost.strictly_concave

    def test_negative_offline_time_rejected(self):
        with pytest.raises(DomainError):
            CostFactory.create().eval(-1.0)

    def test_eval_many_matches_eval(self):
        """Vectorized evaluation agrees with the scalar one, including L = 0."""
        cost = CostFactory.create()
        offline = np.array([0.0, 0.5, 1.0, 7.0])
        expected = [cost.eval(v) for v in offline]
        assert cost.eval_many(offline) == pytest.approx(expected)

    def test_aliases_accepted(self):
        """The JSON field names V, f and lambda build the model."""
        cost = load_cost({"type": "exp", "V": 10, "f": 2, "lambda": 0.5})
        assert isinstance(cost, ExpStartupCost)
        assert cost.heat_loss == 0.5

    @pytest.mark.parametrize("field, value", [("V", 0.0), ("f", -1.0), ("lambda", 0.0)])
    def test_invalid_parameters(self, field, value):
        data = {"type": "exp", "V": 10, "f": 2, "lambda": 0.5, field: value}
        with pytest.raises(ValidationError):
            load_cost(data)

    def test_cooling_factor(self):
        assert CostFactory.create(heat_loss=0.5).cooling_factor(2.0) == pytest.approx(math.exp(-1.0))


class TestTabulatedConcaveCost:
    """Tests for the piecewise-linear start-up cost."""

    def test_interpolates_and_stays_flat(self):
        cost = CostFactory.table([(0, 0), (1, 10), (4, 16)])
        assert cost.eval(0.0) == 0.0
        assert cost.eval(0.5) == pytest.approx(5.0)
        assert cost.eval(2.5) == pytest.approx(13.0)
        assert cost.eval(100.0) == pytest.approx(16.0)
        assert cost.supremum == pytest.approx(16.0)

    def test_linear_table_is_not_strictly_concave(self):
        assert not CostFactory.linear_table().strictly_concave

    def test_decreasing_slopes_are_strictly_concave(self):
        cost = CostFactory.table([(0, 0), (1, 10), (2, 15), (3, 17)])
        assert cost.slopes == pytest.approx([10.0, 5.0, 2.0])
        assert cost.strictly_concave

    def test_equal_consecutive_slopes_are_not_strict(self):
        cost = CostFactory.table([(0, 0), (1, 10), (2, 20), (4, 24)])
        assert cost.slopes == pytest.approx([10.0, 10.0, 2.0])
        assert not cost.strictly_concave

    def test_default_table_is_strictly_concave(self, table_cost):
        assert table_cost.strictly_concave

    def test_convex_table_rejected(self):
        with pytest.raises(ValidationError):
            TabulatedConcaveCost(points=[(0, 0), (1, 1), (2, 5)])

    def test_decreasing_table_rejected(self):
        with pytest.raises(ValidationError):
            TabulatedConcaveCost(points=[(0, 0), (1, 5), (2, 4)])

    def test_table_must_start_at_origin(self):
        with pytest.raises(ValidationError):
            TabulatedConcaveCost(points=[(0, 1), (1, 5)])


class TestCostFromSpec:
    """Tests for the compact cost descriptions used on the command line."""

    def test_exponential_spec(self):
        cost = cost_from_spec("exp:V=25,f=8,lambda=0.03")
        assert isinstance(cost, ExpStartupCost)
        assert (cost.heating_cost, cost.fixed_cost, cost.heat_loss) == (25.0, 8.0, 0.03)

    def test_table_spec(self):
        cost = cost_from_spec("table:0:0,1:10,4:16")
        assert isinstance(cost, TabulatedConcaveCost)
        assert cost.eval(4.0) == pytest.approx(16.0)

    def test_json_spec(self):
        cost = cost_from_spec('{"type": "exp", "V": 1, "f": 0, "lambda": 1}')
        assert isinstance(cost, ExpStartupCost)

    @pytest.mark.parametrize("spec", ["cubic:a=1", "exp:V=abc", "exp:V=-1,f=0,lambda=1"])
    def test_invalid_specs(self, spec):
        with pytest.raises(ConfigurationError):
            cost_from_spec(spec)


class TestTimeGrid:
    """Tests for the time grid and offline lengths."""

    def test_uniform_defaults(self):
        grid = TimeGrid.uniform(3)
        assert grid.periods == 3
        assert grid.period_lengths == (1.0, 1.0, 1.0)
        assert grid.pre_offline == 0.0

    def test_delta_defaults_to_unit_lengths(self):
        assert TimeGrid.model_validate({"T": 2}).period_lengths == (1.0, 1.0)

    def test_zero_periods_rejected(self):
        with pytest.raises(ValidationError):
            TimeGrid(T=0, delta=[])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            TimeGrid(T=3, delta=[1.0, 1.0])

    def test_offline_length_inside_horizon(self):
        grid = GridFactory.create(periods=4, pre_offline=2.0, delta=[1.0, 2.0, 3.0, 4.0])
        assert grid.offline_length(4, 0) == 0.0
        assert grid.offline_length(4, 1) == 3.0
        assert grid.offline_length(4, 2) == 5.0

    def test_offline_length_reaching_before_horizon(self):
        """l = t - 1 adds the offline time before the horizon."""
        grid = GridFactory.create(periods=4, pre_offline=2.0, delta=[1.0, 2.0, 3.0, 4.0])
        assert grid.offline_length(1, 0) == 2.0
        assert grid.offline_length(4, 3) == 8.0

    def test_offline_length_domain(self):
        grid = GridFactory.create(periods=3)
        with pytest.raises(DomainError):
            grid.offline_length(2, 2)
        with pytest.raises(DomainError):
            grid.offline_length(4, 0)

    def test_prefix_offline(self):
        grid = GridFactory.create(periods=3, pre_offline=1.5, delta=[1.0, 2.0, 3.0])
        assert grid.prefix_offline() == [0.0, 1.5, 2.5, 4.5]


class TestCostTable:
    """Tests for the cached discrete costs CU^{t,l}."""

    def test_matches_discrete_cost(self, exp_cost):
        grid = GridFactory.create(periods=5, pre_offline=3.0)
        table = CostTable(exp_cost, grid)
        for t in range(1, 6):
            for l in range(t):
                assert table(t, l) == pytest.approx(discrete_cost(exp_cost, grid, t, l))
            assert table.row(t) == pytest.approx([discrete_cost(exp_cost, grid, t, l) for l in range(t)])

    def test_outside_triangle(self, exp_cost):
        table = CostTable(exp_cost, GridFactory.create(periods=3))
        with pytest.raises(DomainError):
            table(2, 2)
