"""
Unit tests for Unit Commitment instances and the random generator.
"""

import json

import numpy as np
import pytest
from loguru import logger
from pydantic import ValidationError

from btiepi.epigraph.cost_model import ExpStartupCost, TabulatedConcaveCost
from btiepi.errors import ConfigurationError
from btiepi.uc.generator import random_instance, random_unit
from btiepi.uc.instance import UCInstance, Unit, load_instance, read_demand_csv

from tests.factories import CostFactory, InstanceFactory

pytestmark = pytest.mark.unit

INSTANCE_JSON = {
    "grid": {"T": 3, "delta": [1, 1, 1]},
    "units": [
        {
            "A": 20,
            "B": 100,
            "p_min": 20,
            "p_max": 100,
            "ramp_up": 50,
            "startup_ramp": 60,
            "ramp_down": 50,
            "shutdown_ramp": 60,
            "pre_offline": 2,
            "startup": {"type": "exp", "V": 300, "f": 40, "lambda": 0.2},
        }
    ],
    "demand": [50, 80, 60],
}


class TestUnit:
    """Tests for unit validation."""

    def test_aliases(self):
        unit = Unit.model_validate(INSTANCE_JSON["units"][0])
        assert unit.var_cost == 20.0
        assert unit.fixed_cost == 100.0
        assert isinstance(unit.startup, ExpStartupCost)

    def test_min_above_max(self):
        with pytest.raises(ValidationError):
            InstanceFactory.unit(p_min=120.0)

    @pytest.mark.parametrize("field", ["startup_ramp", "shutdown_ramp"])
    def test_ramps_below_p_min_rejected(self, field):
        with pytest.raises(ValidationError):
            InstanceFactory.unit(**{field: 10.0})

    @pytest.mark.parametrize("field", ["startup_ramp", "shutdown_ramp"])
    def test_ramps_above_p_max_warn(self, field):
        """A start-up or shutdown ramp above p_max is accepted with a warning."""
        messages = []
        sink = logger.add(messages.append, level="WARNING", format="{message} {extra}")
        try:
            unit = InstanceFactory.unit(**{field: 110.0})
        finally:
            logger.remove(sink)
        assert getattr(unit, field) == 110.0
        assert any("above p_max" in str(message) and field in str(message) for message in messages)

    def test_tabulated_start_up_cost(self):
        unit = InstanceFactory.unit(startup=CostFactory.table())
        assert isinstance(unit.startup, TabulatedConcaveCost)


class TestInstance:
    """Tests for instances and their files."""

    def test_accessors(self):
        instance = InstanceFactory.create(units=[InstanceFactory.unit(), InstanceFactory.unit(pre_offline=0.0)])
        assert instance.periods == 3
        assert instance.num_units == 2
        assert instance.unit(2).pre_offline == 0.0
        assert instance.unit_grid(1).pre_offline == 2.0
        assert instance.unit_grid(2).offline_length(3, 2) == 2.0

    def test_demand_length(self):
        with pytest.raises(ValidationError):
            InstanceFactory.create(demand=[50.0, 60.0], periods=3)

    def test_needs_a_unit(self):
        with pytest.raises(ValidationError):
            UCInstance(units=(), grid={"T": 1}, demand=(1.0,))

    def test_load(self, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text(json.dumps(INSTANCE_JSON))
        instance = load_instance(path)
        assert instance.demand == (50.0, 80.0, 60.0)
        assert instance.unit(1).startup.heat_loss == 0.2

    def test_json_round_trip(self, tmp_path):
        instance = InstanceFactory.create()
        path = tmp_path / "instance.json"
        path.write_text(instance.to_json())
        assert load_instance(path).to_json() == instance.to_json()

    def test_demand_csv_replaces_demand(self, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text(json.dumps(INSTANCE_JSON))
        demand = tmp_path / "demand.csv"
        demand.write_text("# demand per period\n40\n\n70\n55\n")
        assert load_instance(path, demand).demand == (40.0, 70.0, 55.0)

    def test_bad_csv(self, tmp_path):
        demand = tmp_path / "demand.csv"
        demand.write_text("40\nlots\n")
        with pytest.raises(ConfigurationError, match="line 2"):
            read_demand_csv(demand)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_instance(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text("{not json")
        with pytest.raises(ConfigurationError):
            load_instance(path)


class TestGenerator:
    """Tests for random desk-scale instances."""

    def test_reproducible(self):
        first = random_instance(np.random.default_rng(7), units=3, periods=5)
        second = random_instance(np.random.default_rng(7), units=3, periods=5)
        assert first.to_json() == second.to_json()

    def test_demand_is_servable(self):
        for seed in range(10):
            instance = random_instance(np.random.default_rng(seed), units=2, periods=8)
            capacity = sum(unit.p_max for unit in instance.units)
            floor = max(unit.p_min for unit in instance.units)
            assert all(floor - 1e-9 <= d <= 0.8 * capacity + 1e-9 for d in instance.demand)

    def test_random_unit_is_valid(self, rng):
        for _ in range(20):
            unit = random_unit(rng)
            assert unit.p_min <= unit.startup_ramp <= unit.p_max
            assert unit.p_min <= unit.shutdown_ramp <= unit.p_max
            assert unit.pre_offline in range(7)
