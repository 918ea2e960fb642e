"""
Unit tests for the base Unit Commitment model and the start-up cost formulations.
"""

import math

import pytest

from btiepi.errors import CapExceededError, ConfigurationError, DomainError, ModelError
from btiepi.solver.branch_bound import solve_mip
from btiepi.solver.program import Sense
from btiepi.uc.formulations import (
    FORMULATIONS,
    STATIC_BTI_CAP,
    add_static_btis,
    build_model,
    startup_types,
)
from btiepi.uc.model import build_base, build_startup_only, fix_schedule, name

from tests.factories import CostFactory, InstanceFactory

pytestmark = pytest.mark.unit


def row_names(model, prefix):
    return [row.name for row in model.lp.rows if row.name.startswith(prefix + "_")]


class TestBaseModel:
    """Tests for the base model rows and columns."""

    def test_columns(self):
        model = build_base(InstanceFactory.create())
        names = [column.name for column in model.lp.columns]
        assert names[:4] == ["u_1_1", "u_1_2", "u_1_3", "csum_1"]
        assert len(names) == 10
        assert model.lp.column("u_1_2").integer
        assert model.lp.column("cp_1_3").cost == 1.0
        assert model.lp.column("csum_1").cost == 1.0

    def test_rows(self):
        model = build_base(InstanceFactory.create())
        assert row_names(model, "demand") == ["demand_1", "demand_2", "demand_3"]
        assert len(row_names(model, "prodcost")) == 3
        assert len(row_names(model, "pmin")) == 3
        assert len(row_names(model, "pmax")) == 3
        assert row_names(model, "rampup") == ["rampup_1_2", "rampup_1_3"]
        assert row_names(model, "rampdown") == ["rampdown_1_2", "rampdown_1_3"]
        assert row_names(model, "shutdown") == ["shutdown_1_1", "shutdown_1_2"]
        assert model.lp.num_rows == 18

    def test_ramp_rows_hold_when_online(self):
        """With u fixed to one the ramp rows reduce to plain ramp limits."""
        instance = InstanceFactory.create()
        model = build_base(instance)
        lp = model.lp
        values = [0.0] * lp.num_columns
        for t, p in zip((1, 2, 3), (50.0, 100.0, 60.0)):
            values[lp.index(name("u", 1, t))] = 1.0
            values[lp.index(name("p", 1, t))] = p
        up = lp.rows[[row.name for row in lp.rows].index("rampup_1_2")]
        lhs = sum(v * values[j] for j, v in up.coefficients.items())
        assert lhs - up.rhs == pytest.approx(0.0)

    def test_startup_only(self):
        model = build_startup_only(InstanceFactory.create())
        assert model.lp.num_rows == 0
        assert model.lp.num_columns == 4
        model.check()

    def test_check(self):
        model = build_base(InstanceFactory.create())
        model.check()
        model.lp.add_column("z", 0.0, 1.0, integer=True)
        with pytest.raises(ModelError):
            model.check()

    def test_check_empty_row(self):
        model = build_startup_only(InstanceFactory.create())
        model.lp.add_row({}, Sense.LE, 1.0, "empty")
        with pytest.raises(ModelError):
            model.check()

    def test_fix_schedule(self):
        model = build_startup_only(InstanceFactory.create())
        fix_schedule(model, 1, [1, 0, 1])
        assert [(model.lp.column(f"u_1_{t}").lower, model.lp.column(f"u_1_{t}").upper) for t in (1, 2, 3)] == [
            (1.0, 1.0),
            (0.0, 0.0),
            (1.0, 1.0),
        ]

    def test_fix_schedule_errors(self):
        model = build_startup_only(InstanceFactory.create())
        with pytest.raises(DomainError):
            fix_schedule(model, 1, [1, 0])
        with pytest.raises(DomainError):
            fix_schedule(model, 2, [1, 0, 1])


class TestFormulations:
    """Tests for the rows each formulation adds."""

    def test_registry(self):
        assert list(FORMULATIONS) == ["1bin", "1bin-star", "3bin", "temp", "bti"]

    def test_unknown(self):
        with pytest.raises(ConfigurationError, match="unknown formulation"):
            build_model(InstanceFactory.create(), "4bin")

    @pytest.mark.parametrize("formulation, prefix", [("1bin", "onebin"), ("1bin-star", "onebinstar")])
    def test_one_binary(self, formulation, prefix):
        model = build_model(InstanceFactory.create(), formulation)
        assert model.formulation == formulation
        assert len(row_names(model, prefix)) == 1 + 2 + 3
        assert row_names(model, "csumdef") == ["csumdef_1"]
        model.check()

    def test_one_binary_star_coefficients(self):
        """The u_{t-j} coefficients are CU^{t,l} - CU^{t,j-1}."""
        instance = InstanceFactory.create()
        model = build_model(instance, "1bin-star", startup_only=True)
        lp = model.lp
        row = lp.rows[[r.name for r in lp.rows].index("onebinstar_1_3_2")]
        cost = instance.unit(1).startup
        cu = lambda length: cost.eval(length)  # noqa: E731
        assert row.coefficients[lp.index("u_1_3")] == pytest.approx(-cu(4.0))
        assert row.coefficients[lp.index("u_1_2")] == pytest.approx(cu(4.0) - cu(0.0))
        assert row.coefficients[lp.index("u_1_1")] == pytest.approx(cu(4.0) - cu(1.0))

    def test_three_binary(self):
        model = build_model(InstanceFactory.create(), "3bin")
        names = {column.name for column in model.lp.columns}
        assert {"d_1_1_0", "d_1_2_1", "d_1_3_1", "d_1_3_2"} <= names
        assert "d_1_2_0" not in names
        assert row_names(model, "typelink") == ["typelink_1_3_1"]
        assert len(row_names(model, "indicator")) == 3
        model.check()

    def test_startup_types(self):
        assert list(startup_types(1)) == [0]
        assert list(startup_types(4)) == [1, 2, 3]

    def test_temperature(self):
        model = build_model(InstanceFactory.create(), "temp")
        assert model.lp.column("tau_1_2").upper == 1.0
        assert model.lp.has_column("gamma_1_0")
        assert len(row_names(model, "temp")) == 3
        assert len(row_names(model, "hot")) == 3
        assert len(row_names(model, "rti")) == 4
        model.check()

    def test_temperature_initial_heat(self):
        instance = InstanceFactory.create()
        model = build_model(instance, "temp")
        row = model.lp.rows[[r.name for r in model.lp.rows].index("temp_1_1")]
        assert row.rhs == pytest.approx(math.exp(-0.2 * 2.0))

    def test_temperature_needs_exponential_cost(self):
        instance = InstanceFactory.create(units=[InstanceFactory.unit(startup=CostFactory.table())])
        with pytest.raises(ConfigurationError):
            build_model(instance, "temp")

    def test_bti_mode(self):
        instance = InstanceFactory.create(units=[InstanceFactory.unit(), InstanceFactory.unit()], demand=[50.0, 80.0])
        model = build_model(instance, "bti")
        assert model.bti_units == [1, 2]
        assert model.lp.num_rows == build_base(instance).lp.num_rows

    def test_static_btis(self):
        instance = InstanceFactory.create()
        model = build_model(instance, "bti", startup_only=True)
        assert add_static_btis(model, instance) == 5
        assert model.lp.num_rows == 5

    def test_static_bti_cap(self):
        periods = STATIC_BTI_CAP + 1
        instance = InstanceFactory.create(demand=[50.0] * periods)
        model = build_model(instance, "bti", startup_only=True)
        with pytest.raises(CapExceededError):
            add_static_btis(model, instance)


class TestIntegerOptimum:
    """Every formulation prices the single start-up of an always-on unit the same."""

    @pytest.mark.parametrize("formulation", ["1bin", "1bin-star", "3bin", "temp"])
    def test_optimum(self, formulation):
        instance = InstanceFactory.create()
        startup = instance.unit(1).startup.eval(2.0)
        expected = 20.0 * (50.0 + 80.0 + 60.0) + 3 * 100.0 + startup
        result = solve_mip(build_model(instance, formulation).lp)
        assert result.optimal
        assert result.objective == pytest.approx(expected, rel=1e-7)
