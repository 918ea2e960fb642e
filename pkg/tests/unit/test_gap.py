"""
Unit tests for integrality gaps and the desk experiment.
"""

import math

import pytest

from btiepi.errors import ConfigurationError, SolverError
from btiepi.experiment import DeskExperiment
from btiepi.solver.gap import GapReport, gap_value, integrality_gap, mip_optimum, relaxation_bound

from tests.factories import CostFactory, InstanceFactory

pytestmark = pytest.mark.unit


def always_on_optimum(instance):
    startup = instance.unit(1).startup.eval(instance.unit(1).pre_offline)
    return 20.0 * sum(instance.demand) + 100.0 * instance.periods + startup


class TestGap:
    """Tests for relaxation bounds and gaps."""

    def test_gap_value(self):
        assert gap_value(9.0, 10.0) == pytest.approx(0.1)
        assert gap_value(0.0, 0.0) == 0.0
        assert math.isinf(gap_value(1.0, 0.0))

    def test_mip_optimum(self):
        instance = InstanceFactory.create()
        assert mip_optimum(instance) == pytest.approx(always_on_optimum(instance), rel=1e-7)

    def test_infeasible_instance(self):
        instance = InstanceFactory.create(demand=[150.0, 80.0])
        with pytest.raises(SolverError):
            mip_optimum(instance)

    def test_report(self):
        instance = InstanceFactory.create()
        report = integrality_gap(instance, "1bin")
        assert report.formulation == "1bin"
        assert report.lp <= report.mip + 1e-6
        assert report.gap == pytest.approx((report.mip - report.lp) / report.mip)
        assert report.cuts == 0
        assert report.to_dict()["lp_status"] == "optimal"

    def test_bti_bound_uses_cuts(self):
        instance = InstanceFactory.create()
        bound, cuts, rounds, status = relaxation_bound(instance, "bti")
        assert cuts > 0
        assert rounds >= 2
        assert bound <= always_on_optimum(instance) + 1e-6


class TestDeskExperiment:
    """Tests for the gap comparison over several instances."""

    def test_lifecycle(self):
        experiment = DeskExperiment.random(seed=3, count=2, units=2, periods=4, formulations=("1bin", "3bin", "bti"))
        assert experiment.status == "pending"
        outcomes = experiment.run()
        assert experiment.status == "finished"
        assert len(outcomes) == 2
        for outcome in outcomes:
            assert set(outcome.reports) == {"1bin", "3bin", "bti"}
            assert all(report.gap >= -1e-7 for report in outcome.reports.values())
        assert experiment.dominance_violations() == []

    def test_summary(self):
        experiment = DeskExperiment.random(seed=5, count=1, units=1, periods=3, formulations=("1bin", "bti"))
        experiment.run()
        summary = experiment.summary()
        assert summary["status"] == "finished"
        assert summary["instances"] == 1
        assert set(summary["median_gap"]) == {"1bin", "bti"}
        assert summary["results"][0]["instance"] == 1

    def test_failing_formulation_is_recorded(self):
        instance = InstanceFactory.create(units=[InstanceFactory.unit(startup=CostFactory.table())])
        experiment = DeskExperiment([instance], formulations=("3bin", "temp"))
        (outcome,) = experiment.run()
        assert "temp" in outcome.errors
        assert "3bin" in outcome.reports
        assert experiment.medians().keys() == {"3bin"}

    def test_solver_failure_is_recorded(self, mocker):
        real = integrality_gap

        def failing_bti(instance, formulation, **kwargs):
            if formulation == "bti":
                raise SolverError("relaxation of bti not solved (status iteration-limit)")
            return real(instance, formulation, **kwargs)

        patched = mocker.patch("btiepi.experiment.integrality_gap", side_effect=failing_bti)
        experiment = DeskExperiment([InstanceFactory.create()], formulations=("1bin", "bti"))
        (outcome,) = experiment.run()
        assert patched.call_count == 2
        assert set(outcome.reports) == {"1bin"}
        assert "iteration-limit" in outcome.errors["bti"]
        assert experiment.status == "finished"

    def test_dominance_chain_is_checked(self, mocker):
        bounds = {"1bin": 90.0, "1bin-star": 95.0, "3bin": 94.0, "temp": 97.0, "bti": 97.5}

        def report(instance, formulation, **kwargs):
            lp = bounds[formulation]
            return GapReport(formulation, lp, 100.0, gap_value(lp, 100.0))

        mocker.patch("btiepi.experiment.mip_optimum", return_value=100.0)
        mocker.patch("btiepi.experiment.integrality_gap", side_effect=report)
        experiment = DeskExperiment([InstanceFactory.create()])
        experiment.run()
        assert experiment.dominance_violations() == [
            "instance 1: 1bin-star above 3bin",
            "instance 1: temp and bti bounds differ",
        ]

    def test_unknown_formulation(self):
        with pytest.raises(ConfigurationError):
            DeskExperiment([InstanceFactory.create()], formulations=("2bin",))

    def test_error_status(self):
        experiment = DeskExperiment([InstanceFactory.create(demand=[150.0, 80.0])], formulations=("1bin",))
        with pytest.raises(SolverError):
            experiment.run()
        assert experiment.status == "error"
