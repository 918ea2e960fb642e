"""
DeskExperiment: integrality gaps of the start-up cost formulations at desk scale.

Runs every formulation on every instance, measures the LP bound against one
shared integer optimum per instance and summarizes the gaps per formulation.
"""

from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .errors import BtiepiError, ConfigurationError
from .log import get_component_logger
from .solver.gap import GapReport, integrality_gap, mip_optimum
from .uc.formulations import FORMULATIONS
from .uc.generator import random_instance
from .uc.instance import UCInstance

logger = get_component_logger("btiepi.experiment")

# (weaker, stronger) bound pairs along 1bin <= 1bin-star <= 3bin <= bti; temp matches bti
DOMINANCE_PAIRS = (("1bin", "1bin-star"), ("1bin-star", "3bin"), ("3bin", "bti"))
DOMINANCE_TOLERANCE = 1e-6
HULL_AGREEMENT = 1e-4


@dataclass
class InstanceOutcome:
    instance: int
    mip: float
    reports: dict[str, GapReport] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "mip": self.mip,
            "formulations": {name: asdict(report) for name, report in self.reports.items()},
            "errors": dict(self.errors),
        }


class DeskExperiment:
    """Integrality-gap comparison over a batch of instances."""

    def __init__(
        self,
        instances: Sequence[UCInstance],
        formulations: Sequence[str] = tuple(FORMULATIONS),
        max_rounds: int | None = None,
        node_limit: int | None = None,
    ) -> None:
        unknown = [name for name in formulations if name not in FORMULATIONS]
        if unknown:
            raise ConfigurationError(f"unknown formulations: {', '.join(unknown)}")
        self._instances = list(instances)
        self._formulations = list(formulations)
        self._max_rounds = max_rounds
        self._node_limit = node_limit
        self._status = "pending"
        self._outcomes: list[InstanceOutcome] = []

    @classmethod
    def random(
        cls,
        seed: int,
        count: int,
        units: int = 2,
        periods: int = 12,
        formulations: Sequence[str] = tuple(FORMULATIONS),
    ) -> "DeskExperiment":
        rng = np.random.default_rng(seed)
        instances = [random_instance(rng, units=units, periods=periods) for _ in range(count)]
        return cls(instances, formulations)

    @property
    def status(self) -> str:
        return self._status

    @property
    def outcomes(self) -> list[InstanceOutcome]:
        return list(self._outcomes)

    def run(self) -> list[InstanceOutcome]:
        """Solve every instance; a failing formulation is recorded, not raised."""
        if self._status == "finished":
            return self.outcomes
        logger.info(
            "Starting desk experiment",
            instances=len(self._instances),
            formulations=len(self._formulations),
        )
        self._status = "running"
        self._outcomes = []
        try:
            for number, instance in enumerate(self._instances, start=1):
                self._outcomes.append(self._run_instance(number, instance))
        except Exception as e:
            logger.error("Desk experiment failed", error=str(e))
            self._status = "error"
            raise
        self._status = "finished"
        logger.info("Desk experiment finished", instances=len(self._outcomes))
        return self.outcomes

    def _run_instance(self, number: int, instance: UCInstance) -> InstanceOutcome:
        outcome = InstanceOutcome(number, mip_optimum(instance, node_limit=self._node_limit))
        for name in self._formulations:
            try:
                outcome.reports[name] = integrality_gap(
                    instance, name, mip=outcome.mip, max_rounds=self._max_rounds
                )
            except BtiepiError as e:
                logger.warning("Formulation failed", instance=number, formulation=name, error=str(e))
                outcome.errors[name] = str(e)
        return outcome

    def medians(self) -> dict[str, float]:
        """Median relative gap per formulation over the instances it solved."""
        medians = {}
        for name in self._formulations:
            gaps = [o.reports[name].gap for o in self._outcomes if name in o.reports]
            if gaps:
                medians[name] = float(np.median(gaps))
        return medians

    def dominance_violations(self) -> list[str]:
        """Instances where the LP bounds break the expected order of strength."""
        violations = []
        for outcome in self._outcomes:
            bounds = {name: report.lp for name, report in outcome.reports.items()}
            for weaker, stronger in DOMINANCE_PAIRS:
                if weaker not in bounds or stronger not in bounds:
                    continue
                if bounds[weaker] > bounds[stronger] + DOMINANCE_TOLERANCE * max(1.0, abs(bounds[stronger])):
                    violations.append(f"instance {outcome.instance}: {weaker} above {stronger}")
            if "temp" in bounds and "bti" in bounds:
                scale = HULL_AGREEMENT * max(1.0, abs(bounds["bti"]))
                if abs(bounds["temp"] - bounds["bti"]) > scale:
                    violations.append(f"instance {outcome.instance}: temp and bti bounds differ")
        return violations

    def summary(self) -> dict[str, Any]:
        return {
            "status": self._status,
            "instances": len(self._outcomes),
            "median_gap": self.medians(),
            "dominance_violations": self.dominance_violations(),
            "results": [outcome.to_dict() for outcome in self._outcomes],
        }
