"""
Unit Commitment instances.

Instance JSON::

    {"grid": {"T": 3, "delta": [1, 1, 1]},
     "units": [{"var_cost": 20, "fixed_cost": 100, "p_min": 20, "p_max": 100,
                "ramp_up": 50, "startup_ramp": 60, "ramp_down": 50,
                "shutdown_ramp": 60, "pre_offline": 2,
                "startup": {"type": "exp", "V": 300, "f": 40, "lambda": 0.2}}],
     "demand": [50, 80, 60]}
"""

import csv
import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigurationError
from ..epigraph.cost_model import StartupCostModel, TimeGrid
from ..log import get_component_logger

logger = get_component_logger("btiepi.instance")


class Unit(BaseModel):
    """A thermal unit with linear production costs and a concave start-up cost."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    var_cost: float = Field(alias="A", ge=0)
    fixed_cost: float = Field(alias="B", ge=0)
    p_min: float = Field(ge=0)
    p_max: float = Field(gt=0)
    ramp_up: float = Field(gt=0)
    startup_ramp: float = Field(gt=0)
    ramp_down: float = Field(gt=0)
    shutdown_ramp: float = Field(gt=0)
    startup: StartupCostModel
    pre_offline: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _consistent_limits(self) -> "Unit":
        if self.p_min > self.p_max:
            raise ValueError(f"p_min {self.p_min} exceeds p_max {self.p_max}")
        for name in ("startup_ramp", "shutdown_ramp"):
            value = getattr(self, name)
            if value < self.p_min:
                raise ValueError(f"{name} {value} is below p_min {self.p_min}")
            if value > self.p_max:
                logger.warning(
                    "Ramp limit above p_max never binds", field=name, value=value, p_max=self.p_max
                )
        return self


class UCInstance(BaseModel):
    model_config = ConfigDict(frozen=True)

    units: tuple[Unit, ...] = Field(min_length=1)
    grid: TimeGrid
    demand: tuple[float, ...]

    @model_validator(mode="after")
    def _demand_matches_grid(self) -> "UCInstance":
        if len(self.demand) != self.grid.periods:
            raise ValueError(
                f"demand has {len(self.demand)} values but the grid has {self.grid.periods} periods"
            )
        capacity = sum(unit.p_max for unit in self.units)
        if self.demand and max(self.demand) > capacity:
            logger.warning(
                "Demand exceeds installed capacity", peak=max(self.demand), capacity=capacity
            )
        return self

    @property
    def periods(self) -> int:
        return self.grid.periods

    @property
    def num_units(self) -> int:
        return len(self.units)

    def unit(self, i: int) -> Unit:
        """Unit i, 1-based."""
        return self.units[i - 1]

    def unit_grid(self, i: int) -> TimeGrid:
        """The instance grid with the pre-model offline time of unit i."""
        return TimeGrid(
            T=self.grid.periods,
            delta=self.grid.period_lengths,
            pre_offline=self.unit(i).pre_offline,
        )

    def to_json(self, indent: int | None = 2) -> str:
        return self.model_dump_json(by_alias=True, indent=indent)


def read_demand_csv(path: Path | str) -> list[float]:
    """One demand value per line; blank lines and ``#`` comments are skipped."""
    values = []
    with open(path, newline="") as handle:
        for line_number, row in enumerate(csv.reader(handle), start=1):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                values.append(float(row[0]))
            except ValueError as exc:
                raise ConfigurationError(
                    f"{path}: line {line_number} is not a demand value: {row[0]!r}"
                ) from exc
    return values


def load_instance(path: Path | str, demand_csv: Path | str | None = None) -> UCInstance:
    """
    Read an instance JSON file.

    Args:
        path: JSON file with ``grid``, ``units`` and ``demand``.
        demand_csv: Optional CSV file whose values replace ``demand``.

    Raises:
        ConfigurationError: If a file cannot be read or parsed.
    """
    try:
        data: dict[str, Any] = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read instance {path}: {exc}") from exc
    if demand_csv is not None:
        data["demand"] = read_demand_csv(demand_csv)
    return UCInstance.model_validate(data)
