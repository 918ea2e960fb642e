"""
Start-up cost functions, the time grid, and their discretization.

A start-up cost function maps the length L of the preceding offline time to the
cost of starting the unit. Two families are supported: the exponential
(thermal) model and a tabulated piecewise-linear concave model. The time grid
turns offline period counts into offline lengths so that CU^{t,l} can be
evaluated for a start-up in period t after l offline periods.
"""

import math
from collections.abc import Sequence
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    TypeAdapter,
    field_validator,
    model_validator,
)

from ..errors import ConfigurationError, DomainError

SLOPE_TOLERANCE = 1e-12
STRICT_SLOPE_DECREASE = 1e-12


class ExpStartupCost(BaseModel):
    """CU(L) = V(1 - exp(-lambda L)) + f for L > 0, and 0 for L = 0."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    type: Literal["exp"] = "exp"
    heating_cost: float = Field(alias="V", gt=0)
    fixed_cost: float = Field(alias="f", ge=0)
    heat_loss: float = Field(alias="lambda", gt=0)

    @property
    def strictly_concave(self) -> bool:
        return True

    @property
    def supremum(self) -> float:
        return self.heating_cost + self.fixed_cost

    def eval(self, offline: float) -> float:
        if offline < 0:
            raise DomainError(f"offline time must be nonnegative, got {offline}")
        if offline == 0:
            return 0.0
        return self.heating_cost * -math.expm1(-self.heat_loss * offline) + self.fixed_cost

    def eval_many(self, offline: np.ndarray) -> np.ndarray:
        offline = np.asarray(offline, dtype=float)
        if np.any(offline < 0):
            raise DomainError("offline times must be nonnegative")
        values = self.heating_cost * -np.expm1(-self.heat_loss * offline) + self.fixed_cost
        return np.where(offline > 0, values, 0.0)

    def cooling_factor(self, length: float) -> float:
        """exp(-lambda * length), the share of heat kept over ``length``."""
        return math.exp(-self.heat_loss * length)


class TabulatedConcaveCost(BaseModel):
    """
    Piecewise-linear start-up costs through sorted (offline time, cost) breakpoints.

    Beyond the last breakpoint the cost stays flat. Construction rejects tables
    that are not nondecreasing and concave.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    type: Literal["table"] = "table"
    breakpoints: tuple[tuple[float, float], ...] = Field(alias="points", min_length=1)

    _offline: np.ndarray = PrivateAttr()
    _cost: np.ndarray = PrivateAttr()

    @field_validator("breakpoints")
    @classmethod
    def _concave_table(
        cls, points: tuple[tuple[float, float], ...]
    ) -> tuple[tuple[float, float], ...]:
        if points[0] != (0.0, 0.0):
            raise ValueError("the first breakpoint must be (0, 0)")
        slopes = []
        for (l0, c0), (l1, c1) in zip(points, points[1:], strict=False):
            if l1 <= l0:
                raise ValueError("breakpoint offline times must be strictly increasing")
            if c1 < c0:
                raise ValueError("tabulated start-up costs must be nondecreasing")
            slopes.append((c1 - c0) / (l1 - l0))
        for before, after in zip(slopes, slopes[1:], strict=False):
            if after > before + SLOPE_TOLERANCE:
                raise ValueError("tabulated start-up costs must be concave (slopes nonincreasing)")
        return points

    def model_post_init(self, __context: Any) -> None:
        self._offline = np.array([p[0] for p in self.breakpoints], dtype=float)
        self._cost = np.array([p[1] for p in self.breakpoints], dtype=float)

    @property
    def slopes(self) -> list[float]:
        return list(np.diff(self._cost) / np.diff(self._offline))

    @property
    def strictly_concave(self) -> bool:
        """
        True when every slope is strictly below the one before it.

        A single segment has no slope decrease and counts as linear.
        """
        slopes = self.slopes
        if len(slopes) < 2:
            return False
        return all(
            before - after > STRICT_SLOPE_DECREASE
            for before, after in zip(slopes, slopes[1:], strict=False)
        )

    @property
    def supremum(self) -> float:
        return float(self._cost[-1])

    def eval(self, offline: float) -> float:
        if offline < 0:
            raise DomainError(f"offline time must be nonnegative, got {offline}")
        return float(np.interp(offline, self._offline, self._cost))

    def eval_many(self, offline: np.ndarray) -> np.ndarray:
        offline = np.asarray(offline, dtype=float)
        if np.any(offline < 0):
            raise DomainError("offline times must be nonnegative")
        return np.interp(offline, self._offline, self._cost)


StartupCostModel = Annotated[ExpStartupCost | TabulatedConcaveCost, Field(discriminator="type")]
_cost_adapter: TypeAdapter[ExpStartupCost | TabulatedConcaveCost] = TypeAdapter(StartupCostModel)


def load_cost(data: dict[str, Any] | str) -> ExpStartupCost | TabulatedConcaveCost:
    """Build a cost model from its JSON fragment (dict or JSON text)."""
    if isinstance(data, str):
        return _cost_adapter.validate_json(data)
    return _cost_adapter.validate_python(data)


def cost_from_spec(spec: str) -> ExpStartupCost | TabulatedConcaveCost:
    """
    Parse a compact cost description.

    ``exp:V=25,f=8,lambda=0.03`` builds the exponential model and
    ``table:0:0,1:10,4:16`` a tabulated one; anything starting with ``{`` is
    treated as the JSON fragment.
    """
    spec = spec.strip()
    if spec.startswith("{"):
        return load_cost(spec)
    kind, _, body = spec.partition(":")
    try:
        if kind == "exp":
            fields = dict(item.split("=", 1) for item in body.split(",") if item)
            return ExpStartupCost.model_validate(
                {key.strip(): float(value) for key, value in fields.items()}
            )
        if kind == "table":
            points = [tuple(float(x) for x in item.split(":")) for item in body.split(",") if item]
            return TabulatedConcaveCost.model_validate({"points": points})
    except ValueError as exc:
        raise ConfigurationError(f"invalid cost description {spec!r}: {exc}") from exc
    raise ConfigurationError(f"unknown cost type {kind!r}; expected 'exp' or 'table'")


class TimeGrid(BaseModel):
    """T periods of lengths delta(1..T) preceded by the offline time T^pre."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    periods: int = Field(alias="T", ge=1)
    period_lengths: tuple[float, ...] = Field(alias="delta")
    pre_offline: float = Field(default=0.0, ge=0)

    _cumulative: list[float] = PrivateAttr()

    @model_validator(mode="before")
    @classmethod
    def _default_unit_lengths(cls, data: Any) -> Any:
        if isinstance(data, dict):
            periods = data.get("T", data.get("periods"))
            if "delta" not in data and "period_lengths" not in data and periods is not None:
                data = {**data, "delta": [1.0] * int(periods)}
        return data

    @model_validator(mode="after")
    def _lengths_match(self) -> "TimeGrid":
        if len(self.period_lengths) != self.periods:
            raise ValueError(
                f"grid has T={self.periods} but {len(self.period_lengths)} period lengths"
            )
        if any(length <= 0 for length in self.period_lengths):
            raise ValueError("every period length must be positive")
        return self

    def model_post_init(self, __context: Any) -> None:
        cumulative = [0.0]
        for length in self.period_lengths:
            cumulative.append(cumulative[-1] + length)
        self._cumulative = cumulative

    @classmethod
    def uniform(cls, periods: int, pre_offline: float = 0.0, length: float = 1.0) -> "TimeGrid":
        return cls(T=periods, delta=[length] * periods, pre_offline=pre_offline)

    def length(self, t: int) -> float:
        """delta(t) for 1-based period t."""
        if not 1 <= t <= self.periods:
            raise DomainError(f"period {t} outside [1, {self.periods}]")
        return self.period_lengths[t - 1]

    def offline_length(self, t: int, l: int) -> float:
        """Offline time before a start-up in period t after l offline periods."""
        if not 1 <= t <= self.periods:
            raise DomainError(f"period {t} outside [1, {self.periods}]")
        if not 0 <= l <= t - 1:
            raise DomainError(f"offline count {l} outside [0, {t - 1}] for period {t}")
        value = self._cumulative[t - 1] - self._cumulative[t - 1 - l]
        if l == t - 1:
            value += self.pre_offline
        return value

    def prefix_offline(self) -> list[float]:
        """
        Delta(t, t-1) for t = 0..T (index 0 unused, set to 0).

        Delta(1, 0) = T^pre and Delta(t, t-1) = Delta(t-1, t-2) + delta(t-1).
        """
        prefix = [0.0] * (self.periods + 1)
        prefix[1] = self.pre_offline
        for t in range(2, self.periods + 1):
            prefix[t] = prefix[t - 1] + self.period_lengths[t - 2]
        return prefix


def discrete_cost(
    cost: ExpStartupCost | TabulatedConcaveCost, grid: TimeGrid, t: int, l: int
) -> float:
    """CU^{t,l}: cost of a start-up in period t after l offline periods."""
    return cost.eval(grid.offline_length(t, l))


class CostTable:
    """All CU^{t,l} of a grid, evaluated once. ``table[t, l]`` is NaN outside l < t."""

    def __init__(
        self, cost: ExpStartupCost | TabulatedConcaveCost, grid: TimeGrid
    ) -> None:
        self.cost = cost
        self.grid = grid
        T = grid.periods
        offline = np.full((T + 1, T), np.nan)
        for t in range(1, T + 1):
            for l in range(t):
                offline[t, l] = grid.offline_length(t, l)
        values = np.full_like(offline, np.nan)
        mask = ~np.isnan(offline)
        values[mask] = cost.eval_many(offline[mask])
        self.offline = offline
        self.table = values

    def __call__(self, t: int, l: int) -> float:
        if not 1 <= t <= self.grid.periods or not 0 <= l <= t - 1:
            raise DomainError(f"no discrete cost for period {t} and offline count {l}")
        return float(self.table[t, l])

    def row(self, t: int) -> Sequence[float]:
        """CU^{t,0..t-1}."""
        return [float(v) for v in self.table[t, :t]]
