"""Time grid factory for btiepi tests."""

import numpy as np

from btiepi.epigraph.cost_model import TimeGrid


class GridFactory:
    """Factory for TimeGrid instances."""

    @classmethod
    def create(
        cls,
        *,
        periods: int = 4,
        pre_offline: float = 0.0,
        delta: list[float] | None = None,
    ) -> TimeGrid:
        return TimeGrid(T=periods, delta=delta or [1.0] * periods, pre_offline=pre_offline)

    @classmethod
    def irregular(cls, rng: np.random.Generator, periods: int = 4) -> TimeGrid:
        """Random period lengths in [0.5, 2] and a random pre-horizon offline time."""
        return cls.create(
            periods=periods,
            pre_offline=float(rng.uniform(0.0, 3.0)),
            delta=[float(v) for v in rng.uniform(0.5, 2.0, periods)],
        )
