"""Start-up cost model factory for btiepi tests."""

import numpy as np

from btiepi.epigraph.cost_model import ExpStartupCost, TabulatedConcaveCost


class CostFactory:
    """Factory for start-up cost models."""

    @classmethod
    def create(
        cls,
        *,
        heating_cost: float = 25.0,
        fixed_cost: float = 8.0,
        heat_loss: float = 0.3,
    ) -> ExpStartupCost:
        """Create an exponential cost CU(L) = V(1 - exp(-lambda L)) + f."""
        return ExpStartupCost(V=heating_cost, f=fixed_cost, heat_loss=heat_loss)

    @classmethod
    def random(cls, rng: np.random.Generator) -> ExpStartupCost:
        """Random exponential cost with coefficients of moderate magnitude."""
        return cls.create(
            heating_cost=float(rng.uniform(5.0, 50.0)),
            fixed_cost=float(rng.uniform(0.0, 10.0)),
            heat_loss=float(rng.uniform(0.1, 1.0)),
        )

    @classmethod
    def table(cls, points: list[tuple[float, float]] | None = None) -> TabulatedConcaveCost:
        """Concave piecewise-linear cost with a flat tail."""
        return TabulatedConcaveCost(points=points or [(0, 0), (1, 10), (4, 16), (8, 18)])

    @classmethod
    def linear_table(cls, slope: float = 2.0, reach: float = 20.0) -> TabulatedConcaveCost:
        """Linear cost up to ``reach`` (non-strict, so BTIs can coincide)."""
        return TabulatedConcaveCost(points=[(0, 0), (reach, slope * reach)])
