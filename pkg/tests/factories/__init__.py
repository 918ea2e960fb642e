"""Test data factories for btiepi.

All tests build cost models, grids and instances through these factories.

Usage:
    from tests.factories import CostFactory, GridFactory, InstanceFactory

    cost = CostFactory.create(heating_cost=25, fixed_cost=8, heat_loss=0.3)
    grid = GridFactory.create(periods=5, pre_offline=2)
    instance = InstanceFactory.create(demand=[50, 80, 60])
"""

from .cost_factory import CostFactory
from .grid_factory import GridFactory
from .instance_factory import InstanceFactory

__all__ = ["CostFactory", "GridFactory", "InstanceFactory"]
