"""
Start-up cost epigraph of a single unit.

Cost models, schedules, rank trees, binary tree inequalities and the
brute-force oracles that check them.
"""

from .bti import BTICut, InEpigraph, SeparationResult, coefficients, envelope, separate
from .cost_model import ExpStartupCost, TabulatedConcaveCost, TimeGrid, cost_from_spec, load_cost
from .ranktree import OperationCounter, RankTree, enumerate_trees, find_cartesian_tree
from .schedule import FracPoint, Schedule, dcu_sum, delta_sum

__all__ = [
    "BTICut",
    "ExpStartupCost",
    "FracPoint",
    "InEpigraph",
    "OperationCounter",
    "RankTree",
    "Schedule",
    "SeparationResult",
    "TabulatedConcaveCost",
    "TimeGrid",
    "coefficients",
    "cost_from_spec",
    "dcu_sum",
    "delta_sum",
    "enumerate_trees",
    "envelope",
    "find_cartesian_tree",
    "load_cost",
    "separate",
]
