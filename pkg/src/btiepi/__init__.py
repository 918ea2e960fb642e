"""
btiepi: binary tree inequalities for the epigraph of summed start-up costs.

This package describes the convex hull of the start-up cost epigraph of a
single Unit Commitment unit, separates it exactly in linear time, and compares
start-up cost formulations on desk-scale Unit Commitment instances.
"""

from .epigraph.bti import BTICut, envelope, separate
from .epigraph.cost_model import ExpStartupCost, TabulatedConcaveCost, TimeGrid
from .epigraph.ranktree import RankTree, enumerate_trees, find_cartesian_tree
from .epigraph.schedule import FracPoint, Schedule, dcu_sum

__version__ = "0.1.0"
__all__ = [
    "BTICut",
    "ExpStartupCost",
    "FracPoint",
    "RankTree",
    "Schedule",
    "TabulatedConcaveCost",
    "TimeGrid",
    "dcu_sum",
    "enumerate_trees",
    "envelope",
    "find_cartesian_tree",
    "separate",
]
