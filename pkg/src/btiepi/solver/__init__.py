"""
Small LP/MIP solver for desk-scale models.

``cutting_plane`` and ``gap`` depend on the Unit Commitment models and are
imported by module path.
"""

from .branch_bound import solve_mip
from .program import LinearProgram, Sense, SolveResult, Status
from .simplex import solve_lp

__all__ = ["LinearProgram", "Sense", "SolveResult", "Status", "solve_lp", "solve_mip"]
