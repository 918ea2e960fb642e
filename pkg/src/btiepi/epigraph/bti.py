"""
Binary tree inequalities (BTIs) for the summed start-up cost epigraph.

Every rank-labeled tree B on 1..T induces the inequality c_sigma >= sum_t a_t u_t
with a_t the change of the summed start-up costs when period t is switched on
after lambda(t) and before rho(t) offline periods. The Cartesian tree of a point
yields the most violated BTI, which gives an exact O(T) separation routine and
an explicit formula for the convex envelope.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..config import get_settings
from ..errors import DomainError
from ..log import get_component_logger
from .cost_model import ExpStartupCost, TabulatedConcaveCost, TimeGrid
from .ranktree import OperationCounter, RankTree, find_cartesian_tree, subtree_sizes
from .schedule import FracPoint, Schedule, check_unit_box

logger = get_component_logger("btiepi.bti")

Cost = ExpStartupCost | TabulatedConcaveCost


@dataclass(frozen=True, slots=True)
class BTICut:
    """c_sigma >= sum_t a_t u_t, induced by ``source_tree``."""

    coefficients: tuple[float, ...]
    source_tree: RankTree

    @property
    def periods(self) -> int:
        return len(self.coefficients)

    def rhs(self, u: Sequence[float]) -> float:
        if len(u) != len(self.coefficients):
            raise DomainError(f"point has {len(u)} periods, cut has {len(self.coefficients)}")
        return float(np.dot(self.coefficients, np.asarray(u, dtype=float)))

    def violation(self, u: Sequence[float], c_sigma: float) -> float:
        """Positive iff (u, c_sigma) violates the cut."""
        return self.rhs(u) - c_sigma

    def to_dict(self) -> dict[str, Any]:
        return {"a": list(self.coefficients), "tree": self.source_tree.to_text()}


@dataclass(frozen=True, slots=True)
class SubtreeOfflineLengths:
    """Offline lengths of L(t), R(t) and S(t) per node (index 0 unused)."""

    left: tuple[float, ...]
    right: tuple[float, ...]
    principal: tuple[float, ...]


@dataclass(frozen=True, slots=True)
class InEpigraph:
    rhs_at_point: float
    counter: OperationCounter = field(default_factory=OperationCounter, compare=False)

    @property
    def separated(self) -> bool:
        return False

    def to_dict(self) -> dict[str, Any]:
        return {"in_epigraph": True}


@dataclass(frozen=True, slots=True)
class SeparationResult:
    """A violated BTI together with its value at the separated point."""

    cut: BTICut
    rhs_at_point: float
    violation: float
    counter: OperationCounter = field(default_factory=OperationCounter, compare=False)

    @property
    def separated(self) -> bool:
        return True

    @property
    def tree(self) -> RankTree:
        return self.cut.source_tree

    def to_dict(self) -> dict[str, Any]:
        return {
            "cut": {
                "a": list(self.cut.coefficients),
                "rhs_at_point": self.rhs_at_point,
                "violation": self.violation,
                "tree": self.tree.to_text(),
            }
        }


@dataclass(frozen=True, slots=True)
class Envelope:
    """Envelope value with the Cartesian tree and BTI that certify it."""

    value: float
    cut: BTICut


def subtree_offline_lengths(
    tree: RankTree, grid: TimeGrid, counter: OperationCounter | None = None
) -> SubtreeOfflineLengths:
    if tree.n != grid.periods:
        raise DomainError(f"tree has {tree.n} nodes, grid has {grid.periods} periods")
    sizes = subtree_sizes(tree)
    prefix = grid.prefix_offline()
    n = tree.n
    # cumulative[k] = delta(1) + ... + delta(k)
    cumulative = [0.0] * (n + 1)
    for t in range(1, n + 1):
        cumulative[t] = cumulative[t - 1] + grid.period_lengths[t - 1]
    left = [0.0] * (n + 1)
    right = [0.0] * (n + 1)
    principal = [0.0] * (n + 1)
    for t in range(1, n + 1):
        lam = sizes.left[t]
        rho = sizes.right[t]
        left[t] = prefix[t] - prefix[t - lam] if lam < t - 1 else prefix[t]
        right[t] = cumulative[t + rho] - cumulative[t]
        principal[t] = left[t] + grid.period_lengths[t - 1] + right[t]
    if counter is not None:
        counter.add("subtree_sizes", 2 * n)
        counter.add("offline_lengths", 2 * n)
    return SubtreeOfflineLengths(tuple(left), tuple(right), tuple(principal))


def coefficients(
    tree: RankTree, cost: Cost, grid: TimeGrid, counter: OperationCounter | None = None
) -> BTICut:
    """a_t = CU(L) + CU(R) - CU(S) if a later start-up exists, CU(L) otherwise."""
    lengths = subtree_offline_lengths(tree, grid, counter)
    sizes = subtree_sizes(tree)
    n = tree.n
    nodes = np.arange(1, n + 1)
    has_successor = nodes + np.asarray(sizes.right[1:]) < n
    cu_left = cost.eval_many(np.asarray(lengths.left[1:]))
    cu_right = cost.eval_many(np.asarray(lengths.right[1:]))
    cu_principal = cost.eval_many(np.asarray(lengths.principal[1:]))
    a = np.where(has_successor, cu_left + cu_right - cu_principal, cu_left)
    if counter is not None:
        counter.add("coefficients", n)
    return BTICut(tuple(float(v) for v in a), tree)


def _check_point(u: Sequence[float], grid: TimeGrid) -> None:
    if len(u) != grid.periods:
        raise DomainError(f"point has {len(u)} periods, grid has {grid.periods}")
    check_unit_box(u)


def certified_envelope(u: Sequence[float], cost: Cost, grid: TimeGrid) -> Envelope:
    _check_point(u, grid)
    cut = coefficients(find_cartesian_tree(u), cost, grid)
    return Envelope(cut.rhs(u), cut)


def envelope(u: Sequence[float], cost: Cost, grid: TimeGrid) -> float:
    """Convex envelope of the summed start-up costs at u in [0,1]^T."""
    return certified_envelope(u, cost, grid).value


def separate(
    point: FracPoint,
    cost: Cost,
    grid: TimeGrid,
    tolerance: float | None = None,
    relative: bool = False,
) -> InEpigraph | SeparationResult:
    """
    Exact separation over the epigraph hull.

    The BTI of the Cartesian tree of u is the most violated one, so the point
    lies in the epigraph hull iff it satisfies that single cut.
    """
    _check_point(point.u, grid)
    threshold = tolerance if tolerance is not None else get_settings().separation_tolerance
    counter = OperationCounter()
    tree = find_cartesian_tree(point.u, counter)
    cut = coefficients(tree, cost, grid, counter)
    rhs = cut.rhs(point.u)
    counter.add("evaluation", grid.periods)
    violation = rhs - point.c_sigma
    limit = threshold * max(1.0, abs(rhs)) if relative else threshold
    if violation > limit:
        logger.debug("Separated point", periods=grid.periods, violation=violation)
        return SeparationResult(cut, rhs, violation, counter)
    return InEpigraph(rhs, counter)


def separate_many(
    items: Iterable[tuple[FracPoint, Cost, TimeGrid]],
    tolerance: float | None = None,
    relative: bool = False,
) -> list[InEpigraph | SeparationResult]:
    """Separate one point per unit; results keep the input order."""
    return [separate(point, cost, grid, tolerance, relative) for point, cost, grid in items]


def tight_points(tree: RankTree) -> list[Schedule]:
    """
    T binary schedules on which the BTI of ``tree`` is tight.

    Nodes are switched on one at a time in depth order, so every prefix induces
    a subtree containing the root. Together with u = 0 these points are affinely
    independent.
    """
    on = [0] * tree.n
    points = []
    for t in tree.depth_order():
        on[t - 1] = 1
        points.append(Schedule(tuple(on)))
    return points
