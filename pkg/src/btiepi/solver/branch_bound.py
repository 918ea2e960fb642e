"""Best-first branch-and-bound over the integer columns of a LinearProgram."""

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..config import get_settings
from ..log import get_component_logger
from .program import LinearProgram, SolveResult, Status
from .simplex import solve_lp

logger = get_component_logger("btiepi.branch_bound")

INTEGRALITY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class _Node:
    bound: float
    bounds: tuple[tuple[int, float, float], ...]
    values: np.ndarray
    depth: int = 0


def _most_fractional(values: np.ndarray, integer_columns: list[int], tolerance: float) -> int | None:
    best = None
    best_distance = tolerance
    for j in integer_columns:
        distance = abs(values[j] - round(values[j]))
        if distance > best_distance:
            best, best_distance = j, distance
    return best


def solve_mip(
    lp: LinearProgram,
    node_limit: int | None = None,
    tolerance: float = INTEGRALITY_TOLERANCE,
) -> SolveResult:
    """
    Minimize ``lp`` with its integrality flags enforced.

    Nodes are explored in order of their LP bound; among equal bounds the
    deeper node goes first, so degenerate trees reach an incumbent early and
    the remaining ties are pruned. Branching is on the most fractional integer
    column. When the node limit is hit the best incumbent (if any) comes back
    with status iteration-limit.
    """
    limit = node_limit if node_limit is not None else get_settings().node_limit
    names = [column.name for column in lp.columns]
    integer_columns = lp.integer_columns()
    iterations = 0

    root = solve_lp(lp)
    iterations += root.iterations
    if not root.optimal or root.values is None or root.objective is None:
        return SolveResult(root.status, iterations=iterations, nodes=1, column_names=names)

    order = itertools.count()
    queue: list[tuple[float, int, int, _Node]] = []
    heapq.heappush(queue, (root.objective, 0, next(order), _Node(root.objective, (), root.values)))
    incumbent: np.ndarray | None = None
    incumbent_value = math.inf
    nodes = 1

    while queue:
        _, _, _, node = heapq.heappop(queue)
        if node.bound >= incumbent_value - 1e-9 * max(1.0, abs(incumbent_value)):
            continue
        j = _most_fractional(node.values, integer_columns, tolerance)
        if j is None:
            incumbent = node.values.copy()
            incumbent[integer_columns] = np.round(incumbent[integer_columns])
            incumbent_value = lp.objective_value(incumbent)
            logger.debug("New incumbent", objective=incumbent_value, nodes=nodes)
            continue

        value = node.values[j]
        column = lp.columns[j]
        current = {index: (lower, upper) for index, lower, upper in node.bounds}
        lower, upper = current.get(j, (column.lower, column.upper))
        for child_lower, child_upper in ((lower, math.floor(value)), (math.ceil(value), upper)):
            if child_lower > child_upper:
                continue
            if nodes >= limit:
                logger.warning("Node limit reached", nodes=nodes, limit=limit)
                return _finish(lp, incumbent, Status.ITERATION_LIMIT, iterations, nodes, names)
            nodes += 1
            child_bounds = {**current, j: (child_lower, child_upper)}
            result = solve_lp(lp.with_bounds(child_bounds))
            iterations += result.iterations
            if not result.optimal or result.values is None or result.objective is None:
                continue
            if result.objective >= incumbent_value:
                continue
            packed = tuple((index, lo, hi) for index, (lo, hi) in sorted(child_bounds.items()))
            child = _Node(result.objective, packed, result.values, node.depth + 1)
            heapq.heappush(queue, (child.bound, -child.depth, next(order), child))

    status = Status.OPTIMAL if incumbent is not None else Status.INFEASIBLE
    return _finish(lp, incumbent, status, iterations, nodes, names)


def _finish(
    lp: LinearProgram,
    incumbent: np.ndarray | None,
    status: Status,
    iterations: int,
    nodes: int,
    names: list[str],
) -> SolveResult:
    logger.debug("Branch-and-bound finished", status=status.value, nodes=nodes)
    if incumbent is None:
        return SolveResult(status, iterations=iterations, nodes=nodes, column_names=names)
    return SolveResult(
        status,
        objective=lp.objective_value(incumbent),
        values=incumbent,
        iterations=iterations,
        nodes=nodes,
        column_names=names,
    )
