"""
Brute-force ground truth for the epigraph results.

Everything here enumerates: all 2^T schedules, all C_T rank trees, or both.
The fast routines in ``bti`` are checked against these oracles, so no oracle
calls the separation shortcut to reach its own verdict. Every enumeration is
guarded by a hard cap.
"""

from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from itertools import product

import numpy as np
from pydantic import BaseModel, Field

from ..config import get_settings
from ..errors import CapExceededError, DomainError
from ..log import get_component_logger
from .bti import coefficients, envelope, separate, tight_points
from .cost_model import TimeGrid, load_cost
from .ranktree import RankTree, enumerate_trees, mirror, subtree_sizes, top_nodes
from .schedule import Cost, FracPoint, Schedule, check_unit_box, dcu_sum, delta_sum

logger = get_component_logger("btiepi.oracle")

CENSUS_CAP = 9
EQUALITY_CAP = 8
VALIDITY_CAP = 8
IRREDUNDANCY_CAP = 7
HULL_CAP = 6
TOP_NODE_CAP = 8
RANK_TOLERANCE = 1e-9


class OracleReport(BaseModel):
    check: str
    periods: int
    checked: int = 0
    violations: int = 0
    examples: list[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def note(self, example: str, limit: int = 10) -> None:
        self.violations += 1
        if len(self.examples) < limit:
            self.examples.append(example)


class FacetCensus(BaseModel):
    periods: int
    trees: int
    distinct_btis: int
    facet_confirmed: int
    duplicates: list[tuple[str, str]] = Field(default_factory=list)
    trivial: int
    total: int


class EqualityReport(OracleReport):
    if_failures: int = 0
    only_if_failures: int = 0
    strictly_concave: bool = True


class IrredundancyReport(OracleReport):
    root_witness_pairs: int = 0
    root_witness_failures: int = 0


class SeparationReport(OracleReport):
    separated: int = 0
    max_rhs_difference: float = 0.0


class DeviationReport(OracleReport):
    max_deviation: float = 0.0


class MonotonicityReport(OracleReport):
    min_margin: float = float("inf")

    @property
    def strict(self) -> bool:
        return self.ok and self.min_margin > 0.0


class VertexSet:
    """(u, DCU(u)) for all u in {0,1}^T, in lexicographic order of u."""

    def __init__(self, vertices: list[tuple[Schedule, float]]) -> None:
        self.vertices = vertices
        self.points = np.array([u.on_off for u, _ in vertices], dtype=float)
        self.costs = np.array([c for _, c in vertices], dtype=float)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[tuple[Schedule, float]]:
        return iter(self.vertices)


def _require(what: str, requested: int, cap: int) -> None:
    if requested > cap:
        raise CapExceededError(what, requested, cap)


def enumerate_vertices(cost: Cost, grid: TimeGrid, cap: int | None = None) -> VertexSet:
    limit = cap if cap is not None else get_settings().vertex_cap
    _require("vertex enumeration", grid.periods, limit)
    vertices = []
    for values in product((0, 1), repeat=grid.periods):
        u = Schedule(values)
        vertices.append((u, dcu_sum(cost, grid, u)))
    return VertexSet(vertices)


def _coefficient_block(cost_json: str, grid_json: str, root: int) -> np.ndarray:
    cost = load_cost(cost_json)
    grid = TimeGrid.model_validate_json(grid_json)
    rows = [
        coefficients(tree, cost, grid).coefficients
        for tree in enumerate_trees(grid.periods, cap=grid.periods, root=root)
    ]
    return np.array(rows, dtype=float).reshape(len(rows), grid.periods)


@lru_cache(maxsize=16)
def _cached_matrix(cost_json: str, grid_json: str, jobs: int) -> np.ndarray:
    T = TimeGrid.model_validate_json(grid_json).periods
    roots = range(1, T + 1)
    if jobs > 1 and T > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, T)) as pool:
            blocks = list(pool.map(_coefficient_block, [cost_json] * T, [grid_json] * T, roots))
    else:
        blocks = [_coefficient_block(cost_json, grid_json, root) for root in roots]
    matrix = np.vstack(blocks)
    matrix.flags.writeable = False
    logger.debug("Built tree coefficient matrix", periods=T, trees=matrix.shape[0], jobs=jobs)
    return matrix


def tree_coefficient_matrix(
    cost: Cost, grid: TimeGrid, cap: int | None = None, jobs: int | None = None
) -> np.ndarray:
    """
    BTI coefficients of every rank tree, one row per tree in ``enumerate_trees`` order.

    Trees are split by root across ``jobs`` worker processes; blocks are stacked
    in root order, so the result does not depend on the worker count.
    """
    limit = cap if cap is not None else get_settings().enumeration_cap
    _require("tree enumeration", grid.periods, limit)
    workers = jobs if jobs is not None else get_settings().jobs
    return _cached_matrix(
        cost.model_dump_json(by_alias=True), grid.model_dump_json(by_alias=True), workers
    )


def max_rhs_over_trees(
    u: Sequence[float], cost: Cost, grid: TimeGrid, cap: int | None = None, jobs: int | None = None
) -> float:
    """max over all rank trees B of a_B . u."""
    if len(u) != grid.periods:
        raise DomainError(f"point has {len(u)} periods, grid has {grid.periods}")
    check_unit_box(u)
    matrix = tree_coefficient_matrix(cost, grid, cap, jobs)
    return float(np.max(matrix @ np.asarray(u, dtype=float)))


def _tight_mask(rhs: np.ndarray, costs: np.ndarray) -> np.ndarray:
    return np.abs(rhs - costs[:, None]) <= RANK_TOLERANCE * np.maximum(1.0, np.abs(costs))[:, None]


def _affinely_independent_with_origin(points: np.ndarray, periods: int) -> bool:
    if points.shape[0] < periods:
        return False
    return int(np.linalg.matrix_rank(points, tol=RANK_TOLERANCE)) == periods


def facet_census(
    cost: Cost, grid: TimeGrid, tolerance: float = 1e-9, jobs: int | None = None
) -> FacetCensus:
    """
    Count distinct BTIs and confirm each one as a facet.

    A BTI is confirmed when T tight vertices (u, DCU(u)) exist that together
    with the origin are affinely independent. The depth-order schedules of the
    tree are tried first, then all tight vertices.
    """
    T = grid.periods
    _require("facet census", T, CENSUS_CAP)
    trees = list(enumerate_trees(T, cap=CENSUS_CAP))
    matrix = tree_coefficient_matrix(cost, grid, cap=CENSUS_CAP, jobs=jobs)
    vertices = enumerate_vertices(cost, grid)
    tight = _tight_mask(vertices.points @ matrix.T, vertices.costs)

    representatives: list[int] = []
    duplicates: list[tuple[str, str]] = []
    for k in range(len(trees)):
        if representatives:
            close = np.all(np.abs(matrix[representatives] - matrix[k]) <= tolerance, axis=1)
            if np.any(close):
                original = representatives[int(np.argmax(close))]
                duplicates.append((trees[k].to_text(), trees[original].to_text()))
                continue
        representatives.append(k)

    confirmed = 0
    for k in representatives:
        lifted = np.array(
            [[*u.on_off, dcu_sum(cost, grid, u)] for u in tight_points(trees[k])], dtype=float
        )
        on_facet = bool(np.all(np.abs(lifted[:, :T] @ matrix[k] - lifted[:, T]) <= RANK_TOLERANCE * np.maximum(1.0, np.abs(lifted[:, T]))))
        if on_facet and _affinely_independent_with_origin(lifted, T):
            confirmed += 1
            continue
        mask = tight[:, k]
        candidates = np.column_stack([vertices.points[mask], vertices.costs[mask]])
        if _affinely_independent_with_origin(candidates, T):
            confirmed += 1

    census = FacetCensus(
        periods=T,
        trees=len(trees),
        distinct_btis=len(representatives),
        facet_confirmed=confirmed,
        duplicates=duplicates,
        trivial=2 * T,
        total=confirmed + 2 * T,
    )
    logger.info("Facet census", periods=T, distinct=census.distinct_btis, confirmed=confirmed)
    return census


def _rooted_subtree_mask(tree: RankTree, points: np.ndarray) -> np.ndarray:
    """Rows of ``points`` whose 1-entries induce a subtree of ``tree`` containing its root."""
    parents = tree.parents()
    children = [t for t in range(1, tree.n + 1) if t != tree.root]
    mask = points[:, tree.root - 1] == 1
    if children:
        child_columns = np.array(children) - 1
        parent_columns = np.array([parents[t] for t in children]) - 1
        mask &= np.all(points[:, child_columns] <= points[:, parent_columns], axis=1)
    return mask


def verify_equality_characterization(cost: Cost, grid: TimeGrid) -> EqualityReport:
    """Tight iff u = 0 or the 1-entries of u induce a subtree containing the root."""
    T = grid.periods
    _require("equality characterization", T, EQUALITY_CAP)
    report = EqualityReport(check="equality", periods=T, strictly_concave=cost.strictly_concave)
    vertices = enumerate_vertices(cost, grid)
    matrix = tree_coefficient_matrix(cost, grid, cap=EQUALITY_CAP)
    tight = _tight_mask(vertices.points @ matrix.T, vertices.costs)
    zero = ~np.any(vertices.points, axis=1)
    for k, tree in enumerate(enumerate_trees(T, cap=EQUALITY_CAP)):
        expected = zero | _rooted_subtree_mask(tree, vertices.points)
        for index in np.flatnonzero(expected != tight[:, k]):
            u = vertices.vertices[index][0]
            if expected[index]:
                report.if_failures += 1
                report.note(f"{tree.to_text()} not tight at {u}")
            else:
                # without strict concavity extra tight points are allowed
                report.only_if_failures += 1
                if report.strictly_concave:
                    report.note(f"{tree.to_text()} tight at {u} without a rooted subtree")
        report.checked += len(vertices)
    return report


def verify_irredundancy(cost: Cost, grid: TimeGrid) -> IrredundancyReport:
    """For all ordered pairs of distinct trees, a vertex tight for the first and slack for the second."""
    T = grid.periods
    _require("irredundancy check", T, IRREDUNDANCY_CAP)
    report = IrredundancyReport(check="irredundancy", periods=T)
    trees = list(enumerate_trees(T, cap=IRREDUNDANCY_CAP))
    vertices = enumerate_vertices(cost, grid)
    matrix = tree_coefficient_matrix(cost, grid, cap=IRREDUNDANCY_CAP)
    rhs = vertices.points @ matrix.T
    tight = _tight_mask(rhs, vertices.costs)
    scale = RANK_TOLERANCE * np.maximum(1.0, np.abs(vertices.costs))[:, None]
    slack = rhs < vertices.costs[:, None] - scale
    witnesses = tight.T.astype(np.int64) @ slack.astype(np.int64)
    for first, second in product(range(len(trees)), repeat=2):
        if first == second:
            continue
        report.checked += 1
        if witnesses[first, second] == 0:
            report.note(f"{trees[first].to_text()} vs {trees[second].to_text()}")
        root = trees[first].root
        if root != trees[second].root:
            report.root_witness_pairs += 1
            # e_root sits at index 2^(T - root) in lexicographic order
            index = 1 << (T - root)
            if not (tight[index, first] and slack[index, second]):
                report.root_witness_failures += 1
                report.note(f"e_{root} does not separate {trees[first]} from {trees[second]}")
    return report


def verify_validity(cost: Cost, grid: TimeGrid) -> OracleReport:
    """DCU(u) >= a_B . u for every tree B and every binary u."""
    T = grid.periods
    _require("validity sweep", T, VALIDITY_CAP)
    report = OracleReport(check="validity", periods=T)
    vertices = enumerate_vertices(cost, grid)
    matrix = tree_coefficient_matrix(cost, grid, cap=VALIDITY_CAP)
    excess = vertices.points @ matrix.T - vertices.costs[:, None]
    limit = RANK_TOLERANCE * np.maximum(1.0, np.abs(vertices.costs))[:, None]
    report.checked = int(excess.size)
    for index, k in zip(*np.nonzero(excess > limit), strict=True):
        report.note(f"tree #{k} violated at {vertices.vertices[index][0]} by {excess[index, k]:.3e}")
    return report


def hull_value(u: Sequence[float], cost: Cost, grid: TimeGrid) -> float:
    """
    min sum_j alpha_j DCU(v_j) over convex combinations of vertices v_j equal to u.

    Solved as an LP over the 2^T weights.
    """
    from ..solver.program import LinearProgram, Sense
    from ..solver.simplex import solve_lp

    T = grid.periods
    _require("hull LP", T, HULL_CAP)
    if len(u) != T:
        raise DomainError(f"point has {len(u)} periods, grid has {T}")
    check_unit_box(u)
    vertices = enumerate_vertices(cost, grid)
    lp = LinearProgram("hull")
    for j, (_, value) in enumerate(vertices):
        lp.add_column(f"alpha_{j}", 0.0, cost=value)
    for t in range(T):
        lp.add_row(
            {j: 1.0 for j in range(len(vertices)) if vertices.points[j, t]},
            Sense.EQ,
            float(u[t]),
            f"coord_{t + 1}",
        )
    lp.add_row({j: 1.0 for j in range(len(vertices))}, Sense.EQ, 1.0, "convexity")
    result = solve_lp(lp)
    if result.objective is None:
        raise DomainError(f"hull LP failed with status {result.status.value}")
    return result.objective


def in_epigraph_hull(
    u: Sequence[float], c_sigma: float, cost: Cost, grid: TimeGrid, tolerance: float = 1e-7
) -> bool:
    """Membership in the convex hull of the vertices plus the upward ray."""
    return c_sigma >= hull_value(u, cost, grid) - tolerance


def random_points(
    rng: np.random.Generator, cost: Cost, grid: TimeGrid, count: int
) -> list[FracPoint]:
    """Random points in [0,1]^T with c_sigma spread around the envelope."""
    points = []
    for _ in range(count):
        u = rng.uniform(0.0, 1.0, grid.periods)
        level = envelope(u, cost, grid)
        points.append(FracPoint.of(u, level * float(rng.uniform(0.5, 1.5))))
    return points


def verify_separation(
    cost: Cost,
    grid: TimeGrid,
    points: Sequence[FracPoint],
    tolerance: float = 1e-9,
    jobs: int | None = None,
) -> SeparationReport:
    """Compare the Cartesian-tree separation against the maximum over all trees."""
    report = SeparationReport(check="separation", periods=grid.periods)
    matrix = tree_coefficient_matrix(cost, grid, jobs=jobs)
    for point in points:
        report.checked += 1
        brute = float(np.max(matrix @ np.asarray(point.u)))
        outcome = separate(point, cost, grid, tolerance=tolerance)
        difference = abs(outcome.rhs_at_point - brute)
        report.max_rhs_difference = max(report.max_rhs_difference, difference)
        brute_separates = brute - point.c_sigma > tolerance
        if outcome.separated:
            report.separated += 1
        if difference > tolerance * max(1.0, abs(brute)) or outcome.separated != brute_separates:
            report.note(f"u={list(point.u)} c={point.c_sigma}: fast {outcome.rhs_at_point}, brute {brute}")
    return report


def verify_homogeneity(
    cost: Cost,
    grid: TimeGrid,
    rng: np.random.Generator,
    samples: int = 1000,
    tolerance: float = 1e-9,
    use_trees: bool = False,
) -> DeviationReport:
    """|f(alpha u) - alpha f(u)| for the envelope (or the maximum over all trees)."""
    report = DeviationReport(check="homogeneity", periods=grid.periods)
    if use_trees:
        matrix = tree_coefficient_matrix(cost, grid)

        def value(point: np.ndarray) -> float:
            return float(np.max(matrix @ point))

    else:

        def value(point: np.ndarray) -> float:
            return envelope(point, cost, grid)

    for _ in range(samples):
        u = rng.uniform(0.0, 1.0, grid.periods)
        alpha = float(rng.uniform(0.0, 1.0))
        deviation = abs(value(alpha * u) - alpha * value(u))
        report.checked += 1
        report.max_deviation = max(report.max_deviation, deviation)
        if deviation > tolerance * max(1.0, abs(value(u))):
            report.note(f"alpha={alpha} u={u.tolist()} deviation {deviation:.3e}")
    return report


def verify_monotonicity(cost: Cost, grid: TimeGrid, tolerance: float = 1e-9) -> MonotonicityReport:
    """delta_sum(t, l, r) is nondecreasing in l and in r."""
    T = grid.periods
    report = MonotonicityReport(check="monotonicity", periods=T)
    for t in range(1, T + 1):
        table = np.array(
            [[delta_sum(cost, grid, t, l, r) for r in range(T - t + 1)] for l in range(t)]
        )
        for steps in (np.diff(table, axis=0), np.diff(table, axis=1)):
            if steps.size == 0:
                continue
            report.checked += int(steps.size)
            report.min_margin = min(report.min_margin, float(steps.min()))
            for l, r in zip(*np.nonzero(steps < -tolerance), strict=True):
                report.note(f"t={t} l={l} r={r} decreases by {-steps[l, r]:.3e}")
    return report


def verify_top_nodes(n: int) -> OracleReport:
    """Rank identities of top-left and top-right nodes, checked on every tree with n nodes."""
    _require("top-node check", n, TOP_NODE_CAP)
    report = OracleReport(check="top-nodes", periods=n)
    for tree in enumerate_trees(n, cap=TOP_NODE_CAP):
        report.checked += 1
        sizes = subtree_sizes(tree)
        top_left, top_right = top_nodes(tree)
        if top_left[-1] != 1 or top_right[-1] != n:
            report.note(f"{tree}: chains end at {top_left[-1]} and {top_right[-1]}")
        root = tree.root
        if root != n - sizes.right[root] or root != sizes.left[root] + 1:
            report.note(f"{tree}: root rank identity fails")
        for t in range(1, n + 1):
            if (t in top_right) != (t + sizes.right[t] == n):
                report.note(f"{tree}: top-right rank identity fails at {t}")
            if (t in top_left) != (t == sizes.left[t] + 1):
                report.note(f"{tree}: top-left rank identity fails at {t}")
            if t + sizes.right[t] < n:
                anchor = t + sizes.right[t] + 1
                node = tree.left_child[anchor]
                chain = []
                while node:
                    chain.append(node)
                    node = tree.right_child[node]
                if t not in chain:
                    report.note(f"{tree}: {t} is not top-right in the left subtree of {anchor}")
        mirrored_left, _ = top_nodes(mirror(tree))
        if sorted(mirrored_left) != sorted(n + 1 - t for t in top_right):
            report.note(f"{tree}: mirror does not map top-right to top-left nodes")
    return report
