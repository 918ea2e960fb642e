"""
Dense-tableau bounded-variable simplex.

Rows are equilibrated, inequality rows get a slack column, and every row gets
an artificial column so that phase one can start from a basic solution with
all nonbasic columns at a finite bound (or at zero when free). Pricing is
Dantzig's rule; after a streak of degenerate steps the solver falls back to
Bland's rule until progress resumes.
"""

import math

import numpy as np

from ..errors import SolverError
from ..log import get_component_logger
from .program import LinearProgram, LPMatrices, Sense, SolveResult, Status

logger = get_component_logger("btiepi.simplex")

PIVOT_TOLERANCE = 1e-9
OPTIMALITY_TOLERANCE = 1e-9
FEASIBILITY_TOLERANCE = 1e-7
DEGENERACY_STREAK = 50
REFACTOR_EVERY = 100


class _BoundedSimplex:
    def __init__(self, matrices: LPMatrices, max_iterations: int | None) -> None:
        A = matrices.matrix
        m, n = A.shape
        self.num_structural = n

        scale = np.max(np.abs(A), axis=1) if n else np.zeros(m)
        scale[scale == 0.0] = 1.0
        A = A / scale[:, None]
        b = matrices.rhs / scale

        slack_rows = [i for i, sense in enumerate(matrices.senses) if sense is not Sense.EQ]
        k = len(slack_rows)
        total = n + k + m
        full = np.zeros((m, total))
        full[:, :n] = A
        for position, i in enumerate(slack_rows):
            full[i, n + position] = 1.0 if matrices.senses[i] is Sense.LE else -1.0

        lower = np.concatenate([matrices.lower, np.zeros(k), np.zeros(m)])
        upper = np.concatenate([matrices.upper, np.full(k, math.inf), np.full(m, math.inf)])
        x = np.zeros(total)
        for j in range(n):
            if math.isfinite(lower[j]):
                x[j] = lower[j]
            elif math.isfinite(upper[j]):
                x[j] = upper[j]

        residual = b - full[:, : n + k] @ x[: n + k]
        basis = [-1] * m
        for position, i in enumerate(slack_rows):
            j = n + position
            # a slack whose sign matches the residual starts basic and feasible
            if full[i, j] * residual[i] >= 0.0:
                basis[i] = j
                x[j] = residual[i] / full[i, j]
        artificial = n + k
        for i in range(m):
            j = artificial + i
            full[i, j] = 1.0 if residual[i] >= 0.0 else -1.0
            if basis[i] == -1:
                basis[i] = j
                x[j] = abs(residual[i])
            else:
                upper[j] = 0.0

        self.full = full
        self.rhs = b
        self.lower = lower
        self.upper = upper
        self.x = x
        self.basis = basis
        self.is_basic = np.zeros(total, dtype=bool)
        self.is_basic[basis] = True
        self.artificial = slice(artificial, total)
        self.cost = np.concatenate([matrices.cost, np.zeros(k + m)])
        self.iterations = 0
        self.max_iterations = max_iterations or max(10_000, 100 * (m + total))
        self.feasibility_scale = max(1.0, float(np.max(np.abs(b)))) if m else 1.0
        self.tableau = np.zeros((m, total))
        self._refactor()

    def _refactor(self) -> None:
        if not self.basis:
            return
        B = self.full[:, self.basis]
        try:
            self.tableau = np.linalg.solve(B, self.full)
            x_nonbasic = np.where(self.is_basic, 0.0, self.x)
            self.x[self.basis] = np.linalg.solve(B, self.rhs - self.full @ x_nonbasic)
        except np.linalg.LinAlgError as exc:
            raise SolverError("basis matrix became singular") from exc

    def _reduced(self, cost: np.ndarray) -> np.ndarray:
        return cost - cost[self.basis] @ self.tableau if self.basis else cost.copy()

    def _run(self, cost: np.ndarray, blocked: np.ndarray) -> Status:
        m = len(self.basis)
        streak = 0
        since_refactor = 0
        while True:
            if self.iterations >= self.max_iterations:
                return Status.ITERATION_LIMIT
            if since_refactor >= REFACTOR_EVERY:
                self._refactor()
                since_refactor = 0

            reduced = self._reduced(cost)
            free = ~self.is_basic & ~blocked
            increase = free & (self.x < self.upper) & (reduced < -OPTIMALITY_TOLERANCE)
            decrease = free & (self.x > self.lower) & (reduced > OPTIMALITY_TOLERANCE)
            score = np.where(increase, -reduced, 0.0) + np.where(decrease, reduced, 0.0)
            candidates = np.flatnonzero(score > 0.0)
            if candidates.size == 0:
                return Status.OPTIMAL
            bland = streak >= DEGENERACY_STREAK
            j = int(candidates[0]) if bland else int(np.argmax(score))
            direction = 1.0 if increase[j] else -1.0

            column = self.tableau[:, j] if m else np.zeros(0)
            alpha = direction * column
            basic_x = self.x[self.basis]
            basic_lower = self.lower[self.basis]
            basic_upper = self.upper[self.basis]
            ratios = np.full(m, math.inf)
            falling = alpha > PIVOT_TOLERANCE
            rising = alpha < -PIVOT_TOLERANCE
            with np.errstate(invalid="ignore"):
                ratios[falling] = (basic_x[falling] - basic_lower[falling]) / alpha[falling]
                ratios[rising] = (basic_upper[rising] - basic_x[rising]) / -alpha[rising]
            ratios = np.maximum(np.nan_to_num(ratios, nan=math.inf), 0.0)

            span = self.upper[j] - self.x[j] if direction > 0 else self.x[j] - self.lower[j]
            row_step = float(ratios.min()) if m else math.inf
            if math.isinf(span) and math.isinf(row_step):
                return Status.UNBOUNDED

            if span <= row_step:
                step = span
                self.x[j] += direction * step
                if m:
                    self.x[self.basis] -= step * alpha
            else:
                step = row_step
                ties = np.flatnonzero(ratios <= row_step + 1e-12)
                if bland:
                    r = int(min(ties, key=lambda i: self.basis[i]))
                else:
                    r = int(ties[np.argmax(np.abs(alpha[ties]))])
                leaving = self.basis[r]
                self.x[j] += direction * step
                self.x[self.basis] -= step * alpha
                self.x[leaving] = self.lower[leaving] if alpha[r] > 0 else self.upper[leaving]
                self._pivot(r, j)
                since_refactor += 1

            streak = streak + 1 if step <= 1e-12 else 0
            self.iterations += 1

    def _pivot(self, r: int, j: int) -> None:
        tableau = self.tableau
        tableau[r] /= tableau[r, j]
        column = tableau[:, j].copy()
        column[r] = 0.0
        tableau -= np.outer(column, tableau[r])
        tableau[:, j] = 0.0
        tableau[r, j] = 1.0
        self.is_basic[self.basis[r]] = False
        self.basis[r] = j
        self.is_basic[j] = True

    def solve(self) -> Status:
        total = len(self.x)
        no_block = np.zeros(total, dtype=bool)
        phase_one = np.zeros(total)
        phase_one[self.artificial] = 1.0
        status = self._run(phase_one, no_block)
        if status is not Status.OPTIMAL:
            return status
        self._refactor()
        infeasibility = float(np.sum(self.x[self.artificial]))
        if infeasibility > FEASIBILITY_TOLERANCE * self.feasibility_scale:
            return Status.INFEASIBLE

        self.upper[self.artificial] = 0.0
        self.x[self.artificial] = np.where(self.is_basic[self.artificial], self.x[self.artificial], 0.0)
        blocked = np.zeros(total, dtype=bool)
        blocked[self.artificial] = True
        status = self._run(self.cost, blocked)
        if status is Status.OPTIMAL:
            self._refactor()
        return status

    def residual(self) -> float:
        """Largest row or bound violation of the current point, in equilibrated units."""
        if not self.basis:
            return 0.0
        kept = slice(0, self.artificial.start)
        x = self.x[kept]
        rows = np.abs(self.full[:, kept] @ x - self.rhs)
        bounds = np.maximum(self.lower[kept] - x, x - self.upper[kept])
        return float(max(rows.max(), bounds.max(), 0.0))

    def primal(self) -> np.ndarray:
        return self.x[: self.num_structural].copy()


def solve_lp(lp: LinearProgram, max_iterations: int | None = None) -> SolveResult:
    """
    Solve the LP relaxation of ``lp`` (integrality flags are ignored).

    Args:
        lp: The program.
        max_iterations: Pivot cap; the default grows with the program size.

    Raises:
        SolverError: If the optimal basis does not reproduce a feasible point.
    """
    names = [column.name for column in lp.columns]
    for row in lp.rows:
        if row.coefficients:
            continue
        satisfied = (
            (row.sense is Sense.LE and 0.0 <= row.rhs + FEASIBILITY_TOLERANCE)
            or (row.sense is Sense.GE and 0.0 >= row.rhs - FEASIBILITY_TOLERANCE)
            or (row.sense is Sense.EQ and abs(row.rhs) <= FEASIBILITY_TOLERANCE)
        )
        if not satisfied:
            logger.debug("Empty row is violated", row=row.name)
            return SolveResult(Status.INFEASIBLE, column_names=names)

    simplex = _BoundedSimplex(lp.to_matrices(), max_iterations)
    status = simplex.solve()
    if status is not Status.OPTIMAL:
        logger.debug("LP not solved to optimality", status=status.value, iterations=simplex.iterations)
        return SolveResult(status, iterations=simplex.iterations, column_names=names)

    residual = simplex.residual()
    if residual > FEASIBILITY_TOLERANCE * simplex.feasibility_scale:
        logger.error("LP solution exceeds feasibility tolerance", residual=residual)
        raise SolverError(f"final basis violates the constraints by {residual:.3e}")
    values = simplex.primal()
    return SolveResult(
        Status.OPTIMAL,
        objective=lp.objective_value(values),
        values=values,
        iterations=simplex.iterations,
        column_names=names,
    )
