"""
Cutting-plane driver for models in BTI mode.

Each round solves the LP relaxation, separates the point (u_i, csum_i) of
every BTI-mode unit and appends the violated BTIs as rows. The relaxation
value can only grow from round to round, and every added cut is valid for all
integer schedules, so the final bound is valid even when the round cap is hit.
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..config import get_settings
from ..epigraph.bti import SeparationResult, separate_many
from ..epigraph.schedule import FracPoint
from ..log import get_component_logger
from ..uc.instance import UCInstance
from ..uc.model import ModelHandle, name
from .program import Sense, SolveResult, Status
from .simplex import solve_lp

logger = get_component_logger("btiepi.cutting_plane")

CUT_VIOLATION = 1e-7
QUANTUM = 1e-12


@dataclass
class CutRound:
    round: int
    bound: float
    cuts_added: int
    violations: dict[int, float]


@dataclass
class CutLog:
    rounds: list[CutRound] = field(default_factory=list)
    cap_reached: bool = False

    @property
    def total_cuts(self) -> int:
        return sum(entry.cuts_added for entry in self.rounds)

    @property
    def bounds(self) -> list[float]:
        return [entry.bound for entry in self.rounds]

    def to_dict(self) -> dict[str, Any]:
        return {
            "rounds": len(self.rounds),
            "cuts": self.total_cuts,
            "cap_reached": self.cap_reached,
            "bounds": self.bounds,
        }


def _cut_key(unit: int, coefficients: tuple[float, ...]) -> tuple[int, tuple[int, ...]]:
    return unit, tuple(int(v) for v in np.round(np.asarray(coefficients) / QUANTUM))


def cutting_plane_solve(
    model: ModelHandle,
    instance: UCInstance,
    max_rounds: int | None = None,
    violation: float = CUT_VIOLATION,
) -> tuple[SolveResult, CutLog]:
    """
    Solve the LP relaxation of ``model`` with lazily separated BTIs.

    Cuts are appended to ``model.lp``. Units are processed in index order, so
    the rows of a round come out deterministically.
    """
    rounds = max_rounds if max_rounds is not None else get_settings().cut_rounds
    T = instance.periods
    seen: set[tuple[int, tuple[int, ...]]] = set()
    log = CutLog()
    result = SolveResult(Status.ITERATION_LIMIT)
    grids = {i: instance.unit_grid(i) for i in model.bti_units}

    for number in range(1, rounds + 1):
        result = solve_lp(model.lp)
        if not result.optimal or result.objective is None:
            logger.warning("Relaxation not solved", round=number, status=result.status.value)
            return result, log

        points = []
        for i in model.bti_units:
            u = np.clip(model.schedule_values(result, i), 0.0, 1.0)
            points.append((FracPoint.of(u, result.value(model.csum(i))), instance.unit(i).startup, grids[i]))
        separated = separate_many(points, tolerance=violation)

        added = 0
        violations: dict[int, float] = {}
        for i, outcome in zip(model.bti_units, separated, strict=True):
            if not isinstance(outcome, SeparationResult):
                continue
            violations[i] = outcome.violation
            key = _cut_key(i, outcome.cut.coefficients)
            if key in seen:
                continue
            seen.add(key)
            model.lp.add_row(
                [(model.csum(i), 1.0)]
                + [(model.u(i, t), -a) for t, a in zip(range(1, T + 1), outcome.cut.coefficients, strict=True)],
                Sense.GE,
                0.0,
                name("cut", i, len(seen)),
            )
            added += 1

        log.rounds.append(CutRound(number, result.objective, added, violations))
        logger.debug("Cutting-plane round", round=number, bound=result.objective, cuts=added)
        if added == 0:
            if violations:
                logger.warning("Violated cuts were already present", round=number, units=len(violations))
            return result, log

    log.cap_reached = True
    logger.warning("Cutting-plane round cap reached", rounds=rounds, cuts=log.total_cuts)
    return SolveResult(
        Status.ITERATION_LIMIT,
        objective=result.objective,
        values=result.values,
        iterations=result.iterations,
        column_names=result.column_names,
    ), log
