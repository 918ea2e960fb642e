"""
The base Unit Commitment model as a LinearProgram.

Column names are deterministic: ``u_i_t``, ``p_i_t``, ``cp_i_t`` and
``csum_i`` with 1-based unit index i and period t. Start-up cost formulations
(see ``formulations``) add their own columns and rows to a ModelHandle.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, ModelError
from ..log import get_component_logger
from ..solver.program import LinearProgram, Sense, SolveResult
from .instance import UCInstance

logger = get_component_logger("btiepi.model")


def name(kind: str, *indices: int) -> str:
    return "_".join([kind, *(str(index) for index in indices)])


@dataclass
class ModelHandle:
    lp: LinearProgram
    instance: UCInstance
    formulation: str | None = None
    bti_units: list[int] = field(default_factory=list)

    def u(self, i: int, t: int) -> str:
        return name("u", i, t)

    def csum(self, i: int) -> str:
        return name("csum", i)

    def schedule_values(self, result: SolveResult, i: int) -> list[float]:
        """u_{i,1..T} from a solve result."""
        return [result.value(self.u(i, t)) for t in range(1, self.instance.periods + 1)]

    def check(self) -> None:
        """Only u columns may be integer; every row must be non-empty."""
        for column in self.lp.columns:
            if column.integer and not column.name.startswith("u_"):
                raise ModelError(f"column {column.name} is integer but is not a u column")
        for row in self.lp.rows:
            if not row.coefficients:
                raise ModelError(f"row {row.name} has no coefficients")


def _add_commitment_columns(lp: LinearProgram, instance: UCInstance) -> None:
    for i in range(1, instance.num_units + 1):
        for t in range(1, instance.periods + 1):
            lp.add_column(name("u", i, t), 0.0, 1.0, integer=True)
        lp.add_column(name("csum", i), 0.0, cost=1.0)


def build_base(instance: UCInstance) -> ModelHandle:
    """
    Objective, demand, production costs, production limits and ramping rows.

    Start-up costs enter the objective through ``csum_i``, which a start-up
    cost formulation must still define.
    """
    T = instance.periods
    lp = LinearProgram("uc")
    _add_commitment_columns(lp, instance)
    for i in range(1, instance.num_units + 1):
        for t in range(1, T + 1):
            lp.add_column(name("p", i, t), 0.0)
            lp.add_column(name("cp", i, t), 0.0, cost=1.0)

    for t in range(1, T + 1):
        lp.add_row(
            {name("p", i, t): 1.0 for i in range(1, instance.num_units + 1)},
            Sense.EQ,
            instance.demand[t - 1],
            name("demand", t),
        )

    for i, unit in enumerate(instance.units, start=1):
        for t in range(1, T + 1):
            u, p = name("u", i, t), name("p", i, t)
            lp.add_row(
                [(name("cp", i, t), 1.0), (p, -unit.var_cost), (u, -unit.fixed_cost)],
                Sense.EQ,
                0.0,
                name("prodcost", i, t),
            )
            lp.add_row([(p, 1.0), (u, -unit.p_min)], Sense.GE, 0.0, name("pmin", i, t))
            lp.add_row([(p, 1.0), (u, -unit.p_max)], Sense.LE, 0.0, name("pmax", i, t))
        for t in range(2, T + 1):
            u_now, u_prev = name("u", i, t), name("u", i, t - 1)
            p_now, p_prev = name("p", i, t), name("p", i, t - 1)
            # p_t <= p_{t-1} + RU u_{t-1} + SU (u_t - u_{t-1}) + Pmax (1 - u_t)
            lp.add_row(
                [
                    (p_now, 1.0),
                    (p_prev, -1.0),
                    (u_prev, -unit.ramp_up + unit.startup_ramp),
                    (u_now, -unit.startup_ramp + unit.p_max),
                ],
                Sense.LE,
                unit.p_max,
                name("rampup", i, t),
            )
            # p_t >= p_{t-1} - RD u_t - SD (u_{t-1} - u_t) - Pmax (1 - u_{t-1})
            lp.add_row(
                [
                    (p_now, 1.0),
                    (p_prev, -1.0),
                    (u_now, unit.ramp_down - unit.shutdown_ramp),
                    (u_prev, unit.shutdown_ramp - unit.p_max),
                ],
                Sense.GE,
                -unit.p_max,
                name("rampdown", i, t),
            )
        for t in range(1, T):
            # p_t <= Pmax u_{t+1} + SD (u_t - u_{t+1})
            lp.add_row(
                [
                    (name("p", i, t), 1.0),
                    (name("u", i, t + 1), -unit.p_max + unit.shutdown_ramp),
                    (name("u", i, t), -unit.shutdown_ramp),
                ],
                Sense.LE,
                0.0,
                name("shutdown", i, t),
            )
    logger.debug("Built base model", columns=lp.num_columns, rows=lp.num_rows)
    return ModelHandle(lp, instance)


def build_startup_only(instance: UCInstance) -> ModelHandle:
    """u and csum per unit with objective sum_i csum_i and no other rows."""
    lp = LinearProgram("startup")
    _add_commitment_columns(lp, instance)
    return ModelHandle(lp, instance)


def fix_schedule(model: ModelHandle, unit: int, u: Sequence[int | float]) -> None:
    """Fix u_{unit, 1..T} through their bounds."""
    T = model.instance.periods
    if len(u) != T:
        raise DomainError(f"schedule has {len(u)} periods, instance has {T}")
    if not 1 <= unit <= model.instance.num_units:
        raise DomainError(f"unit {unit} outside [1, {model.instance.num_units}]")
    for t, value in enumerate(np.asarray(u, dtype=float), start=1):
        model.lp.set_bounds(model.u(unit, t), float(value), float(value))
