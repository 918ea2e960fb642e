"""Integrality gaps of start-up cost formulations."""

from dataclasses import asdict, dataclass
from typing import Any

from ..errors import SolverError
from ..log import get_component_logger
from ..uc.formulations import build_model
from ..uc.instance import UCInstance
from .branch_bound import solve_mip
from .cutting_plane import cutting_plane_solve
from .program import Status
from .simplex import solve_lp

logger = get_component_logger("btiepi.gap")

MIP_FORMULATION = "3bin"


@dataclass
class GapReport:
    formulation: str
    lp: float
    mip: float
    gap: float
    cuts: int = 0
    rounds: int = 0
    lp_status: str = Status.OPTIMAL.value

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def mip_optimum(instance: UCInstance, node_limit: int | None = None) -> float:
    """Integer optimum of the instance, computed on the 3-Bin model."""
    model = build_model(instance, MIP_FORMULATION)
    result = solve_mip(model.lp, node_limit=node_limit)
    if result.objective is None:
        raise SolverError(f"no integer solution found (status {result.status.value})")
    if result.status is not Status.OPTIMAL:
        logger.warning("MIP stopped early; the gap uses the incumbent", status=result.status.value)
    return result.objective


def relaxation_bound(
    instance: UCInstance, formulation: str, max_rounds: int | None = None
) -> tuple[float, int, int, Status]:
    """LP bound of a formulation; BTI mode runs the cutting-plane loop."""
    model = build_model(instance, formulation)
    if model.bti_units:
        result, log = cutting_plane_solve(model, instance, max_rounds=max_rounds)
        cuts, rounds = log.total_cuts, len(log.rounds)
    else:
        result = solve_lp(model.lp)
        cuts, rounds = 0, 0
    if result.objective is None:
        raise SolverError(f"relaxation of {formulation} not solved (status {result.status.value})")
    return result.objective, cuts, rounds, result.status


def gap_value(lp: float, mip: float) -> float:
    if mip == 0.0:
        return 0.0 if abs(lp) <= 1e-12 else float("inf")
    return (mip - lp) / mip


def integrality_gap(
    instance: UCInstance,
    formulation: str,
    mip: float | None = None,
    max_rounds: int | None = None,
) -> GapReport:
    """
    (z_MIP - z_LP) / z_MIP for one formulation.

    Args:
        instance: The Unit Commitment instance.
        formulation: One of the names in ``FORMULATIONS``.
        mip: A precomputed integer optimum; computed on 3-Bin when omitted.
        max_rounds: Round cap for the BTI cutting-plane loop.
    """
    z_mip = mip if mip is not None else mip_optimum(instance)
    z_lp, cuts, rounds, status = relaxation_bound(instance, formulation, max_rounds)
    report = GapReport(formulation, z_lp, z_mip, gap_value(z_lp, z_mip), cuts, rounds, status.value)
    logger.info("Computed integrality gap", formulation=formulation, gap=report.gap)
    return report
