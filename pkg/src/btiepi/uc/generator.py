"""Random desk-scale Unit Commitment instances with guaranteed feasible demand."""

import numpy as np

from ..epigraph.cost_model import ExpStartupCost, TimeGrid
from ..log import get_component_logger
from .instance import UCInstance, Unit

logger = get_component_logger("btiepi.generator")


def random_unit(rng: np.random.Generator) -> Unit:
    p_max = float(rng.uniform(50.0, 200.0))
    p_min = float(rng.uniform(0.2, 0.45)) * p_max
    startup_ramp = max(p_min, float(rng.uniform(0.4, 0.8)) * p_max)
    shutdown_ramp = max(p_min, float(rng.uniform(0.4, 0.8)) * p_max)
    return Unit(
        var_cost=float(rng.uniform(10.0, 40.0)),
        fixed_cost=float(rng.uniform(50.0, 300.0)),
        p_min=p_min,
        p_max=p_max,
        ramp_up=float(rng.uniform(0.3, 0.7)) * p_max,
        startup_ramp=startup_ramp,
        ramp_down=float(rng.uniform(0.3, 0.7)) * p_max,
        shutdown_ramp=shutdown_ramp,
        startup=ExpStartupCost(
            V=float(rng.uniform(100.0, 1000.0)),
            f=float(rng.uniform(10.0, 200.0)),
            heat_loss=float(rng.uniform(0.05, 0.5)),
        ),
        pre_offline=float(rng.integers(0, 7)),
    )


def random_instance(rng: np.random.Generator, units: int = 2, periods: int = 12) -> UCInstance:
    """
    Draw units, then a demand curve that an all-online schedule can serve.

    Every unit follows its own random walk inside [p_min, 0.8 p_max] with steps
    within its ramp limits, and demand is the sum of these outputs. Demand thus
    stays below 80% of the installed capacity and above the largest p_min.
    """
    drawn = [random_unit(rng) for _ in range(units)]
    demand = np.zeros(periods)
    for unit in drawn:
        low, high = unit.p_min, 0.8 * unit.p_max
        step = min(unit.ramp_up, unit.ramp_down)
        output = float(rng.uniform(low, high))
        for t in range(periods):
            if t:
                output = float(np.clip(output + rng.uniform(-step, step), low, high))
            demand[t] += output
    logger.debug("Generated instance", units=units, periods=periods, peak=float(demand.max()))
    return UCInstance(
        units=tuple(drawn),
        grid=TimeGrid.uniform(periods),
        demand=tuple(float(d) for d in demand),
    )
