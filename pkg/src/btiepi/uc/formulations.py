"""
Start-up cost formulations defining ``csum_i`` on top of a ModelHandle.

All formulations use the undiscretized costs CU^{t,l} of each unit's grid.
Builders take the model and the instance and mutate the model in place.
"""

from collections.abc import Callable

from ..epigraph.bti import coefficients
from ..epigraph.cost_model import CostTable, ExpStartupCost
from ..epigraph.ranktree import enumerate_trees
from ..errors import CapExceededError, ConfigurationError
from ..log import get_component_logger
from ..solver.program import Sense
from .instance import UCInstance
from .model import ModelHandle, build_base, build_startup_only, name

logger = get_component_logger("btiepi.formulations")

STATIC_BTI_CAP = 8


def _per_period_costs(model: ModelHandle, i: int) -> list[str]:
    """cu_{i,t} >= 0 with csum_i = sum_t cu_{i,t}."""
    lp = model.lp
    T = model.instance.periods
    columns = [name("cu", i, t) for t in range(1, T + 1)]
    for column in columns:
        lp.add_column(column, 0.0)
    lp.add_row(
        [(name("csum", i), 1.0), *((column, -1.0) for column in columns)],
        Sense.EQ,
        0.0,
        name("csumdef", i),
    )
    return columns


def add_startup_1bin(model: ModelHandle, instance: UCInstance) -> None:
    """cu_t >= CU^{t,l} (u_t - sum_{j=1..l} u_{t-j}) for l in [0, t-1]."""
    for i in range(1, instance.num_units + 1):
        table = CostTable(instance.unit(i).startup, instance.unit_grid(i))
        _per_period_costs(model, i)
        for t in range(1, instance.periods + 1):
            for l in range(t):
                cost = table(t, l)
                row = [(name("cu", i, t), 1.0), (name("u", i, t), -cost)]
                row += [(name("u", i, t - j), cost) for j in range(1, l + 1)]
                model.lp.add_row(row, Sense.GE, 0.0, name("onebin", i, t, l))
    model.formulation = "1bin"


def add_startup_1bin_star(model: ModelHandle, instance: UCInstance) -> None:
    """cu_t >= CU^{t,l} u_t - sum_{j=1..l} (CU^{t,l} - CU^{t,j-1}) u_{t-j}."""
    for i in range(1, instance.num_units + 1):
        table = CostTable(instance.unit(i).startup, instance.unit_grid(i))
        _per_period_costs(model, i)
        for t in range(1, instance.periods + 1):
            for l in range(t):
                cost = table(t, l)
                row = [(name("cu", i, t), 1.0), (name("u", i, t), -cost)]
                row += [
                    (name("u", i, t - j), cost - table(t, j - 1)) for j in range(1, l + 1)
                ]
                model.lp.add_row(row, Sense.GE, 0.0, name("onebinstar", i, t, l))
    model.formulation = "1bin-star"


def _add_indicators(model: ModelHandle, instance: UCInstance, i: int) -> None:
    """v_t - w_t = u_t - u_{t-1} with the pre-model state folded into t = 1."""
    lp = model.lp
    for t in range(1, instance.periods + 1):
        lp.add_column(name("v", i, t), 0.0)
        lp.add_column(name("w", i, t), 0.0)
    # offline before the horizon means u_0 = 0, otherwise u_0 = 1
    u_zero = 0.0 if instance.unit(i).pre_offline > 0 else 1.0
    lp.add_row(
        [(name("v", i, 1), 1.0), (name("w", i, 1), -1.0), (name("u", i, 1), -1.0)],
        Sense.EQ,
        -u_zero,
        name("indicator", i, 1),
    )
    for t in range(2, instance.periods + 1):
        lp.add_row(
            [
                (name("v", i, t), 1.0),
                (name("w", i, t), -1.0),
                (name("u", i, t), -1.0),
                (name("u", i, t - 1), 1.0),
            ],
            Sense.EQ,
            0.0,
            name("indicator", i, t),
        )


def startup_types(t: int) -> range:
    """Offline counts l with a start-up type variable in period t."""
    return range(0, 1) if t == 1 else range(1, t)


def add_startup_3bin(model: ModelHandle, instance: UCInstance) -> None:
    """
    Indicators plus start-up types delta^{t,l}.

    v_t = sum_l delta^{t,l}; delta^{t,l} <= w_{t-l} for l <= t - 2, while the
    type l = t - 1 (offline since before the horizon) is unrestricted.
    """
    lp = model.lp
    for i in range(1, instance.num_units + 1):
        table = CostTable(instance.unit(i).startup, instance.unit_grid(i))
        _add_indicators(model, instance, i)
        cost_row = [(name("csum", i), 1.0)]
        for t in range(1, instance.periods + 1):
            types = [name("d", i, t, l) for l in startup_types(t)]
            for l, column in zip(startup_types(t), types, strict=True):
                lp.add_column(column, 0.0)
                cost_row.append((column, -table(t, l)))
            lp.add_row(
                [(name("v", i, t), 1.0), *((column, -1.0) for column in types)],
                Sense.EQ,
                0.0,
                name("typesum", i, t),
            )
            for l in range(1, t - 1):
                lp.add_row(
                    [(name("d", i, t, l), 1.0), (name("w", i, t - l), -1.0)],
                    Sense.LE,
                    0.0,
                    name("typelink", i, t, l),
                )
        lp.add_row(cost_row, Sense.EQ, 0.0, name("csumdef", i))
    model.formulation = "3bin"


def add_startup_temp(model: ModelHandle, instance: UCInstance) -> None:
    """
    Temperature model: tau tracks the unit's heat, gamma the reheating.

    tau_1 = exp(-lambda T^pre) + gamma_0 and
    tau_{t+1} = e_t tau_t + (1 - e_t) u_t + gamma_t with e_t = exp(-lambda delta(t)).

    Raises:
        ConfigurationError: If a unit's start-up cost is not exponential.
    """
    lp = model.lp
    T = instance.periods
    for i in range(1, instance.num_units + 1):
        cost = instance.unit(i).startup
        if not isinstance(cost, ExpStartupCost):
            raise ConfigurationError(
                f"the temp formulation needs an exponential start-up cost (unit {i})"
            )
        grid = instance.unit_grid(i)
        _add_indicators(model, instance, i)
        for t in range(1, T + 1):
            lp.add_column(name("tau", i, t), 0.0, 1.0)
        for t in range(0, T):
            lp.add_column(name("gamma", i, t), 0.0)

        lp.add_row(
            [(name("tau", i, 1), 1.0), (name("gamma", i, 0), -1.0)],
            Sense.EQ,
            cost.cooling_factor(grid.pre_offline),
            name("temp", i, 1),
        )
        for t in range(1, T):
            keep = cost.cooling_factor(grid.length(t))
            lp.add_row(
                [
                    (name("tau", i, t + 1), 1.0),
                    (name("tau", i, t), -keep),
                    (name("u", i, t), -(1.0 - keep)),
                    (name("gamma", i, t), -1.0),
                ],
                Sense.EQ,
                0.0,
                name("temp", i, t + 1),
            )
        for t in range(1, T + 1):
            tau, u = name("tau", i, t), name("u", i, t)
            lp.add_row([(tau, 1.0), (u, -1.0)], Sense.GE, 0.0, name("hot", i, t))
            # tau_t >= u_t + k (1 - u_t) with k the cooling since period 1 (and before)
            k = cost.cooling_factor(grid.offline_length(t, t - 1))
            lp.add_row([(tau, 1.0), (u, -(1.0 - k))], Sense.GE, k, name("rti", i, t, 0))
            for l in range(1, t - 1):
                k = cost.cooling_factor(grid.offline_length(t, l))
                lp.add_row(
                    [(tau, 1.0), (u, -(1.0 - k)), (name("tau", i, t - l), -k)],
                    Sense.GE,
                    0.0,
                    name("rti", i, t, l),
                )
        lp.add_row(
            [
                (name("csum", i), 1.0),
                *((name("v", i, t), -cost.fixed_cost) for t in range(1, T + 1)),
                *((name("gamma", i, t), -cost.heating_cost) for t in range(0, T)),
            ],
            Sense.EQ,
            0.0,
            name("csumdef", i),
        )
    model.formulation = "temp"


def add_startup_bti_mode(model: ModelHandle, instance: UCInstance) -> None:
    """csum_i >= 0 only; the cutting-plane driver separates BTIs lazily."""
    model.bti_units = list(range(1, instance.num_units + 1))
    model.formulation = "bti"


def add_static_btis(model: ModelHandle, instance: UCInstance) -> int:
    """
    Materialize every BTI of every unit as a row; returns the number of rows added.

    Raises:
        CapExceededError: If the horizon exceeds the static BTI cap.
    """
    T = instance.periods
    if T > STATIC_BTI_CAP:
        raise CapExceededError("static BTI rows", T, STATIC_BTI_CAP)
    added = 0
    for i in range(1, instance.num_units + 1):
        cost, grid = instance.unit(i).startup, instance.unit_grid(i)
        for number, tree in enumerate(enumerate_trees(T, cap=STATIC_BTI_CAP)):
            cut = coefficients(tree, cost, grid)
            model.lp.add_row(
                [(name("csum", i), 1.0)]
                + [(name("u", i, t), -a) for t, a in enumerate(cut.coefficients, start=1)],
                Sense.GE,
                0.0,
                name("bti", i, number),
            )
            added += 1
    logger.debug("Added static BTIs", rows=added, periods=T)
    return added


Builder = Callable[[ModelHandle, UCInstance], None]

FORMULATIONS: dict[str, Builder] = {
    "1bin": add_startup_1bin,
    "1bin-star": add_startup_1bin_star,
    "3bin": add_startup_3bin,
    "temp": add_startup_temp,
    "bti": add_startup_bti_mode,
}


def build_model(instance: UCInstance, formulation: str, startup_only: bool = False) -> ModelHandle:
    """Base (or start-up-only) model with the named formulation applied."""
    try:
        builder = FORMULATIONS[formulation]
    except KeyError:
        known = ", ".join(FORMULATIONS)
        raise ConfigurationError(f"unknown formulation {formulation!r}; expected one of {known}") from None
    model = build_startup_only(instance) if startup_only else build_base(instance)
    builder(model, instance)
    return model
