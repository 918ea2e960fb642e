"""
Binary operational schedules and the summed discrete start-up costs.

Periods are 1-based throughout: ``schedule[t]`` is u_t for t in 1..T.
"""

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import product

from ..errors import DomainError
from .cost_model import ExpStartupCost, TabulatedConcaveCost, TimeGrid
from .ranktree import RankTree, is_rooted_subtree

Cost = ExpStartupCost | TabulatedConcaveCost


@dataclass(frozen=True, slots=True)
class Schedule:
    """An on/off vector u in {0,1}^T."""

    on_off: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.on_off:
            raise DomainError("a schedule needs at least one period")
        if any(value not in (0, 1) for value in self.on_off):
            raise DomainError(f"schedule entries must be 0 or 1, got {self.on_off}")

    @classmethod
    def of(cls, values: Sequence[int]) -> "Schedule":
        return cls(tuple(int(v) for v in values))

    @classmethod
    def from_string(cls, text: str) -> "Schedule":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise DomainError(f"schedule strings consist of 0 and 1 only, got {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def zeros(cls, periods: int) -> "Schedule":
        return cls((0,) * periods)

    @classmethod
    def unit(cls, periods: int, t: int) -> "Schedule":
        """e_t."""
        if not 1 <= t <= periods:
            raise DomainError(f"period {t} outside [1, {periods}]")
        return cls(tuple(1 if s == t else 0 for s in range(1, periods + 1)))

    @property
    def periods(self) -> int:
        return len(self.on_off)

    def __getitem__(self, t: int) -> int:
        if not 1 <= t <= len(self.on_off):
            raise DomainError(f"period {t} outside [1, {len(self.on_off)}]")
        return self.on_off[t - 1]

    def __str__(self) -> str:
        return self.to_string()

    def to_string(self) -> str:
        return "".join(str(v) for v in self.on_off)

    def switched_on(self, t: int) -> "Schedule":
        """u + e_t; period t must be off."""
        if self[t] == 1:
            raise DomainError(f"period {t} is already on")
        values = list(self.on_off)
        values[t - 1] = 1
        return Schedule(tuple(values))

    def ones(self) -> list[int]:
        return [t for t, value in enumerate(self.on_off, start=1) if value]


@dataclass(frozen=True, slots=True)
class FracPoint:
    """A point (u, c_sigma) of [0,1]^T x R."""

    u: tuple[float, ...]
    c_sigma: float

    def __post_init__(self) -> None:
        check_unit_box(self.u)

    @classmethod
    def of(cls, u: Sequence[float], c_sigma: float) -> "FracPoint":
        return cls(tuple(float(v) for v in u), float(c_sigma))


def check_unit_box(u: Sequence[float], tolerance: float = 1e-9) -> None:
    """Raise DomainError unless every u_t lies in [0, 1] up to ``tolerance``."""
    if len(u) == 0:
        raise DomainError("the point must have at least one period")
    for t, value in enumerate(u, start=1):
        if not -tolerance <= value <= 1 + tolerance:
            raise DomainError(f"u_{t} = {value} lies outside [0, 1]")


def all_schedules(periods: int) -> Iterator[Schedule]:
    """Every u in {0,1}^T in lexicographic order."""
    for values in product((0, 1), repeat=periods):
        yield Schedule(values)


def _check_period(u: Schedule, t: int) -> None:
    if not 1 <= t <= u.periods:
        raise DomainError(f"period {t} outside [1, {u.periods}]")


def offline_before(u: Schedule, t: int) -> int:
    """Number of consecutive off periods right before t (0 for t = 1)."""
    _check_period(u, t)
    count = 0
    s = t - 1
    while s >= 1 and u.on_off[s - 1] == 0:
        count += 1
        s -= 1
    return count


def offline_after(u: Schedule, t: int) -> int:
    """Number of consecutive off periods right after t (0 for t = T)."""
    _check_period(u, t)
    count = 0
    s = t + 1
    while s <= u.periods and u.on_off[s - 1] == 0:
        count += 1
        s += 1
    return count


class RunLengths:
    """offline_before and offline_after for every period, computed in two sweeps."""

    def __init__(self, u: Schedule) -> None:
        T = u.periods
        values = u.on_off
        before = [0] * (T + 2)
        after = [0] * (T + 2)
        for t in range(2, T + 1):
            before[t] = 0 if values[t - 2] else before[t - 1] + 1
        for t in range(T - 1, 0, -1):
            after[t] = 0 if values[t] else after[t + 1] + 1
        self.before = before
        self.after = after

    def offline_before(self, t: int) -> int:
        return self.before[t]

    def offline_after(self, t: int) -> int:
        return self.after[t]


def dcu_t(cost: Cost, grid: TimeGrid, u: Schedule, t: int) -> float:
    """Start-up cost incurred in period t by schedule u."""
    _check_schedule(grid, u)
    if u[t] == 0:
        return 0.0
    return cost.eval(grid.offline_length(t, offline_before(u, t)))


def dcu_sum(cost: Cost, grid: TimeGrid, u: Schedule) -> float:
    """Summed start-up costs of schedule u."""
    _check_schedule(grid, u)
    runs = RunLengths(u)
    return sum(
        cost.eval(grid.offline_length(t, runs.offline_before(t)))
        for t in range(1, u.periods + 1)
        if u.on_off[t - 1]
    )


def delta_sum(cost: Cost, grid: TimeGrid, t: int, l: int, r: int) -> float:
    """
    Change of the summed start-up costs when switching period t on.

    ``l`` and ``r`` are the off periods right before and after t. If a later
    start-up exists at t + r + 1, its offline run shrinks from l + r + 1 to r.
    """
    T = grid.periods
    if not 1 <= t <= T:
        raise DomainError(f"period {t} outside [1, {T}]")
    if not 0 <= l <= t - 1:
        raise DomainError(f"left offline count {l} outside [0, {t - 1}]")
    if not 0 <= r <= T - t:
        raise DomainError(f"right offline count {r} outside [0, {T - t}]")
    own = cost.eval(grid.offline_length(t, l))
    if t + r < T:
        nxt = t + r + 1
        return (
            own
            + cost.eval(grid.offline_length(nxt, r))
            - cost.eval(grid.offline_length(nxt, l + r + 1))
        )
    return own


def _check_schedule(grid: TimeGrid, u: Schedule) -> None:
    if u.periods != grid.periods:
        raise DomainError(f"schedule has {u.periods} periods, grid has {grid.periods}")


def induced_subgraph_is_rooted_tree(tree: RankTree, u: Schedule) -> bool:
    """True iff the nodes switched on in u form a subtree of ``tree`` containing its root."""
    if tree.n != u.periods:
        raise DomainError(f"tree has {tree.n} nodes, schedule has {u.periods} periods")
    return is_rooted_subtree(tree, u.ones())
