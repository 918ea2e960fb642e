"""
Linear and mixed-integer programs in a solver-neutral form.

A program is a list of bounded columns and a list of sparse rows
``sum_j a_j x_j (<=|>=|=) b``. The objective is always minimized.
"""

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import ModelError


class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration-limit"


@dataclass
class Column:
    name: str
    lower: float = 0.0
    upper: float = math.inf
    cost: float = 0.0
    integer: bool = False


@dataclass
class Row:
    name: str
    coefficients: dict[int, float]
    sense: Sense
    rhs: float


@dataclass
class LPMatrices:
    """Dense export: ``A x (senses) b`` with ``lower <= x <= upper``."""

    cost: np.ndarray
    matrix: np.ndarray
    senses: list[Sense]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    integer: np.ndarray


class LinearProgram:
    def __init__(self, name: str = "model") -> None:
        self.name = name
        self.columns: list[Column] = []
        self.rows: list[Row] = []
        self._index: dict[str, int] = {}
        self._row_names: set[str] = set()

    @property
    def num_columns(self) -> int:
        return len(self.columns)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def add_column(
        self,
        name: str,
        lower: float = 0.0,
        upper: float = math.inf,
        cost: float = 0.0,
        integer: bool = False,
    ) -> int:
        if name in self._index:
            raise ModelError(f"column {name!r} declared twice")
        if lower > upper:
            raise ModelError(f"column {name!r} has lower bound {lower} above upper bound {upper}")
        self._index[name] = len(self.columns)
        self.columns.append(Column(name, float(lower), float(upper), float(cost), integer))
        return self._index[name]

    def has_column(self, name: str) -> bool:
        return name in self._index

    def index(self, key: str | int) -> int:
        if isinstance(key, int):
            if not 0 <= key < len(self.columns):
                raise ModelError(f"column index {key} out of range")
            return key
        try:
            return self._index[key]
        except KeyError:
            raise ModelError(f"unknown column {key!r}") from None

    def column(self, key: str | int) -> Column:
        return self.columns[self.index(key)]

    def add_row(
        self,
        coefficients: Mapping[str | int, float] | Iterable[tuple[str | int, float]],
        sense: Sense | str,
        rhs: float,
        name: str | None = None,
    ) -> int:
        """Add a row; coefficients on the same column are summed and zeros dropped."""
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        merged: dict[int, float] = {}
        for key, value in items:
            j = self.index(key)
            merged[j] = merged.get(j, 0.0) + float(value)
        merged = {j: v for j, v in merged.items() if v != 0.0}
        row_name = name or f"r{len(self.rows) + 1}"
        if row_name in self._row_names:
            raise ModelError(f"row {row_name!r} declared twice")
        self._row_names.add(row_name)
        self.rows.append(Row(row_name, merged, Sense(sense), float(rhs)))
        return len(self.rows) - 1

    def set_cost(self, key: str | int, cost: float) -> None:
        self.columns[self.index(key)].cost = float(cost)

    def set_bounds(self, key: str | int, lower: float, upper: float) -> None:
        if lower > upper:
            raise ModelError(f"bounds [{lower}, {upper}] are empty")
        column = self.columns[self.index(key)]
        column.lower = float(lower)
        column.upper = float(upper)

    def copy(self) -> "LinearProgram":
        other = LinearProgram(self.name)
        other.columns = [Column(c.name, c.lower, c.upper, c.cost, c.integer) for c in self.columns]
        other.rows = [Row(r.name, dict(r.coefficients), r.sense, r.rhs) for r in self.rows]
        other._index = dict(self._index)
        other._row_names = set(self._row_names)
        return other

    def with_bounds(self, bounds: Mapping[str | int, tuple[float, float]]) -> "LinearProgram":
        """A copy with some column bounds replaced."""
        other = self.copy()
        for key, (lower, upper) in bounds.items():
            other.set_bounds(key, lower, upper)
        return other

    def relaxation(self) -> "LinearProgram":
        other = self.copy()
        for column in other.columns:
            column.integer = False
        return other

    def integer_columns(self) -> list[int]:
        return [j for j, column in enumerate(self.columns) if column.integer]

    def to_matrices(self) -> LPMatrices:
        n = len(self.columns)
        matrix = np.zeros((len(self.rows), n))
        for i, row in enumerate(self.rows):
            for j, value in row.coefficients.items():
                matrix[i, j] = value
        return LPMatrices(
            cost=np.array([c.cost for c in self.columns], dtype=float),
            matrix=matrix,
            senses=[row.sense for row in self.rows],
            rhs=np.array([row.rhs for row in self.rows], dtype=float),
            lower=np.array([c.lower for c in self.columns], dtype=float),
            upper=np.array([c.upper for c in self.columns], dtype=float),
            integer=np.array([c.integer for c in self.columns], dtype=bool),
        )

    def objective_value(self, values: np.ndarray) -> float:
        return float(np.dot([c.cost for c in self.columns], values))

    def max_violation(self, values: np.ndarray) -> float:
        """Largest row or bound violation of ``values``."""
        worst = 0.0
        for j, column in enumerate(self.columns):
            worst = max(worst, column.lower - values[j], values[j] - column.upper)
        for row in self.rows:
            lhs = sum(v * values[j] for j, v in row.coefficients.items())
            if row.sense is Sense.LE:
                worst = max(worst, lhs - row.rhs)
            elif row.sense is Sense.GE:
                worst = max(worst, row.rhs - lhs)
            else:
                worst = max(worst, abs(lhs - row.rhs))
        return worst


@dataclass
class SolveResult:
    status: Status
    objective: float | None = None
    values: np.ndarray | None = None
    iterations: int = 0
    nodes: int = 0
    column_names: list[str] = field(default_factory=list)
    _positions: dict[str, int] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._positions = {name: j for j, name in enumerate(self.column_names)}

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def value(self, name: str) -> float:
        if self.values is None:
            raise ModelError(f"no primal values available (status {self.status.value})")
        try:
            return float(self.values[self._positions[name]])
        except KeyError:
            raise ModelError(f"unknown column {name!r}") from None

    def as_dict(self) -> dict[str, float]:
        if self.values is None:
            return {}
        return {name: float(v) for name, v in zip(self.column_names, self.values, strict=True)}
