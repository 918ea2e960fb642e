"""
Reading and writing the CPLEX LP text format.

Only the linear subset is supported: one objective (always ``Minimize``),
``Subject To`` rows, ``Bounds``, ``Binaries`` and ``Generals``. The writer lists
every column in the objective, zero coefficients included, so the parser
recovers the column order exactly.
"""

import math
import re
from pathlib import Path
from typing import TextIO

from ..errors import LPFormatError
from ..log import get_component_logger
from ..solver.program import LinearProgram, Sense
from .model import ModelHandle

logger = get_component_logger("btiepi.lpformat")

_SECTIONS = {
    "minimize": "objective",
    "minimum": "objective",
    "min": "objective",
    "subject to": "rows",
    "such that": "rows",
    "st": "rows",
    "s.t.": "rows",
    "bounds": "bounds",
    "bound": "bounds",
    "binaries": "binaries",
    "binary": "binaries",
    "bin": "binaries",
    "generals": "generals",
    "general": "generals",
    "gen": "generals",
    "end": "end",
}
_TOKEN = re.compile(
    r"\s*(?:(<=|>=|=<|=>|<|>|=)"
    r"|([+-])"
    r"|(:)"
    r"|((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|([A-Za-z_][\w.\[\]]*))"
)
_SENSES = {"<=": Sense.LE, "=<": Sense.LE, "<": Sense.LE, ">=": Sense.GE, "=>": Sense.GE,
           ">": Sense.GE, "=": Sense.EQ}
_INFINITE = {"inf", "infinity"}


def _number(value: float) -> str:
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _terms(coefficients: list[tuple[str, float]]) -> str:
    parts = []
    for position, (column, value) in enumerate(coefficients):
        sign = "-" if value < 0 or (value == 0 and math.copysign(1.0, value) < 0) else "+"
        magnitude = _number(abs(value))
        if position == 0 and sign == "+":
            parts.append(f"{magnitude} {column}")
        else:
            parts.append(f"{sign} {magnitude} {column}")
    return " ".join(parts) if parts else "0"


def lp_text(lp: LinearProgram) -> str:
    lines = [f"\\ Problem: {lp.name}", "Minimize"]
    lines.append(" obj: " + _terms([(c.name, c.cost) for c in lp.columns]))
    lines.append("Subject To")
    for row in lp.rows:
        terms = _terms([(lp.columns[j].name, v) for j, v in sorted(row.coefficients.items())])
        lines.append(f" {row.name}: {terms} {row.sense.value} {_number(row.rhs)}")
    lines.append("Bounds")
    binaries, generals = [], []
    for column in lp.columns:
        is_binary = column.integer and column.lower == 0.0 and column.upper == 1.0
        if column.integer:
            (binaries if is_binary else generals).append(column.name)
        if is_binary or (column.lower == 0.0 and math.isinf(column.upper)):
            continue
        if math.isinf(column.lower) and math.isinf(column.upper):
            lines.append(f" {column.name} free")
        elif column.lower == column.upper:
            lines.append(f" {column.name} = {_number(column.lower)}")
        else:
            lines.append(f" {_number(column.lower)} <= {column.name} <= {_number(column.upper)}")
    if binaries:
        lines.append("Binaries")
        lines.extend(f" {column}" for column in binaries)
    if generals:
        lines.append("Generals")
        lines.extend(f" {column}" for column in generals)
    lines.append("End")
    return "\n".join(lines) + "\n"


def emit_lp(
    model: ModelHandle | LinearProgram, destination: Path | str | TextIO | None = None
) -> str:
    """Write ``model`` in LP format to ``destination`` (path or stream) and return the text."""
    lp = model.lp if isinstance(model, ModelHandle) else model
    text = lp_text(lp)
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text)
        logger.info("Wrote LP file", path=str(destination), rows=lp.num_rows, columns=lp.num_columns)
    elif destination is not None:
        destination.write(text)
    return text


class _Tokens:
    def __init__(self, text: str, line_number: int) -> None:
        self.items: list[tuple[str, str]] = []
        self.line_number = line_number
        position = 0
        text = text.rstrip()
        while position < len(text):
            match = _TOKEN.match(text, position)
            if match is None or match.end() == position:
                raise LPFormatError(f"unexpected text {text[position:position + 20]!r}", line_number)
            kinds = ("sense", "sign", "colon", "number", "name")
            for kind, value in zip(kinds, match.groups(), strict=True):
                if value is not None:
                    self.items.append((kind, value))
                    break
            position = match.end()
        self.position = 0

    def peek(self, offset: int = 0) -> tuple[str, str] | None:
        index = self.position + offset
        return self.items[index] if index < len(self.items) else None

    def take(self) -> tuple[str, str]:
        item = self.peek()
        if item is None:
            raise LPFormatError("unexpected end of section", self.line_number)
        self.position += 1
        return item

    def done(self) -> bool:
        return self.position >= len(self.items)


class _Parser:
    def __init__(self) -> None:
        self.lp = LinearProgram()
        self.explicit_bounds: set[str] = set()

    def column(self, column: str) -> int:
        if not self.lp.has_column(column):
            self.lp.add_column(column)
        return self.lp.index(column)

    def signed_number(self, tokens: _Tokens) -> float:
        sign = 1.0
        while (item := tokens.peek()) is not None and item[0] == "sign":
            tokens.take()
            sign = -sign if item[1] == "-" else sign
        kind, value = tokens.take()
        if kind == "number":
            return sign * float(value)
        if kind == "name" and value.lower() in _INFINITE:
            return sign * math.inf
        raise LPFormatError(f"expected a number, got {value!r}", tokens.line_number)

    def expression(self, tokens: _Tokens) -> list[tuple[str, float]]:
        terms: list[tuple[str, float]] = []
        while (item := tokens.peek()) is not None and item[0] != "sense":
            sign = 1.0
            while (item := tokens.peek()) is not None and item[0] == "sign":
                tokens.take()
                sign = -sign if item[1] == "-" else sign
            coefficient = 1.0
            if (item := tokens.peek()) is not None and item[0] == "number":
                coefficient = float(tokens.take()[1])
            kind, value = tokens.take()
            if kind != "name":
                raise LPFormatError(f"expected a column name, got {value!r}", tokens.line_number)
            terms.append((value, sign * coefficient))
        return terms

    def label(self, tokens: _Tokens) -> str | None:
        first, second = tokens.peek(), tokens.peek(1)
        if first and second and first[0] == "name" and second[0] == "colon":
            tokens.take()
            tokens.take()
            return first[1]
        return None

    def objective(self, tokens: _Tokens) -> None:
        self.label(tokens)
        if tokens.peek() == ("number", "0") and tokens.peek(1) is None:
            return
        for column, value in self.expression(tokens):
            j = self.column(column)
            self.lp.columns[j].cost += value
        if not tokens.done():
            raise LPFormatError("the objective cannot contain a relation", tokens.line_number)

    def rows(self, tokens: _Tokens) -> None:
        while not tokens.done():
            row_name = self.label(tokens)
            terms = self.expression(tokens)
            kind, sense = tokens.take()
            if kind != "sense":
                raise LPFormatError(f"expected a relation, got {sense!r}", tokens.line_number)
            rhs = self.signed_number(tokens)
            for column, _ in terms:
                self.column(column)
            self.lp.add_row(terms, _SENSES[sense], rhs, row_name)

    def bound(self, tokens: _Tokens) -> None:
        items = tokens.items
        if len(items) == 2 and items[1] == ("name", "free") or (
            len(items) == 2 and items[1][1].lower() == "free"
        ):
            column = items[0][1]
            self._set(column, -math.inf, math.inf)
            return
        if items and items[0][0] == "name" and items[0][1].lower() not in _INFINITE:
            # x <= hi, x >= lo, x = v
            column = tokens.take()[1]
            kind, sense = tokens.take()
            value = self.signed_number(tokens)
            lower, upper = self._current(column)
            if _SENSES.get(sense) is Sense.LE:
                upper = value
            elif _SENSES.get(sense) is Sense.GE:
                lower = value
            else:
                lower = upper = value
            self._set(column, lower, upper)
            return
        # lo <= x [<= hi]
        lower = self.signed_number(tokens)
        kind, sense = tokens.take()
        if _SENSES.get(sense) is not Sense.LE:
            raise LPFormatError("bounds of the form 'lo <= x' need '<='", tokens.line_number)
        column = tokens.take()[1]
        _, upper = self._current(column)
        if not tokens.done():
            tokens.take()
            upper = self.signed_number(tokens)
        self._set(column, lower, upper)

    def _current(self, column: str) -> tuple[float, float]:
        entry = self.lp.columns[self.column(column)]
        return entry.lower, entry.upper

    def _set(self, column: str, lower: float, upper: float) -> None:
        self.column(column)
        self.lp.set_bounds(column, lower, upper)
        self.explicit_bounds.add(column)

    def integers(self, tokens: _Tokens, binary: bool) -> None:
        for kind, value in tokens.items:
            if kind != "name":
                raise LPFormatError(f"expected a column name, got {value!r}", tokens.line_number)
            j = self.column(value)
            self.lp.columns[j].integer = True
            if binary and value not in self.explicit_bounds:
                self.lp.set_bounds(j, 0.0, 1.0)


def parse_lp(text: str) -> LinearProgram:
    """Parse LP text produced by ``emit_lp`` (or any file in the same linear subset)."""
    parser = _Parser()
    section: str | None = None
    buffer: list[tuple[int, str]] = []

    def flush() -> None:
        if section is None or not buffer:
            return
        if section in ("objective", "rows"):
            joined = " ".join(line for _, line in buffer)
            tokens = _Tokens(joined, buffer[0][0])
            (parser.objective if section == "objective" else parser.rows)(tokens)
        else:
            for line_number, line in buffer:
                tokens = _Tokens(line, line_number)
                if section == "bounds":
                    parser.bound(tokens)
                else:
                    parser.integers(tokens, binary=section == "binaries")
        buffer.clear()

    ended = False
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("\\", 1)[0].strip()
        if not line:
            if raw.strip().startswith("\\ Problem:"):
                parser.lp.name = raw.split(":", 1)[1].strip() or parser.lp.name
            continue
        keyword = _SECTIONS.get(line.lower())
        if keyword is not None:
            flush()
            if keyword == "end":
                ended = True
                break
            section = keyword
            continue
        if section is None:
            raise LPFormatError(f"text before the first section: {line!r}", line_number)
        buffer.append((line_number, line))
    flush()
    if not ended:
        raise LPFormatError("missing 'End'")
    logger.debug("Parsed LP text", rows=parser.lp.num_rows, columns=parser.lp.num_columns)
    return parser.lp
