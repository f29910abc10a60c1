"""Text formats: linkage parameter files and bench measurement tables.

Parameter files are sectioned key = value text.  Values are arithmetic
expressions over numeric literals with sin/cos/tan/sqrt, trig arguments
in degrees, so a length derived from a tilted pad can be written the way
it appears on a drawing, e.g. ``l4 = 2.5*cos(15)``.  Expressions are
parsed with a tiny recursive-descent evaluator; nothing is ever passed
to eval().

The canonical file layout::

    [lengths_mm]
    l0 = 10.93
    l1 = 24
    l2 = 12
    l3 = 22 + 2.5*cos(15)*sin(15)
    l4 = 2.5*cos(15)

    [angles_deg]
    theta0 = 30
    theta1 = 9
    theta2 = 18.5
    theta3 = 15
    theta4 = 7.44
    theta5 = 33.1

    [spring]
    k_n_per_mm = 0.862
    natural_length_mm = 9.7

    [contact]
    mu = 0.6

    [solver]
    epsilon_n = 0.1

    [sweep]
    zeta_lo_deg = -30
    zeta_hi_deg = 90
    step_deg = 0.5

The [sweep] section is optional; everything else is required.  Blank
lines and ``#`` comments are ignored.  Parsing is permissive about the
physics (a zero length parses fine); run validation separately to get
the full rule report.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .model import LinkageParameters
from .statics import predict_opening

__all__ = [
    "ComparisonResult",
    "ComparisonRow",
    "Measurement",
    "MeasurementFileError",
    "ParameterFileError",
    "SweepSettings",
    "ParameterDocument",
    "compare_measurements",
    "format_comparison_csv",
    "format_parameter_file",
    "parse_design_file",
    "parse_parameter_document",
    "parse_parameter_file",
    "read_measurements",
]


class ParameterFileError(ValueError):
    """Malformed parameter file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MeasurementFileError(ValueError):
    """Malformed measurement table."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# Expression evaluation

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/()]))"
)

_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": lambda d: math.sin(math.radians(d)),
    "cos": lambda d: math.cos(math.radians(d)),
    "tan": lambda d: math.tan(math.radians(d)),
    "sqrt": math.sqrt,
}


def _tokenize(text: str, line: int) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParameterFileError(
                f"cannot read expression at {rest[:12]!r}", line
            )
        tokens.append(m.group().strip())
        pos = m.end()
    return tokens


class _ExpressionParser:
    """Recursive descent over +, -, *, /, unary sign, parentheses and
    single-argument functions.  Trig takes degrees."""

    def __init__(self, tokens: list[str], line: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> str:
        tok = self._peek()
        if tok is None:
            raise ParameterFileError("expression ends unexpectedly", self.line)
        self.pos += 1
        return tok

    def parse(self) -> float:
        value = self._expr()
        if self._peek() is not None:
            raise ParameterFileError(
                f"unexpected {self._peek()!r} after expression", self.line
            )
        return value

    def _expr(self) -> float:
        value = self._term()
        while self._peek() in ("+", "-"):
            if self._take() == "+":
                value += self._term()
            else:
                value -= self._term()
        return value

    def _term(self) -> float:
        value = self._factor()
        while self._peek() in ("*", "/"):
            op = self._take()
            rhs = self._factor()
            if op == "*":
                value *= rhs
            else:
                if rhs == 0.0:
                    raise ParameterFileError("division by zero", self.line)
                value /= rhs
        return value

    def _factor(self) -> float:
        sign = 1.0
        while self._peek() in ("+", "-"):
            if self._take() == "-":
                sign = -sign
        return sign * self._atom()

    def _atom(self) -> float:
        tok = self._take()
        if tok == "(":
            value = self._expr()
            if self._take() != ")":
                raise ParameterFileError("missing closing parenthesis", self.line)
            return value
        if tok in _FUNCTIONS:
            if self._take() != "(":
                raise ParameterFileError(
                    f"{tok} must be called with parentheses", self.line
                )
            arg = self._expr()
            if self._take() != ")":
                raise ParameterFileError("missing closing parenthesis", self.line)
            return _FUNCTIONS[tok](arg)
        try:
            return float(tok)
        except ValueError:
            raise ParameterFileError(f"unknown name {tok!r}", self.line) from None


def _eval_expression(text: str, line: int) -> float:
    tokens = _tokenize(text, line)
    if not tokens:
        raise ParameterFileError("empty value", line)
    return _ExpressionParser(tokens, line).parse()


# ---------------------------------------------------------------------------
# Parameter files

_SECTION_KEYS: dict[str, tuple[str, ...]] = {
    "lengths_mm": ("l0", "l1", "l2", "l3", "l4"),
    "angles_deg": ("theta0", "theta1", "theta2", "theta3", "theta4", "theta5"),
    "spring": ("k_n_per_mm", "natural_length_mm"),
    "contact": ("mu",),
    "solver": ("epsilon_n",),
    "sweep": ("zeta_lo_deg", "zeta_hi_deg", "step_deg"),
}

_OPTIONAL_SECTIONS = frozenset({"sweep"})


@dataclass(frozen=True)
class SweepSettings:
    """Sweep range override carried by a parameter file, radians."""

    zeta_lo: float
    zeta_hi: float
    step: float


@dataclass(frozen=True)
class ParameterDocument:
    parameters: LinkageParameters
    sweep: SweepSettings | None


def _iter_entries(
    text: str, known_sections: Sequence[str]
) -> Iterator[tuple[int, str, str, str]]:
    """Yield (line number, section, key, raw value) for every entry."""
    section: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in known_sections:
                raise ParameterFileError(
                    f"unknown section [{name}]; expected one of "
                    f"{sorted(known_sections)}",
                    lineno,
                )
            section = name
            continue
        if "=" not in line:
            raise ParameterFileError(
                f"expected key = value, got {line!r}", lineno
            )
        if section is None:
            raise ParameterFileError(
                "value appears before any [section] header", lineno
            )
        key, _, value = line.partition("=")
        yield lineno, section, key.strip(), value.strip()


def parse_parameter_document(text: str) -> ParameterDocument:
    """Parse a sectioned parameter file into parameters plus overrides.

    Reports the first structural problem with its line number.  The
    returned parameters are not physics-validated here.
    """
    values: dict[str, dict[str, float]] = {name: {} for name in _SECTION_KEYS}
    for lineno, section, key, raw_value in _iter_entries(text, tuple(_SECTION_KEYS)):
        if key not in _SECTION_KEYS[section]:
            raise ParameterFileError(
                f"unknown key {key!r} in [{section}]; expected one of "
                f"{list(_SECTION_KEYS[section])}",
                lineno,
            )
        if key in values[section]:
            raise ParameterFileError(
                f"duplicate key {key!r} in [{section}]", lineno
            )
        values[section][key] = _eval_expression(raw_value, lineno)

    missing: list[str] = []
    for section, keys in _SECTION_KEYS.items():
        if section in _OPTIONAL_SECTIONS and not values[section]:
            continue
        for key in keys:
            if key not in values[section]:
                missing.append(f"[{section}] {key}")
    if missing:
        raise ParameterFileError("missing entries: " + ", ".join(missing))

    lengths = values["lengths_mm"]
    angles = values["angles_deg"]
    params = LinkageParameters(
        l0=lengths["l0"],
        l1=lengths["l1"],
        l2=lengths["l2"],
        l3=lengths["l3"],
        l4=lengths["l4"],
        theta0=math.radians(angles["theta0"]),
        theta1=math.radians(angles["theta1"]),
        theta2=math.radians(angles["theta2"]),
        theta3=math.radians(angles["theta3"]),
        theta4=math.radians(angles["theta4"]),
        theta5=math.radians(angles["theta5"]),
        spring_k=values["spring"]["k_n_per_mm"],
        natural_length=values["spring"]["natural_length_mm"],
        mu=values["contact"]["mu"],
        epsilon=values["solver"]["epsilon_n"],
    )
    sweep_values = values["sweep"]
    sweep = None
    if sweep_values:
        sweep = SweepSettings(
            zeta_lo=math.radians(sweep_values["zeta_lo_deg"]),
            zeta_hi=math.radians(sweep_values["zeta_hi_deg"]),
            step=math.radians(sweep_values["step_deg"]),
        )
    return ParameterDocument(parameters=params, sweep=sweep)


def parse_parameter_file(text: str) -> LinkageParameters:
    """Parse a parameter file, ignoring any sweep override section."""
    return parse_parameter_document(text).parameters


def _fmt(value: float) -> str:
    # repr() keeps the shortest digits that round-trip the exact float.
    return repr(float(value))


def format_parameter_file(
    p: LinkageParameters, sweep: SweepSettings | None = None
) -> str:
    """Render parameters back into canonical file text.

    Values are written with full round-trip precision, so parse and
    format compose to the identity, apart from the degree conversion of
    angles which costs at most one unit in the last place.
    """
    lines = [
        "[lengths_mm]",
        f"l0 = {_fmt(p.l0)}",
        f"l1 = {_fmt(p.l1)}",
        f"l2 = {_fmt(p.l2)}",
        f"l3 = {_fmt(p.l3)}",
        f"l4 = {_fmt(p.l4)}",
        "",
        "[angles_deg]",
        f"theta0 = {_fmt(math.degrees(p.theta0))}",
        f"theta1 = {_fmt(math.degrees(p.theta1))}",
        f"theta2 = {_fmt(math.degrees(p.theta2))}",
        f"theta3 = {_fmt(math.degrees(p.theta3))}",
        f"theta4 = {_fmt(math.degrees(p.theta4))}",
        f"theta5 = {_fmt(math.degrees(p.theta5))}",
        "",
        "[spring]",
        f"k_n_per_mm = {_fmt(p.spring_k)}",
        f"natural_length_mm = {_fmt(p.natural_length)}",
        "",
        "[contact]",
        f"mu = {_fmt(p.mu)}",
        "",
        "[solver]",
        f"epsilon_n = {_fmt(p.epsilon)}",
    ]
    if sweep is not None:
        lines += [
            "",
            "[sweep]",
            f"zeta_lo_deg = {_fmt(math.degrees(sweep.zeta_lo))}",
            f"zeta_hi_deg = {_fmt(math.degrees(sweep.zeta_hi))}",
            f"step_deg = {_fmt(math.degrees(sweep.step))}",
        ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Design target files

_DESIGN_SECTIONS: dict[str, tuple[str, ...] | None] = {
    "target": (
        "interval_lo_deg",
        "interval_hi_deg",
        "press_angle_deg",
        "threshold_lo_n",
        "threshold_hi_n",
    ),
    "search": ("free", "budget"),
    # [bounds] keys are parameter names, checked by DesignSpec validation.
    "bounds": None,
}

_DESIGN_ANGLE_BOUNDS = frozenset(
    {"theta0", "theta1", "theta2", "theta3", "theta4", "theta5"}
)


def parse_design_file(text: str) -> tuple["DesignSpec", int]:
    """Parse a design target file into a spec plus evaluation budget.

    Layout::

        [target]
        interval_lo_deg = -10
        interval_hi_deg = 15
        press_angle_deg = -15
        threshold_lo_n = 3
        threshold_hi_n = 8

        [search]
        free = theta2          # comma-separated parameter names
        budget = 400           # optional, defaults to 400

        [bounds]
        theta2 = 10, 30        # degrees for angles, mm for lengths

    Bound pairs for theta fields are degrees; everything else keeps its
    native unit.  The spec itself is validated by the design machinery,
    so this parser only handles structure and units.
    """
    from .design import DesignSpec

    target: dict[str, float] = {}
    free: tuple[str, ...] = ()
    budget = 400
    bounds: dict[str, tuple[float, float]] = {}

    for lineno, section, key, raw in _iter_entries(text, tuple(_DESIGN_SECTIONS)):
        allowed = _DESIGN_SECTIONS[section]
        if allowed is not None and key not in allowed:
            raise ParameterFileError(
                f"unknown key {key!r} in [{section}]; expected one of "
                f"{list(allowed)}",
                lineno,
            )
        if section == "target":
            if key in target:
                raise ParameterFileError(f"duplicate key {key!r}", lineno)
            target[key] = _eval_expression(raw, lineno)
        elif section == "search":
            if key == "free":
                if free:
                    raise ParameterFileError("duplicate key 'free'", lineno)
                free = tuple(
                    name.strip() for name in raw.split(",") if name.strip()
                )
                if not free:
                    raise ParameterFileError("'free' lists no names", lineno)
            else:
                value = _eval_expression(raw, lineno)
                if value != int(value) or value < 1:
                    raise ParameterFileError(
                        f"budget must be a positive integer, got {raw!r}", lineno
                    )
                budget = int(value)
        else:
            if key in bounds:
                raise ParameterFileError(f"duplicate bound {key!r}", lineno)
            parts = raw.split(",")
            if len(parts) != 2:
                raise ParameterFileError(
                    f"bound must be 'lo, hi', got {raw!r}", lineno
                )
            lo = _eval_expression(parts[0], lineno)
            hi = _eval_expression(parts[1], lineno)
            if key in _DESIGN_ANGLE_BOUNDS:
                lo, hi = math.radians(lo), math.radians(hi)
            bounds[key] = (lo, hi)

    missing = [k for k in _DESIGN_SECTIONS["target"] or () if k not in target]
    if missing:
        raise ParameterFileError("missing [target] entries: " + ", ".join(missing))
    if not free:
        raise ParameterFileError("missing [search] free = <names>")

    spec = DesignSpec(
        interval_lo=math.radians(target["interval_lo_deg"]),
        interval_hi=math.radians(target["interval_hi_deg"]),
        press_angle=math.radians(target["press_angle_deg"]),
        threshold_lo=target["threshold_lo_n"],
        threshold_hi=target["threshold_hi_n"],
        free=free,
        bounds=bounds,
    )
    return spec, budget


# ---------------------------------------------------------------------------
# Measurements and model-vs-bench comparison

_MEASUREMENT_HEADER = ["zeta_deg", "measured_force_n"]


@dataclass(frozen=True)
class Measurement:
    """One bench reading: press direction (radians) and force (N)."""

    zeta: float
    measured_force: float


def read_measurements(text: str) -> tuple[Measurement, ...]:
    """Read a measurement CSV with header ``zeta_deg,measured_force_n``."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MeasurementFileError("file is empty") from None
    if [h.strip() for h in header] != _MEASUREMENT_HEADER:
        raise MeasurementFileError(
            f"header must be {','.join(_MEASUREMENT_HEADER)!r}, "
            f"got {','.join(header)!r}",
            line=1,
        )
    out: list[Measurement] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise MeasurementFileError(
                f"expected 2 columns, got {len(row)}", lineno
            )
        try:
            zeta_deg = float(row[0])
            force = float(row[1])
        except ValueError:
            raise MeasurementFileError(
                f"non-numeric entry in {row!r}", lineno
            ) from None
        if not (math.isfinite(zeta_deg) and math.isfinite(force)):
            raise MeasurementFileError(f"non-finite entry in {row!r}", lineno)
        if force < 0.0:
            raise MeasurementFileError(
                f"measured force must be >= 0, got {force}", lineno
            )
        out.append(Measurement(zeta=math.radians(zeta_deg), measured_force=force))
    if not out:
        raise MeasurementFileError("no data rows")
    return tuple(out)


@dataclass(frozen=True)
class ComparisonRow:
    """Model prediction lined up against one bench reading.

    ``predicted`` is None when the model says this press direction does
    not open the finger at all; such rows are flagged, not failed, since
    a bench fixture can still register a force there.
    """

    zeta: float
    measured: float
    predicted: float | None
    abs_dev: float | None
    rel_dev: float | None

    @property
    def model_opens(self) -> bool:
        return self.predicted is not None


@dataclass(frozen=True)
class ComparisonResult:
    rows: tuple[ComparisonRow, ...]
    mean_abs_dev: float | None


def compare_measurements(
    p: LinkageParameters, measurements: Sequence[Measurement]
) -> ComparisonResult:
    """Compare predicted switching forces against bench readings.

    The mean absolute deviation covers only rows where the model opens;
    it is None when no row does.
    """
    rows: list[ComparisonRow] = []
    devs: list[float] = []
    for m in measurements:
        decision = predict_opening(p, m.zeta)
        if decision.opens:
            assert decision.required_force is not None
            predicted = decision.required_force
            abs_dev = abs(predicted - m.measured_force)
            rel_dev = abs_dev / m.measured_force if m.measured_force > 0.0 else None
            devs.append(abs_dev)
            rows.append(
                ComparisonRow(
                    zeta=m.zeta,
                    measured=m.measured_force,
                    predicted=predicted,
                    abs_dev=abs_dev,
                    rel_dev=rel_dev,
                )
            )
        else:
            rows.append(
                ComparisonRow(
                    zeta=m.zeta,
                    measured=m.measured_force,
                    predicted=None,
                    abs_dev=None,
                    rel_dev=None,
                )
            )
    mean = sum(devs) / len(devs) if devs else None
    return ComparisonResult(rows=tuple(rows), mean_abs_dev=mean)


def format_comparison_csv(result: ComparisonResult) -> str:
    """Render a comparison as CSV, blank cells where the model is silent."""
    def num(x: float | None) -> str:
        return "" if x is None else f"{x:.9g}"

    lines = ["zeta_deg,measured_force_n,predicted_force_n,abs_dev_n,rel_dev,model_opens"]
    for row in result.rows:
        lines.append(
            ",".join(
                [
                    f"{math.degrees(row.zeta):.9g}",
                    f"{row.measured:.9g}",
                    num(row.predicted),
                    num(row.abs_dev),
                    num(row.rel_dev),
                    "true" if row.model_opens else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"
