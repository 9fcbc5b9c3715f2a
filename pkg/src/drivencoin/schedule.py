"""Measurement-strength schedules ``t -> kappa(t)``.

``kappa = 1`` leaves the coin untouched (unitary walk), ``kappa = 0`` fully
dephases it every step.  Negative values are allowed: ``kappa = -1`` is a phase
flip, which is unitary.  Step indices are integers and the first channel of an
evolution uses ``t = 1``.

Text grammar (as accepted by :func:`parse_schedule`)::

    cos:<eta>                      kappa(t) = cos(eta * t)
    const:<c>
    saw:<period>:<lo>:<hi>         linear ramp lo -> hi over one period, then reset
    piecewise:<t0>-<t1>=<v>,...    half-open intervals [t0, t1); t1 may be 'inf'
    table:<v0>,<v1>,...            kappa(t) = v_t, starting at t = 0

The labels produced by :func:`describe` parse back to the same schedule.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


def _check_range(v: float, what: str) -> float:
    v = float(v)
    if not -1.0 <= v <= 1.0 or math.isnan(v):
        raise ValueError(f"{what} = {v} outside [-1, 1]")
    return v


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "∞"
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class Constant:
    value: float

    def __post_init__(self):
        _check_range(self.value, "constant kappa")


@dataclass(frozen=True)
class Cosine:
    eta: float


@dataclass(frozen=True)
class Sawtooth:
    period: int = 40
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if int(self.period) != self.period or self.period < 1:
            raise ValueError("sawtooth period must be a positive integer")
        _check_range(self.lo, "sawtooth lo")
        _check_range(self.hi, "sawtooth hi")


@dataclass(frozen=True)
class Piecewise:
    intervals: tuple  # ((t_start, t_end, value), ...), t_end may be math.inf

    def __post_init__(self):
        spans = sorted(self.intervals)
        for a, b, v in spans:
            if not a < b:
                raise ValueError(f"empty interval [{a}, {b})")
            _check_range(v, "piecewise value")
        for (_, b0, _), (a1, _, _) in zip(spans, spans[1:]):
            if a1 < b0:
                raise ValueError("piecewise intervals overlap")
        object.__setattr__(self, "intervals", tuple(spans))


@dataclass(frozen=True)
class Table:
    values: tuple

    def __post_init__(self):
        for v in self.values:
            _check_range(v, "table value")


DrivingSchedule = Union[Constant, Cosine, Sawtooth, Piecewise, Table]


def off_on_off(t_on: int, t_off: int) -> Piecewise:
    """Unitary until ``t_on``, fully measured on ``[t_on, t_off)``, unitary after."""
    if not 0 <= t_on < t_off:
        raise ValueError("need 0 <= t_on < t_off")
    spans = ((0, t_on, 1.0), (t_on, t_off, 0.0), (t_off, math.inf, 1.0))
    return Piecewise(tuple(sp for sp in spans if sp[0] < sp[1]))


def kappa_at(s: DrivingSchedule, t: int) -> float:
    """Value of the schedule at integer step ``t``."""
    if t < 0:
        raise ValueError("step index must be non-negative")
    if isinstance(s, Constant):
        return float(s.value)
    if isinstance(s, Cosine):
        return math.cos(s.eta * t)
    if isinstance(s, Sawtooth):
        return s.lo + (s.hi - s.lo) * (t % s.period) / s.period
    if isinstance(s, Piecewise):
        for a, b, v in s.intervals:
            if a <= t < b:
                return float(v)
        raise IndexError(f"piecewise schedule does not cover t = {t}")
    if isinstance(s, Table):
        if t >= len(s.values):
            raise IndexError(f"table has {len(s.values)} entries, asked for t = {t}")
        return float(s.values[t])
    raise TypeError(f"not a schedule: {s!r}")


def describe(s: DrivingSchedule) -> str:
    """Stable human-readable label, e.g. ``cos(t/10)`` or ``const(0)``."""
    if isinstance(s, Constant):
        return f"const({_fmt(s.value)})"
    if isinstance(s, Cosine):
        if s.eta != 0:
            inv = 1.0 / s.eta
            if abs(inv - round(inv)) < 1e-12 and abs(round(inv)) > 1:
                return f"cos(t/{round(inv)})"
        return f"cos({_fmt(s.eta)}*t)"
    if isinstance(s, Sawtooth):
        return f"saw({s.period},{_fmt(s.lo)},{_fmt(s.hi)})"
    if isinstance(s, Piecewise):
        body = ",".join(f"({_fmt(a)},{_fmt(b)},{_fmt(v)})" for a, b, v in s.intervals)
        return f"piecewise[{body}]"
    if isinstance(s, Table):
        return "table[" + ",".join(_fmt(v) for v in s.values) + "]"
    raise TypeError(f"not a schedule: {s!r}")


def _num(text: str) -> float:
    text = text.strip()
    if text in ("inf", "∞", "+inf"):
        return math.inf
    return float(Fraction(text)) if "/" in text else float(text)


def _int_or_inf(text: str):
    v = _num(text)
    if math.isinf(v):
        return v
    if v != int(v):
        raise ValueError(f"interval bound {text!r} is not an integer")
    return int(v)


_LABEL_RE = re.compile(r"^(const|cos|saw|piecewise|table)[(\[](.*)[)\]]$")


def parse_schedule(text: str) -> DrivingSchedule:
    """Parse the CLI grammar (``cos:0.1``) or a :func:`describe` label (``cos(t/10)``).

    Raises ``ValueError`` on malformed input.
    """
    text = text.strip()
    m = _LABEL_RE.match(text)
    if m:
        return _parse_label(m.group(1), m.group(2))
    kind, _, rest = text.partition(":")
    try:
        if kind == "cos":
            return Cosine(_num(rest))
        if kind == "const":
            return Constant(_num(rest))
        if kind == "saw":
            if not rest:
                return Sawtooth()
            period, lo, hi = rest.split(":")
            return Sawtooth(int(period), _num(lo), _num(hi))
        if kind == "piecewise":
            spans = []
            for item in rest.split(","):
                rng, val = item.split("=")
                a, b = rng.split("-")
                spans.append((_int_or_inf(a), _int_or_inf(b), _num(val)))
            return Piecewise(tuple(spans))
        if kind == "table":
            return Table(tuple(_num(v) for v in rest.split(",")))
    except (TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"bad schedule {text!r}: {exc}") from exc
    raise ValueError(f"unknown schedule {text!r}")


def _parse_label(kind: str, body: str) -> DrivingSchedule:
    if kind == "const":
        return Constant(_num(body))
    if kind == "cos":
        m = re.fullmatch(r"t/(\S+)", body)
        if m:
            return Cosine(1.0 / _num(m.group(1)))
        m = re.fullmatch(r"(\S+)\*t", body)
        if m:
            return Cosine(_num(m.group(1)))
        raise ValueError(f"bad cosine label {body!r}")
    if kind == "saw":
        period, lo, hi = body.split(",")
        return Sawtooth(int(period), _num(lo), _num(hi))
    if kind == "piecewise":
        spans = re.findall(r"\(([^)]*)\)", body)
        out = []
        for span in spans:
            a, b, v = span.split(",")
            out.append((_int_or_inf(a), _int_or_inf(b), _num(v)))
        return Piecewise(tuple(out))
    if kind == "table":
        return Table(tuple(_num(v) for v in body.split(",")))
    raise ValueError(kind)
