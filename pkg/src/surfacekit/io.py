"""JSON/CSV plumbing for the command line.

Complex numbers travel as [re, im] pairs (a bare number is read as real).
Floats are written with 17 significant digits so a round trip is exact.
"""

from __future__ import annotations

import csv
import io
import json
import math

from surfacekit.assembly import PantsClass


class InputError(ValueError):
    """Malformed or out-of-range input (exit code 1)."""


def fmt(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj)
    if isinstance(obj, complex):
        return f"[{fmt(obj.real)}, {fmt(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, complex, str, bool)) or v is None for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [inner + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    return data


def number(v, what: str = "value") -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{what} must be a number")
    x = float(v)
    if not math.isfinite(x):
        raise InputError(f"{what} must be finite")
    return x


def cnum(v, what: str = "value") -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InputError(f"{what} must be [re, im]")
        return complex(number(v[0], what), number(v[1], what))
    return complex(number(v, what))


def half_length_input(v, what: str = "half-length") -> complex:
    """Parse a half-length, rejecting values outside Re > 0, -pi < Im <= pi."""
    z = cnum(v, what)
    if not z.real > 0:
        raise InputError(f"{what} needs a positive real part")
    if not -math.pi < z.imag <= math.pi:
        raise InputError(f"{what} has imaginary part outside (-pi, pi]")
    return z


def field(data: dict, key: str):
    if key not in data:
        raise InputError(f"missing field {key!r}")
    return data[key]


def pants_class(d) -> PantsClass:
    if not isinstance(d, dict):
        raise InputError("pants class must be an object")
    sig = field(d, "sigmas")
    cuffs = field(d, "cuffs")
    feet = d.get("feet", [0, 0, 0])
    if not (len(sig) == len(cuffs) == len(feet) == 3):
        raise InputError("pants class needs three sigmas, cuffs and feet")
    try:
        return PantsClass(
            tuple(half_length_input(s) for s in sig),
            tuple((str(g), int(o)) for g, o in cuffs),
            tuple(cnum(f, "foot") for f in feet),
        )
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def matrix(g) -> list:
    a, b, c, d = g.lift.entries()
    return [[complex(a), complex(b)], [complex(c), complex(d)]]


__all__ = [
    "InputError",
    "cnum",
    "dumps",
    "field",
    "fmt",
    "half_length_input",
    "load",
    "matrix",
    "number",
    "pants_class",
    "to_csv",
]
