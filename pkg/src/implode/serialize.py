"""Canonical JSON output and the matrix / number codecs used by scenarios and reports."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    return s


def _emit(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, bool, Fraction, np.number)) or v is None for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """Sorted keys, floats with 17 significant digits, two-space indent."""
    return _emit(obj, 2, 0) + "\n"


def encode_matrix(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, complex))
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def decode_matrix(obj: dict) -> np.ndarray:
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"matrix data has {len(data)} entries, expected {rows * cols}")
    vals = [parse_complex(z) for z in data]
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
        raise ValueError("non-finite matrix entry")
    return np.array(vals, complex).reshape(rows, cols)


def parse_complex(z) -> complex:
    """Number, [re, im] pair or string such as "1-2j"."""
    if isinstance(z, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(z, (int, float)):
        return complex(z)
    if isinstance(z, list) and len(z) == 2:
        return complex(float(z[0]), float(z[1]))
    if isinstance(z, str):
        s = z.replace(" ", "").lower()
        if s in ("inf", "+inf", "infinity", "oo"):
            return complex(math.inf, 0)
        try:
            return complex(s.replace("i", "j"))
        except ValueError as exc:
            raise ValueError(f"cannot read {z!r} as a complex number") from exc
    raise ValueError(f"cannot read {z!r} as a complex number")


def parse_rational(z) -> Fraction | float:
    """Exact for ints and "p/q" strings, float otherwise."""
    if isinstance(z, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(z, int):
        return Fraction(z)
    if isinstance(z, str):
        return Fraction(z)
    if isinstance(z, float):
        return z
    raise ValueError(f"cannot read {z!r} as a rational number")


def fraction_list(v) -> list[str]:
    return [str(Fraction(c)) if not isinstance(c, float) else fmt_float(c) for c in v]
