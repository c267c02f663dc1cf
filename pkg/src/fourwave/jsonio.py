"""Byte-stable JSON artifacts: sorted keys, floats at 17 significant digits.

Identical inputs must produce identical bytes across runs and platforms,
so floats are formatted explicitly rather than left to repr.
"""
from __future__ import annotations

import math
from fractions import Fraction


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return format(v, ".17g")


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def canonical_dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON text for dicts/lists/scalars/Fractions/arrays."""
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return _escape(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        keys = sorted(str(k) for k in obj)
        lookup = {str(k): v for k, v in obj.items()}
        items = [f"{pad}  {_escape(k)}: {canonical_dumps(lookup[k], indent + 2)}"
                 for k in keys]
        if not items:
            return "{}"
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if hasattr(obj, "tolist"):
        return canonical_dumps(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        items = [canonical_dumps(v, indent) for v in obj]
        return "[" + ", ".join(items) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(obj))
        fh.write("\n")
