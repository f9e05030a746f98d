"""Deterministic JSON output with round-trip-exact floats.

The standard ``json`` module formats floats with ``repr``; here every float is
printed with 17 significant digits so that identical inputs always produce
byte-identical files.
"""

import math


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float cannot be serialized")
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int | None = None) -> str:
    pieces: list[str] = []
    _write(obj, pieces, indent, 0)
    return "".join(pieces)


def _write(obj, out: list[str], indent: int | None, level: int) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        import json as _json

        out.append(_json.dumps(obj))
    elif isinstance(obj, dict):
        _write_items(
            ((_key(k), v) for k, v in obj.items()), out, indent, level, "{", "}", is_map=True
        )
    elif isinstance(obj, (list, tuple)):
        _write_items(obj, out, indent, level, "[", "]", is_map=False)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _key(k) -> str:
    if not isinstance(k, str):
        raise TypeError("JSON object keys must be strings")
    return k


def _write_items(items, out, indent, level, open_ch, close_ch, is_map):
    items = list(items)
    if not items:
        out.append(open_ch + close_ch)
        return
    out.append(open_ch)
    sep_nl = "\n" + " " * (indent * (level + 1)) if indent else ""
    for i, item in enumerate(items):
        if i:
            out.append("," if indent is None else ",")
        out.append(sep_nl)
        if is_map:
            k, v = item
            import json as _json

            out.append(_json.dumps(k))
            out.append(": " if indent else ":")
            _write(v, out, indent, level + 1)
        else:
            _write(item, out, indent, level + 1)
    if indent:
        out.append("\n" + " " * (indent * level))
    out.append(close_ch)
