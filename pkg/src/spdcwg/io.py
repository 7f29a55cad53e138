"""Byte-stable CSV/JSON writers.

JSON floats are written with 17 significant digits (``%.17g``), CSV floats
with ``%.12e``. Non-finite floats become ``null`` in JSON and ``nan``/``inf``
in CSV. Keys keep insertion order, so field order is fixed by the code that
builds the payload.

Grid CSV layout (N_s x N_i values)::

    omega_i_rad_s,,<wi_0>,...,<wi_{N_i-1}>
    lambda_i_nm,,<li_0>,...
    <ws_0>,<ls_0>,<v_00>,...,<v_0,N_i-1>
    ...

i.e. the first two rows carry the idler axis (rad/s, nm) from column 3 on,
and the first two columns of every later row carry the signal axis.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .jsa import SpectralGrid

CSV_FLOAT = "{:.12e}"


def fmt_csv(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return CSV_FLOAT.format(float(x))
    if x is None:
        return ""
    return str(x)


def _json_scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with fixed float formatting; lists of scalars stay on one line."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_scalar(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_json_scalar(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, complex):
        return "[" + _json_scalar(obj.real) + ", " + _json_scalar(obj.imag) + "]"
    return _json_scalar(obj)


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def write_json(path, obj) -> Path:
    return write_text(path, dumps(obj) + "\n")


def csv_text(header, rows) -> str:
    lines = [",".join(header)] if header else []
    lines += [",".join(fmt_csv(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows) -> Path:
    return write_text(path, csv_text(header, rows))


def grid_csv_text(g: SpectralGrid) -> str:
    if g.is_complex:
        raise ValueError("CSV export holds real grids only; export |f|^2 or use JSON")
    lines = [
        ",".join(["omega_i_rad_s", ""] + [fmt_csv(w) for w in g.omega_i]),
        ",".join(["lambda_i_nm", ""] + [fmt_csv(w) for w in g.lambda_i_nm]),
    ]
    lam_s = g.lambda_s_nm
    for k, ws in enumerate(g.omega_s):
        lines.append(",".join([fmt_csv(ws), fmt_csv(lam_s[k])] + [fmt_csv(v) for v in g.values[k]]))
    return "\n".join(lines) + "\n"


def read_grid_csv(text: str) -> SpectralGrid:
    rows = [line.split(",") for line in text.strip().splitlines()]
    # axes were rounded on write; rebuild them uniformly from the endpoints
    wi = [float(v) for v in rows[0][2:]]
    ws = [float(r[0]) for r in rows[2:]]
    omega_i = np.linspace(wi[0], wi[-1], len(wi))
    omega_s = np.linspace(ws[0], ws[-1], len(ws))
    values = np.array([[float(v) for v in r[2:]] for r in rows[2:]])
    return SpectralGrid(omega_s, omega_i, values)


def grid_payload(g: SpectralGrid) -> dict:
    out = {
        "label": g.label,
        "omega_s_rad_s": g.omega_s,
        "omega_i_rad_s": g.omega_i,
        "lambda_s_nm": g.lambda_s_nm,
        "lambda_i_nm": g.lambda_i_nm,
    }
    if g.is_complex:
        out["real"] = g.values.real
        out["imag"] = g.values.imag
    else:
        out["values"] = g.values
    return out
