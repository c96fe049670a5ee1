"""Bit-exact interchange formats.

JSON conventions: complex scalars serialize as [re, im] pairs; matrices as
{"rows", "cols", "entries": [[re, im], ...]} in row-major order; vectors as
{"dim", "entries": [[re, im], ...]}.  All floats are written with 17
significant digits so doubles round-trip exactly, and the writer is a
small recursive serializer (sorted keys, no whitespace variation) so equal
inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np


def format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite float in serialized payload")
    if x == int(x) and abs(x) < 1e16:
        # keep integral values compact but unambiguous
        return f"{x:.1f}"
    return format(x, ".17g")


def dumps_canonical(obj: Any) -> str:
    pieces: list[str] = []
    _write(obj, pieces)
    return "".join(pieces)


def _write(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        out.append(f"[{format_float(z.real)},{format_float(z.imag)}]")
    elif isinstance(obj, np.ndarray):
        _write(obj.tolist(), out)
    elif isinstance(obj, dict):
        out.append("{")
        for idx, key in enumerate(sorted(obj)):
            if idx:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _write(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for idx, item in enumerate(obj):
            if idx:
                out.append(",")
            _write(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def matrix_to_obj(M: np.ndarray) -> dict:
    A = np.asarray(M, dtype=complex)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in A.reshape(-1)],
    }


def matrix_from_obj(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"matrix payload has {len(entries)} entries, expected {rows * cols}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(rows, cols)


def vector_to_obj(v: np.ndarray) -> dict:
    a = np.asarray(v, dtype=complex).reshape(-1)
    return {"dim": int(a.size), "entries": [[float(z.real), float(z.imag)] for z in a]}


def vector_from_obj(obj: dict) -> np.ndarray:
    dim = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != dim:
        raise ValueError(f"vector payload has {len(entries)} entries, expected {dim}")
    return np.array([complex(re, im) for re, im in entries])


def correlation_csv_rows(X: np.ndarray, n: int, m: int) -> list[tuple]:
    """One row (i, j, k, l, re, im) per generator-pair coordinate, 1-based."""
    rows = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, m + 1):
                for l in range(1, m + 1):
                    z = X[(i - 1) * m + (k - 1), (j - 1) * m + (l - 1)]
                    rows.append((i, j, k, l, format_float(float(z.real)), format_float(float(z.imag))))
    return rows
