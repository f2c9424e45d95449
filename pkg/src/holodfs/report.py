"""Deterministic JSON and CSV serialization of run results.

JSON: keys sorted, two-space indent, floats written with 17 significant
digits (``format(x, ".17g")``), non-finite floats as the strings "inf",
"-inf" and "nan". Complex matrices become ``{"real": [...], "imag": [...]}``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def matrix_record(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"real": m.real.tolist(), "imag": m.imag.tolist()}


def matrix_from_record(rec: dict) -> np.ndarray:
    return np.asarray(rec["real"], dtype=float) + 1j * np.asarray(rec["imag"], dtype=float)


def _float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def _plain(obj):
    """Convert numpy scalars/arrays and tuples into plain Python values."""
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return matrix_record(obj)
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": float(obj.real), "imag": float(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _dump(obj, indent: int, level: int, out: list) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, k in enumerate(sorted(obj)):
            out.append(pad + json.dumps(k) + ": ")
            _dump(obj[k], indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            out.append("[" + ", ".join(_float(v) if isinstance(v, float) else str(v) for v in obj) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _dump(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _dump(_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in np.asarray(rows, dtype=float):
        w.writerow([format(float(x), ".17g") for x in row])
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def summary_document(command: str, config: dict, runs: list) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": config, "runs": list(runs)}


def emit_report(out_dir, command: str, config: dict, runs: list, trajectories=None) -> list[Path]:
    """Write summary.json and one trajectory.csv per run key.

    ``trajectories`` maps run keys to ``(columns, rows)``; each lands in
    ``out_dir/<key>/trajectory.csv`` (or ``out_dir/trajectory.csv`` for the
    key ``""``). Returns the written paths.
    """
    out = Path(out_dir)
    written = []
    for key in sorted(trajectories or {}):
        cols, rows = trajectories[key]
        p = (out / key / "trajectory.csv") if key else (out / "trajectory.csv")
        _write(p, csv_text(cols, rows))
        written.append(p)
    p = out / "summary.json"
    _write(p, dumps(summary_document(command, config, runs)))
    written.append(p)
    return written


__all__ = ["SCHEMA_VERSION", "csv_text", "dumps", "emit_report", "matrix_from_record", "matrix_record", "summary_document"]
