"""Deterministic JSON and CSV output.

JSON floats are written with 17 significant digits and CSV floats with 9,
so repeated runs produce byte-identical files. Non-finite values become
``null`` in JSON and ``nan`` in CSV.
"""
from __future__ import annotations

import json
import math

from .config import form_to_dict
from .grid import DeformationGrid

__all__ = ["CSV_COLUMNS", "dumps", "grid_to_csv", "grid_to_dict", "fmt_float"]

CSV_COLUMNS = ("k", "b", "K", "B", "stable", "representable",
               "identity_deviation", "orthogonality_angle_deg")


def fmt_float(x: float, digits: int = 17) -> str:
    if x is None or not math.isfinite(x):
        return "null"
    s = format(x, f".{digits}g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _scalar(o) -> bool:
    return o is None or isinstance(o, (bool, int, float, str))


def _enc(o, level: int) -> str:
    pad = "  " * (level + 1)
    end = "  " * level
    if o is None:
        return "null"
    if isinstance(o, bool):
        return "true" if o else "false"
    if isinstance(o, int):
        return str(o)
    if isinstance(o, float):
        return fmt_float(o)
    if isinstance(o, str):
        return json.dumps(o)
    if isinstance(o, complex):
        return _enc([o.real, o.imag], level)
    if isinstance(o, dict):
        if not o:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_enc(v, level + 1)}" for k, v in o.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(o, (list, tuple)):
        if not o:
            return "[]"
        if all(_scalar(v) or isinstance(v, complex) for v in o):
            return "[" + ", ".join(_enc(v, level + 1) for v in o) + "]"
        return "[\n" + ",\n".join(pad + _enc(v, level + 1) for v in o) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    return _enc(obj, 0) + "\n"


def _metrics(m):
    if m is None:
        return None
    return {
        "jacobian": [list(m.jacobian[0]), list(m.jacobian[1])],
        "orthogonality_angle_deg": m.orthogonality_angle_deg,
        "singular_values": list(m.singular_values),
        "identity_deviation": m.identity_deviation,
    }


def _curve(c, level_key: str, swept_key: str):
    return {
        level_key: c.level,
        "vertex_fields": ["K", "B", swept_key],
        "segments": [[list(v) for v in seg] for seg in c.segments],
        "skipped": [{swept_key: s, "reason": r} for s, r in c.skipped],
    }


def grid_to_dict(g: DeformationGrid, b_axis: str = "virtual") -> dict:
    spec = g.spec
    return {
        "format": "zdeform.grid/1",
        "form": {**form_to_dict(spec.form), "provenance": spec.form.provenance},
        "spec": {
            "k_values": list(spec.k_values),
            "b_values": list(spec.b_values),
            "samples_per_curve": spec.samples_per_curve,
            "theta_max": spec.theta_max,
            "boundary_points": spec.boundary_points,
        },
        "b_axis": b_axis,
        "iso_k": [_curve(c, "k", "b") for c in g.iso_k],
        "iso_b": [_curve(c, "b", "k") for c in g.iso_b],
        "boundary": {
            "vertex_fields": ["K", "B", "theta"],
            "points": [[p.K, p.B, p.theta] for p in g.boundary],
            "skipped": [{"theta": t, "reason": r} for t, r in g.boundary_skipped],
        },
        "landmarks": {name: {"K": p.K, "B": p.B, "theta": p.theta}
                      for name, p in g.landmarks.items()},
        "nodes": [
            {
                "k": n.k, "b": n.b, "K": n.K, "B": n.B,
                "stable": n.stable, "representable": n.representable,
                "metrics": _metrics(n.metrics), "error": n.error,
            }
            for n in g.iter_nodes()
        ],
    }


def _csv_float(x) -> str:
    if x is None or not math.isfinite(x):
        return "nan"
    return format(x, ".9g")


def _csv_bool(x) -> str:
    return "" if x is None else ("true" if x else "false")


def grid_to_csv(g: DeformationGrid) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for n in g.iter_nodes():
        m = n.metrics
        lines.append(",".join([
            _csv_float(n.k), _csv_float(n.b), _csv_float(n.K), _csv_float(n.B),
            _csv_bool(n.stable), _csv_bool(n.representable),
            _csv_float(m.identity_deviation if m else None),
            _csv_float(m.orthogonality_angle_deg if m else None),
        ]))
    return "\n".join(lines) + "\n"
