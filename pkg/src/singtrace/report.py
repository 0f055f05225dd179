"""Deterministic report assembly and serialization.

Reports are byte-stable: floats are written with 17 significant digits,
ordering is fixed by construction, and volatile data (wall time) stays out
of the payload.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .means import LimitEstimate
from .spaces import SeminormReport, SupResult

SCHEMA_VERSION = "1"
MAX_CURVE_POINTS = 512


def format_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if x == math.inf:
        return '"inf"'
    if x == -math.inf:
        return '"-inf"'
    return format(x, ".17g")


def _json_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in '"\\':
            out.append("\\" + ch)
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def canonical_json(obj, indent: int = 0) -> str:
    """Recursive serializer with deterministic float formatting."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return f'"{_json_escape(obj)}"'
    if isinstance(obj, (bool, int, float, np.floating, np.integer)):
        return format_number(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{_json_escape(str(k))}": '
                 f"{canonical_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, bool, np.floating, np.integer))
               for v in seq):
            return "[" + ", ".join(format_number(v) for v in seq) + "]"
        items = [f"{inner}{canonical_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _decimate(arr) -> list:
    arr = np.asarray(arr)
    if len(arr) <= MAX_CURVE_POINTS:
        return [float(v) for v in arr]
    stride = int(math.ceil(len(arr) / MAX_CURVE_POINTS))
    idx = list(range(0, len(arr), stride))
    if idx[-1] != len(arr) - 1:
        idx.append(len(arr) - 1)
    return [float(arr[i]) for i in idx]


def limit_entry(est: LimitEstimate, scale: float = 1.0) -> dict:
    return {
        "kind": "limit",
        "value": None if est.value is None else scale * est.value,
        "band": [scale * est.liminf, scale * est.limsup],
        "converged": est.converged,
        "model": est.model,
        "smoothing_used": est.smoothing_used,
        "fit_residual": est.residual,
        "raw_band": list(est.raw_band) if est.raw_band else None,
        "curve": {
            "abscissa_ln": _decimate(est.samples.grid),
            "values": _decimate(est.samples.values),
        },
    }


def scalar_entry(value, error_bound=0.0, witness_ln_t=None, **extra) -> dict:
    entry = {"kind": "scalar", "value": value, "error_bound": error_bound}
    if witness_ln_t is not None:
        entry["witness_ln_t"] = witness_ln_t
    entry.update(extra)
    return entry


def sup_entry(res: SupResult, **extra) -> dict:
    return scalar_entry(res.value, witness_ln_t=res.witness_ln_t, **extra)


def seminorm_entry(rep: SeminormReport) -> dict:
    return {
        "kind": "seminorm",
        "value": rep.value,
        "band": list(rep.limsup_band),
        "s_grid": list(rep.s_grid),
        "samples": list(rep.samples),
        "error_bounds": list(rep.error_bounds),
        "notes": rep.notes,
    }


@dataclass
class AnalysisReport:
    """Named quantities with grids, tolerances and verdicts.

    ``wall_time_s`` is diagnostic only and never serialized, so identical
    invocations produce identical bytes.
    """

    input_descriptor: dict
    psi: str
    params: dict
    quantities: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def payload(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "tool": "singtrace",
            "input": self.input_descriptor,
            "psi": self.psi,
            "params": self.params,
            "quantities": self.quantities,
        }
        if self.verdicts:
            out["verdicts"] = self.verdicts
        if self.tolerances:
            out["tolerances"] = self.tolerances
        return out

    def to_json(self) -> str:
        return canonical_json(self.payload()) + "\n"

    def to_csv(self) -> str:
        lines = ["quantity,field,value"]
        for name, entry in self.quantities.items():
            for key, val in entry.items():
                if isinstance(val, dict):
                    continue
                if isinstance(val, str):
                    txt = val
                elif isinstance(val, (list, tuple)):
                    txt = ";".join(format_number(v).strip('"') for v in val)
                elif val is None:
                    txt = ""
                else:
                    txt = format_number(val).strip('"')
                lines.append(f"{name},{key},{txt}")
        for name, verdict in self.verdicts.items():
            lines.append(f"verdict,{name},{'pass' if verdict else 'fail'}")
        return "\n".join(lines) + "\n"
