"""JSON and CSV output for suite runs.

The report layout is ``{"environment": {...}, "results": [...]}`` with keys in
a fixed order.  By default nothing time dependent is written (``runtimeMs`` is
0.0 and the timestamps are null), so two runs with the same configuration
produce identical bytes.  Pass ``timings=True`` to record wall-clock data.
"""
from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math

import numpy as np

from .. import __version__
from .. import hopf

RESULT_KEYS = ("id", "params", "maxAbsErr", "maxRelErr", "pass", "runtimeMs", "notes")

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["environment", "results"],
    "additionalProperties": False,
    "properties": {
        "environment": {
            "type": "object",
            "required": ["q", "version", "timestamps", "summary"],
            "properties": {
                "q": {"type": "number"},
                "version": {"type": "string"},
                "timestamps": {
                    "type": "object",
                    "required": ["started", "finished"],
                    "properties": {
                        "started": {"type": ["string", "null"]},
                        "finished": {"type": ["string", "null"]},
                    },
                },
                "summary": {
                    "type": "object",
                    "required": ["total", "passed", "failed"],
                    "properties": {k: {"type": "integer", "minimum": 0} for k in ("total", "passed", "failed")},
                },
            },
        },
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": list(RESULT_KEYS),
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "params": {"type": "object"},
                    "maxAbsErr": {"type": "number", "minimum": 0},
                    "maxRelErr": {"type": "number", "minimum": 0},
                    "pass": {"type": "boolean"},
                    "runtimeMs": {"type": "number", "minimum": 0},
                    "notes": {"type": "string"},
                },
            },
        },
    },
}


def _finite(x):
    # JSON has no inf/nan; errors that overflowed are written as a huge sentinel
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return 1.0e308
    return x


def _now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def build_report(results, cfg, timings: bool = False, started=None, finished=None) -> dict:
    """Assemble the report dictionary from a list of CheckResult."""
    rows = []
    for r in results:
        d = r.as_dict(timings=timings)
        d["maxAbsErr"] = _finite(d["maxAbsErr"])
        d["maxRelErr"] = _finite(d["maxRelErr"])
        rows.append({k: d[k] for k in RESULT_KEYS})
    passed = sum(1 for r in results if r.passed)
    env = {
        "q": cfg.q,
        "params": cfg.params(),
        "version": __version__,
        "numpy": np.__version__,
        "kernel": hopf.KERNEL_BACKEND,
        "timestamps": {"started": started if timings else None, "finished": finished if timings else None},
        "summary": {"total": len(results), "passed": passed, "failed": len(results) - passed},
    }
    return {"environment": env, "results": rows}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(report))


def validate(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if the report does not match."""
    import jsonschema

    jsonschema.validate(report, REPORT_SCHEMA)


def summary_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "pass", "maxAbsErr", "maxRelErr"])
    for r in results:
        w.writerow([r.id, "true" if r.passed else "false", f"{r.maxAbsErr:.6e}", f"{r.maxRelErr:.6e}"])
    return buf.getvalue()


def write_csv(results, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(summary_csv(results))
