"""Deterministic CSV / JSON / key=value writers.

Floats use nine significant digits with '.' as radix and '\\n' line
endings regardless of locale or platform.
"""

from __future__ import annotations

import json

from . import __version__


def fmt_float(value) -> str:
    return format(float(value), ".9g")


def _round(value):
    if isinstance(value, float):
        return float(fmt_float(value))
    return value


def to_csv(columns: dict) -> str:
    names = list(columns)
    rows = zip(*(columns[name] for name in names))
    lines = [",".join(names)]
    lines.extend(",".join(fmt_float(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def to_json(columns: dict, command: str, config_hash: str, report: dict | None = None) -> str:
    doc = {
        "metadata": {
            "command": command,
            "config_hash": config_hash,
            "tool_version": __version__,
        },
        "columns": list(columns),
        "data": {name: [_round(float(v)) for v in values] for name, values in columns.items()},
    }
    if report:
        doc["report"] = {key: _round(value) for key, value in report.items()}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def to_report(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, float):
            value = fmt_float(value)
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def report_json(report: dict, command: str, config_hash: str) -> str:
    doc = {
        "metadata": {"command": command, "config_hash": config_hash, "tool_version": __version__},
        "report": {key: _round(value) for key, value in report.items()},
    }
    return json.dumps(doc, indent=2) + "\n"
