"""Rendering and export of reports.

Reports are plain dicts. JSON output is canonical (sorted keys, two-space indent)
so identical inputs give identical bytes; the text form is a pure function of the
JSON form, with per-degree tables rendered through pandas.
"""

import json
import logging
from pathlib import Path
from typing import Any

import pandas as pd


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _flatten(row: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in row.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list) and not any(isinstance(v, (dict, list)) for v in value):
            flat[name] = ", ".join(str(v) for v in value)
        else:
            flat[name] = value
    return flat


def _is_table(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(isinstance(v, dict) for v in value)


def render_text(report: dict) -> str:
    """Human-readable report: scalar fields first, then one table per list of records."""
    lines, tables = [], []
    for key in sorted(report):
        value = report[key]
        if _is_table(value):
            tables.append((key, value))
        elif isinstance(value, dict) and any(_is_table(v) for v in value.values()):
            tables.extend((f"{key}.{k}", v) for k, v in sorted(value.items()) if _is_table(v))
            rest = {k: v for k, v in value.items() if not _is_table(v)}
            lines.extend(f"{key}.{k}: {v}" for k, v in sorted(_flatten(rest).items()))
        elif isinstance(value, dict):
            lines.extend(f"{key}.{k}: {v}" for k, v in sorted(_flatten(value).items()))
        else:
            lines.append(f"{key}: {value}")
    out = "\n".join(lines)
    for name, rows in tables:
        frame = pd.DataFrame([_flatten(r) for r in rows])
        out += f"\n\n[{name}]\n{frame.to_string(index=False)}"
    return out + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"Unknown output format: {fmt!r}")


def export_report(report: dict, fmt: str, output: str) -> Path:
    """Write a rendered report to ``output``, creating parent directories.

    :param report: The report dict.
    :param fmt: ``"json"`` or ``"text"``.
    :param output: Target file path.
    :return: The resolved path that was written.
    """
    logger = logging.getLogger(__name__)
    path = Path(output).resolve()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(report, fmt), encoding="utf-8")
    logger.info(f"Exported {fmt.upper()} report: {path}")
    return path


def export_witness(task: dict, export_dir: str, name: str) -> Path:
    """Write a failing law case as a standalone task file."""
    logger = logging.getLogger(__name__)
    path = Path(export_dir) / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_json(task), encoding="utf-8")
    logger.info(f"Exported failing case: {path}")
    return path
