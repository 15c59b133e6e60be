"""Machine-readable output files (CSV and JSON) and their reader.

CSV layout::

    #schema_version="1"
    #command="pattern"
    #parameters={...}
    #provenance={...}
    theta,beta,intensity
    ...rows...
    #footer={...}

Metadata lines start with ``#`` and carry a JSON value after ``=``. Floats in
CSV cells are written with 17 significant digits, which round-trips every
IEEE double exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from .correlations import UNDEFINED, Marker

SCHEMA_VERSION = "1"
FORMATS = ("csv", "json")


@dataclass
class OutputRecord:
    command: str
    parameters: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    provenance: dict[str, Any] = field(default_factory=dict)
    footer: dict[str, Any] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION


def make_provenance(tool_version: str, seed: int | None = None, timestamp: bool = True) -> dict[str, Any]:
    prov: dict[str, Any] = {"tool_version": tool_version}
    if seed is not None:
        prov["seed"] = int(seed)
    if timestamp:
        prov["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return prov


def _plain(value: Any) -> Any:
    """Convert numpy scalars and markers into JSON-compatible Python values."""
    if isinstance(value, Marker):
        return value.value
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def format_cell(value: Any) -> str:
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


_INT = re.compile(r"[+-]?\d+$")


def parse_cell(text: str) -> Any:
    if text == "":
        return None
    if text == UNDEFINED.value:
        return UNDEFINED
    if text in ("true", "false"):
        return text == "true"
    if _INT.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def render(record: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        obj = {
            "schema_version": record.schema_version,
            "command": record.command,
            "parameters": _plain(record.parameters),
            "columns": list(record.columns),
            "rows": _plain(record.rows),
            "footer": _plain(record.footer),
            "provenance": _plain(record.provenance),
        }
        return json.dumps(obj, indent=2, allow_nan=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for key in ("schema_version", "command", "parameters", "provenance"):
        value = getattr(record, key)
        buf.write(f"#{key}={json.dumps(_plain(value), sort_keys=True, allow_nan=False)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(record.columns)
    for row in record.rows:
        writer.writerow([format_cell(v) for v in row])
    if record.footer:
        buf.write(f"#footer={json.dumps(_plain(record.footer), sort_keys=True, allow_nan=False)}\n")
    return buf.getvalue()


def write_record(record: OutputRecord, path: str | os.PathLike | None, fmt: str = "csv") -> None:
    """Write atomically: a temp file in the target directory, then rename."""
    text = render(record, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_record(text: str) -> OutputRecord:
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        rows = [[UNDEFINED if v == UNDEFINED.value else v for v in row] for row in obj["rows"]]
        return OutputRecord(
            command=obj["command"],
            parameters=obj["parameters"],
            columns=obj["columns"],
            rows=rows,
            provenance=obj.get("provenance", {}),
            footer=obj.get("footer", {}),
            schema_version=obj["schema_version"],
        )
    meta: dict[str, Any] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key] = json.loads(value)
        elif line:
            body.append(line)
    table = list(csv.reader(body))
    if not table:
        raise ValueError("no header row")
    return OutputRecord(
        command=meta["command"],
        parameters=meta.get("parameters", {}),
        columns=table[0],
        rows=[[parse_cell(c) for c in row] for row in table[1:]],
        provenance=meta.get("provenance", {}),
        footer=meta.get("footer", {}),
        schema_version=meta["schema_version"],
    )


def read_record(path: str | os.PathLike) -> OutputRecord:
    return parse_record(Path(path).read_text())
