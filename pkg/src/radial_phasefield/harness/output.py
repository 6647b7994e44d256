"""CSV tables and JSON manifests.

Floats are written with 17 significant digits so they round-trip exactly.
The manifest holds the config echo, version and scheme identifiers, SHA-256
checksums of the CSV files, and the rows, fits and failures themselves, so
tables can be re-emitted from it alone.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

from .runner import SCHEME, SweepResult, versions

CSV_COLUMNS = (
    "eps", "alpha", "t_probe", "R_analytic", "R_measured", "jump_total", "jump_p1",
    "jump_p2", "jump_p3", "jump_young_laplace", "kappa_target", "energy",
    "discrepancy_pos", "bv_seminorm", "mass", "d_eps_l2", "d_eps_h1w",
)


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def csv_text(rows, columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def _jsonable(obj):
    """Replace non-finite floats by strings so the manifest is strict JSON."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _from_jsonable(value):
    if value in ("nan", "inf", "-inf"):
        return float(value)
    return value


def manifest_dict(result: SweepResult, command: str, columns, checksums: dict) -> dict:
    return _jsonable({
        "command": command,
        "config": result.config,
        "versions": versions(),
        "scheme": SCHEME,
        "columns": list(columns),
        "checksums": checksums,
        "rows": result.rows,
        "fits": result.fits,
        "failures": result.failures,
        "runs": [
            {
                "eps": r.eps,
                "alpha": r.alpha,
                "step_count": r.step_count,
                "integrals": r.integrals,
                "failure": r.failure,
                "wall_clock": r.wall_clock,
            }
            for r in result.runs
        ],
        "wall_clock": result.wall_clock,
    })


def emit(result: SweepResult, fmt: str, path, command: str = "sweep", columns=CSV_COLUMNS) -> list:
    """Write ``<command>.csv`` (csv format) and ``manifest.json`` into ``path``.

    Returns the written file paths.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    written, checksums = [], {}
    if fmt == "csv":
        text = csv_text(result.rows, columns)
        target = out / f"{command}.csv"
        target.write_text(text)
        checksums[target.name] = hashlib.sha256(text.encode()).hexdigest()
        written.append(target)
        if result.fits:
            fits_text = json.dumps(_jsonable(result.fits), indent=2, sort_keys=True)
            fits_target = out / f"{command}_fits.json"
            fits_target.write_text(fits_text + "\n")
            checksums[fits_target.name] = hashlib.sha256((fits_text + "\n").encode()).hexdigest()
            written.append(fits_target)
    manifest = manifest_dict(result, command, columns, checksums)
    target = out / "manifest.json"
    target.write_text(json.dumps(manifest, indent=2) + "\n")
    written.append(target)
    return written


def load_manifest(path) -> dict:
    data = json.loads(Path(path).read_text())
    data["rows"] = [{k: _from_jsonable(v) for k, v in row.items()} for row in data.get("rows", [])]
    return data


def read_csv(path) -> list[dict]:
    """Parse a table written by :func:`emit` back into float-valued rows."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [{k: float(v) for k, v in row.items()} for row in reader]
