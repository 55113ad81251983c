"""Deterministic CSV, plot-script and provenance writers for sweep results."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .errors import HybridomError
from .scenarios import AXIS_COLUMNS, AXIS_LABELS, OBSERVABLE_LABELS, SweepResult, serialize


class OutputError(HybridomError, OSError):
    pass


def _num(v) -> str:
    return "" if v is None else format(float(v), ".17g")


def csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow([AXIS_COLUMNS[result.scenario.axis.quantity]] + result.columns + ["error"])
    for x, row, err in zip(result.axis_values, result.rows, result.errors):
        w.writerow([_num(x)] + [_num(v) for v in row] + ["1" if err else "0"])
    return buf.getvalue()


def plot_text(result: SweepResult, csv_name: str) -> str:
    """Renderer-agnostic plot commands; one ``series`` line per CSV column."""
    s = result.scenario
    ylabel = " / ".join(OBSERVABLE_LABELS[o] for o in s.outputs)
    lines = [
        f"title {s.name}",
        f"data {csv_name}",
        f"xlabel {AXIS_LABELS[s.axis.quantity]}",
        f"ylabel {ylabel}",
        f"x {AXIS_COLUMNS[s.axis.quantity]}",
    ]
    lines += [f"series {c}" for c in result.columns]
    return "\n".join(lines) + "\n"


def meta_text(result: SweepResult) -> str:
    meta = {
        "provenance": result.provenance,
        "scenario": serialize(result.scenario),
        "resolved": result.scenario.params.as_dict(),
        "failed_points": result.failed_points,
        "errors": {str(i): e for i, e in enumerate(result.errors) if e},
    }
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"


def write_outputs(result: SweepResult, out_dir) -> dict:
    """Write ``<name>.csv``, ``<name>.plot`` and ``<name>.meta``; return their paths."""
    out_dir = Path(out_dir)
    name = result.scenario.name
    files = {
        "csv": (out_dir / f"{name}.csv", csv_text(result)),
        "plot": (out_dir / f"{name}.plot", plot_text(result, f"{name}.csv")),
        "meta": (out_dir / f"{name}.meta", meta_text(result)),
    }
    manifest = {}
    for kind, (path, text) in files.items():
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            with path.open("w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
        manifest[kind] = path
    return manifest
