"""Dataset exchange format: a plain CSV next to a JSON manifest.

The CSV holds one header row and raw (un-normalized) values.  The manifest
declares, per column, whether it is an input or a target, optional explicit
min/max (otherwise data-derived), and the orientation for targets.  Explicit
ranges let a file declare headroom beyond the observed values.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .dataset import Configuration, Dataset, VariableSpec


def default_manifest_path(csv_path):
    return Path(csv_path).with_suffix(".manifest.json")


def load_csv(csv_path, manifest_path=None):
    """Load a dataset; every row becomes an existing configuration.

    Raises ValueError naming the offending row/column on non-numeric cells,
    and rejects constant input columns (their normalization is undefined).
    """
    csv_path = Path(csv_path)
    manifest_path = Path(manifest_path) if manifest_path else default_manifest_path(csv_path)
    manifest = json.loads(manifest_path.read_text())
    columns = manifest["columns"]

    with csv_path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        raw_rows = list(reader)
    unknown = [h for h in header if h not in columns]
    if unknown:
        raise ValueError(f"columns missing from manifest: {unknown}")

    data = np.empty((len(raw_rows), len(header)))
    for i, row in enumerate(raw_rows):
        if len(row) != len(header):
            raise ValueError(f"row {i + 2}: expected {len(header)} cells, got {len(row)}")
        for j, cell in enumerate(row):
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise ValueError(
                    f"row {i + 2}, column {header[j]!r}: non-numeric value {cell!r}"
                ) from None

    variables = []
    input_cols, target_cols = [], []
    for j, name in enumerate(header):
        meta = columns[name]
        kind = meta.get("kind", "input")
        lo = meta.get("min")
        hi = meta.get("max")
        if lo is None:
            lo = float(data[:, j].min()) if len(data) else 0.0
        if hi is None:
            hi = float(data[:, j].max()) if len(data) else 1.0
        if kind == "input" and lo >= hi:
            raise ValueError(f"column {name!r} is constant; cannot normalize")
        if kind == "target" and lo >= hi:
            hi = lo + 1.0  # display range only; keep it usable
        variables.append(
            VariableSpec(name, lo, hi, kind=kind, orientation=meta.get("orientation"))
        )
        (input_cols if kind == "input" else target_cols).append(j)

    ds = Dataset(variables)
    rows = []
    for i in range(len(data)):
        values, _ = ds.normalize(data[i, input_cols])
        targets = data[i, target_cols] if target_cols else None
        if targets is None:
            rows.append(Configuration(values, np.empty(0), status="existing"))
        else:
            rows.append(Configuration(values, targets, status="existing"))
    return Dataset(variables, rows)


def save_csv(ds, csv_path, manifest_path=None):
    """Write a dataset back out as CSV + manifest (raw units)."""
    csv_path = Path(csv_path)
    manifest_path = Path(manifest_path) if manifest_path else default_manifest_path(csv_path)

    specs = ds.input_specs + ds.target_specs
    columns = {}
    for v in specs:
        meta = {"kind": v.kind, "min": v.min, "max": v.max}
        if v.orientation:
            meta["orientation"] = v.orientation
        columns[v.name] = meta
    manifest_path.write_text(json.dumps({"columns": columns}, indent=2, sort_keys=True))

    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([v.name for v in specs])
        n_t = len(ds.target_specs)
        for row in ds.rows:
            raw = ds.denormalize(row.values)
            cells = [repr(float(x)) for x in raw]
            if n_t:
                t = row.targets if row.targets is not None else [np.nan] * n_t
                cells += [repr(float(x)) for x in t]
            writer.writerow(cells)
    return csv_path, manifest_path
