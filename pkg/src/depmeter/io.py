"""CSV ingestion and serialization.

Formats:
  samples CSV   one row per observation, header names the variables
  table CSV     sparse cells ``i_label, j_label, weight``
  multi CSV     sparse cells ``x1,...,xd, y1,...,ye, weight``
  triple CSV    sparse cells ``x, y, z, weight``

Weights may be counts or probabilities: all-integer weights are treated as
counts and normalized; fractional weights must already sum to 1 within the
normalization tolerance.  All floating output uses 17 significant digits so
round-trips are exact.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .conditional import TripleTable
from .errors import EmptyData, ShapeError, ValidationError
from .model import (
    EPS_NORM,
    DiscreteSupport,
    JointTable,
    MultiTable,
    from_counts,
    from_samples,
)


def format_float(v: float) -> str:
    return format(float(v), ".17g")


def json_dumps(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats."""

    def convert(x):
        if isinstance(x, dict):
            return {k: convert(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [convert(v) for v in x]
        if isinstance(x, float):
            return float(format_float(x))
        if isinstance(x, (np.floating,)):
            return float(format_float(float(x)))
        if isinstance(x, (np.integer,)):
            return int(x)
        return x

    return json.dumps(convert(obj), sort_keys=True)


def _read_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyData(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    return header, [[c.strip() for c in r] for r in rows[1:]]


def _column_index(header: list[str], col: str | None, default: int) -> int:
    if col is None:
        if default >= len(header):
            raise ShapeError("not enough columns in CSV")
        return default
    if col in header:
        return header.index(col)
    try:
        idx = int(col)
    except ValueError:
        raise ShapeError(f"column {col!r} not found in header {header}")
    if not (0 <= idx < len(header)):
        raise ShapeError(f"column index {idx} out of range")
    return idx


def read_samples_csv(
    path: str | Path,
    x_col: str | None = None,
    y_col: str | None = None,
    ordering: str = "numeric",
) -> list[tuple[str, str]]:
    """Observation pairs from a samples CSV; columns by name or index."""
    header, rows = _read_rows(path)
    xi = _column_index(header, x_col, 0)
    yi = _column_index(header, y_col, 1)
    records = []
    for r in rows:
        if max(xi, yi) >= len(r):
            raise ShapeError(f"{path}: short row {r}")
        records.append((r[xi], r[yi]))
    if not records:
        raise EmptyData(f"{path}: no observation rows")
    return records


def samples_to_table(
    records: Sequence[tuple[str, str]], ordering: str = "numeric"
) -> JointTable:
    return from_samples(records, ordering)


def _weights_to_probs(weights: list[float], what: str) -> list[float]:
    if any(w < 0 for w in weights):
        raise ValidationError(f"{what}: negative weights")
    total = math.fsum(weights)
    if total <= 0:
        raise EmptyData(f"{what}: all weights zero")
    if all(float(w).is_integer() for w in weights):
        return [w / total for w in weights]
    if abs(total - 1.0) > EPS_NORM:
        raise ValidationError(
            f"{what}: fractional weights sum to {total!r}, not 1"
        )
    return weights


def read_table_csv(path: str | Path, ordering: str = "numeric") -> JointTable:
    """Sparse ``i_label, j_label, weight`` cells to a JointTable."""
    header, rows = _read_rows(path)
    if len(header) < 3:
        raise ShapeError(f"{path}: table CSV needs 3 columns")
    cells = []
    for r in rows:
        if len(r) < 3:
            raise ShapeError(f"{path}: short row {r}")
        cells.append((r[0], r[1], float(r[2])))
    probs = _weights_to_probs([c[2] for c in cells], str(path))
    x_support = DiscreteSupport.from_labels([c[0] for c in cells], ordering)
    y_support = DiscreteSupport.from_labels([c[1] for c in cells], ordering)
    p = np.zeros((x_support.size, y_support.size))
    xi = {lbl: i for i, lbl in enumerate(x_support.labels)}
    yi = {lbl: j for j, lbl in enumerate(y_support.labels)}
    for (x, y, _), w in zip(cells, probs):
        p[xi[x], yi[y]] += w
    return JointTable(p, x_support, y_support)


def read_multi_csv(
    path: str | Path,
    x_cols: Sequence[str],
    y_cols: Sequence[str],
    ordering: str = "numeric",
) -> MultiTable:
    """Sparse MultiTable cells; axis grouping given by column selections."""
    header, rows = _read_rows(path)
    if not x_cols or not y_cols:
        raise ShapeError("need at least one X column and one Y column")
    xid = [_column_index(header, c, -1) for c in x_cols]
    yid = [_column_index(header, c, -1) for c in y_cols]
    wid = _column_index(header, None, len(header) - 1)
    labels: list[tuple[tuple[str, ...], tuple[str, ...], float]] = []
    for r in rows:
        xs = tuple(r[i] for i in xid)
        ys = tuple(r[i] for i in yid)
        labels.append((xs, ys, float(r[wid])))
    probs = _weights_to_probs([w for _, _, w in labels], str(path))
    x_axes = tuple(
        DiscreteSupport.from_labels([xs[k] for xs, _, _ in labels], ordering)
        for k in range(len(xid))
    )
    y_axes = tuple(
        DiscreteSupport.from_labels([ys[k] for _, ys, _ in labels], ordering)
        for k in range(len(yid))
    )
    shape = tuple(s.size for s in x_axes) + tuple(s.size for s in y_axes)
    p = np.zeros(shape)
    xmaps = [{lbl: i for i, lbl in enumerate(s.labels)} for s in x_axes]
    ymaps = [{lbl: i for i, lbl in enumerate(s.labels)} for s in y_axes]
    for (xs, ys, _), w in zip(labels, probs):
        key = tuple(m[v] for m, v in zip(xmaps, xs)) + tuple(
            m[v] for m, v in zip(ymaps, ys)
        )
        p[key] += w
    return MultiTable(p, x_axes, y_axes)


def read_triple_csv(
    path: str | Path,
    x_col: str | None = None,
    y_col: str | None = None,
    z_col: str | None = None,
    ordering: str = "numeric",
) -> TripleTable:
    """Sparse ``x, y, z, weight`` cells to a TripleTable."""
    header, rows = _read_rows(path)
    if len(header) < 4:
        raise ShapeError(f"{path}: triple CSV needs 4 columns")
    xi = _column_index(header, x_col, 0)
    yi = _column_index(header, y_col, 1)
    zi = _column_index(header, z_col, 2)
    wid = len(header) - 1
    cells = [(r[xi], r[yi], r[zi], float(r[wid])) for r in rows]
    probs = _weights_to_probs([c[3] for c in cells], str(path))
    xs = DiscreteSupport.from_labels([c[0] for c in cells], ordering)
    ys = DiscreteSupport.from_labels([c[1] for c in cells], ordering)
    zs = DiscreteSupport.from_labels([c[2] for c in cells], ordering)
    p = np.zeros((xs.size, ys.size, zs.size))
    xm = {lbl: i for i, lbl in enumerate(xs.labels)}
    ym = {lbl: i for i, lbl in enumerate(ys.labels)}
    zm = {lbl: i for i, lbl in enumerate(zs.labels)}
    for (x, y, z, _), w in zip(cells, probs):
        p[xm[x], ym[y], zm[z]] += w
    return TripleTable(p, xs, ys, zs)


def write_table_csv(t: JointTable, path: str | Path) -> None:
    """Write a JointTable as sparse probability cells."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i_label", "j_label", "weight"])
        for i, xl in enumerate(t.x_support.labels):
            for j, yl in enumerate(t.y_support.labels):
                if t.p[i, j] > 0:
                    writer.writerow([xl, yl, format_float(t.p[i, j])])


def write_matrix_csv(rows: np.ndarray, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(rows):
            writer.writerow([format_float(v) for v in row])


def read_matrix_csv(path: str | Path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [
            [float(c) for c in row] for row in reader if row and row[0].strip()
        ]
    if not rows:
        raise EmptyData(f"{path}: empty matrix")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ShapeError(f"{path}: ragged matrix rows")
    return np.asarray(rows)
