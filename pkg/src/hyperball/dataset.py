"""Data ingestion, normalization, and point tagging.

Attributes are min-max scaled to [0, 1] and then mean-centered, so the
normalized matrix has zero column means and the projection origin is the
zero vector.  Rows with missing cells are dropped and reported; a cell that
is present but not numeric is a hard parse error.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DatasetError, ParseError, TooFewDims

MISSING = {"", "na", "nan", "null", "none"}


@dataclass
class IngestReport:
    dropped_rows: list = field(default_factory=list)  # 1-based data row numbers
    constant_columns: list = field(default_factory=list)  # attribute names


@dataclass
class Dataset:
    name: str
    attributes: list
    raw: np.ndarray  # (n, N)
    normalized: np.ndarray  # (n, N)
    norm_mins: np.ndarray
    norm_maxs: np.ndarray
    norm_means: np.ndarray
    class_ids: np.ndarray | None = None
    class_names: list | None = None
    report: IngestReport = field(default_factory=IngestReport)

    @property
    def n_points(self):
        return self.raw.shape[0]

    @property
    def n_dims(self):
        return self.raw.shape[1]


def normalize(raw):
    """Per-attribute min-max to [0, 1], then mean-centering.

    Returns (normalized, mins, maxs, means, constant_column_indices); a
    constant column has no spread and normalizes to all zeros.
    """
    raw = np.asarray(raw, dtype=float)
    mins = raw.min(axis=0)
    maxs = raw.max(axis=0)
    span = maxs - mins
    constant = np.flatnonzero(span <= 0.0)
    safe = np.where(span > 0.0, span, 1.0)
    scaled = (raw - mins) / safe
    scaled[:, constant] = 0.0
    means = scaled.mean(axis=0)
    return scaled - means, mins, maxs, means, constant


def make_dataset(name, attributes, raw, class_ids=None, class_names=None, report=None):
    raw = np.asarray(raw, dtype=float)
    if raw.shape[0] < 3:
        raise DatasetError("need at least 3 data rows")
    if raw.shape[1] < 3:
        raise TooFewDims("need at least 3 numeric attributes")
    if not np.all(np.isfinite(raw)):
        raise DatasetError("non-finite values after ingestion")
    normalized, mins, maxs, means, constant = normalize(raw)
    report = report or IngestReport()
    report.constant_columns = [attributes[i] for i in constant]
    return Dataset(
        name=name,
        attributes=list(attributes),
        raw=raw,
        normalized=normalized,
        norm_mins=mins,
        norm_maxs=maxs,
        norm_means=means,
        class_ids=None if class_ids is None else np.asarray(class_ids, dtype=int),
        class_names=class_names,
        report=report,
    )


def load_csv(path, class_column=None, name=None):
    """Parse a headered, comma-separated UTF-8 file into a Dataset.

    Missing cells drop the whole row (recorded in the report); a non-numeric
    cell in a numeric column raises ParseError naming the cell.  The optional
    class column is mapped to integer ids over its sorted distinct values.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file")
        header = [h.strip() for h in header]
        class_idx = None
        if class_column is not None:
            if class_column not in header:
                raise ParseError(f"class column {class_column!r} not in header")
            class_idx = header.index(class_column)
        attributes = [h for i, h in enumerate(header) if i != class_idx]
        if len(attributes) < 3:
            raise TooFewDims("need at least 3 numeric attributes")

        rows, class_values = [], []
        report = IngestReport()
        for row_no, cells in enumerate(reader, start=1):
            if not cells or all(not c.strip() for c in cells):
                continue
            if len(cells) != len(header):
                raise ParseError(
                    f"row {row_no}: expected {len(header)} cells, got {len(cells)}",
                    row=row_no,
                )
            values = []
            dropped = False
            for i, cell in enumerate(cells):
                if i == class_idx:
                    continue
                text = cell.strip()
                if text.lower() in MISSING:
                    report.dropped_rows.append(row_no)
                    dropped = True
                    break
                try:
                    values.append(float(text))
                except ValueError:
                    raise ParseError(
                        f"row {row_no}, column {header[i]!r}: not numeric: {cell!r}",
                        row=row_no,
                        column=header[i],
                    )
            if dropped:
                continue
            if not all(np.isfinite(values)):
                report.dropped_rows.append(row_no)
                continue
            rows.append(values)
            if class_idx is not None:
                class_values.append(cells[class_idx].strip())

    if len(rows) < 3:
        raise DatasetError("need at least 3 complete data rows")
    class_ids = class_names = None
    if class_idx is not None:
        class_names = sorted(set(class_values))
        index = {c: i for i, c in enumerate(class_names)}
        class_ids = np.array([index[c] for c in class_values], dtype=int)
    if name is None:
        name = str(path)
    return make_dataset(
        name, attributes, np.array(rows, dtype=float), class_ids, class_names, report
    )


def write_csv(dataset, path, class_column="class"):
    """Write the raw matrix (and class labels, when present) back to CSV.

    Floats are written with repr so a written file is reproducible bit for
    bit from the same dataset.
    """
    header = list(dataset.attributes)
    if dataset.class_ids is not None:
        header.append(class_column)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(dataset.n_points):
            row = [repr(float(v)) for v in dataset.raw[i]]
            if dataset.class_ids is not None:
                names = dataset.class_names or []
                cid = int(dataset.class_ids[i])
                row.append(names[cid] if cid < len(names) else str(cid))
            writer.writerow(row)


@dataclass
class PointTags:
    """Palette colors (0 = neutral) and active flags for every point."""

    color: np.ndarray  # (n,) int
    active: np.ndarray  # (n,) bool

    @classmethod
    def neutral(cls, n):
        return cls(color=np.zeros(n, dtype=int), active=np.ones(n, dtype=bool))

    def copy(self):
        return PointTags(self.color.copy(), self.active.copy())


def brush(tags, ids, action, color=None):
    """Apply a brushing action to the given point ids; returns new tags.

    Actions: "color" (requires a palette index), "deactivate" (grays the
    points out and removes them from all analysis), "reactivate".
    """
    ids = np.asarray(ids, dtype=int)
    if ids.size and (ids.min() < 0 or ids.max() >= tags.color.shape[0]):
        raise ValueError("point id out of range")
    out = tags.copy()
    if action == "color":
        if color is None:
            raise ValueError("color action requires a palette index")
        out.color[ids] = int(color)
    elif action == "deactivate":
        out.active[ids] = False
    elif action == "reactivate":
        out.active[ids] = True
    else:
        raise ValueError(f"unknown brush action {action!r}")
    return out
