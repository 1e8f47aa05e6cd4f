"""Reading and writing the Breast Cancer Coimbra (BCCD) csv.

The file has one header row with the nine biomarker columns and a
``Classification`` column (1 = healthy, 2 = patient). Columns are matched
by name, so the order inside the file does not matter.
"""
from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Base class for every problem found while reading a BCCD file."""


class SchemaError(DataError):
    pass


class ParseError(DataError):
    def __init__(self, msg: str, row: int | None = None, col: str | None = None):
        super().__init__(msg)
        self.row = row
        self.col = col


class LabelError(DataError):
    pass


class EmptyDatasetError(DataError):
    pass


@dataclass(frozen=True)
class Feature:
    name: str
    unit: str
    integral: bool = False


@dataclass(frozen=True)
class FeatureSchema:
    features: tuple[Feature, ...]

    @property
    def names(self) -> list[str]:
        return [f.name for f in self.features]

    def __len__(self) -> int:
        return len(self.features)


BCCD_SCHEMA = FeatureSchema((
    Feature("Age", "years", integral=True),
    Feature("BMI", "kg/m2"),
    Feature("Glucose", "mg/dL", integral=True),
    Feature("Insulin", "µU/mL"),
    Feature("HOMA", "ng/mL"),
    Feature("Leptin", "ng/mL"),
    Feature("Adiponectin", "µg/mL"),
    Feature("Resistin", "ng/mL"),
    Feature("MCP.1", "pg/mL"),
))

LABEL_COLUMN = "Classification"
HEALTHY, PATIENT = 0, 1
_FILE_LABELS = {1: HEALTHY, 2: PATIENT}

# plain decimal / scientific literals only: no inf, nan, underscores or locale commas
_FLOAT_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    schema: FeatureSchema = field(default=BCCD_SCHEMA)

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != len(self.schema):
            raise SchemaError(f"expected {len(self.schema)} feature columns, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise SchemaError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if not np.all(np.isfinite(X)):
            raise ParseError("non-finite feature value")
        if not np.all((y == HEALTHY) | (y == PATIENT)):
            raise LabelError("labels must be 0 (healthy) or 1 (patient)")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)

    def __len__(self) -> int:
        return self.labels.shape[0]

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx], self.schema)

    def with_features(self, X: np.ndarray) -> "Dataset":
        """Same labels, transformed features; the schema no longer applies."""
        X = np.asarray(X, dtype=float)
        schema = FeatureSchema(tuple(Feature(f"f{i}", "") for i in range(X.shape[1])))
        return Dataset(X, self.labels, schema)


def _normalize(name: str) -> str:
    return name.strip().lower().replace("-", ".")


def _parse_number(text: str, row: int, col: str) -> float:
    s = text.strip()
    if not _FLOAT_RE.match(s):
        raise ParseError(f"row {row}, column {col!r}: not a number: {text!r}", row, col)
    return float(s)


def parse_bccd(csv_text: str, schema: FeatureSchema = BCCD_SCHEMA) -> Dataset:
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDatasetError("no header row") from None

    wanted = {_normalize(n): n for n in schema.names + [LABEL_COLUMN]}
    positions: dict[str, int] = {}
    for j, raw in enumerate(header):
        key = _normalize(raw)
        if key not in wanted:
            raise SchemaError(f"unknown column {raw!r}")
        if wanted[key] in positions:
            raise SchemaError(f"duplicate column {raw!r}")
        positions[wanted[key]] = j
    for name in wanted.values():
        if name not in positions:
            raise SchemaError(f"missing column {name!r}")

    rows, labels = [], []
    for lineno, record in enumerate(reader, start=2):
        if not record or all(not c.strip() for c in record):
            continue
        if len(record) != len(header):
            raise ParseError(f"row {lineno}: expected {len(header)} cells, got {len(record)}", lineno)
        values = []
        for feat in schema.features:
            v = _parse_number(record[positions[feat.name]], lineno, feat.name)
            if feat.integral and v != math.floor(v):
                raise ParseError(f"row {lineno}, column {feat.name!r}: expected an integer, got {v}",
                                 lineno, feat.name)
            values.append(v)
        raw_label = _parse_number(record[positions[LABEL_COLUMN]], lineno, LABEL_COLUMN)
        if raw_label not in _FILE_LABELS:
            raise LabelError(f"row {lineno}: Classification must be 1 or 2, got {record[positions[LABEL_COLUMN]]!r}")
        rows.append(values)
        labels.append(_FILE_LABELS[int(raw_label)])

    if not rows:
        raise EmptyDatasetError("csv has a header but no data rows")
    return Dataset(np.array(rows, dtype=float), np.array(labels, dtype=np.int64), schema)


def load_bccd(path: str | Path) -> Dataset:
    return parse_bccd(Path(path).read_text(encoding="utf-8"))


def _fmt(v: float, integral: bool) -> str:
    return str(int(v)) if integral else repr(float(v))


def render_bccd(ds: Dataset) -> str:
    """Inverse of :func:`parse_bccd` (labels written back as 1/2)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ds.schema.names + [LABEL_COLUMN])
    for x, y in zip(ds.features, ds.labels):
        w.writerow([_fmt(v, f.integral) for v, f in zip(x, ds.schema.features)] + [int(y) + 1])
    return buf.getvalue()


def class_counts(ds: Dataset) -> tuple[int, int]:
    """(healthy, patient) counts."""
    n_patient = int(np.count_nonzero(ds.labels == PATIENT))
    return len(ds) - n_patient, n_patient
