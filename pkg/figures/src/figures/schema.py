"""CSV schemas shared with the integrator CLI, plus validating readers."""

import csv

import numpy as np

GC_COLUMNS = ["step", "t", "x", "y", "vx", "vy", "mu", "energy"]
GRAVITY_COLUMNS = [
    "step", "t", "q", "p",
    "Q1x", "Q1y", "Q2x", "Q2y", "P1x", "P1y", "P2x", "P2y",
    "mu0", "eslow",
]
SCAN_COLUMNS = ["param", "value", "t_breakdown", "status"]

SCHEMAS = {"gc": GC_COLUMNS, "gravity": GRAVITY_COLUMNS, "scan": SCAN_COLUMNS}


class SchemaError(Exception):
    """Input CSV does not match the expected column layout."""


class Table:
    """Header-checked CSV contents; numeric columns exposed by name."""

    def __init__(self, columns, rows):
        self.columns = columns
        self.rows = rows  # list of row lists, strings preserved for scan

    def column(self, name):
        i = self.columns.index(name)
        return np.array([float(r[i]) for r in self.rows])

    def text_column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def __len__(self):
        return len(self.rows)


def _diagnose(expected, got, path):
    missing = [c for c in expected if c not in got]
    extra = [c for c in got if c not in expected]
    parts = [f"{path}: header does not match the '{_schema_name(expected)}' schema"]
    if missing:
        parts.append(f"missing columns: {', '.join(missing)}")
    if extra:
        parts.append(f"unexpected columns: {', '.join(extra)}")
    if not missing and not extra:
        parts.append(f"column order differs: expected {expected}, got {got}")
    return "; ".join(parts)


def _schema_name(expected):
    for name, cols in SCHEMAS.items():
        if cols == expected:
            return name
    return "?"


def read_table(path, kind):
    """Read one CSV and validate its header against the schema for ``kind``.

    Trailing ``# ...`` comment lines (aborted-run markers) are ignored for
    plotting but kept accessible on the returned table.
    """
    expected = SCHEMAS[kind]
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row")
        if header != expected:
            raise SchemaError(_diagnose(expected, header, path))
        rows = []
        comments = []
        for raw in reader:
            if raw and raw[0].startswith("#"):
                comments.append(",".join(raw))
                continue
            if len(raw) != len(expected):
                raise SchemaError(
                    f"{path}: row {len(rows) + 2} has {len(raw)} fields, "
                    f"expected {len(expected)}"
                )
            rows.append(raw)
    table = Table(expected, rows)
    table.comments = comments
    return table
