"""Typed tabular cohorts: schema validation, CSV ingestion, folds, group filtering.

A Table is an immutable rectangle of cells (floats for numeric columns,
strings for categorical ones) plus its column schema. Ingestion imputes
missing numeric cells with the column median and missing categorical cells
with the column mode, and records how many cells were filled per column.
"""

from __future__ import annotations

import csv
import json
import random
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path

NUMERIC = "numeric"
CATEGORICAL = "categorical"

ROLE_FEATURE = "feature"
ROLE_LABEL = "label"
ROLE_GROUP = "group"

Cell = float | str


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: str
    role: str = ROLE_FEATURE
    positive_label: str | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("column name must be non-empty")
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.role not in (ROLE_FEATURE, ROLE_LABEL, ROLE_GROUP):
            raise ValueError(f"column {self.name!r}: unknown role {self.role!r}")
        if self.role == ROLE_LABEL:
            if self.positive_label is None:
                raise ValueError(f"label column {self.name!r} requires positive_label")
            if self.kind != CATEGORICAL:
                raise ValueError(f"label column {self.name!r} must be categorical")
        elif self.positive_label is not None:
            raise ValueError(f"column {self.name!r}: positive_label only allowed on the label")
        if self.role == ROLE_GROUP and self.kind != CATEGORICAL:
            raise ValueError(f"group column {self.name!r} must be categorical")


def validate_schema(columns: list[ColumnSchema]) -> None:
    """Check cross-column invariants: unique names, one label, at most one group."""
    names = [c.name for c in columns]
    if len(set(names)) != len(names):
        raise ValueError("duplicate column names in schema")
    labels = [c for c in columns if c.role == ROLE_LABEL]
    if len(labels) != 1:
        raise ValueError(f"schema must have exactly one label column, found {len(labels)}")
    groups = [c for c in columns if c.role == ROLE_GROUP]
    if len(groups) > 1:
        raise ValueError("schema allows at most one group column")


def load_schema_json(path: str | Path) -> list[ColumnSchema]:
    """Read a schema file: {"columns": [{"name", "kind", "role", "positive_label"?}]}."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "columns" not in doc:
        raise ValueError(f"{path}: schema file must be an object with a 'columns' list")
    columns = []
    for entry in doc["columns"]:
        columns.append(
            ColumnSchema(
                name=entry["name"],
                kind=entry["kind"],
                role=entry.get("role", ROLE_FEATURE),
                positive_label=entry.get("positive_label"),
            )
        )
    validate_schema(columns)
    return columns


def schema_to_json(columns: list[ColumnSchema]) -> dict:
    out = []
    for c in columns:
        entry = {"name": c.name, "kind": c.kind, "role": c.role}
        if c.positive_label is not None:
            entry["positive_label"] = c.positive_label
        out.append(entry)
    return {"columns": out}


@dataclass(frozen=True)
class Table:
    """Immutable typed rectangle. Rows are tuples of cells in schema order.

    `imputations` counts cells filled at ingestion (column name -> count);
    `smote_pairs` records (anchor, neighbor) row indices into the table a
    SMOTE call consumed, for leakage auditing. Both are metadata, not data.
    """

    schema: tuple[ColumnSchema, ...]
    rows: tuple[tuple[Cell, ...], ...]
    imputations: dict = field(default_factory=dict)
    smote_pairs: tuple = ()

    def __post_init__(self):
        validate_schema(list(self.schema))
        if len(self.rows) < 1:
            raise ValueError("table must have at least one row")
        p = len(self.schema)
        for i, row in enumerate(self.rows):
            if len(row) != p:
                raise ValueError(f"row {i} has {len(row)} cells, expected {p}")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_names(self) -> list[str]:
        return [c.name for c in self.schema]

    def col_index(self, name: str) -> int:
        for i, c in enumerate(self.schema):
            if c.name == name:
                return i
        raise KeyError(f"no column named {name!r}")

    def column_schema(self, name: str) -> ColumnSchema:
        return self.schema[self.col_index(name)]

    def column(self, name: str) -> list[Cell]:
        i = self.col_index(name)
        return [row[i] for row in self.rows]

    @property
    def label_column(self) -> ColumnSchema:
        return next(c for c in self.schema if c.role == ROLE_LABEL)

    @property
    def group_column(self) -> ColumnSchema | None:
        return next((c for c in self.schema if c.role == ROLE_GROUP), None)

    def feature_names(self) -> list[str]:
        """Columns usable as model/weighting inputs: features plus the group column."""
        return [c.name for c in self.schema if c.role in (ROLE_FEATURE, ROLE_GROUP)]

    def label01(self) -> list[int]:
        """Labels as 0/1 with 1 = positive_label."""
        pos = self.label_column.positive_label
        col = self.column(self.label_column.name)
        return [1 if v == pos else 0 for v in col]

    def take(self, indices) -> "Table":
        indices = list(indices)
        if not indices:
            raise ValueError("cannot build an empty table")
        return Table(self.schema, tuple(self.rows[i] for i in indices))

    def project(self, feature_names) -> "Table":
        """Keep the listed feature/group columns (plus the label), drop the rest."""
        keep = set(feature_names)
        unknown = keep - {c.name for c in self.schema if c.role != ROLE_LABEL}
        if unknown:
            raise ValueError(f"unknown feature columns: {sorted(unknown)}")
        cols = [c for c in self.schema if c.role == ROLE_LABEL or c.name in keep]
        idx = [self.col_index(c.name) for c in cols]
        rows = tuple(tuple(row[i] for i in idx) for row in self.rows)
        return Table(tuple(cols), rows)


def _parse_numeric(text: str, column: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"line {line}: unparseable numeric cell {text!r} in column {column!r}") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(f"line {line}: non-finite numeric cell in column {column!r}")
    return value


def _mode(values: list[str]) -> str:
    counts = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best)  # tie -> lexicographic


def load_csv(path: str | Path, schema: list[ColumnSchema]) -> Table:
    """Ingest an RFC 4180 CSV with a header row into a complete Table.

    The header must contain exactly the schema's column names (any order).
    Blank cells are imputed: median of the observed values for numeric
    columns, mode (ties -> lexicographically smallest) for categorical ones.
    Missing label cells are refused; labels cannot be guessed.
    """
    validate_schema(schema)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        raw_rows = list(reader)

    want = {c.name for c in schema}
    got = set(header)
    if got - want:
        raise ValueError(f"{path}: unknown columns in header: {sorted(got - want)}")
    if want - got:
        raise ValueError(f"{path}: missing columns in header: {sorted(want - got)}")
    if not raw_rows:
        raise ValueError(f"{path}: no data rows")

    pos_of = {name: header.index(name) for name in want}
    label = next(c for c in schema if c.role == ROLE_LABEL)

    # parse into schema-ordered columns, None marks a missing cell
    columns: dict[str, list] = {c.name: [] for c in schema}
    for r, raw in enumerate(raw_rows):
        if len(raw) != len(header):
            raise ValueError(f"{path}: line {r + 2}: expected {len(header)} cells, got {len(raw)}")
        for c in schema:
            text = raw[pos_of[c.name]].strip()
            if text == "":
                if c.role == ROLE_LABEL:
                    raise ValueError(f"{path}: line {r + 2}: missing label cell")
                columns[c.name].append(None)
            elif c.kind == NUMERIC:
                columns[c.name].append(_parse_numeric(text, c.name, r + 2))
            else:
                columns[c.name].append(text)

    imputations: dict[str, int] = {}
    for c in schema:
        col = columns[c.name]
        observed = [v for v in col if v is not None]
        missing = len(col) - len(observed)
        if missing == 0:
            continue
        if not observed:
            raise ValueError(f"{path}: column {c.name!r} has no observed values to impute from")
        fill = statistics.median(observed) if c.kind == NUMERIC else _mode(observed)
        columns[c.name] = [fill if v is None else v for v in col]
        imputations[c.name] = missing

    distinct_labels = sorted(set(columns[label.name]))
    if len(distinct_labels) != 2:
        raise ValueError(
            f"{path}: label non-binary: column {label.name!r} has {len(distinct_labels)} "
            f"distinct values {distinct_labels[:5]}"
        )
    if label.positive_label not in distinct_labels:
        raise ValueError(
            f"{path}: positive label {label.positive_label!r} never observed in column {label.name!r}"
        )

    names = [c.name for c in schema]
    rows = tuple(tuple(columns[n][r] for n in names) for r in range(len(raw_rows)))
    return Table(tuple(schema), rows, imputations=imputations)


@dataclass(frozen=True)
class FoldPlan:
    """Stratified partition of row indices into k folds."""

    k: int
    assignment: tuple[int, ...]

    def fold_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f == fold]


def stratified_folds(table: Table, k: int, seed: int) -> FoldPlan:
    """Assign rows to k folds, keeping per-fold positive counts within 1.

    Rows of each class are shuffled with the seed and dealt round-robin;
    the dealing pointer continues across classes so fold sizes also stay
    within 1 of each other.
    """
    n = table.n_rows
    if not 2 <= k <= n:
        raise ValueError(f"k={k} out of range [2, {n}]")
    y = table.label01()
    for cls in (1, 0):
        count = sum(1 for v in y if v == cls)
        if count < k:
            raise ValueError(f"class {cls} has {count} rows, fewer than k={k}")

    rng = random.Random(seed)
    assignment = [0] * n
    pointer = 0
    for cls in (1, 0):  # positives dealt first
        idx = [i for i, v in enumerate(y) if v == cls]
        rng.shuffle(idx)
        for i in idx:
            assignment[i] = pointer % k
            pointer += 1
    return FoldPlan(k=k, assignment=tuple(assignment))


def split(table: Table, plan: FoldPlan, fold: int) -> tuple[Table, Table]:
    """(train, test) where test is the rows assigned to `fold`."""
    if len(plan.assignment) != table.n_rows:
        raise ValueError("fold plan does not match table size")
    if not 0 <= fold < plan.k:
        raise ValueError(f"fold {fold} out of range [0, {plan.k})")
    test_idx = [i for i, f in enumerate(plan.assignment) if f == fold]
    train_idx = [i for i, f in enumerate(plan.assignment) if f != fold]
    return table.take(train_idx), table.take(test_idx)


def filter_by_group(table: Table, group_value: str) -> Table:
    """Rows whose group cell equals group_value; the group column is retained."""
    group = table.group_column
    if group is None:
        raise ValueError("table has no group column")
    col = table.column(group.name)
    idx = [i for i, v in enumerate(col) if v == group_value]
    if not idx:
        raise ValueError(f"group value {group_value!r} never occurs in column {group.name!r}")
    return table.take(idx)


def observed_groups(table: Table) -> list[str]:
    """Distinct group values in ascending order; [] if no group column."""
    group = table.group_column
    if group is None:
        return []
    return sorted(set(table.column(group.name)))
