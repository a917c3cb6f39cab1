"""Minority oversampling with mixed numeric/categorical interpolation.

Synthetic rows are built from a minority anchor and one of its k nearest
minority neighbors: numeric cells move a shared uniform random fraction of
the way to the neighbor, categorical cells take the majority value among the
k neighbors (anchor's value on ties). Anchors are visited round-robin in a
seeded shuffled order until the minority class reaches the requested size.
Every synthetic row's (anchor, neighbor) pair is recorded on the output table
so resampling can be audited against evaluation splits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .dataio import NUMERIC, ROLE_LABEL, Table


@dataclass(frozen=True)
class SmoteConfig:
    """Oversampling parameters.

    target_ratio is the desired minority/majority count ratio; 1.0 balances
    the classes exactly (up to rounding). k_neighbors must stay below the
    minority class size of whatever table is resampled.
    """

    k_neighbors: int = 5
    target_ratio: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        if not 0.0 < self.target_ratio <= 1.0:
            raise ValueError("target_ratio must be in (0, 1]")


def _minority_info(table: Table) -> tuple[int, list[int]]:
    """Minority label (0/1, ties to the positive class) and its row indices."""
    y = table.label01()
    n_pos = sum(y)
    minority_label = 1 if n_pos * 2 <= len(y) else 0
    return minority_label, [i for i, v in enumerate(y) if v == minority_label]


def _minority_distance_matrix(table: Table, minority_idx: list[int]) -> np.ndarray:
    """Pairwise distances among minority rows.

    Numerics are min-max normalized over the full table before the absolute
    difference; categoricals contribute 0/1 mismatch. Matches the Relief
    distance so neighbor structure is consistent across the package.
    """
    m = len(minority_idx)
    dist = np.zeros((m, m))
    sel = np.asarray(minority_idx)
    for name in table.feature_names():
        col = table.column(name)
        if table.column_schema(name).kind == NUMERIC:
            arr = np.asarray(col, dtype=float)
            span = arr.max() - arr.min()
            arr = (arr - arr.min()) / span if span > 0 else np.zeros_like(arr)
            sub = arr[sel]
            dist += np.abs(sub[:, None] - sub[None, :])
        else:
            uniq = {v: i for i, v in enumerate(sorted(set(col)))}
            codes = np.asarray([uniq[v] for v in col], dtype=np.int64)[sel]
            dist += (codes[:, None] != codes[None, :]).astype(float)
    return dist


def _all_minority_neighbors(table: Table, k: int) -> dict[int, list[int]]:
    """Every minority row's k nearest minority rows, as original row indices."""
    minority_label, minority_idx = _minority_info(table)
    del minority_label
    if len(minority_idx) <= k:
        raise ValueError(
            f"minority class has {len(minority_idx)} rows; k={k} needs at least {k + 1}"
        )
    dist = _minority_distance_matrix(table, minority_idx)
    out: dict[int, list[int]] = {}
    for local, row in enumerate(minority_idx):
        order = np.argsort(dist[local], kind="stable")  # stable -> index tie-break
        out[row] = [minority_idx[j] for j in order if j != local][:k]
    return out


def minority_neighbors(table: Table, row: int, k: int) -> list[int]:
    """The k minority rows nearest to one minority row, self excluded.

    Distance ties break by ascending row index. Errors if the row is not in
    the minority class or the minority class has no k other members.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _, minority_idx = _minority_info(table)
    if row not in minority_idx:
        raise ValueError(f"row {row} is not a minority-class row")
    return _all_minority_neighbors(table, k)[row]


def smote(table: Table, config: SmoteConfig) -> Table:
    """Append synthetic minority rows until minority = ceil(ratio * majority).

    Already-satisfied tables come back unchanged. The output keeps every
    original row first, in order, followed by synthetic rows; its smote_pairs
    tuple records each synthetic row's (anchor, neighbor) source indices.
    """
    y = table.label01()
    if len(set(y)) < 2:
        raise ValueError("cannot oversample a single-class table")
    minority_label, minority_idx = _minority_info(table)
    n_minority = len(minority_idx)
    n_majority = len(y) - n_minority
    target = math.ceil(config.target_ratio * n_majority)
    need = target - n_minority
    if need <= 0:
        return table

    neighbors = _all_minority_neighbors(table, config.k_neighbors)

    rng = random.Random(config.seed)
    anchors = list(minority_idx)
    rng.shuffle(anchors)

    schema = table.schema
    new_rows = []
    pairs = []
    for t in range(need):
        anchor = anchors[t % len(anchors)]
        neigh_list = neighbors[anchor]
        neighbor = neigh_list[rng.randrange(len(neigh_list))]
        u = rng.random()  # one interpolation fraction shared by all numerics
        a_row = table.rows[anchor]
        n_row = table.rows[neighbor]
        cells = []
        for j, col in enumerate(schema):
            if col.role == ROLE_LABEL:
                cells.append(a_row[j])
            elif col.kind == NUMERIC:
                cells.append(a_row[j] + u * (n_row[j] - a_row[j]))
            else:
                votes: dict = {}
                for idx in neigh_list:
                    v = table.rows[idx][j]
                    votes[v] = votes.get(v, 0) + 1
                best = max(votes.values())
                winners = [v for v, c in votes.items() if c == best]
                cells.append(winners[0] if len(winners) == 1 else a_row[j])
        new_rows.append(tuple(cells))
        pairs.append((anchor, neighbor))

    return Table(
        schema=schema,
        rows=table.rows + tuple(new_rows),
        imputations=table.imputations,
        smote_pairs=table.smote_pairs + tuple(pairs),
    )
