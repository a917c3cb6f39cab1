"""Attribute weighting: six filter-style relevance scores plus rank aggregation.

The entropy/impurity/chi-squared/rule weighters operate on discrete attribute
values; numeric attributes are discretized first with equal-frequency bin
edges. Relief works on raw values (min-max normalized numerics, 0/1 mismatch
for categoricals) and scores all attributes in one pass over the instances.
All entropies are in bits.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .dataio import CATEGORICAL, NUMERIC, ROLE_LABEL, Table
from .seeding import derive_seed

ALGORITHMS = ("information_gain", "gini_index", "rule", "uncertainty", "relief", "chi_squared")

ALGORITHM_LABELS = {
    "information_gain": "Information Gain",
    "gini_index": "Gini Index",
    "rule": "Rule",
    "uncertainty": "Uncertainty",
    "relief": "Relief",
    "chi_squared": "Chi-Squared",
}


@dataclass(frozen=True)
class BinEdges:
    """Ascending interior cut points for one numeric column.

    k edges define k+1 bins; value v falls in bin i where i is the first
    edge >= v (so bins are (-inf, e0], (e0, e1], ..., (e_last, inf)).
    """

    column: str
    edges: tuple[float, ...]

    def __post_init__(self):
        for a, b in zip(self.edges, self.edges[1:]):
            if not a < b:
                raise ValueError(f"bin edges for {self.column!r} must be strictly increasing")

    def bin_of(self, value: float) -> int:
        return bisect_left(self.edges, value)


def equal_frequency_edges(column: str, values, n_bins: int) -> BinEdges:
    """Edges at the 1/n_bins .. (n_bins-1)/n_bins quantiles, deduplicated.

    Heavily tied data yields fewer edges; a constant column yields none
    (a single bin), which makes every discrete weighter score it zero.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise ValueError(f"no values to bin for column {column!r}")
    qs = [np.quantile(arr, i / n_bins) for i in range(1, n_bins)]
    lo, hi = float(arr.min()), float(arr.max())
    edges = []
    for q in qs:
        q = float(q)
        if lo < q < hi and (not edges or q > edges[-1]):
            edges.append(q)
    return BinEdges(column=column, edges=tuple(edges))


def _discrete_values(table: Table, attribute: str, bins: BinEdges | None) -> list:
    """Attribute cells as hashable symbols (bin index for numerics)."""
    col = table.column_schema(attribute)
    if col.role == ROLE_LABEL:
        raise ValueError(f"attribute {attribute!r} is the label column")
    cells = table.column(attribute)
    if col.kind == CATEGORICAL:
        return cells
    if bins is None:
        raise ValueError(f"numeric attribute {attribute!r} requires bin edges")
    if bins.column != attribute:
        raise ValueError(f"bin edges are for {bins.column!r}, not {attribute!r}")
    return [bins.bin_of(v) for v in cells]


def entropy(class_counts) -> float:
    """Shannon entropy in bits of a count vector."""
    counts = list(class_counts)
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    total = sum(counts)
    if total == 0:
        raise ValueError("at least one count must be positive")
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def _gini(counts) -> float:
    total = sum(counts)
    return 1.0 - sum((c / total) ** 2 for c in counts)


def _contingency(values, labels01):
    """Per-attribute-value [negatives, positives] counts, plus totals."""
    by_value: dict = {}
    for v, y in zip(values, labels01):
        cell = by_value.setdefault(v, [0, 0])
        cell[y] += 1
    return by_value


def weight_information_gain(table: Table, attribute: str, bins: BinEdges | None = None) -> float:
    """H(label) - sum_v p(v) H(label | v) over discretized attribute values."""
    values = _discrete_values(table, attribute, bins)
    y = table.label01()
    n = len(y)
    h_label = entropy([y.count(0), y.count(1)])
    cond = 0.0
    for counts in _contingency(values, y).values():
        cond += (sum(counts) / n) * entropy(counts)
    return max(0.0, h_label - cond)


def weight_gini_index(table: Table, attribute: str, bins: BinEdges | None = None) -> float:
    """Gini impurity of the label minus its attribute-conditional impurity."""
    values = _discrete_values(table, attribute, bins)
    y = table.label01()
    n = len(y)
    g_label = _gini([y.count(0), y.count(1)])
    cond = 0.0
    for counts in _contingency(values, y).values():
        cond += (sum(counts) / n) * _gini(counts)
    return max(0.0, g_label - cond)


def weight_uncertainty(table: Table, attribute: str, bins: BinEdges | None = None) -> float:
    """Symmetrical uncertainty 2*IG / (H(attribute) + H(label)), 0 for constants."""
    values = _discrete_values(table, attribute, bins)
    y = table.label01()
    value_counts: dict = {}
    for v in values:
        value_counts[v] = value_counts.get(v, 0) + 1
    h_attr = entropy(list(value_counts.values()))
    if h_attr == 0.0:
        return 0.0
    h_label = entropy([y.count(0), y.count(1)])
    if h_label == 0.0:
        return 0.0
    ig = weight_information_gain(table, attribute, bins)
    return min(1.0, max(0.0, 2.0 * ig / (h_attr + h_label)))


def weight_chi_squared(table: Table, attribute: str, bins: BinEdges | None = None) -> float:
    """Pearson chi-squared statistic of the attribute x label contingency table."""
    values = _discrete_values(table, attribute, bins)
    y = table.label01()
    n = len(y)
    by_value = _contingency(values, y)
    col_totals = [sum(c[0] for c in by_value.values()), sum(c[1] for c in by_value.values())]
    stat = 0.0
    for counts in by_value.values():
        row_total = sum(counts)
        for j in (0, 1):
            expected = row_total * col_totals[j] / n
            if expected > 0:
                stat += (counts[j] - expected) ** 2 / expected
    return stat


def weight_rule(table: Table, attribute: str, bins: BinEdges | None = None) -> float:
    """Training accuracy of the single-attribute majority rule (OneR).

    Each attribute value predicts its own majority label; value-level ties
    fall back to the global majority. The result is never below the
    majority-class proportion.
    """
    values = _discrete_values(table, attribute, bins)
    y = table.label01()
    n = len(y)
    n_pos = sum(y)
    global_majority = 1 if n_pos * 2 > n else 0  # exact tie -> negative class
    correct = 0
    for counts in _contingency(values, y).values():
        if counts[1] > counts[0]:
            correct += counts[1]
        elif counts[0] > counts[1]:
            correct += counts[0]
        else:
            correct += counts[global_majority]
    return correct / n


def _relief_feature_arrays(table: Table):
    """Per-feature arrays for Relief: normalized floats or category codes."""
    arrays = []
    for name in table.feature_names():
        col = table.column(name)
        if table.column_schema(name).kind == NUMERIC:
            arr = np.asarray(col, dtype=float)
            span = arr.max() - arr.min()
            if span > 0:
                arr = (arr - arr.min()) / span
            else:
                arr = np.zeros_like(arr)
            arrays.append((name, "num", arr))
        else:
            uniq = {v: i for i, v in enumerate(sorted(set(col)))}
            codes = np.asarray([uniq[v] for v in col], dtype=np.int64)
            arrays.append((name, "cat", codes))
    return arrays


def weight_relief(table: Table, k_neighbors: int, seed: int = 0) -> dict[str, float]:
    """ReliefF weights over all feature columns.

    Every instance serves as an anchor; its k nearest same-class hits and k
    nearest other-class misses (distance = summed per-feature diff, ties by
    ascending row index) push each attribute's weight by diff/(n*k), up for
    misses and down for hits. Weights land in [-1, 1]. The seed is accepted
    for interface symmetry; with all instances used the result is
    seed-independent.
    """
    del seed
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be >= 1")
    y = np.asarray(table.label01())
    n = len(y)
    for cls in (0, 1):
        size = int((y == cls).sum())
        if size < k_neighbors + 1:
            raise ValueError(
                f"class {cls} has {size} rows; Relief with k={k_neighbors} needs at least {k_neighbors + 1}"
            )

    arrays = _relief_feature_arrays(table)
    weights = {name: 0.0 for name, _, _ in arrays}
    denom = float(n * k_neighbors)

    block = 512
    for start in range(0, n, block):
        stop = min(start + block, n)
        dist = np.zeros((stop - start, n))
        for _, kind, arr in arrays:
            if kind == "num":
                dist += np.abs(arr[start:stop, None] - arr[None, :])
            else:
                dist += (arr[start:stop, None] != arr[None, :]).astype(float)
        for local, i in enumerate(range(start, stop)):
            order = np.argsort(dist[local], kind="stable")  # stable -> index tie-break
            same = y[order] == y[i]
            hit_order = order[same]
            hit_order = hit_order[hit_order != i][:k_neighbors]
            miss_order = order[~same][:k_neighbors]
            for name, kind, arr in arrays:
                if kind == "num":
                    hit_diff = float(np.abs(arr[i] - arr[hit_order]).sum())
                    miss_diff = float(np.abs(arr[i] - arr[miss_order]).sum())
                else:
                    hit_diff = float((arr[i] != arr[hit_order]).sum())
                    miss_diff = float((arr[i] != arr[miss_order]).sum())
                weights[name] += (miss_diff - hit_diff) / denom
    return weights


def rank_attributes(weights: dict[str, float]) -> dict[str, int]:
    """Rank 1 = largest weight; exact ties broken by ascending attribute name."""
    if not weights:
        raise ValueError("cannot rank an empty weight map")
    ordered = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    return {name: i + 1 for i, (name, _) in enumerate(ordered)}


def aggregate_ranks(ranks: dict[str, list[int]]) -> tuple[dict[str, float], dict[str, int]]:
    """Mean of each attribute's per-algorithm ranks, plus the overall ranking.

    Overall rank 1 goes to the smallest mean rank; ties break by ascending
    attribute name.
    """
    if not ranks:
        raise ValueError("cannot aggregate an empty rank matrix")
    widths = {len(r) for r in ranks.values()}
    if len(widths) != 1:
        raise ValueError(f"ragged rank matrix: row lengths {sorted(widths)}")
    if widths.pop() == 0:
        raise ValueError("rank matrix has no algorithm columns")
    mean_rank = {a: sum(r) / len(r) for a, r in ranks.items()}
    ordered = sorted(mean_rank.items(), key=lambda kv: (kv[1], kv[0]))
    overall = {a: i + 1 for i, (a, _) in enumerate(ordered)}
    return mean_rank, overall


@dataclass(frozen=True)
class WeightMatrix:
    """Weights and ranks of every attribute under every algorithm."""

    attributes: tuple[str, ...]
    algorithms: tuple[str, ...]
    weight: dict  # attribute -> algorithm -> float
    rank: dict  # attribute -> algorithm -> int
    mean_rank: dict  # attribute -> float
    overall_rank: dict  # attribute -> int

    def by_overall_rank(self) -> list[str]:
        return sorted(self.attributes, key=lambda a: self.overall_rank[a])


def weigh_all(table: Table, n_bins: int = 10, relief_k: int = 10, seed: int = 0) -> WeightMatrix:
    """Run the six weighters over every feature column and aggregate ranks."""
    attrs = table.feature_names()
    if not attrs:
        raise ValueError("table has no feature columns to weigh")
    bins = {}
    for name in attrs:
        if table.column_schema(name).kind == NUMERIC:
            bins[name] = equal_frequency_edges(name, table.column(name), n_bins)

    relief = weight_relief(table, relief_k, derive_seed(seed, "relief"))
    weight: dict[str, dict[str, float]] = {a: {} for a in attrs}
    for a in attrs:
        b = bins.get(a)
        weight[a]["information_gain"] = weight_information_gain(table, a, b)
        weight[a]["gini_index"] = weight_gini_index(table, a, b)
        weight[a]["rule"] = weight_rule(table, a, b)
        weight[a]["uncertainty"] = weight_uncertainty(table, a, b)
        weight[a]["relief"] = relief[a]
        weight[a]["chi_squared"] = weight_chi_squared(table, a, b)

    rank: dict[str, dict[str, int]] = {a: {} for a in attrs}
    for alg in ALGORITHMS:
        per_alg = rank_attributes({a: weight[a][alg] for a in attrs})
        for a in attrs:
            rank[a][alg] = per_alg[a]

    mean_rank, overall = aggregate_ranks({a: [rank[a][alg] for alg in ALGORITHMS] for a in attrs})
    return WeightMatrix(
        attributes=tuple(attrs),
        algorithms=ALGORITHMS,
        weight=weight,
        rank=rank,
        mean_rank=mean_rank,
        overall_rank=overall,
    )
