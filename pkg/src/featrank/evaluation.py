"""Cross-validated metrics, feature ablation, and per-group analyses.

Scoring is always on untouched test folds at threshold 0.5; oversampling, if
requested, is applied to each fold's training split only, and the resampling
provenance is carried through so tests can audit that no test row ever
contributed to a synthetic training row. Both arms of an ablation share fold
assignments and derived seeds, so the included feature is the only varying
factor.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import classifiers
from .classifiers import ClassifierSpec
from .dataio import FoldPlan, Table, filter_by_group, observed_groups, split, stratified_folds
from .seeding import derive_seed
from .smote import SmoteConfig, smote

METRIC_NAMES = ("accuracy", "precision", "recall", "auc")


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    auc: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.accuracy, self.precision, self.recall, self.auc)

    def get(self, name: str) -> float:
        if name not in METRIC_NAMES:
            raise ValueError(f"unknown metric {name!r}")
        return getattr(self, name)


def confusion(scores, labels, threshold: float) -> tuple[int, int, int, int]:
    """(TP, FP, TN, FN) with rows predicted positive iff score >= threshold."""
    if len(scores) != len(labels):
        raise ValueError("scores and labels must have equal length")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be within [0, 1]")
    tp = fp = tn = fn = 0
    for s, y in zip(scores, labels):
        if s >= threshold:
            if y == 1:
                tp += 1
            else:
                fp += 1
        elif y == 1:
            fn += 1
        else:
            tn += 1
    return tp, fp, tn, fn


def auc(scores, labels) -> float:
    """Rank-based Mann-Whitney AUC; tied scores contribute half credit."""
    y = np.asarray(labels)
    s = np.asarray(scores, dtype=float)
    n = len(y)
    if len(s) != n:
        raise ValueError("scores and labels must have equal length")
    n_pos = int((y == 1).sum())
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC requires both classes")
    order = np.argsort(s, kind="stable")
    ranks = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j < n and s[order[j]] == s[order[i]]:
            j += 1
        ranks[order[i:j]] = (i + j + 1) / 2.0  # average 1-based rank of the tie run
        i = j
    rank_sum_pos = float(ranks[y == 1].sum())
    u_stat = rank_sum_pos - n_pos * (n_pos + 1) / 2.0
    return u_stat / (n_pos * n_neg)


def compute_metrics(scores, labels, threshold: float = 0.5) -> Metrics:
    tp, fp, tn, fn = confusion(scores, labels, threshold)
    n = tp + fp + tn + fn
    return Metrics(
        accuracy=(tp + tn) / n,
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
        auc=auc(scores, labels),
    )


@dataclass(frozen=True)
class FoldAudit:
    """Resampling provenance of one fold, in original-table row indices."""

    fold: int
    test_indices: tuple[int, ...]
    smote_source_indices: tuple[int, ...]


@dataclass(frozen=True)
class CrossValResult:
    kind: str
    per_fold: tuple[Metrics, ...]
    mean: Metrics
    std: Metrics
    audits: tuple[FoldAudit, ...]


def _aggregate(per_fold) -> tuple[Metrics, Metrics]:
    means = []
    stds = []
    for name in METRIC_NAMES:
        values = [m.get(name) for m in per_fold]
        means.append(float(np.mean(values)))
        stds.append(float(np.std(values, ddof=1)) if len(values) > 1 else 0.0)
    return Metrics(*means), Metrics(*stds)


def _clamped_smote_config(train: Table, cfg: SmoteConfig, fold: int) -> SmoteConfig | None:
    """Per-fold seeded config with k capped below the train minority size."""
    y = train.label01()
    n_pos = sum(y)
    minority = min(n_pos, len(y) - n_pos)
    if minority < 2:
        return None
    k = min(cfg.k_neighbors, minority - 1)
    return replace(cfg, k_neighbors=k, seed=derive_seed(cfg.seed, "fold", fold))


def cross_validate(
    table: Table,
    spec: ClassifierSpec,
    plan: FoldPlan,
    smote_cfg: SmoteConfig | None = None,
    feature_mask=None,
) -> CrossValResult:
    """k-fold evaluation of one classifier restricted to the masked-in features."""
    all_feats = list(table.feature_names())
    if feature_mask is None:
        mask = all_feats
    else:
        mask = [f for f in all_feats if f in set(feature_mask)]
        unknown = set(feature_mask) - set(all_feats)
        if unknown:
            raise ValueError(f"feature mask names unknown columns: {sorted(unknown)}")
        if not mask:
            raise ValueError("feature mask selects no columns")

    n = table.n_rows
    for fold in range(plan.k):
        if len(plan.fold_indices(fold)) < 2:
            raise ValueError(f"fold {fold} has fewer than 2 rows")

    per_fold = []
    audits = []
    for fold in range(plan.k):
        train, test = split(table, plan, fold)
        test_idx = plan.fold_indices(fold)
        train_idx = [i for i in range(n) if plan.assignment[i] != fold]

        sources: tuple[int, ...] = ()
        if smote_cfg is not None:
            fold_cfg = _clamped_smote_config(train, smote_cfg, fold)
            if fold_cfg is not None:
                train = smote(train, fold_cfg)
                used = {i for pair in train.smote_pairs for i in pair}
                sources = tuple(sorted(train_idx[i] for i in used))

        fold_spec = replace(spec, seed=derive_seed(spec.seed, "fold", fold))
        model = classifiers.fit(fold_spec, train, features=mask)
        scores = classifiers.predict_scores(model, test)
        per_fold.append(compute_metrics(scores, test.label01()))
        audits.append(
            FoldAudit(fold=fold, test_indices=tuple(test_idx), smote_source_indices=sources)
        )

    mean, std = _aggregate(per_fold)
    return CrossValResult(
        kind=spec.kind, per_fold=tuple(per_fold), mean=mean, std=std, audits=tuple(audits)
    )


@dataclass(frozen=True)
class EvalReport:
    """Per-classifier metric means/stds over folds plus their across-classifier average."""

    kinds: tuple[str, ...]
    mean: dict  # kind -> Metrics
    std: dict  # kind -> Metrics
    average: Metrics
    config: dict

    @classmethod
    def from_stats(cls, kinds, mean, std, config) -> "EvalReport":
        kinds = tuple(kinds)
        avg = Metrics(
            *(float(np.mean([mean[k].get(m) for k in kinds])) for m in METRIC_NAMES)
        )
        return cls(kinds=kinds, mean=dict(mean), std=dict(std), average=avg, config=dict(config))


@dataclass(frozen=True)
class AblationReport:
    with_report: EvalReport
    without_report: EvalReport
    delta: Metrics  # with minus without, on the average column

    @classmethod
    def build(cls, with_report: EvalReport, without_report: EvalReport) -> "AblationReport":
        delta = Metrics(
            *(with_report.average.get(m) - without_report.average.get(m) for m in METRIC_NAMES)
        )
        return cls(with_report=with_report, without_report=without_report, delta=delta)


def ablation(
    table: Table,
    feature: str,
    specs,
    plan: FoldPlan,
    smote_cfg: SmoteConfig | None = None,
) -> AblationReport:
    """Paired evaluation with one feature included vs. excluded, same folds."""
    all_feats = list(table.feature_names())
    if feature not in all_feats:
        raise ValueError(f"{feature!r} is not a feature column")
    with_mask = all_feats
    without_mask = [f for f in all_feats if f != feature]
    if not without_mask:
        raise ValueError("cannot ablate the only feature column")

    reports = {}
    for arm, mask in (("with", with_mask), ("without", without_mask)):
        mean = {}
        std = {}
        for spec in specs:
            result = cross_validate(table, spec, plan, smote_cfg, feature_mask=mask)
            mean[spec.kind] = result.mean
            std[spec.kind] = result.std
        config = {
            "folds": plan.k,
            "features": list(mask),
            "smote": None
            if smote_cfg is None
            else {
                "k_neighbors": smote_cfg.k_neighbors,
                "target_ratio": smote_cfg.target_ratio,
                "seed": smote_cfg.seed,
            },
            "seeds": {spec.kind: spec.seed for spec in specs},
        }
        reports[arm] = EvalReport.from_stats(
            [spec.kind for spec in specs], mean, std, config
        )
    return AblationReport.build(reports["with"], reports["without"])


def per_group_rankings(
    table: Table, top_n: int = 5, n_bins: int = 10, relief_k: int = 10, seed: int = 0
) -> dict[str, list[str]]:
    """Top attributes by overall rank within each group stratum.

    The group column itself is excluded (it is constant within a stratum).
    Groups with fewer than 20 rows, or without at least 2 rows per class,
    are skipped with a warning.
    """
    from .weighting import weigh_all

    group_col = table.group_column
    if group_col is None:
        raise ValueError("table has no group column")
    rankable = [f for f in table.feature_names() if f != group_col.name]
    out: dict[str, list[str]] = {}
    for value in observed_groups(table):
        sub = filter_by_group(table, value)
        y = sub.label01()
        min_class = min(sum(y), len(y) - sum(y))
        if sub.n_rows < 20 or min_class < 2:
            warnings.warn(f"group {value!r} is too small to rank; skipped", stacklevel=2)
            continue
        k_eff = min(relief_k, min_class - 1)
        matrix = weigh_all(
            sub.project(rankable), n_bins=n_bins, relief_k=k_eff, seed=derive_seed(seed, "group", value)
        )
        out[value] = matrix.by_overall_rank()[:top_n]
    return out


def best_classifier_per_group(
    table: Table,
    specs,
    k: int = 10,
    seed: int = 0,
    smote_cfg: SmoteConfig | None = None,
) -> dict[str, tuple[str, Metrics]]:
    """Winning classifier (by mean accuracy, then AUC, then name) per group.

    Each group gets fresh stratified folds. Groups below max(20, 2k) rows or
    with a class smaller than k are skipped with a warning.
    """
    group_col = table.group_column
    if group_col is None:
        raise ValueError("table has no group column")
    floor = max(20, 2 * k)
    out: dict[str, tuple[str, Metrics]] = {}
    for value in observed_groups(table):
        sub = filter_by_group(table, value)
        y = sub.label01()
        min_class = min(sum(y), len(y) - sum(y))
        if sub.n_rows < floor or min_class < k:
            warnings.warn(f"group {value!r} is too small for {k}-fold evaluation; skipped", stacklevel=2)
            continue
        plan = stratified_folds(sub, k, derive_seed(seed, "group-folds", value))
        best: tuple[float, float, str] | None = None
        best_entry: tuple[str, Metrics] | None = None
        for spec in specs:
            result = cross_validate(sub, spec, plan, smote_cfg)
            key = (-result.mean.accuracy, -result.mean.auc, spec.kind)
            if best is None or key < best:
                best = key
                best_entry = (spec.kind, result.mean)
        out[value] = best_entry
    return out


def majority_baseline_accuracy(labels) -> float:
    """Accuracy of always predicting the more common class."""
    y = list(labels)
    n_pos = sum(y)
    return max(n_pos, len(y) - n_pos) / len(y)
