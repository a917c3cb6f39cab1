"""Six binary classifiers behind one fit/predict interface.

Every kind consumes a data table and an optional list of included features,
and produces a Model whose scores are positive-class probabilities in [0,1].
Training rows are canonically re-sorted by content before any seeded
sampling, so fitted models do not depend on input row order. Models
round-trip through a versioned JSON document.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import dataio
from ..dataio import Table
from ..seeding import derive_seed
from .encoding import FeatureEncoder
from .linear import LogisticGlm
from .mlp import Mlp, gradient_check
from .rules import RuleInduction
from .trees import DecisionTree, GradientBoostedTrees, RandomForest

MODEL_FORMAT_VERSION = 1

CLASSIFIERS = ("rule_induction", "mlp", "glm", "gbt", "decision_tree", "random_forest")

CLASSIFIER_LABELS = {
    "rule_induction": "Rule Induction",
    "mlp": "Deep Learning",
    "glm": "Generalized Linear Model",
    "gbt": "Gradient Boosted Tree",
    "decision_tree": "Decision Tree",
    "random_forest": "Random Forest",
}

_DEFAULTS = {
    "decision_tree": {"max_depth": 8, "min_leaf": 5},
    "random_forest": {"n_trees": 100, "max_depth": 8, "min_leaf": 5},
    "gbt": {"n_rounds": 100, "max_depth": 3, "min_leaf": 5, "shrinkage": 0.1},
    "glm": {"l2": 1e-4, "tol": 1e-6, "max_iter": 500},
    "mlp": {
        "hidden": 16,
        "learning_rate": 0.01,
        "epochs": 200,
        "batch_size": 32,
        "init_scale": 0.1,
    },
    "rule_induction": {"n_bins": 10, "min_coverage": 5},
}

_INT_KEYS = {
    "max_depth",
    "min_leaf",
    "n_trees",
    "n_rounds",
    "hidden",
    "epochs",
    "batch_size",
    "max_iter",
    "n_bins",
    "min_coverage",
}
_POSITIVE_FLOAT_KEYS = {"learning_rate", "tol", "init_scale"}

_ESTIMATORS = {
    "decision_tree": DecisionTree,
    "random_forest": RandomForest,
    "gbt": GradientBoostedTrees,
    "glm": LogisticGlm,
    "mlp": Mlp,
    "rule_induction": RuleInduction,
}


@dataclass(frozen=True)
class ClassifierSpec:
    """A classifier kind, its hyperparameter overrides, and a seed."""

    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in CLASSIFIERS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        allowed = _DEFAULTS[self.kind]
        for key, value in self.hyperparameters.items():
            if key not in allowed:
                raise ValueError(f"{self.kind} does not accept hyperparameter {key!r}")
            if key in _INT_KEYS:
                if not isinstance(value, int) or value < 1:
                    raise ValueError(f"{key} must be a positive integer")
            elif key in _POSITIVE_FLOAT_KEYS:
                if not value > 0:
                    raise ValueError(f"{key} must be positive")
            elif key == "shrinkage":
                if not 0 < value <= 1:
                    raise ValueError("shrinkage must be in (0, 1]")
            elif key == "l2":
                if value < 0:
                    raise ValueError("l2 must be nonnegative")

    def params(self) -> dict:
        merged = dict(_DEFAULTS[self.kind])
        merged.update(self.hyperparameters)
        return merged


def default_specs(seed: int = 0) -> list[ClassifierSpec]:
    """One spec per kind at default settings, in reporting order."""
    return [ClassifierSpec(kind=k, seed=derive_seed(seed, "clf", k)) for k in CLASSIFIERS]


@dataclass(frozen=True)
class Model:
    spec: ClassifierSpec
    features: tuple[str, ...]
    kinds: tuple[str, ...]
    encoder: FeatureEncoder | None
    inner: object


def _row_sort_key(cells_row, label):
    tagged = tuple(("s", c) if isinstance(c, str) else ("n", c) for c in cells_row)
    return tagged + (("y", label),)


def _extract_cells(table: Table, features) -> list[tuple]:
    col_idx = [table.col_index(f) for f in features]
    return [tuple(row[ci] for ci in col_idx) for row in table.rows]


def fit(spec: ClassifierSpec, train: Table, features=None) -> Model:
    """Train one classifier on the table's feature columns (or a subset)."""
    all_feats = list(train.feature_names())
    if features is None:
        feats = all_feats
    else:
        unknown = set(features) - set(all_feats)
        if unknown:
            raise ValueError(f"unknown feature columns: {sorted(unknown)}")
        feats = [f for f in all_feats if f in set(features)]
    if not feats:
        raise ValueError("no feature columns selected")
    if train.n_rows < 10:
        raise ValueError("training requires at least 10 rows")
    y = train.label01()
    if len(set(y)) < 2:
        raise ValueError("training set has a single class")

    kinds = tuple(train.column_schema(f).kind for f in feats)
    cells = _extract_cells(train, feats)
    order = sorted(range(len(cells)), key=lambda i: _row_sort_key(cells[i], y[i]))
    cells = [cells[i] for i in order]
    y = [y[i] for i in order]

    params = spec.params()
    if spec.kind == "rule_induction":
        inner = RuleInduction(**params).fit(cells, feats, kinds, y, spec.seed)
        encoder = None
    else:
        standardize = spec.kind in ("glm", "mlp")
        encoder = FeatureEncoder.build(feats, kinds, cells, standardize)
        x_mat = encoder.transform(cells)
        inner = _ESTIMATORS[spec.kind](**params).fit(x_mat, np.asarray(y, dtype=float), spec.seed)
    return Model(spec=spec, features=tuple(feats), kinds=kinds, encoder=encoder, inner=inner)


def _score_cells(model: Model, cells) -> np.ndarray:
    if model.encoder is None:
        raw = model.inner.scores(cells)
    else:
        raw = model.inner.scores(model.encoder.transform(cells))
    return np.clip(raw, 0.0, 1.0)


def predict_scores(model: Model, table: Table) -> list[float]:
    """Positive-class scores for every row of a table with matching columns."""
    for f, kind in zip(model.features, model.kinds):
        if table.column_schema(f).kind != kind:
            raise ValueError(f"column {f!r} kind mismatch with the trained model")
    return [float(s) for s in _score_cells(model, _extract_cells(table, model.features))]


def predict(model: Model, row: dict) -> float:
    """Positive-class score for one row given as a feature -> value mapping."""
    cells = []
    for f, kind in zip(model.features, model.kinds):
        if f not in row:
            raise ValueError(f"row is missing feature {f!r}")
        v = row[f]
        if kind == dataio.NUMERIC:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"feature {f!r} requires a finite number")
            cells.append(float(v))
        else:
            if not isinstance(v, str):
                raise ValueError(f"feature {f!r} requires a string value")
            cells.append(v)
    return float(_score_cells(model, [tuple(cells)])[0])


def mlp_gradient_check(spec: ClassifierSpec, train: Table, epsilon: float) -> float:
    """Analytic-vs-central-difference gradient comparison for the mlp kind."""
    if spec.kind != "mlp":
        raise ValueError("gradient check applies to the mlp kind only")
    feats = list(train.feature_names())
    kinds = tuple(train.column_schema(f).kind for f in feats)
    cells = _extract_cells(train, feats)
    y = train.label01()
    encoder = FeatureEncoder.build(feats, kinds, cells, standardize=True)
    x_mat = encoder.transform(cells)
    net = Mlp(**spec.params())
    return gradient_check(
        net, x_mat, np.asarray(y, dtype=float), epsilon, seed=derive_seed(spec.seed, "gradcheck")
    )


def model_to_json(model: Model) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.spec.kind,
        "hyperparameters": dict(model.spec.hyperparameters),
        "seed": model.spec.seed,
        "features": list(model.features),
        "feature_kinds": list(model.kinds),
        "encoder": None if model.encoder is None else model.encoder.to_dict(),
        "model": model.inner.to_dict(),
    }


def model_from_json(doc: dict) -> Model:
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version: {version!r}")
    spec = ClassifierSpec(kind=doc["kind"], hyperparameters=doc["hyperparameters"], seed=doc["seed"])
    encoder = None if doc["encoder"] is None else FeatureEncoder.from_dict(doc["encoder"])
    inner = _ESTIMATORS[spec.kind].from_dict(doc["model"])
    return Model(
        spec=spec,
        features=tuple(doc["features"]),
        kinds=tuple(doc["feature_kinds"]),
        encoder=encoder,
        inner=inner,
    )
