"""Six classifier kinds behind the shared fit/predict/serialize interface."""

import math
import random

import numpy as np
import pytest

import featrank as fr
from featrank.classifiers import CLASSIFIERS, ClassifierSpec, default_specs
from featrank.classifiers.mlp import _loss_and_grads
from featrank.classifiers.trees import _sigmoid, _tree_apply
from helpers import make_table


def toy_table(n=60, seed=0, with_cat=True):
    """Noisy linear signal plus an irrelevant categorical."""
    rng = random.Random(seed)
    labels = [rng.randrange(2) for _ in range(n)]
    while min(sum(labels), n - sum(labels)) < max(10, n // 5):
        labels[rng.randrange(n)] ^= 1
    cols = {
        "signal": [y * 2.0 + rng.gauss(0, 0.6) for y in labels],
        "noise": [rng.gauss(0, 1) for _ in range(n)],
    }
    if with_cat:
        cols["cat"] = [rng.choice("pqr") for _ in range(n)]
    return make_table(cols, labels)


class TestClassifierSpec:
    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown classifier kind"):
            ClassifierSpec(kind="svm")

    def test_unknown_hyperparameter(self):
        with pytest.raises(ValueError, match="does not accept"):
            ClassifierSpec(kind="glm", hyperparameters={"depth": 3})

    def test_range_validation(self):
        with pytest.raises(ValueError, match="positive integer"):
            ClassifierSpec(kind="mlp", hyperparameters={"epochs": 0})
        with pytest.raises(ValueError, match="shrinkage"):
            ClassifierSpec(kind="gbt", hyperparameters={"shrinkage": 1.5})
        with pytest.raises(ValueError, match="l2"):
            ClassifierSpec(kind="glm", hyperparameters={"l2": -0.1})
        with pytest.raises(ValueError, match="positive"):
            ClassifierSpec(kind="mlp", hyperparameters={"learning_rate": 0.0})

    def test_params_merge_defaults(self):
        spec = ClassifierSpec(kind="gbt", hyperparameters={"n_rounds": 10})
        params = spec.params()
        assert params["n_rounds"] == 10
        assert params["shrinkage"] == 0.1

    def test_default_specs_cover_all_kinds_in_order(self):
        specs = default_specs(seed=4)
        assert tuple(s.kind for s in specs) == CLASSIFIERS
        assert len({s.seed for s in specs}) == len(specs)


class TestFitValidation:
    def test_too_few_rows(self):
        t = make_table({"x": [1.0, 2.0, 3.0, 4.0]}, [1, 0, 1, 0])
        with pytest.raises(ValueError, match="at least 10 rows"):
            fr.fit(ClassifierSpec(kind="glm"), t)

    def test_single_class(self):
        t = make_table({"x": [float(i) for i in range(12)]}, [1] * 12)
        with pytest.raises(ValueError, match="single class"):
            fr.fit(ClassifierSpec(kind="glm"), t)

    def test_unknown_feature_mask(self):
        t = toy_table()
        with pytest.raises(ValueError, match="unknown feature"):
            fr.fit(ClassifierSpec(kind="glm"), t, features=["signal", "ghost"])

    def test_empty_feature_mask(self):
        t = toy_table()
        with pytest.raises(ValueError, match="no feature columns"):
            fr.fit(ClassifierSpec(kind="glm"), t, features=[])


@pytest.mark.parametrize("kind", CLASSIFIERS)
class TestEveryKind:
    def spec(self, kind):
        fast = {
            "random_forest": {"n_trees": 20},
            "gbt": {"n_rounds": 30},
            "mlp": {"epochs": 60},
        }
        return ClassifierSpec(kind=kind, hyperparameters=fast.get(kind, {}), seed=7)

    def test_scores_in_unit_interval_and_beat_majority(self, kind):
        t = toy_table(n=80, seed=1)
        model = fr.fit(self.spec(kind), t)
        scores = fr.predict_scores(model, t)
        assert all(0.0 <= s <= 1.0 for s in scores)
        y = t.label01()
        acc = sum((s >= 0.5) == bool(v) for s, v in zip(scores, y)) / len(y)
        majority = max(sum(y), len(y) - sum(y)) / len(y)
        assert acc > majority

    def test_deterministic_given_spec(self, kind):
        t = toy_table(n=60, seed=2)
        probe = toy_table(n=30, seed=3)
        a = fr.predict_scores(fr.fit(self.spec(kind), t), probe)
        b = fr.predict_scores(fr.fit(self.spec(kind), t), probe)
        assert a == b

    def test_row_order_invariance(self, kind):
        t = toy_table(n=60, seed=4)
        shuffled_idx = list(range(t.n_rows))
        random.Random(99).shuffle(shuffled_idx)
        shuffled = t.take(shuffled_idx)
        probe = toy_table(n=25, seed=5)
        a = fr.predict_scores(fr.fit(self.spec(kind), t), probe)
        b = fr.predict_scores(fr.fit(self.spec(kind), shuffled), probe)
        assert a == b

    def test_json_round_trip_preserves_scores(self, kind):
        t = toy_table(n=60, seed=6)
        probe = toy_table(n=25, seed=7)
        model = fr.fit(self.spec(kind), t)
        back = fr.model_from_json(fr.model_to_json(model))
        assert fr.predict_scores(model, probe) == fr.predict_scores(back, probe)

    def test_unseen_categorical_value_still_scores(self, kind):
        t = toy_table(n=60, seed=8)
        model = fr.fit(self.spec(kind), t)
        score = fr.predict(model, {"signal": 1.0, "noise": 0.0, "cat": "never-seen"})
        assert 0.0 <= score <= 1.0

    def test_predict_validates_row(self, kind):
        t = toy_table(n=60, seed=9)
        model = fr.fit(self.spec(kind), t)
        with pytest.raises(ValueError, match="missing feature"):
            fr.predict(model, {"signal": 1.0, "noise": 0.0})
        with pytest.raises(ValueError, match="finite number"):
            fr.predict(model, {"signal": float("nan"), "noise": 0.0, "cat": "p"})
        with pytest.raises(ValueError, match="string value"):
            fr.predict(model, {"signal": 1.0, "noise": 0.0, "cat": 3})


class TestKindSpecifics:
    def test_decision_tree_separable_training_accuracy_one(self):
        xs = [float(i) for i in range(-25, 25)]
        t = make_table({"x": xs}, [1 if x >= 0 else 0 for x in xs])
        model = fr.fit(ClassifierSpec(kind="decision_tree"), t)
        scores = fr.predict_scores(model, t)
        y = t.label01()
        assert all((s >= 0.5) == bool(v) for s, v in zip(scores, y))

    def test_glm_separable_training_auc_one(self):
        rng = random.Random(10)
        n = 40
        labels = [i % 2 for i in range(n)]
        t = make_table(
            {"a": [3.0 * y + rng.random() for y in labels],
             "b": [-2.0 * y + rng.random() for y in labels]},
            labels,
        )
        model = fr.fit(ClassifierSpec(kind="glm"), t)
        assert fr.auc(fr.predict_scores(model, t), t.label01()) == 1.0

    def test_rule_model_with_no_rules_scores_prior(self):
        # constant features cannot beat the prior, so only the default fires
        labels = [1] * 13 + [0] * 7
        t = make_table({"c": ["same"] * 20, "x": [5.0] * 20}, labels)
        model = fr.fit(ClassifierSpec(kind="rule_induction"), t)
        assert model.inner.rules == []
        assert fr.predict_scores(model, t) == [0.65] * 20

    def test_random_forest_score_is_vote_fraction(self):
        t = toy_table(n=60, seed=11)
        spec = ClassifierSpec(kind="random_forest", hyperparameters={"n_trees": 10}, seed=3)
        scores = fr.predict_scores(fr.fit(spec, t), t)
        for s in scores:
            assert abs(s * 10 - round(s * 10)) < 1e-9

    def test_gbt_scores_strictly_inside_unit_interval(self):
        t = toy_table(n=60, seed=12)
        spec = ClassifierSpec(kind="gbt", hyperparameters={"n_rounds": 20}, seed=0)
        for s in fr.predict_scores(fr.fit(spec, t), t):
            assert 0.0 < s < 1.0

    def test_gbt_training_loss_non_increasing(self):
        t = toy_table(n=80, seed=13)
        spec = ClassifierSpec(kind="gbt", hyperparameters={"n_rounds": 40}, seed=0)
        model = fr.fit(spec, t)
        inner = model.inner
        # replay boosting on the canonically sorted training matrix
        feats = model.features
        cells = [tuple(row[t.col_index(f)] for f in feats) for row in t.rows]
        y01 = t.label01()
        order = sorted(
            range(len(cells)),
            key=lambda i: tuple(("s", c) if isinstance(c, str) else ("n", c) for c in cells[i])
            + (("y", y01[i]),),
        )
        x_mat = model.encoder.transform([cells[i] for i in order])
        y = np.asarray([y01[i] for i in order], dtype=float)
        raw = np.full(len(y), inner.prior_log_odds)
        losses = []
        for root in inner.roots:
            p = np.clip(_sigmoid(raw), 1e-12, 1 - 1e-12)
            losses.append(float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p))))
            raw = raw + inner.shrinkage * _tree_apply(root, x_mat)
        p = np.clip(_sigmoid(raw), 1e-12, 1 - 1e-12)
        losses.append(float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p))))
        for before, after in zip(losses, losses[1:]):
            assert after <= before + 1e-12

    def test_one_hot_width_tracks_category_count(self):
        t = toy_table(n=60, seed=14)  # cat has 3 observed values
        with_cat = fr.fit(ClassifierSpec(kind="glm"), t)
        without_cat = fr.fit(ClassifierSpec(kind="glm"), t, features=["signal", "noise"])
        width_with = len(with_cat.encoder.expanded_names)
        width_without = len(without_cat.encoder.expanded_names)
        assert width_with - width_without == 3

    def test_glm_scores_invariant_to_feature_scaling(self):
        t = toy_table(n=60, seed=15, with_cat=False)
        scaled = make_table(
            {"signal": [v * 1000.0 for v in t.column("signal")], "noise": t.column("noise")},
            t.label01(),
        )
        a = fr.predict_scores(fr.fit(ClassifierSpec(kind="glm"), t), t)
        b = fr.predict_scores(fr.fit(ClassifierSpec(kind="glm"), scaled), scaled)
        assert max(abs(x - y) for x, y in zip(a, b)) < 1e-6


class TestGradientCheck:
    def test_small_net_matches_finite_differences(self):
        t = toy_table(n=30, seed=16)
        spec = ClassifierSpec(kind="mlp", seed=2)
        err = fr.mlp_gradient_check(spec, t, epsilon=1e-5)
        assert err < 1e-4

    def test_epsilon_bounds(self):
        t = toy_table(n=30, seed=17)
        spec = ClassifierSpec(kind="mlp", seed=2)
        for eps in (1e-8, 1e-2):
            with pytest.raises(ValueError, match="epsilon"):
                fr.mlp_gradient_check(spec, t, epsilon=eps)

    def test_non_mlp_kind_rejected(self):
        t = toy_table(n=30, seed=18)
        with pytest.raises(ValueError, match="mlp"):
            fr.mlp_gradient_check(ClassifierSpec(kind="glm"), t, epsilon=1e-5)

    def test_output_bias_gradient_at_zero_point(self):
        # zero weights and zero inputs leave only the output bias active
        n, d, h = 8, 3, 4
        x = np.zeros((n, d))
        y = np.asarray([1.0, 0.0] * 4)
        params = [np.zeros((d, h)), np.zeros(h), np.zeros(h), 0.0]
        _, grads = _loss_and_grads(params, x, y)
        eps = 1e-6
        plus = _loss_and_grads([params[0], params[1], params[2], eps], x, y)[0]
        minus = _loss_and_grads([params[0], params[1], params[2], -eps], x, y)[0]
        numeric = (plus - minus) / (2 * eps)
        assert abs(grads[3] - numeric) < 1e-9
        # closed form: sigmoid(0) - mean(y) = 0.5 - 0.5 = 0
        assert grads[3] == 0.0


class TestModelJson:
    def test_format_version_enforced(self):
        t = toy_table(n=30, seed=19)
        doc = fr.model_to_json(fr.fit(ClassifierSpec(kind="glm"), t))
        doc["format_version"] = 99
        with pytest.raises(ValueError, match="format_version"):
            fr.model_from_json(doc)

    def test_document_is_json_serializable(self):
        import json

        t = toy_table(n=30, seed=20)
        for kind in CLASSIFIERS:
            fast = {"random_forest": {"n_trees": 5}, "gbt": {"n_rounds": 5}, "mlp": {"epochs": 5}}
            spec = ClassifierSpec(kind=kind, hyperparameters=fast.get(kind, {}), seed=1)
            doc = fr.model_to_json(fr.fit(spec, t))
            assert json.loads(json.dumps(doc)) == doc

    def test_predict_scores_rejects_kind_mismatch(self):
        t = toy_table(n=30, seed=21)
        model = fr.fit(ClassifierSpec(kind="glm"), t)
        swapped = make_table(
            {"signal": t.column("signal"), "noise": t.column("noise"),
             "cat": [1.0] * t.n_rows},  # numeric now
            t.label01(),
        )
        with pytest.raises(ValueError, match="kind mismatch"):
            fr.predict_scores(model, swapped)
