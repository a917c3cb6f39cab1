"""Fixed-precision rendering of weight, evaluation, and group reports."""

import csv

import pytest

from featrank.classifiers import CLASSIFIER_LABELS
from featrank.evaluation import AblationReport, EvalReport, Metrics
from featrank.reporting import (
    delta_rows,
    eval_report_rows,
    format_metric,
    format_weight,
    group_ranking_rows,
    group_winner_rows,
    metric_cell,
    read_csv_rows,
    rows_to_csv,
    rows_to_markdown,
    table_to_csv_text,
    weight_matrix_rows,
    write_rows,
)
from featrank.weighting import ALGORITHMS, weigh_all
from helpers import make_table


def small_report(shift=0.0):
    mean = {
        "glm": Metrics(0.7215 + shift, 0.7403, 0.8705, 0.7315),
        "decision_tree": Metrics(0.7 + shift, 0.72, 0.86, 0.70),
    }
    std = {k: Metrics(0.01, 0.01, 0.01, 0.01) for k in mean}
    return EvalReport.from_stats(["glm", "decision_tree"], mean, std, {})


class TestFormatting:
    def test_weight_five_decimals(self):
        assert format_weight(0.123456789) == "0.12346"
        assert format_weight(0.0) == "0.00000"

    def test_percent_metrics_scaled(self):
        assert format_metric("accuracy", 0.7215) == "72.15"
        assert format_metric("precision", 1.0) == "100.00"
        assert format_metric("auc", 0.7315) == "0.73"

    def test_metric_cell(self):
        assert metric_cell("accuracy", 0.7215, 0.0101) == "72.15 ± 1.01"
        assert metric_cell("auc", 0.75, 0.012) == "0.75 ± 0.01"


class TestWeightMatrixRows:
    def matrix(self):
        t = make_table(
            {"strong": [float(i % 2) * 2 + i * 0.01 for i in range(40)],
             "weak": [float(i) * 0.1 for i in range(40)],
             "color": ["red" if i % 2 else "blue" for i in range(40)]},
            [i % 2 for i in range(40)],
        )
        return weigh_all(t, n_bins=4, relief_k=3, seed=0)

    def test_header_and_ordering(self):
        rows = weight_matrix_rows(self.matrix())
        assert rows[0][0] == "Attribute"
        assert rows[0][-2:] == ["Mean Rank", "Overall Rank"]
        assert len(rows[0]) == 1 + 2 * len(ALGORITHMS) + 2
        assert len(rows) == 4  # header + three attributes
        overall = [int(r[-1]) for r in rows[1:]]
        assert overall == sorted(overall)

    def test_cells_are_formatted_strings(self):
        rows = weight_matrix_rows(self.matrix())
        for row in rows[1:]:
            float(row[1])  # weight cell parses
            assert len(row[1].split(".")[1]) == 5
            int(row[2])  # rank cell parses


class TestEvalReportRows:
    def test_layout(self):
        rows = eval_report_rows(small_report())
        assert rows[0] == ["Metric", CLASSIFIER_LABELS["glm"], CLASSIFIER_LABELS["decision_tree"], "Average"]
        assert [r[0] for r in rows[1:]] == ["Accuracy", "Precision", "Recall", "AUC"]
        assert rows[1][1] == "72.15 ± 1.00"
        assert rows[4][1] == "0.73 ± 0.01"
        assert rows[1][3] == f"{(0.7215 + 0.7) / 2 * 100:.2f}"


class TestDeltaRows:
    def test_signed_percent_and_fraction(self):
        report = AblationReport.build(small_report(shift=0.0395), small_report())
        rows = delta_rows(report)
        assert rows[0] == ["Metric", "Without", "With", "Delta"]
        acc = rows[1]
        assert acc[0] == "Accuracy"
        assert acc[3] == "+3.95"
        auc_row = rows[4]
        assert auc_row[3] == "+0.00"

    def test_negative_delta(self):
        report = AblationReport.build(small_report(), small_report(shift=0.0395))
        assert delta_rows(report)[1][3] == "-3.95"


class TestGroupRows:
    def test_ranking_rows_pad_and_sort(self):
        rows = group_ranking_rows({"b": ["x", "y"], "a": ["z"]}, skipped=["c"], top_n=3)
        assert rows[0] == ["Group", "Status", "Top1", "Top2", "Top3"]
        assert rows[1] == ["a", "ok", "z", "", ""]
        assert rows[2] == ["b", "ok", "x", "y", ""]
        assert rows[3] == ["c", "skipped", "", "", ""]

    def test_winner_rows(self):
        winners = {"a": ("glm", Metrics(0.8, 0.75, 0.9, 0.82))}
        rows = group_winner_rows(winners, skipped=["b"])
        assert rows[1] == ["a", "ok", CLASSIFIER_LABELS["glm"], "80.00", "75.00", "90.00", "0.82"]
        assert rows[2] == ["b", "skipped", "", "", "", "", ""]


class TestSerialization:
    def test_csv_round_trip(self, tmp_path):
        rows = [["A", "B"], ["1,5", "two"], ["", "x ± y"]]
        path = tmp_path / "r.csv"
        write_rows(path, rows)
        assert read_csv_rows(path) == rows
        text = path.read_text(encoding="utf-8")
        assert text.endswith("\n") and not text.endswith("\n\n")

    def test_csv_writes_are_byte_identical(self, tmp_path):
        rows = [["A"], ["0.12345"]]
        write_rows(tmp_path / "a.csv", rows)
        write_rows(tmp_path / "b.csv", rows)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_markdown_layout(self):
        text = rows_to_markdown([["H1", "H2"], ["a", "b"]])
        lines = text.splitlines()
        assert lines[0] == "| H1 | H2 |"
        assert lines[1] == "| --- | --- |"
        assert lines[2] == "| a | b |"
        assert text.endswith("\n")

    def test_rows_to_csv_newlines(self):
        assert rows_to_csv([["a", "b"], ["c", "d"]]) == "a,b\nc,d\n"


class TestTableCsvText:
    def test_numeric_cells_round_trip_exactly(self):
        t = make_table(
            {"x": [0.1 + 0.2, 1 / 3, 1e-17], "c": ["u", "v", "u"]},
            [1, 0, 1],
        )
        text = table_to_csv_text(t)
        rows = list(csv.reader(text.splitlines()))
        assert rows[0] == ["x", "c", "label"]
        for parsed, row in zip(rows[1:], t.rows):
            assert float(parsed[0]) == row[0]
            assert parsed[1] == row[1]
