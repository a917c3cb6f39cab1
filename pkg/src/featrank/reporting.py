"""Fixed-precision report rendering: CSV as the canonical form, Markdown on request.

All numbers are formatted at fixed precision (weights 5 decimals, metrics 2
decimals) and all files end with a single trailing newline, so identical runs
produce byte-identical files. Accuracy, precision, and recall are reported as
percentages; AUC stays a fraction.
"""

from __future__ import annotations

import csv
import io

from .classifiers import CLASSIFIER_LABELS
from .dataio import NUMERIC, Table
from .evaluation import AblationReport, EvalReport
from .weighting import ALGORITHM_LABELS, ALGORITHMS, WeightMatrix

PERCENT_METRICS = ("accuracy", "precision", "recall")


def format_weight(value: float) -> str:
    return f"{value:.5f}"


def format_metric(name: str, value: float) -> str:
    scale = 100.0 if name in PERCENT_METRICS else 1.0
    return f"{value * scale:.2f}"


def metric_cell(name: str, mean: float, std: float) -> str:
    return f"{format_metric(name, mean)} ± {format_metric(name, std)}"


def weight_matrix_rows(matrix: WeightMatrix) -> list[list[str]]:
    header = ["Attribute"]
    for alg in ALGORITHMS:
        label = ALGORITHM_LABELS[alg]
        header += [f"{label} Weight", f"{label} Rank"]
    header += ["Mean Rank", "Overall Rank"]
    rows = [header]
    for attr in matrix.by_overall_rank():
        row = [attr]
        for alg in ALGORITHMS:
            row.append(format_weight(matrix.weight[attr][alg]))
            row.append(str(matrix.rank[attr][alg]))
        row.append(f"{matrix.mean_rank[attr]:.2f}")
        row.append(str(matrix.overall_rank[attr]))
        rows.append(row)
    return rows


def eval_report_rows(report: EvalReport) -> list[list[str]]:
    header = ["Metric"] + [CLASSIFIER_LABELS[k] for k in report.kinds] + ["Average"]
    rows = [header]
    metric_labels = {"accuracy": "Accuracy", "precision": "Precision", "recall": "Recall", "auc": "AUC"}
    for name in ("accuracy", "precision", "recall", "auc"):
        row = [metric_labels[name]]
        for kind in report.kinds:
            row.append(metric_cell(name, report.mean[kind].get(name), report.std[kind].get(name)))
        row.append(format_metric(name, report.average.get(name)))
        rows.append(row)
    return rows


def delta_rows(report: AblationReport) -> list[list[str]]:
    rows = [["Metric", "Without", "With", "Delta"]]
    metric_labels = {"accuracy": "Accuracy", "precision": "Precision", "recall": "Recall", "auc": "AUC"}
    for name in ("accuracy", "precision", "recall", "auc"):
        without = report.without_report.average.get(name)
        with_ = report.with_report.average.get(name)
        scale = 100.0 if name in PERCENT_METRICS else 1.0
        rows.append(
            [
                metric_labels[name],
                format_metric(name, without),
                format_metric(name, with_),
                f"{(with_ - without) * scale:+.2f}",
            ]
        )
    return rows


def group_ranking_rows(rankings: dict, skipped, top_n: int = 5) -> list[list[str]]:
    header = ["Group", "Status"] + [f"Top{i + 1}" for i in range(top_n)]
    rows = [header]
    groups = sorted(set(rankings) | set(skipped))
    for g in groups:
        if g in rankings:
            top = list(rankings[g]) + [""] * (top_n - len(rankings[g]))
            rows.append([g, "ok"] + top[:top_n])
        else:
            rows.append([g, "skipped"] + [""] * top_n)
    return rows


def group_winner_rows(winners: dict, skipped) -> list[list[str]]:
    rows = [["Group", "Status", "Classifier", "Accuracy", "Precision", "Recall", "AUC"]]
    groups = sorted(set(winners) | set(skipped))
    for g in groups:
        if g in winners:
            kind, metrics = winners[g]
            rows.append(
                [
                    g,
                    "ok",
                    CLASSIFIER_LABELS[kind],
                    format_metric("accuracy", metrics.accuracy),
                    format_metric("precision", metrics.precision),
                    format_metric("recall", metrics.recall),
                    format_metric("auc", metrics.auc),
                ]
            )
        else:
            rows.append([g, "skipped", "", "", "", "", ""])
    return rows


def rows_to_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def rows_to_markdown(rows: list[list[str]]) -> str:
    header, *body = rows
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in body:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def write_rows(path, rows: list[list[str]], markdown: bool = False) -> None:
    text = rows_to_markdown(rows) if markdown else rows_to_csv(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_csv_rows(path) -> list[list[str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return [row for row in csv.reader(fh)]


def table_to_csv_text(table: Table) -> str:
    """Cohort CSV with full-precision numerics (repr round-trips exactly)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = table.column_names()
    writer.writerow(names)
    kinds = [table.column_schema(n).kind for n in names]
    for row in table.rows:
        writer.writerow(
            [repr(c) if kind == NUMERIC else c for c, kind in zip(row, kinds)]
        )
    return buf.getvalue()
