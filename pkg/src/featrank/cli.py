"""Command-line entry point.

Subcommands mirror the pipeline stages: `weigh` ranks attributes, `ablate`
runs the with/without-feature experiment, `groups` produces per-stratum
rankings and winning classifiers, `synth` writes a synthetic cohort, and
`report` re-renders an emitted CSV as Markdown. One global seed drives every
stage through derived sub-seeds; no stage reads the clock. Exit codes: 0
success, 1 configuration problem, 2 data ingestion problem, 3 computation
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import classifiers, synth
from .classifiers import CLASSIFIERS, default_specs, model_to_json
from .dataio import load_csv, load_schema_json, observed_groups, schema_to_json, stratified_folds
from .evaluation import METRIC_NAMES, ablation, best_classifier_per_group, per_group_rankings
from .reporting import (
    delta_rows,
    eval_report_rows,
    group_ranking_rows,
    group_winner_rows,
    read_csv_rows,
    rows_to_markdown,
    table_to_csv_text,
    weight_matrix_rows,
    write_rows,
)
from .seeding import derive_seed
from .smote import SmoteConfig
from .weighting import weigh_all

EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_COMPUTE = 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_io_flags(p, schema_required: bool = True):
    p.add_argument("--data", required=True, help="input CSV path")
    p.add_argument("--schema", required=schema_required, help="schema JSON path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0, help="global seed (default 0)")
    p.add_argument("--format", choices=("csv", "md"), default="csv", help="report format")


def _add_eval_flags(p):
    p.add_argument("--folds", type=int, default=10, help="cross-validation folds (default 10)")
    p.add_argument("--smote-k", type=int, default=5, help="SMOTE neighbor count (default 5)")
    p.add_argument(
        "--smote-ratio",
        type=float,
        default=1.0,
        help="target minority/majority ratio; 0 disables SMOTE (default 1.0)",
    )
    p.add_argument(
        "--classifiers",
        default="all",
        help="comma-separated classifier kinds or 'all'",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="featrank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    weigh = sub.add_parser("weigh", help="rank attributes under six weighting algorithms")
    _add_io_flags(weigh)
    weigh.add_argument("--bins", type=int, default=10, help="bins for numeric attributes")
    weigh.add_argument("--relief-k", type=int, default=10, help="Relief neighbor count")

    ablate = sub.add_parser("ablate", help="with/without-feature paired evaluation")
    _add_io_flags(ablate)
    _add_eval_flags(ablate)
    ablate.add_argument("--feature", required=True, help="feature to ablate (e.g. ethnicity)")
    ablate.add_argument(
        "--save-model",
        action="store_true",
        help="also fit each classifier on the full table and write JSON models",
    )

    groups = sub.add_parser("groups", help="per-group rankings and winning classifiers")
    _add_io_flags(groups)
    _add_eval_flags(groups)
    groups.add_argument("--bins", type=int, default=10, help="bins for numeric attributes")
    groups.add_argument("--relief-k", type=int, default=10, help="Relief neighbor count")

    synth_p = sub.add_parser("synth", help="generate a synthetic cohort")
    synth_p.add_argument("--spec", help="SynthSpec JSON path (omit for the default cohort)")
    synth_p.add_argument("--rows", type=int, help="row count override for the default cohort")
    synth_p.add_argument("--out", required=True, help="output directory")
    synth_p.add_argument(
        "--seed", type=int, default=0, help="generation seed (overrides a spec file's when nonzero)"
    )

    report = sub.add_parser("report", help="re-render an emitted CSV report as Markdown")
    report.add_argument("--data", required=True, help="CSV report to convert")
    report.add_argument("--out", required=True, help="output directory")
    report.add_argument("--format", choices=("md",), default="md")
    return parser


def _validate_common(args) -> None:
    if getattr(args, "folds", 2) < 2:
        raise ConfigError("--folds must be at least 2")
    if getattr(args, "bins", 1) < 1:
        raise ConfigError("--bins must be at least 1")
    if getattr(args, "relief_k", 1) < 1:
        raise ConfigError("--relief-k must be at least 1")
    if getattr(args, "smote_k", 1) < 1:
        raise ConfigError("--smote-k must be at least 1")
    ratio = getattr(args, "smote_ratio", 1.0)
    if ratio < 0 or ratio > 1:
        raise ConfigError("--smote-ratio must be within [0, 1]")
    for attr in ("data", "schema", "spec"):
        path = getattr(args, attr, None)
        if path is not None and not Path(path).exists():
            raise ConfigError(f"--{attr} path does not exist: {path}")


def _selected_specs(args):
    names = [s.strip() for s in args.classifiers.split(",")] if args.classifiers != "all" else list(CLASSIFIERS)
    bad = [n for n in names if n not in CLASSIFIERS]
    if bad:
        raise ConfigError(f"unknown classifiers: {', '.join(bad)} (choose from {', '.join(CLASSIFIERS)})")
    specs = default_specs(args.seed)
    chosen = set(names)
    return [s for s in specs if s.kind in chosen]


def _load_table(args):
    schema = load_schema_json(args.schema)
    return load_csv(args.data, schema)


def _smote_config(args) -> SmoteConfig | None:
    if args.smote_ratio == 0:
        return None
    return SmoteConfig(
        k_neighbors=args.smote_k,
        target_ratio=args.smote_ratio,
        seed=derive_seed(args.seed, "smote"),
    )


def _emit(out_dir: Path, stem: str, rows, fmt: str) -> Path:
    path = out_dir / f"{stem}.{'md' if fmt == 'md' else 'csv'}"
    write_rows(path, rows, markdown=fmt == "md")
    return path


def cmd_weigh(args) -> int:
    table = _phase_data(_load_table, args)
    out_dir = _ensure_out(args.out)

    def compute():
        matrix = weigh_all(
            table, n_bins=args.bins, relief_k=args.relief_k, seed=derive_seed(args.seed, "weigh")
        )
        _emit(out_dir, "weights", weight_matrix_rows(matrix), args.format)
        if args.format == "md":
            _emit(out_dir, "weights", weight_matrix_rows(matrix), "csv")

    _phase_compute(compute)
    print(f"wrote weight report for {len(table.feature_names())} attributes to {out_dir}")
    return 0


def cmd_ablate(args) -> int:
    table = _phase_data(_load_table, args)
    out_dir = _ensure_out(args.out)
    specs = _selected_specs(args)
    if args.feature not in table.feature_names():
        raise ConfigError(f"--feature {args.feature!r} is not a feature column")

    def compute():
        plan = stratified_folds(table, args.folds, derive_seed(args.seed, "folds"))
        report = ablation(table, args.feature, specs, plan, _smote_config(args))
        for stem, rows in (
            ("without", eval_report_rows(report.without_report)),
            ("with", eval_report_rows(report.with_report)),
            ("delta", delta_rows(report)),
        ):
            _emit(out_dir, stem, rows, args.format)
            if args.format == "md":
                _emit(out_dir, stem, rows, "csv")
        if args.save_model:
            model_dir = out_dir / "models"
            model_dir.mkdir(exist_ok=True)
            for spec in specs:
                model = classifiers.fit(spec, table)
                doc = model_to_json(model)
                with open(model_dir / f"{spec.kind}.json", "w", encoding="utf-8") as fh:
                    json.dump(doc, fh, indent=2, sort_keys=True)
                    fh.write("\n")
        return report

    report = _phase_compute(compute)
    deltas = ", ".join(f"{m} {report.delta.get(m):+.4f}" for m in METRIC_NAMES)
    print(f"ablation of {args.feature!r} complete ({deltas}); reports in {out_dir}")
    return 0


def cmd_groups(args) -> int:
    table = _phase_data(_load_table, args)
    out_dir = _ensure_out(args.out)
    specs = _selected_specs(args)

    def compute():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rankings = per_group_rankings(
                table,
                top_n=5,
                n_bins=args.bins,
                relief_k=args.relief_k,
                seed=derive_seed(args.seed, "groups-rank"),
            )
            winners = best_classifier_per_group(
                table,
                specs,
                k=args.folds,
                seed=derive_seed(args.seed, "groups-best"),
                smote_cfg=_smote_config(args),
            )
        everyone = observed_groups(table)
        _emit(
            out_dir,
            "group_rankings",
            group_ranking_rows(rankings, [g for g in everyone if g not in rankings]),
            args.format,
        )
        _emit(
            out_dir,
            "group_winners",
            group_winner_rows(winners, [g for g in everyone if g not in winners]),
            args.format,
        )
        if args.format == "md":
            _emit(out_dir, "group_rankings", group_ranking_rows(rankings, [g for g in everyone if g not in rankings]), "csv")
            _emit(out_dir, "group_winners", group_winner_rows(winners, [g for g in everyone if g not in winners]), "csv")
        return rankings, winners

    rankings, winners = _phase_compute(compute)
    print(f"ranked {len(rankings)} groups, selected winners for {len(winners)}; reports in {out_dir}")
    return 0


def cmd_synth(args) -> int:
    if args.spec is not None:
        try:
            spec = synth.load_spec_json(args.spec)
        except (OSError, ValueError, KeyError) as exc:
            print(f"error: invalid synth spec: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        if args.seed:
            spec = synth.with_seed(spec, args.seed)
    else:
        spec = synth.default_cohort_spec(n_rows=args.rows or 1000, seed=args.seed)
    out_dir = _ensure_out(args.out)

    def compute():
        table, truth = synth.generate_with_truth(spec)
        with open(out_dir / "cohort.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(table_to_csv_text(table))
        with open(out_dir / "schema.json", "w", encoding="utf-8") as fh:
            json.dump(schema_to_json(table.schema), fh, indent=2)
            fh.write("\n")
        with open(out_dir / "truth.json", "w", encoding="utf-8") as fh:
            json.dump(truth, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return table, truth

    table, truth = _phase_compute(compute)
    counts = ", ".join(f"{g}={c}" for g, c in truth["group_counts"].items())
    print(
        f"generated {table.n_rows} rows, prevalence {truth['realized_prevalence']:.4f}; "
        f"groups: {counts}"
    )
    return 0


def cmd_report(args) -> int:
    src = Path(args.data)

    def load():
        rows = read_csv_rows(src)
        if not rows:
            raise ValueError(f"{src} is empty")
        return rows

    rows = _phase_data(load)
    out_dir = _ensure_out(args.out)
    out_path = out_dir / (src.stem + ".md")
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_markdown(rows))
    print(f"rendered {src} to {out_path}")
    return 0


class _DataError(Exception):
    pass


class _ComputeError(Exception):
    pass


def _phase_data(fn, *fn_args):
    try:
        return fn(*fn_args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise _DataError(str(exc)) from exc


def _phase_compute(fn):
    try:
        return fn()
    except _DataError:
        raise
    except Exception as exc:
        raise _ComputeError(f"{type(exc).__name__}: {exc}") from exc


def _ensure_out(out) -> Path:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate_common(args)
        handler = {
            "weigh": cmd_weigh,
            "ablate": cmd_ablate,
            "groups": cmd_groups,
            "synth": cmd_synth,
            "report": cmd_report,
        }[args.command]
        return handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _ComputeError as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
