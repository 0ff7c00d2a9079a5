"""Command-line interface: ``dnpi <command> [options]``.

Commands: prep, train, predict, bench, inspect-splits, oracle-check, import-uci.
Failures print a single ``error: <Kind>: <message>`` line on stderr and exit
with status 2 (oracle mismatches exit with status 1).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .data import (
    Dataset,
    binarize_by_gain_ratio,
    discretize_equal_frequency,
    impute_modal,
    load_csv,
    read_schema,
    write_csv,
    write_schema,
)
from .datasets import UCI_READERS
from .errors import IngestionError, InputDomainError, ReportError
from .evaluation import ConfusionMatrix, accuracy, cross_validate, raw_log_lines, report_table
from .tree import ALGORITHMS, BuildParams, DecisionTree, build_tree, evaluate_splits_dnpi, node_views, pick_split, predict
from .verify import oracle_check

log = logging.getLogger("dnpi")

DEFAULT_FOLDS = 10
DEFAULT_REPEATS = 10
DEFAULT_SEED = 42
DEFAULT_MIN_SPLIT = 2

_CAVEAT = (
    "# preprocessing (imputation, bin edges, thresholds) is fitted on the full dataset before CV;\n"
    "# gain_ratio is an unpruned C4.5-style tree; credal-set baselines are not implemented."
)


def _schema_for(data_path: str, explicit: str | None):
    if explicit:
        return read_schema(explicit)
    sidecar = Path(data_path).with_suffix(".schema.json")
    return read_schema(sidecar) if sidecar.exists() else None


def _load(args, path: str | None = None) -> Dataset:
    path = path or args.data
    return load_csv(
        path,
        class_column=args.class_column,
        schema=_schema_for(path, getattr(args, "schema", None)),
        missing=args.missing,
        categorical=getattr(args, "categorical", False),
    )


def _config(args) -> dict:
    skip = {"func", "out", "verbose"}
    return {"version": __version__, **{k: v for k, v in sorted(vars(args).items()) if k not in skip}}


def _require_categorical(ds: Dataset) -> None:
    if not ds.is_categorical():
        raise IngestionError(
            f"dataset {ds.name!r} has numeric or missing cells; run 'dnpi prep' first"
        )


def cmd_prep(args) -> int:
    ds = _load(args)
    if args.impute:
        ds = impute_modal(ds)
    for spec in args.discretize or []:
        name, _, bins = spec.partition(":")
        ds = discretize_equal_frequency(ds, name, int(bins) if bins else 3)
    for name in args.binarize or []:
        ds = binarize_by_gain_ratio(ds, name)
        labels = ds.attributes[ds.attribute_index(name)].labels
        print(f"binarized {name} at threshold {labels[0][2:]}", file=sys.stderr)
    out = Path(args.out)
    write_csv(ds, out)
    write_schema(ds, out.with_suffix(".schema.json"), extra=_config(args))
    print(f"wrote {out} ({len(ds)} rows)")
    return 0


def cmd_train(args) -> int:
    ds = _load(args)
    _require_categorical(ds)
    tree = build_tree(ds, BuildParams(args.min_split, args.algo))
    doc = tree.to_dict()
    doc["config"] = _config(args)
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def _model_schema(tree: DecisionTree) -> dict:
    return {
        "class": tree.class_name,
        "class_labels": list(tree.class_labels),
        "attributes": [a.to_dict() for a in tree.attributes],
    }


def cmd_predict(args) -> int:
    tree = DecisionTree.from_dict(json.loads(Path(args.model).read_text(encoding="utf-8")))
    ds = load_csv(args.data, schema=_model_schema(tree), missing=args.missing)
    if ds.has_missing():
        raise IngestionError("prediction data has missing cells; impute first")
    preds = predict(tree, ds)
    labeled = all(t != "" for t in ds.targets)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["prediction", "actual"] if labeled else ["prediction"])
        for p, t in zip(preds, ds.targets):
            w.writerow([p, t] if labeled else [p])
    finally:
        if out is not sys.stdout:
            out.close()
    if labeled:
        acc = accuracy(ConfusionMatrix.from_predictions(ds.targets, preds, tree.class_labels))
        print(f"accuracy: {acc:.6f}", file=sys.stderr if out is sys.stdout else sys.stdout)
    return 0


def cmd_bench(args) -> int:
    paths = [p for item in args.data for p in item.split(",") if p]
    algos = [a for item in args.algo for a in item.split(",") if a]
    for a in algos:
        if a not in ALGORITHMS:
            raise InputDomainError(f"unknown algorithm {a!r}; choose from {ALGORITHMS}")
    if args.folds < 2:
        raise InputDomainError("--folds must be >= 2")
    reports = []
    for path in paths:
        ds = _load(args, path)
        _require_categorical(ds)
        for algo in algos:
            log.info("bench %s / %s", ds.name, algo)
            reports.append(cross_validate(
                ds, algo, BuildParams(args.min_split, algo), args.folds, args.repeats,
                args.seed, args.stratified, args.workers,
            ))
    config = _config(args)
    config.pop("workers", None)  # parallelism does not change results
    header = "# dnpi bench " + json.dumps(config, sort_keys=True) + "\n" + _CAVEAT
    tables = [report_table(reports, m) for m in ("accuracy", "in_sample_accuracy", "tree_size")]
    text = header + "\n\n" + "\n\n".join(tables) + "\n"
    print(text, end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text, encoding="utf-8")
        doc = {"config": config, "reports": [r.summary() for r in reports],
               "tables": {m: json.loads(report_table(reports, m, "json"))
                          for m in ("accuracy", "in_sample_accuracy", "tree_size")}}
        (out / "report.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        (out / "raw_log.jsonl").write_text("\n".join(raw_log_lines(reports, config)) + "\n", encoding="utf-8")
    return 0


def cmd_inspect_splits(args) -> int:
    ds = _load(args)
    _require_categorical(ds)
    views = node_views(ds)
    binary = [a.is_binary for a in ds.attributes]
    no_att, cands = evaluate_splits_dnpi(views, binary, len(ds.class_labels))
    chosen = pick_split(cands)
    if args.json:
        print(json.dumps({
            "no_attribute": [str(no_att.lower), str(no_att.upper)],
            "attributes": [{"attribute": c.attribute, "kind": "binary" if b else "multinomial",
                            "lower": str(c.score.lower), "upper": str(c.score.upper),
                            "lower_ok": c.lower_ok, "upper_ok": c.upper_ok,
                            "selected": c is chosen} for c, b in zip(cands, binary)],
        }, indent=2))
        return 0
    print(f"no attribute: [{float(no_att.lower):.12f}, {float(no_att.upper):.12f}]")
    w = max(9, *(len(c.attribute) for c in cands))
    print(f"{'attribute':<{w}}  {'kind':<11}  {'CI lower':>14}  {'CI upper':>14}  lower>  upper>  selected")
    for c, b in zip(cands, binary):
        print(f"{c.attribute:<{w}}  {'binary' if b else 'multinomial':<11}  "
              f"{float(c.score.lower):>14.12f}  {float(c.score.upper):>14.12f}  "
              f"{'pass' if c.lower_ok else 'fail':>6}  {'pass' if c.upper_ok else 'fail':>6}  "
              f"{'*' if c is chosen else ''}")
    return 0


def cmd_oracle_check(args) -> int:
    if args.k_max > 8 or args.k_min < 2 or args.k_min > args.k_max:
        raise InputDomainError("need 2 <= k-min <= k-max <= 8")
    if args.trials < 1:
        raise InputDomainError("--trials must be >= 1")
    bad = oracle_check(args.trials, args.k_min, args.k_max, args.max_count, args.seed)
    print(f"oracle-check seed={args.seed} trials={args.trials} k={args.k_min}..{args.k_max} "
          f"max_count={args.max_count} mismatches={len(bad)}")
    for m in bad:
        print(json.dumps({"trial": m.trial, "counts": m.view.counts,
                          "greedy": [str(x) for x in m.greedy], "oracle": [str(x) for x in m.oracle]}))
    return 1 if bad else 0


def cmd_import_uci(args) -> int:
    ds = UCI_READERS[args.kind](args.src)
    out = Path(args.out)
    write_csv(ds, out)
    write_schema(ds, out.with_suffix(".schema.json"), extra=_config(args))
    print(f"wrote {out} ({len(ds)} rows)")
    return 0


def _data_options(p: argparse.ArgumentParser, with_schema: bool = True) -> None:
    p.add_argument("--class-column", default=None, help="class column name (default: last column)")
    p.add_argument("--missing", default=None, help="missing-value marker (default '?')")
    p.add_argument("--categorical", action="store_true", help="treat every column as categorical")
    if with_schema:
        p.add_argument("--schema", default=None, help="schema sidecar JSON (default: <data>.schema.json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dnpi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dnpi {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="impute, discretize and binarize a CSV file")
    p.add_argument("--data", required=True)
    _data_options(p)
    p.add_argument("--impute", action="store_true", help="replace missing cells by column modes")
    p.add_argument("--discretize", action="append", metavar="ATTR[:BINS]",
                   help="equal-frequency discretization (3 bins labelled L/M/H by default)")
    p.add_argument("--binarize", action="append", metavar="ATTR",
                   help="two-category split at the best gain-ratio threshold")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("train", help="build a tree and write it as JSON")
    p.add_argument("--data", required=True)
    _data_options(p)
    p.add_argument("--algo", choices=ALGORITHMS, default="dnpi")
    p.add_argument("--min-split", type=int, default=DEFAULT_MIN_SPLIT)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify rows with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--missing", default=None)
    p.add_argument("--out", default=None, help="prediction CSV (default: stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("bench", help="repeated k-fold cross-validation report")
    p.add_argument("--data", action="append", required=True, help="CSV file(s); repeat or comma-separate")
    _data_options(p, with_schema=False)
    p.add_argument("--algo", action="append", default=None, help="dnpi,gain_ratio")
    p.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    p.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--min-split", type=int, default=DEFAULT_MIN_SPLIT)
    p.add_argument("--stratified", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="directory for report.txt, report.json, raw_log.jsonl")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("inspect-splits", help="root-node CI intervals and split conditions")
    p.add_argument("--data", required=True)
    _data_options(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_inspect_splits)

    p = sub.add_parser("oracle-check", help="greedy CI versus polytope vertex enumeration")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=7)
    p.add_argument("--max-count", type=int, default=30)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("import-uci", help="convert a raw UCI file to CSV plus schema sidecar")
    p.add_argument("--kind", choices=sorted(UCI_READERS), required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_import_uci)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "algo", None) is None and args.command == "bench":
        args.algo = ["dnpi"]
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (IngestionError, InputDomainError, ReportError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
