"""Cross-validation harness, accuracy measures and report tables."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import fmean
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .data import Dataset
from .errors import InputDomainError, ReportError
from .tree import BuildParams, build_tree, predict, tree_size

__all__ = [
    "ConfusionMatrix",
    "FoldResult",
    "EvalReport",
    "accuracy",
    "kfold_split",
    "cross_validate",
    "report_table",
    "raw_log_lines",
]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed ``table[predicted][actual]`` over ``labels``."""

    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    @classmethod
    def from_predictions(cls, actual: Sequence, predicted: Sequence, labels: Sequence) -> "ConfusionMatrix":
        idx = {lab: i for i, lab in enumerate(labels)}
        t = [[0] * len(labels) for _ in labels]
        for a, p in zip(actual, predicted, strict=True):
            t[idx[p]][idx[a]] += 1
        return cls(tuple(labels), tuple(map(tuple, t)))

    @property
    def total(self) -> int:
        return sum(map(sum, self.table))

    @property
    def correct(self) -> int:
        return sum(self.table[i][i] for i in range(len(self.labels)))


def accuracy(matrix: ConfusionMatrix) -> float:
    """Fraction of instances on the diagonal."""
    if matrix.total < 1:
        raise InputDomainError("accuracy of an empty confusion matrix is undefined")
    return matrix.correct / matrix.total


def kfold_split(
    n: int,
    k: int = 10,
    seed: int | np.random.SeedSequence | None = 0,
    strata: Sequence | None = None,
) -> list[np.ndarray]:
    """Partition ``range(n)`` into ``k`` shuffled folds whose sizes differ by at most one.

    With ``strata`` (one label per instance) each label is dealt round-robin
    across folds after shuffling, so class proportions are balanced.
    """
    if k < 2:
        raise InputDomainError("k must be >= 2")
    if n < k:
        raise InputDomainError(f"cannot split {n} instances into {k} folds")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    if strata is None:
        return [np.sort(f) for f in np.array_split(perm, k)]
    labels = np.asarray(strata)[perm]
    dealt = np.concatenate([perm[labels == lab] for lab in sorted(set(labels.tolist()), key=str)])
    folds = [[] for _ in range(k)]
    for pos, i in enumerate(dealt):
        folds[pos % k].append(int(i))
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]


@dataclass(frozen=True)
class FoldResult:
    repeat: int
    fold: int
    seed: int
    n_train: int
    n_test: int
    accuracy: float
    in_sample_accuracy: float
    tree_size: int


@dataclass(frozen=True)
class EvalReport:
    dataset: str
    algorithm: str
    folds: int
    repeats: int
    seed: int
    min_split: int
    stratified: bool
    runs: tuple[FoldResult, ...] = field(repr=False)

    @property
    def accuracy(self) -> float:
        """Mean held-out accuracy in percent."""
        return 100.0 * fmean(r.accuracy for r in self.runs)

    @property
    def in_sample_accuracy(self) -> float:
        return 100.0 * fmean(r.in_sample_accuracy for r in self.runs)

    @property
    def tree_size(self) -> float:
        return fmean(r.tree_size for r in self.runs)

    def summary(self) -> dict:
        return {
            "dataset": self.dataset,
            "algorithm": self.algorithm,
            "folds": self.folds,
            "repeats": self.repeats,
            "seed": self.seed,
            "min_split": self.min_split,
            "stratified": self.stratified,
            "accuracy": self.accuracy,
            "in_sample_accuracy": self.in_sample_accuracy,
            "tree_size": self.tree_size,
        }


def _run_fold(dataset: Dataset, params: BuildParams, train_idx, test_idx, repeat, fold, seed) -> FoldResult:
    if len(train_idx) == 0:
        raise RuntimeError(f"repeat {repeat} fold {fold}: empty training fold")
    train, test = dataset.subset(train_idx), dataset.subset(test_idx)
    model = build_tree(train, params)
    labels = dataset.class_labels
    test_cm = ConfusionMatrix.from_predictions(test.targets, predict(model, test), labels)
    train_cm = ConfusionMatrix.from_predictions(train.targets, predict(model, train), labels)
    return FoldResult(
        repeat, fold, seed, len(train_idx), len(test_idx),
        accuracy(test_cm), accuracy(train_cm), tree_size(model),
    )


def _run_fold_star(args):
    return _run_fold(*args)


def cross_validate(
    dataset: Dataset,
    algorithm: str = "dnpi",
    params: BuildParams | None = None,
    k: int = 10,
    repeats: int = 10,
    seed: int = 42,
    stratified: bool = False,
    workers: int = 1,
) -> EvalReport:
    """Repeated k-fold cross-validation of one algorithm on one dataset.

    Repeat ``r`` shuffles with seed ``seed + r``. Results are ordered by
    (repeat, fold) whatever ``workers`` is, so reports are reproducible.
    """
    min_split = params.min_split if params else 2
    params = BuildParams(min_split, algorithm)
    n = len(dataset)
    jobs = []
    for r in range(repeats):
        fold_seed = seed + r
        folds = kfold_split(n, k, fold_seed, dataset.targets if stratified else None)
        everything = np.arange(n)
        for f, test_idx in enumerate(folds):
            train_idx = np.setdiff1d(everything, test_idx, assume_unique=True)
            jobs.append((dataset, params, train_idx, test_idx, r, f, fold_seed))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_fold_star, jobs))
    else:
        runs = [_run_fold(*job) for job in jobs]
    return EvalReport(dataset.name, algorithm, k, repeats, seed, min_split, stratified, tuple(runs))


def raw_log_lines(reports: Iterable[EvalReport], config: dict | None = None) -> list[str]:
    """JSON lines: one config header, then one record per (dataset, algorithm, repeat, fold)."""
    header = {"record": "config", "version": __version__, **(config or {})}
    lines = [json.dumps(header, sort_keys=True)]
    for rep in reports:
        for run in rep.runs:
            rec = {"record": "fold", "dataset": rep.dataset, "algorithm": rep.algorithm,
                   "min_split": rep.min_split, "stratified": rep.stratified, **asdict(run)}
            lines.append(json.dumps(rec, sort_keys=True))
    return lines


_METRICS = {
    "accuracy": ("Test accuracy (%)", True),
    "in_sample_accuracy": ("In-sample accuracy (%)", True),
    "tree_size": ("Average tree size (leaves)", False),
}


def report_table(reports: Sequence[EvalReport], metric: str = "accuracy", fmt: str = "text") -> str:
    """Render one metric as a dataset-by-algorithm table with a column-average footer.

    The best value in each row is starred (text) or bolded (markdown); for
    tree size the smallest is best. ``fmt="json"`` returns the same cells as a
    JSON document.
    """
    if not reports:
        raise ReportError("no reports to tabulate")
    if metric not in _METRICS:
        raise ReportError(f"unknown metric {metric!r}")
    title, higher_better = _METRICS[metric]
    algos = list(dict.fromkeys(r.algorithm for r in reports))
    datasets = list(dict.fromkeys(r.dataset for r in reports))
    cell = {(r.dataset, r.algorithm): getattr(r, metric) for r in reports}
    gaps = [f"{d}/{a}" for d in datasets for a in algos if (d, a) not in cell]
    if gaps:
        raise ReportError("missing dataset/algorithm results: " + ", ".join(gaps))

    rows = [(d, [cell[d, a] for a in algos]) for d in datasets]
    averages = [fmean(vals[i] for _, vals in rows) for i in range(len(algos))]

    def best(vals):
        target = max(vals) if higher_better else min(vals)
        return [round(v, 2) == round(target, 2) for v in vals]

    if fmt == "json":
        return json.dumps({
            "metric": metric,
            "algorithms": algos,
            "rows": [{"dataset": d, "values": dict(zip(algos, vals)),
                      "best": [a for a, b in zip(algos, best(vals)) if b]} for d, vals in rows],
            "average": dict(zip(algos, averages)),
        }, indent=2, sort_keys=True)

    if fmt == "markdown":
        out = [f"| Dataset | {' | '.join(algos)} |", "|---" * (len(algos) + 1) + "|"]
        for d, vals in rows + [("Average", averages)]:
            cells = [f"**{v:.2f}**" if b else f"{v:.2f}" for v, b in zip(vals, best(vals))]
            out.append(f"| {d} | {' | '.join(cells)} |")
        return "\n".join(out)

    if fmt != "text":
        raise ReportError(f"unknown format {fmt!r}")
    name_w = max(len("Dataset"), len("Average"), *(len(d) for d in datasets))
    col_w = max(9, *(len(a) + 1 for a in algos))
    out = [title, f"{'Dataset':<{name_w}}" + "".join(f"{a:>{col_w}}" for a in algos)]
    rule = "-" * (name_w + col_w * len(algos))
    out.insert(1, rule)
    out.append(rule)
    for d, vals in rows + [("Average", averages)]:
        if d == "Average":
            out.append(rule)
        cells = [f"{v:.2f}{'*' if b else ' '}" for v, b in zip(vals, best(vals))]
        out.append(f"{d:<{name_w}}" + "".join(f"{c:>{col_w}}" for c in cells))
    return "\n".join(out)
