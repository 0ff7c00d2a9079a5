import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dnpi.datasets import load_lenses
from dnpi.errors import InputDomainError, ReportError
from dnpi.evaluation import (
    ConfusionMatrix,
    EvalReport,
    FoldResult,
    accuracy,
    cross_validate,
    kfold_split,
    raw_log_lines,
    report_table,
)
from dnpi.tree import BuildParams

from factories import make_dataset


class TestAccuracy:
    def test_two_by_two(self):
        # predicted rows, actual columns: TN=40, FN=5 / FP=5, TP=50
        cm = ConfusionMatrix(("neg", "pos"), ((40, 5), (5, 50)))
        assert accuracy(cm) == 0.90

    def test_diagonal(self):
        assert accuracy(ConfusionMatrix(("a", "b", "c"), ((3, 0, 0), (0, 4, 0), (0, 0, 1)))) == 1.0

    def test_from_predictions(self):
        cm = ConfusionMatrix.from_predictions(["a", "b", "b"], ["a", "a", "b"], ("a", "b"))
        assert cm.table == ((1, 1), (0, 1))
        assert accuracy(cm) == pytest.approx(2 / 3)

    def test_empty(self):
        with pytest.raises(InputDomainError):
            accuracy(ConfusionMatrix(("a",), ((0,),)))

    def test_random_guessing(self):
        rng = np.random.default_rng(7)
        labels = ("a", "b", "c", "d")
        actual = rng.choice(labels, 20000)
        guess = rng.choice(labels, 20000)
        assert accuracy(ConfusionMatrix.from_predictions(actual, guess, labels)) == pytest.approx(0.25, abs=0.02)


class TestKFold:
    def test_sizes_for_lenses(self):
        sizes = sorted(len(f) for f in kfold_split(24, 10, 42))
        assert sizes == [2] * 6 + [3] * 4

    @given(st.integers(2, 12), st.integers(0, 60), st.integers(0, 10**6))
    def test_partition(self, k, extra, seed):
        n = k + extra
        folds = kfold_split(n, k, seed)
        assert sorted(np.concatenate(folds).tolist()) == list(range(n))
        sizes = [len(f) for f in folds]
        assert max(sizes) - min(sizes) <= 1
        assert all(np.array_equal(a, b) for a, b in zip(folds, kfold_split(n, k, seed)))

    def test_seed_changes_folds(self):
        assert any(not np.array_equal(a, b) for a, b in zip(kfold_split(50, 5, 1), kfold_split(50, 5, 2)))

    def test_stratified_balances_classes(self):
        strata = ["a"] * 30 + ["b"] * 10
        for f in kfold_split(40, 10, 3, strata):
            assert sorted(strata[i] for i in f) == ["a", "a", "a", "b"]

    def test_too_few_instances(self):
        with pytest.raises(InputDomainError):
            kfold_split(5, 10)
        with pytest.raises(InputDomainError):
            kfold_split(5, 1)


def test_majority_classifier_accuracy():
    rng = np.random.default_rng(0)
    d = make_dataset({"noise": [f"v{v}" for v in rng.integers(0, 3, 200)]}, ["P"] * 180 + ["N"] * 20)
    rep = cross_validate(d, "dnpi", BuildParams(min_split=10**6), k=10, repeats=10, seed=1)
    assert len(rep.runs) == 100
    assert rep.tree_size == 1
    assert rep.accuracy == pytest.approx(90.0, abs=5.0)


def test_cross_validate_is_reproducible_and_ordered():
    d = load_lenses()
    a = cross_validate(d, "dnpi", k=4, repeats=3, seed=5)
    b = cross_validate(d, "dnpi", k=4, repeats=3, seed=5, workers=2)
    assert a == b
    assert [(r.repeat, r.fold) for r in a.runs] == [(r, f) for r in range(3) for f in range(4)]
    assert [r.seed for r in a.runs[::4]] == [5, 6, 7]
    assert all(r.n_train + r.n_test == 24 for r in a.runs)


def report(dataset, algo, acc, size=3):
    run = FoldResult(0, 0, 0, 9, 1, acc / 100, 1.0, size)
    return EvalReport(dataset, algo, 10, 1, 0, 2, False, (run,))


class TestReportTable:
    reports = [report("d1", "dnpi", 80, 3), report("d1", "gain_ratio", 70, 5),
               report("d2", "dnpi", 60, 4), report("d2", "gain_ratio", 60, 2)]

    def test_text_layout(self):
        text = report_table(self.reports)
        lines = text.splitlines()
        assert lines[0] == "Test accuracy (%)"
        assert "80.00*" in text and "70.00 " in text
        assert lines[-1].split()[:3] == ["Average", "70.00*", "65.00"]

    def test_ties_mark_every_best(self):
        row = [ln for ln in report_table(self.reports).splitlines() if ln.startswith("d2")][0]
        assert row.count("*") == 2

    def test_smallest_tree_is_best(self):
        md = report_table(self.reports, "tree_size", "markdown")
        assert "| d1 | **3.00** | 5.00 |" in md and "| d2 | 4.00 | **2.00** |" in md

    def test_json(self):
        doc = json.loads(report_table(self.reports, fmt="json"))
        assert doc["average"] == {"dnpi": 70.0, "gain_ratio": 65.0}
        assert doc["rows"][1]["best"] == ["dnpi", "gain_ratio"]

    def test_missing_cell(self):
        with pytest.raises(ReportError):
            report_table(self.reports[:3])

    def test_bad_arguments(self):
        with pytest.raises(ReportError):
            report_table(self.reports, "f1")
        with pytest.raises(ReportError):
            report_table(self.reports, fmt="html")
        with pytest.raises(ReportError):
            report_table([])


def test_raw_log_lines():
    lines = raw_log_lines(TestReportTable.reports[:1], {"seed": 0})
    head, rec = json.loads(lines[0]), json.loads(lines[1])
    assert head["record"] == "config" and head["seed"] == 0
    assert rec["record"] == "fold" and rec["dataset"] == "d1" and rec["tree_size"] == 3
