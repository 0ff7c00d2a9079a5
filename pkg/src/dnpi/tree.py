"""Tree induction: the D-NPI builder, an unpruned gain-ratio baseline, and prediction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence, Union

import numpy as np

from .ci import CIScore, correct_indication
from .classic import gain_ratio, information_gain
from .data import Attribute, Dataset
from .direct import ContingencyView
from .errors import InputDomainError
from .npi import (
    BernoulliRecord,
    MultinomialCounts,
    ProbabilityInterval,
    bernoulli_next_interval,
    multinomial_singleton_interval,
)

__all__ = [
    "Leaf",
    "Node",
    "DecisionTree",
    "BuildParams",
    "SplitCandidate",
    "no_attribute_interval",
    "evaluate_splits_dnpi",
    "select_split_dnpi",
    "pick_split",
    "build_dnpi",
    "build_gain_ratio_tree",
    "build_tree",
    "classify",
    "predict",
    "tree_size",
    "tree_depth",
    "node_views",
]

ALGORITHMS = ("dnpi", "gain_ratio")
GAIN_EPS = 1e-12


@dataclass(frozen=True)
class Leaf:
    label: str
    count: int = 0
    class_counts: tuple[int, ...] = ()


@dataclass(frozen=True)
class Node:
    attribute: str
    branches: tuple[tuple[str, "TreeNode"], ...]
    fallback: str
    count: int = 0
    class_counts: tuple[int, ...] = ()

    def child(self, category) -> "TreeNode | None":
        for cat, sub in self.branches:
            if cat == category:
                return sub
        return None


TreeNode = Union[Leaf, Node]


@dataclass(frozen=True)
class BuildParams:
    min_split: int = 2
    algorithm: Literal["dnpi", "gain_ratio"] = "dnpi"

    def __post_init__(self):
        if self.min_split < 2:
            raise InputDomainError(f"min_split must be >= 2, got {self.min_split}")
        if self.algorithm not in ALGORITHMS:
            raise InputDomainError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    attributes: tuple[Attribute, ...]
    class_name: str
    class_labels: tuple[str, ...]
    params: BuildParams = field(default_factory=BuildParams)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def to_dict(self) -> dict:
        return {
            "format": "dnpi-tree",
            "version": 1,
            "algorithm": self.params.algorithm,
            "min_split": self.params.min_split,
            "class": self.class_name,
            "class_labels": list(self.class_labels),
            "attributes": [a.to_dict() for a in self.attributes],
            "root": _node_to_dict(self.root),
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "DecisionTree":
        if doc.get("format") != "dnpi-tree":
            raise InputDomainError("not a serialized dnpi tree")
        attrs = tuple(
            Attribute(a["name"], tuple(a.get("labels", ())), bool(a.get("numeric", False)))
            for a in doc["attributes"]
        )
        return cls(
            root=_node_from_dict(doc["root"]),
            attributes=attrs,
            class_name=doc["class"],
            class_labels=tuple(doc["class_labels"]),
            params=BuildParams(doc["min_split"], doc["algorithm"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "DecisionTree":
        return cls.from_dict(json.loads(text))


def _node_to_dict(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {"kind": "leaf", "label": node.label, "count": node.count,
                "class_counts": list(node.class_counts)}
    return {
        "kind": "internal",
        "attribute": node.attribute,
        "fallback": node.fallback,
        "count": node.count,
        "class_counts": list(node.class_counts),
        "branches": [{"category": c, "child": _node_to_dict(s)} for c, s in node.branches],
    }


def _node_from_dict(d: Mapping) -> TreeNode:
    if d["kind"] == "leaf":
        return Leaf(d["label"], d["count"], tuple(d["class_counts"]))
    return Node(
        d["attribute"],
        tuple((b["category"], _node_from_dict(b["child"])) for b in d["branches"]),
        d["fallback"],
        d["count"],
        tuple(d["class_counts"]),
    )


def _majority(class_counts: Sequence[int]) -> int:
    best = 0
    for i, c in enumerate(class_counts):
        if c > class_counts[best]:
            best = i
    return best


def no_attribute_interval(class_counts: Sequence[int], n_classes: int | None = None) -> ProbabilityInterval:
    """NPI interval for simply predicting the node's most common class.

    Binary targets use the Bernoulli next-observation interval; three or more
    declared classes use the NPI-M singleton interval of the largest class.
    """
    counts = tuple(int(c) for c in class_counts)
    n = sum(counts)
    if n < 1:
        raise InputDomainError("no-attribute interval needs a nonempty node")
    if n_classes is None:
        n_classes = len(counts)
    top = _majority(counts)
    if n_classes <= 2:
        return bernoulli_next_interval(BernoulliRecord(n, counts[top]))
    return multinomial_singleton_interval(MultinomialCounts(counts, n_classes), top)


@dataclass(frozen=True)
class SplitCandidate:
    attribute: str
    score: CIScore
    lower_ok: bool
    upper_ok: bool

    @property
    def eligible(self) -> bool:
        return self.lower_ok and self.upper_ok


def evaluate_splits_dnpi(
    views: Sequence[ContingencyView], binary: Sequence[bool], n_classes: int | None = None
) -> tuple[ProbabilityInterval, list[SplitCandidate]]:
    """Score every attribute view and test both strict split conditions."""
    if not views:
        raise InputDomainError("at least one attribute view is required")
    no_att = no_attribute_interval(views[0].class_totals, n_classes)
    out = []
    for view, is_bin in zip(views, binary, strict=True):
        s = correct_indication(view, is_bin)
        out.append(SplitCandidate(view.attribute_id, s, s.lower > no_att.lower, s.upper > no_att.upper))
    return no_att, out


def pick_split(candidates: Sequence[SplitCandidate]) -> SplitCandidate | None:
    """Eligible candidate with the largest (lower, upper) CI; earlier attributes win ties."""
    best = None
    for c in candidates:  # schema order; strict comparison keeps the earlier one on ties
        if c.eligible and (best is None or (c.score.lower, c.score.upper) > (best.score.lower, best.score.upper)):
            best = c
    return best


class _Encoded:
    """Integer-coded training data shared by the recursive builders."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self.X, self.y = dataset.encoded()
        self.n_classes = len(dataset.class_labels)
        self.arity = [len(a.labels) for a in dataset.attributes]

    def class_counts(self, rows: np.ndarray) -> tuple[int, ...]:
        return tuple(int(c) for c in np.bincount(self.y[rows], minlength=self.n_classes))

    def view(self, rows: np.ndarray, j: int) -> ContingencyView:
        k, c = self.arity[j], self.n_classes
        flat = np.bincount(self.X[rows, j] * c + self.y[rows], minlength=k * c)
        table = tuple(tuple(int(v) for v in flat[i * c : (i + 1) * c]) for i in range(k))
        attr = self.dataset.attributes[j]
        return ContingencyView(attr.name, attr.labels, self.dataset.class_labels, table)


def node_views(dataset: Dataset, attributes: Sequence[str] | None = None) -> list[ContingencyView]:
    """Contingency views of the listed attributes over the whole dataset."""
    enc = _Encoded(dataset)
    names = dataset.attribute_names if attributes is None else tuple(attributes)
    rows = np.arange(len(dataset))
    return [enc.view(rows, dataset.attribute_index(a)) for a in names]


def select_split_dnpi(dataset: Dataset, attributes: Sequence[str] | None = None) -> str | None:
    """Attribute the D-NPI builder would split ``dataset`` on, or ``None``."""
    names = dataset.attribute_names if attributes is None else tuple(attributes)
    if not names or len(dataset) == 0:
        return None
    views = node_views(dataset, names)
    binary = [dataset.attributes[dataset.attribute_index(a)].is_binary for a in names]
    _, cands = evaluate_splits_dnpi(views, binary, len(dataset.class_labels))
    best = pick_split(cands)
    return None if best is None else best.attribute


def _choose_dnpi(enc: _Encoded, rows, available) -> int | None:
    views = [enc.view(rows, j) for j in available]
    binary = [enc.arity[j] == 2 for j in available]
    _, cands = evaluate_splits_dnpi(views, binary, enc.n_classes)
    best = pick_split(cands)
    if best is None:
        return None
    return available[[c.attribute for c in cands].index(best.attribute)]


def _choose_gain_ratio(enc: _Encoded, rows, available) -> int | None:
    best, best_gr = None, -1.0
    for j in available:
        view = enc.view(rows, j)
        if information_gain(view) <= GAIN_EPS:
            continue
        gr = gain_ratio(view)
        if gr > best_gr:
            best, best_gr = j, gr
    return best


def _grow(enc: _Encoded, rows: np.ndarray, available: list[int], params: BuildParams, choose) -> TreeNode:
    counts = enc.class_counts(rows)
    labels = enc.dataset.class_labels
    majority = labels[_majority(counts)]
    n = int(len(rows))
    if sum(1 for c in counts if c) == 1 or not available or n < params.min_split:
        return Leaf(majority, n, counts)
    j = choose(enc, rows, available)
    if j is None:
        return Leaf(majority, n, counts)
    attr = enc.dataset.attributes[j]
    rest = [a for a in available if a != j]
    col = enc.X[rows, j]
    branches = []
    for code, cat in enumerate(attr.labels):
        sub = rows[col == code]
        if len(sub) == 0:
            branches.append((cat, Leaf(majority, 0, (0,) * len(labels))))
        else:
            branches.append((cat, _grow(enc, sub, rest, params, choose)))
    return Node(attr.name, tuple(branches), majority, n, counts)


def _build(dataset: Dataset, params: BuildParams, choose) -> DecisionTree:
    if len(dataset) == 0:
        raise InputDomainError("cannot build a tree from an empty dataset")
    enc = _Encoded(dataset)
    root = _grow(enc, np.arange(len(dataset)), list(range(len(dataset.attributes))), params, choose)
    return DecisionTree(root, dataset.attributes, dataset.class_name, dataset.class_labels, params)


def build_dnpi(dataset: Dataset, params: BuildParams | None = None) -> DecisionTree:
    """Grow a D-NPI tree, splitting only where CI beats the no-attribute interval on both ends."""
    params = params or BuildParams()
    if params.algorithm != "dnpi":
        params = BuildParams(params.min_split, "dnpi")
    return _build(dataset, params, _choose_dnpi)


def build_gain_ratio_tree(dataset: Dataset, params: BuildParams | None = None) -> DecisionTree:
    """Unpruned C4.5-style tree: split on the best gain ratio among informative attributes."""
    params = params or BuildParams(algorithm="gain_ratio")
    if params.algorithm != "gain_ratio":
        params = BuildParams(params.min_split, "gain_ratio")
    return _build(dataset, params, _choose_gain_ratio)


def build_tree(dataset: Dataset, params: BuildParams) -> DecisionTree:
    if params.algorithm == "dnpi":
        return build_dnpi(dataset, params)
    return build_gain_ratio_tree(dataset, params)


def classify(tree: DecisionTree, instance: Mapping | Sequence) -> str:
    """Predict the class of one instance.

    ``instance`` maps attribute names to values, or lists values in the
    tree's attribute order. Values with no branch fall back to the node's
    training majority.
    """
    if not isinstance(instance, Mapping):
        if len(instance) != len(tree.attributes):
            raise InputDomainError(
                f"instance has {len(instance)} values, tree expects {len(tree.attributes)}"
            )
        instance = dict(zip(tree.attribute_names, instance))
    node = tree.root
    while isinstance(node, Node):
        if node.attribute not in instance:
            raise InputDomainError(f"instance lacks attribute {node.attribute!r}")
        sub = node.child(instance[node.attribute])
        if sub is None:
            return node.fallback
        node = sub
    return node.label


def predict(tree: DecisionTree, dataset: Dataset) -> list[str]:
    missing = [a for a in tree.attribute_names if a not in dataset.attribute_names]
    if missing:
        raise InputDomainError(f"data lacks model attributes {missing}")
    names = dataset.attribute_names
    return [classify(tree, dict(zip(names, row))) for row in dataset.rows]


def tree_size(tree: DecisionTree | TreeNode) -> int:
    """Number of leaves."""
    node = tree.root if isinstance(tree, DecisionTree) else tree
    if isinstance(node, Leaf):
        return 1
    return sum(tree_size(sub) for _, sub in node.branches)


def tree_depth(tree: DecisionTree | TreeNode) -> int:
    node = tree.root if isinstance(tree, DecisionTree) else tree
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(sub) for _, sub in node.branches)
