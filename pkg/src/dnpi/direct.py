"""Direct NPI class intervals for a future instance, given one attribute's value."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from .errors import InputDomainError
from .npi import ProbabilityInterval

__all__ = ["ContingencyView", "conditional_class_interval", "majority_class_map"]


@dataclass(frozen=True)
class ContingencyView:
    """Cross-tabulation of one attribute against the class at a tree node.

    ``counts[i][c]`` is the number of node instances with attribute value
    ``category_labels[i]`` and class ``class_labels[c]``. Categories that do
    not occur at the node keep a row of zeros so the declared schema stays
    visible.
    """

    attribute_id: Hashable
    category_labels: tuple
    class_labels: tuple
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.counts)
        object.__setattr__(self, "counts", rows)
        object.__setattr__(self, "category_labels", tuple(self.category_labels))
        object.__setattr__(self, "class_labels", tuple(self.class_labels))
        if len(rows) != len(self.category_labels):
            raise InputDomainError("one count row is needed per category")
        if any(len(row) != len(self.class_labels) for row in rows):
            raise InputDomainError("count rows must have one entry per class")
        if any(v < 0 for row in rows for v in row):
            raise InputDomainError("counts must be non-negative")

    @classmethod
    def from_pairs(
        cls,
        attribute_id: Hashable,
        values: Sequence,
        classes: Sequence,
        category_labels: Sequence | None = None,
        class_labels: Sequence | None = None,
    ) -> "ContingencyView":
        """Tabulate paired (attribute value, class) observations."""
        if category_labels is None:
            category_labels = sorted(set(values), key=str)
        if class_labels is None:
            class_labels = sorted(set(classes), key=str)
        cat_index = {c: i for i, c in enumerate(category_labels)}
        cls_index = {c: i for i, c in enumerate(class_labels)}
        table = [[0] * len(class_labels) for _ in category_labels]
        for v, c in zip(values, classes, strict=True):
            try:
                table[cat_index[v]][cls_index[c]] += 1
            except KeyError as exc:
                raise InputDomainError(f"label {exc.args[0]!r} is not declared") from None
        return cls(attribute_id, tuple(category_labels), tuple(class_labels), tuple(map(tuple, table)))

    @property
    def per_category_totals(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.counts)

    @property
    def class_totals(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.counts)) if self.counts else ()

    @property
    def node_total(self) -> int:
        return sum(self.per_category_totals)

    def category_index(self, category) -> int:
        try:
            return self.category_labels.index(category)
        except ValueError:
            raise InputDomainError(
                f"unknown category {category!r} for attribute {self.attribute_id!r}"
            ) from None

    def class_index(self, klass) -> int:
        try:
            return self.class_labels.index(klass)
        except ValueError:
            raise InputDomainError(f"unknown class {klass!r}") from None

    def observed(self) -> "ContingencyView":
        """The same view restricted to categories that occur at this node."""
        keep = [i for i, t in enumerate(self.per_category_totals) if t > 0]
        return ContingencyView(
            self.attribute_id,
            tuple(self.category_labels[i] for i in keep),
            self.class_labels,
            tuple(self.counts[i] for i in keep),
        )


def _argmax_first(values: Sequence[int]) -> int:
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


def conditional_class_interval(view: ContingencyView, category, klass) -> ProbabilityInterval:
    """Interval for ``class = klass`` given the attribute takes ``category``.

    Returns ``[n_C/(n_c+1), (n_C+1)/(n_c+1)]``, which is vacuous when the
    category was never observed.
    """
    row = view.counts[view.category_index(category)]
    hits = row[view.class_index(klass)]
    total = sum(row)
    return ProbabilityInterval(Fraction(hits, total + 1), Fraction(hits + 1, total + 1))


def majority_class_map(view: ContingencyView) -> dict:
    """Link every category to its most frequent class.

    Ties go to the class listed first in ``view.class_labels``; categories with
    no instances inherit the node's majority class.
    """
    if not view.class_labels:
        raise InputDomainError("view has no classes")
    fallback = view.class_labels[_argmax_first(view.class_totals)]
    link = {}
    for label, row in zip(view.category_labels, view.counts):
        link[label] = view.class_labels[_argmax_first(row)] if sum(row) else fallback
    return link
