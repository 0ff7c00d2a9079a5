"""Entropy-based split measures (information gain, split information, gain ratio)."""

from __future__ import annotations

import math
from typing import Sequence

from .direct import ContingencyView
from .errors import InputDomainError

__all__ = ["entropy", "information_gain", "split_information", "gain_ratio"]


def entropy(class_counts: Sequence[int]) -> float:
    """Shannon entropy in bits of a count vector; zero counts contribute nothing."""
    total = sum(class_counts)
    if total <= 0:
        raise InputDomainError("entropy of an empty count vector is undefined")
    h = 0.0
    for c in class_counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def information_gain(view: ContingencyView) -> float:
    n = view.node_total
    if n < 1:
        raise InputDomainError("information gain needs a nonempty node")
    remainder = sum(sum(row) / n * entropy(row) for row in view.counts if sum(row))
    return entropy(view.class_totals) - remainder


def split_information(view: ContingencyView) -> float:
    n = view.node_total
    if n < 1:
        raise InputDomainError("split information needs a nonempty node")
    return entropy(view.per_category_totals)


def gain_ratio(view: ContingencyView) -> float:
    """Information gain over split information, or 0 when the split has one branch."""
    si = split_information(view)
    if si <= 0.0:
        return 0.0
    return information_gain(view) / si
