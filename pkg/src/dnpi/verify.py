"""Randomised agreement check between the greedy CI bounds and the vertex oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ci import ci_multinomial, ci_polytope_oracle
from .direct import ContingencyView, majority_class_map


@dataclass(frozen=True)
class Mismatch:
    trial: int
    view: ContingencyView
    greedy: tuple
    oracle: tuple


def random_view(rng: np.random.Generator, k: int, n_classes: int, max_count: int) -> ContingencyView:
    """A k-category table with cell counts in ``[0, max_count]`` and no empty category."""
    rows = []
    for _ in range(k):
        row = rng.integers(0, max_count + 1, size=n_classes)
        if row.sum() == 0:
            row[rng.integers(n_classes)] = 1
        rows.append(tuple(int(v) for v in row))
    cats = tuple(f"c{i + 1}" for i in range(k))
    classes = tuple(f"C{i + 1}" for i in range(n_classes))
    return ContingencyView("random", cats, classes, tuple(rows))


def oracle_check(trials: int = 1000, k_min: int = 3, k_max: int = 7, max_count: int = 30,
                 seed: int = 42, max_classes: int = 4) -> list[Mismatch]:
    """Compare :func:`ci_multinomial` with :func:`ci_polytope_oracle` on random tables."""
    rng = np.random.default_rng(seed)
    bad = []
    for t in range(trials):
        k = int(rng.integers(k_min, k_max + 1))
        c = int(rng.integers(2, max_classes + 1))
        view = random_view(rng, k, c, max_count)
        link = majority_class_map(view)
        score = ci_multinomial(view, link)
        lo = ci_polytope_oracle(view, link, "min")
        hi = ci_polytope_oracle(view, link, "max")
        if (score.lower, score.upper) != (lo, hi):
            bad.append(Mismatch(t, view, (score.lower, score.upper), (lo, hi)))
    return bad
