"""Correct Indication (CI) split criterion.

CI is the weighted probability that an attribute's value points at the class
it is linked to. The weights are the attribute's own category probabilities,
which NPI only pins down to an interval (binary attributes) or a box-and-simplex
polytope (multinomial attributes); the lower and upper CI values are the
extremes of the weighted average over that set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Literal, Mapping, Sequence

from .direct import ContingencyView, majority_class_map
from .errors import InputDomainError
from .npi import ProbabilityInterval

__all__ = [
    "CIScore",
    "ci_binary",
    "ci_multinomial",
    "ci_polytope_oracle",
    "correct_indication",
]


@dataclass(frozen=True)
class CIScore:
    attribute_id: Hashable
    interval: ProbabilityInterval
    category_labels: tuple
    lower_mass_vector: tuple[Fraction, ...]
    upper_mass_vector: tuple[Fraction, ...]

    @property
    def lower(self) -> Fraction:
        return self.interval.lower

    @property
    def upper(self) -> Fraction:
        return self.interval.upper


def _linked_fractions(view: ContingencyView, class_link: Mapping | None):
    """Per-category (hits, total) for the linked class."""
    if class_link is None:
        class_link = majority_class_map(view)
    out = []
    for label, row in zip(view.category_labels, view.counts):
        try:
            klass = class_link[label]
        except KeyError:
            raise InputDomainError(f"class link has no entry for category {label!r}") from None
        out.append((row[view.class_index(klass)], sum(row)))
    return out


def ci_binary(view: ContingencyView, class_link: Mapping | None = None) -> CIScore:
    """CI for a two-category attribute, using the Bernoulli interval for ``P(t = 1)``.

    The second declared category plays the role of ``t = 1``.
    """
    if len(view.category_labels) != 2:
        raise InputDomainError(
            f"binary CI needs exactly two categories, got {len(view.category_labels)}"
        )
    n = view.node_total
    if n < 1:
        raise InputDomainError("binary CI needs a nonempty node")
    (h0, n0), (h1, n1) = _linked_fractions(view, class_link)
    p_lo, p_hi = Fraction(n1, n + 1), Fraction(n1 + 1, n + 1)

    f0, f1 = Fraction(h0, n0 + 1), Fraction(h1, n1 + 1)
    p_min = p_hi if f0 >= f1 else p_lo
    lower = f0 * (1 - p_min) + f1 * p_min

    g0, g1 = Fraction(h0 + 1, n0 + 1), Fraction(h1 + 1, n1 + 1)
    p_max = p_hi if g0 <= g1 else p_lo
    upper = g0 * (1 - p_max) + g1 * p_max

    return CIScore(
        view.attribute_id,
        ProbabilityInterval(lower, upper),
        view.category_labels,
        (1 - p_min, p_min),
        (1 - p_max, p_max),
    )


def _greedy_masses(counts: Sequence[int], weights: Sequence[Fraction], largest: bool):
    # Everyone starts at (n_i - 1)/n; the k/n left over goes 2/n at a time to
    # the categories at the favourable end, with 1/n to the middle one if k is odd.
    n, k = sum(counts), len(counts)
    half = k // 2
    extra = [0] * k
    asc = sorted(range(k), key=lambda i: weights[i])
    for i in (asc[k - half :] if largest else asc[:half]):
        extra[i] = 2
    if k % 2:
        extra[asc[half]] = 1
    return tuple(Fraction(c - 1 + e, n) for c, e in zip(counts, extra))


def ci_multinomial(view: ContingencyView, class_link: Mapping | None = None) -> CIScore:
    """CI for an attribute with three or more declared categories.

    ``view`` must contain observed categories only (see
    :meth:`ContingencyView.observed`). A single observed category gives the
    degenerate score with all mass on that category.
    """
    totals = view.per_category_totals
    if not totals:
        raise InputDomainError("multinomial CI needs at least one observed category")
    if any(t == 0 for t in totals):
        raise InputDomainError("unobserved categories must be dropped before computing CI")
    fr = _linked_fractions(view, class_link)
    f = [Fraction(h, t + 1) for h, t in fr]
    g = [Fraction(h + 1, t + 1) for h, t in fr]
    if len(totals) == 1:
        one = (Fraction(1),)
        return CIScore(view.attribute_id, ProbabilityInterval(f[0], g[0]), view.category_labels, one, one)

    lo_mass = _greedy_masses(totals, f, largest=False)
    hi_mass = _greedy_masses(totals, g, largest=True)
    lower = sum(fi * pi for fi, pi in zip(f, lo_mass))
    upper = sum(gi * pi for gi, pi in zip(g, hi_mass))
    return CIScore(
        view.attribute_id,
        ProbabilityInterval(lower, upper),
        view.category_labels,
        lo_mass,
        hi_mass,
    )


def _box_simplex_vertices(lows: Sequence[Fraction], highs: Sequence[Fraction]):
    """Yield every vertex of ``{p : lows <= p <= highs, sum(p) = 1}``.

    A vertex has all coordinates but at most one at a box endpoint; the free
    coordinate is whatever closes the simplex constraint.
    """
    k = len(lows)
    for free in range(-1, k):
        fixed = [i for i in range(k) if i != free]
        for picks in itertools.product((0, 1), repeat=len(fixed)):
            p = [None] * k
            for i, hi in zip(fixed, picks):
                p[i] = highs[i] if hi else lows[i]
            rest = 1 - sum(p[i] for i in fixed)
            if free == -1:
                if rest == 0:
                    yield tuple(p)
            elif lows[free] <= rest <= highs[free]:
                p[free] = rest
                yield tuple(p)


def ci_polytope_oracle(
    view: ContingencyView,
    class_link: Mapping | None = None,
    direction: Literal["min", "max"] = "min",
) -> Fraction:
    """Brute-force CI bound by evaluating the objective at every polytope vertex.

    Independent of the greedy assignment in :func:`ci_multinomial`; only
    intended for small ``k`` (at most 8).
    """
    totals = view.per_category_totals
    k = len(totals)
    if k > 8:
        raise InputDomainError(f"oracle enumeration is limited to k <= 8, got {k}")
    if k == 0 or any(t == 0 for t in totals):
        raise InputDomainError("oracle needs observed categories only")
    n = sum(totals)
    fr = _linked_fractions(view, class_link)
    if direction == "min":
        weights = [Fraction(h, t + 1) for h, t in fr]
    elif direction == "max":
        weights = [Fraction(h + 1, t + 1) for h, t in fr]
    else:
        raise InputDomainError(f"direction must be 'min' or 'max', got {direction!r}")
    lows = [Fraction(t - 1, n) for t in totals]
    highs = [Fraction(t + 1, n) for t in totals]
    values = [sum(w * p for w, p in zip(weights, v)) for v in _box_simplex_vertices(lows, highs)]
    if not values:
        raise RuntimeError("category polytope is empty")
    return min(values) if direction == "min" else max(values)


def correct_indication(
    view: ContingencyView, binary: bool, class_link: Mapping | None = None
) -> CIScore:
    """Score an attribute the way the tree builder does.

    Attributes declared with two categories use the Bernoulli form on the full
    view; wider attributes use the multinomial form on observed categories.
    An attribute with a single observed category gets the degenerate score
    whatever its declared arity, so it can never pass the split conditions.
    """
    if binary and all(view.per_category_totals):
        return ci_binary(view, class_link)
    return ci_multinomial(view.observed(), class_link)
