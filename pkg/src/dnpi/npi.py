"""Exact NPI lower and upper probabilities for Bernoulli and multinomial data.

Every value is a :class:`fractions.Fraction`; callers convert to float at the
reporting boundary only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

from .errors import InputDomainError

__all__ = [
    "ProbabilityInterval",
    "BernoulliRecord",
    "BernoulliEventSpec",
    "MultinomialCounts",
    "MultinomialEventSpec",
    "bernoulli_event_upper",
    "bernoulli_event_lower",
    "bernoulli_next_interval",
    "multinomial_event_interval",
    "multinomial_singleton_interval",
]


@dataclass(frozen=True)
class ProbabilityInterval:
    """A lower/upper probability pair with ``0 <= lower <= upper <= 1``."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        lo, up = self.lower, self.upper
        if type(lo) is not Fraction:
            lo = Fraction(lo)
        if type(up) is not Fraction:
            up = Fraction(up)
        # integer cross-multiplication is much cheaper than Fraction comparisons
        a, b, c, d = lo.numerator, lo.denominator, up.numerator, up.denominator
        if not (a >= 0 and a * d <= c * b and c <= d):
            raise InputDomainError(f"invalid probability interval [{lo}, {up}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def imprecision(self) -> Fraction:
        return self.upper - self.lower

    def as_floats(self) -> tuple[float, float]:
        return float(self.lower), float(self.upper)

    def __iter__(self):
        yield self.lower
        yield self.upper


@dataclass(frozen=True)
class BernoulliRecord:
    """``s`` successes observed in ``n`` trials."""

    n: int
    s: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.s <= self.n:
            raise InputDomainError(f"need 0 <= s <= n, got n={self.n}, s={self.s}")


@dataclass(frozen=True)
class BernoulliEventSpec:
    """Event that the number of successes in ``m`` future trials lies in ``r_set``."""

    m: int
    r_set: tuple[int, ...]

    def __post_init__(self):
        r = tuple(self.r_set)
        object.__setattr__(self, "r_set", r)
        if self.m < 1:
            raise InputDomainError(f"m must be >= 1, got {self.m}")
        if not r:
            raise InputDomainError("event set must be nonempty")
        if r[0] < 0 or r[-1] > self.m:
            raise InputDomainError(f"event members must lie in [0, {self.m}], got {r}")
        if any(b <= a for a, b in zip(r, r[1:])):
            raise InputDomainError(f"event members must be strictly increasing, got {r}")

    def complement(self) -> tuple[int, ...]:
        members = set(self.r_set)
        return tuple(x for x in range(self.m + 1) if x not in members)


def _upper_sum(n: int, s: int, m: int, r_set: Sequence[int]) -> Fraction:
    total = 0
    prev = 0  # C(s + r_0, s) is taken as 0
    for r in r_set:
        cur = comb(s + r, s)
        total += (cur - prev) * comb(n - s + m - r, n - s)
        prev = cur
    return Fraction(total, comb(n + m, n))


def bernoulli_event_upper(record: BernoulliRecord, event: BernoulliEventSpec) -> Fraction:
    """Upper probability that ``event.m`` future trials give a success count in ``event.r_set``."""
    return _upper_sum(record.n, record.s, event.m, event.r_set)


def bernoulli_event_lower(record: BernoulliRecord, event: BernoulliEventSpec) -> Fraction:
    """Lower probability, obtained by conjugacy from the upper probability of the complement."""
    rest = event.complement()
    if not rest:
        return Fraction(1)
    return 1 - _upper_sum(record.n, record.s, event.m, rest)


def bernoulli_next_interval(record: BernoulliRecord) -> ProbabilityInterval:
    """Interval for a success on the next single trial: ``[s/(n+1), (s+1)/(n+1)]``."""
    return ProbabilityInterval(
        Fraction(record.s, record.n + 1), Fraction(record.s + 1, record.n + 1)
    )


@dataclass(frozen=True)
class MultinomialCounts:
    """Per-category counts with a declared number of possible categories.

    ``capital_k`` defaults to ``len(counts)``. Entries with a zero count are
    unobserved categories.
    """

    counts: tuple[int, ...]
    capital_k: int | None = None

    def __post_init__(self):
        c = tuple(int(x) for x in self.counts)
        object.__setattr__(self, "counts", c)
        if any(x < 0 for x in c):
            raise InputDomainError(f"negative category count in {c}")
        if self.capital_k is None:
            object.__setattr__(self, "capital_k", len(c))
        if self.capital_k < self.k:
            raise InputDomainError(
                f"declared K={self.capital_k} is below the {self.k} observed categories"
            )

    @cached_property
    def n(self) -> int:
        return sum(self.counts)

    @cached_property
    def k(self) -> int:
        return sum(1 for x in self.counts if x > 0)


@dataclass(frozen=True)
class MultinomialEventSpec:
    """Event made of some observed categories plus ``unobserved_count`` unobserved ones."""

    observed_members: frozenset[int]
    unobserved_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "observed_members", frozenset(self.observed_members))
        if self.unobserved_count < 0:
            raise InputDomainError("unobserved_count must be >= 0")


def multinomial_event_interval(
    counts: MultinomialCounts, event: MultinomialEventSpec
) -> ProbabilityInterval:
    """NPI-M bounds for the next observation falling in a union of categories."""
    n, k, big_k = counts.n, counts.k, counts.capital_k
    if n == 0:
        raise InputDomainError("NPI-M inference needs at least one observation")
    for j in event.observed_members:
        if not 0 <= j < len(counts.counts) or counts.counts[j] == 0:
            raise InputDomainError(f"category index {j} is not an observed category")
    r = len(event.observed_members)
    l = event.unobserved_count
    if l > big_k - k:
        raise InputDomainError(f"event uses {l} unobserved categories but only {big_k - k} exist")
    base = sum(counts.counts[j] for j in event.observed_members) - r
    return ProbabilityInterval(
        Fraction(base + max(2 * r + l - big_k, 0), n),
        Fraction(base + min(2 * r + l, k), n),
    )


def multinomial_singleton_interval(counts: MultinomialCounts, i: int) -> ProbabilityInterval:
    """Bounds ``[max(0, (n_i-1)/n), min((n_i+1)/n, 1)]`` for one observed category."""
    n = counts.n
    if n == 0:
        raise InputDomainError("NPI-M inference needs at least one observation")
    if not 0 <= i < len(counts.counts) or counts.counts[i] == 0:
        raise InputDomainError(f"category index {i} has not been observed")
    ni = counts.counts[i]
    return ProbabilityInterval(Fraction(max(ni - 1, 0), n), Fraction(min(ni + 1, n), n))


def event_from_members(members: Iterable[int], m: int) -> BernoulliEventSpec:
    return BernoulliEventSpec(m, tuple(sorted(set(members))))
