from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dnpi.ci import ci_binary, ci_multinomial, ci_polytope_oracle, correct_indication
from dnpi.direct import ContingencyView, majority_class_map
from dnpi.errors import InputDomainError
from dnpi.verify import oracle_check, random_view


def worked_example(k):
    """Counts 1..k, every category linked to class A, fractions ascending in listed order."""
    rows = tuple((i, 1) for i in range(k))  # n_i = i + 1, hits i
    link = {f"c{i + 1}": "A" for i in range(k)}
    return ContingencyView("x", tuple(link), ("A", "B"), rows), link


class TestWorkedExamples:
    def test_lower_six_categories(self):
        v, link = worked_example(6)
        assert ci_multinomial(v, link).lower_mass_vector == tuple(F(x, 21) for x in (2, 3, 4, 3, 4, 5))

    def test_upper_six_categories(self):
        v, link = worked_example(6)
        assert ci_multinomial(v, link).upper_mass_vector == tuple(F(x, 21) for x in (0, 1, 2, 5, 6, 7))

    def test_five_categories(self):
        v, link = worked_example(5)
        s = ci_multinomial(v, link)
        assert s.lower_mass_vector == tuple(F(x, 15) for x in (2, 3, 3, 3, 4))
        assert s.upper_mass_vector == tuple(F(x, 15) for x in (0, 1, 3, 5, 6))


class TestBinary:
    def view(self):
        # t=0: 3 of class 0, 1 of class 1; t=1: 1 of class 0, 5 of class 1
        return ContingencyView("t", ("0", "1"), ("0", "1"), ((3, 1), (1, 5)))

    def test_hand_example(self):
        s = ci_binary(self.view())
        assert (s.lower, s.upper) == (F(51, 77), F(46, 55))

    def test_matches_both_endpoint_choices(self):
        f0, f1, g0, g1 = F(3, 5), F(5, 7), F(4, 5), F(6, 7)
        ps = (F(6, 11), F(7, 11))
        s = ci_binary(self.view())
        assert s.lower == min(f0 * (1 - p) + f1 * p for p in ps)
        assert s.upper == max(g0 * (1 - p) + g1 * p for p in ps)
        assert sum(s.lower_mass_vector) == 1 and sum(s.upper_mass_vector) == 1

    def test_perfect_attribute_has_upper_one(self):
        s = ci_binary(ContingencyView("t", ("0", "1"), ("0", "1"), ((4, 0), (0, 6))))
        assert s.upper == 1

    def test_constant_attribute(self):
        v = ContingencyView("t", ("0", "1"), ("0", "1"), ((0, 0), (7, 3)))
        s = ci_binary(v)
        # the empty category only widens the interval, so lower stays under 7/11
        assert (s.lower, s.upper) == (F(70, 121), F(91, 121))
        assert s.lower < F(7, 11)

    def test_rejects_three_categories(self):
        with pytest.raises(InputDomainError):
            ci_binary(ContingencyView("t", ("a", "b", "c"), ("0", "1"), ((1, 0), (0, 1), (1, 1))))


class TestOracle:
    def test_two_categories_reduce_to_endpoint_comparison(self):
        v = ContingencyView("x", ("a", "b"), ("p", "q"), ((3, 1), (1, 4)))
        link = majority_class_map(v)
        f = (F(3, 5), F(4, 6))
        n = 9
        ends = [(F(3, n), F(6, n)), (F(5, n), F(4, n))]
        assert ci_polytope_oracle(v, link, "min") == min(f[0] * a + f[1] * b for a, b in ends)
        assert ci_multinomial(v, link).lower == ci_polytope_oracle(v, link, "min")

    def test_equal_fractions_give_a_point(self):
        v = ContingencyView("x", ("a", "b", "c"), ("p", "q"), ((1, 1), (1, 1), (1, 1)))
        link = {"a": "p", "b": "p", "c": "p"}
        assert ci_polytope_oracle(v, link, "min") == F(1, 3)
        s = ci_multinomial(v, link)
        assert s.lower == F(1, 3)
        assert ci_polytope_oracle(v, link, "max") == s.upper == F(2, 3)

    def test_smallest_case_by_hand(self):
        # n_i = 1 each, so p_i in [0, 2/3]; the vertices are permutations of (2/3, 1/3, 0)
        v = ContingencyView("x", ("a", "b", "c"), ("p", "q"), ((1, 0), (1, 0), (1, 0)))
        link = {"a": "q", "b": "p", "c": "p"}
        assert ci_polytope_oracle(v, link, "min") == F(1, 6)
        assert ci_polytope_oracle(v, link, "max") == 1
        s = ci_multinomial(v, link)
        assert (s.lower, s.upper) == (F(1, 6), 1)

    def test_k_limit(self):
        v = ContingencyView("x", tuple("abcdefghi"), ("p",), tuple((1,) for _ in range(9)))
        with pytest.raises(InputDomainError):
            ci_polytope_oracle(v, None, "min")

    def test_seeded_agreement(self):
        assert oracle_check(300, seed=3) == []


tables = st.integers(2, 7).flatmap(
    lambda k: st.lists(
        st.tuples(st.integers(0, 12), st.integers(0, 12), st.integers(0, 12)).filter(lambda r: sum(r) > 0),
        min_size=k, max_size=k,
    )
)


def to_view(rows):
    return ContingencyView("x", tuple(f"c{i}" for i in range(len(rows))), ("p", "q", "r"), tuple(rows))


class TestProperties:
    @settings(max_examples=200)
    @given(tables)
    def test_greedy_equals_oracle(self, rows):
        v = to_view(rows)
        link = majority_class_map(v)
        s = ci_multinomial(v, link)
        assert s.lower == ci_polytope_oracle(v, link, "min")
        assert s.upper == ci_polytope_oracle(v, link, "max")
        assert 0 <= s.lower <= s.upper <= 1

    @given(tables)
    def test_mass_vectors_feasible(self, rows):
        v = to_view(rows)
        s = ci_multinomial(v)
        totals = v.per_category_totals
        n = sum(totals)
        for masses in (s.lower_mass_vector, s.upper_mass_vector):
            assert sum(masses) == 1
            for p, t in zip(masses, totals):
                assert F(t - 1, n) <= p <= F(t + 1, n)

    @given(tables)
    def test_extra_mass_goes_to_favourable_end(self, rows):
        v = to_view(rows)
        link = majority_class_map(v)
        s = ci_multinomial(v, link)
        totals = v.per_category_totals
        n, k = sum(totals), len(totals)
        hits = [r[v.class_index(link[c])] for c, r in zip(v.category_labels, rows)]
        f = [F(h, t + 1) for h, t in zip(hits, totals)]
        extra = [p - F(t - 1, n) for p, t in zip(s.lower_mass_vector, totals)]
        assert all(e in (0, F(1, n), F(2, n)) for e in extra)
        receivers = sorted(range(k), key=lambda i: f[i])[: (k + 1) // 2]
        assert sum(extra[i] for i in receivers) == F(k, n)

    @given(tables, st.randoms())
    def test_permutation_invariance(self, rows, rnd):
        v = to_view(rows)
        perm = list(range(len(rows)))
        rnd.shuffle(perm)
        w = ContingencyView("x", tuple(v.category_labels[i] for i in perm), v.class_labels,
                            tuple(rows[i] for i in perm))
        a, b = ci_multinomial(v), ci_multinomial(w)
        assert a.interval == b.interval


def test_unobserved_categories_must_be_dropped():
    v = ContingencyView("x", ("a", "b", "c"), ("p", "q"), ((1, 0), (0, 0), (0, 2)))
    with pytest.raises(InputDomainError):
        ci_multinomial(v)
    s = correct_indication(v, binary=False)
    assert s.category_labels == ("a", "c")


def test_single_observed_category():
    v = ContingencyView("x", ("a", "b", "c"), ("p", "q"), ((0, 0), (3, 1), (0, 0)))
    s = correct_indication(v, binary=False)
    assert (s.lower, s.upper) == (F(3, 5), F(4, 5))


def test_random_view_has_no_empty_category():
    rng = np.random.default_rng(0)
    for _ in range(50):
        v = random_view(rng, 5, 2, 1)
        assert all(t > 0 for t in v.per_category_totals)


def test_constant_binary_attribute_uses_degenerate_score():
    # with three classes the full-view Bernoulli form would beat the no-attribute interval
    v = ContingencyView("t", ("0", "1"), ("a", "b", "c"), ((0, 0, 0), (10, 10, 10)))
    assert (ci_binary(v).lower, ci_binary(v).upper) == (F(300, 961), F(361, 961))
    s = correct_indication(v, binary=True)
    assert (s.lower, s.upper) == (F(10, 31), F(11, 31))
    assert s.upper < F(11, 30)
