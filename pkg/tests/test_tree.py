from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dnpi.datasets import load_lenses
from dnpi.errors import InputDomainError
from dnpi.tree import (
    BuildParams,
    DecisionTree,
    Leaf,
    Node,
    build_dnpi,
    build_gain_ratio_tree,
    build_tree,
    classify,
    no_attribute_interval,
    predict,
    select_split_dnpi,
    tree_depth,
    tree_size,
)

from factories import make_dataset, replay_stop_rule, synthetic_dataset, unsplit_leaves_with_eligible_attribute


def mirror(n=8):
    a = ["0", "1"] * (n // 2)
    return make_dataset({"a": a}, list(a))


def xor():
    a = ["0", "0", "1", "1"] * 3
    b = ["0", "1", "0", "1"] * 3
    return make_dataset({"a": a, "b": b}, [str(int(x != y)) for x, y in zip(a, b)])


class TestNoAttributeInterval:
    def test_binary_target(self):
        assert tuple(no_attribute_interval((70, 30))) == (F(70, 101), F(71, 101))
        assert tuple(no_attribute_interval((30, 70))) == (F(70, 101), F(71, 101))

    def test_three_classes(self):
        assert tuple(no_attribute_interval((10, 5, 5))) == (F(9, 20), F(11, 20))

    def test_declared_classes_decide_the_form(self):
        # only two classes present but three declared: the multinomial form applies
        assert tuple(no_attribute_interval((6, 4, 0), 3)) == (F(5, 10), F(7, 10))

    def test_pure_node(self):
        assert tuple(no_attribute_interval((12, 0))) == (F(12, 13), 1)

    def test_empty_node(self):
        with pytest.raises(InputDomainError):
            no_attribute_interval((0, 0))


class TestSelection:
    def test_constant_attributes_give_no_split(self):
        d = make_dataset({"a": ["x"] * 6, "b": ["y"] * 6}, list("PPPNNN"), labels={"a": ("x", "z"), "b": ("y",)})
        assert select_split_dnpi(d) is None

    def test_predictive_attribute_beats_noise(self):
        rng = np.random.default_rng(1)
        y = ["P", "N"] * 15
        d = make_dataset({
            "noise1": [f"v{v}" for v in rng.integers(0, 3, 30)],
            "good": ["g" if t == "P" else "b" for t in y],
            "noise2": [f"w{v}" for v in rng.integers(0, 2, 30)],
        }, y)
        assert select_split_dnpi(d) == "good"

    def test_tie_keeps_schema_order(self):
        a = ["0", "1"] * 5
        d = make_dataset({"first": a, "second": list(a)}, list(a))
        assert select_split_dnpi(d) == "first"
        d2 = make_dataset({"second": list(a), "first": a}, list(a))
        assert select_split_dnpi(d2) == "second"

    def test_lenses_root(self):
        assert select_split_dnpi(load_lenses()) == "tear_rate"


class TestBuild:
    def test_single_class_is_one_leaf(self):
        d = make_dataset({"a": list("xyxy")}, ["P"] * 4)
        t = build_dnpi(d)
        assert t.root == Leaf("P", 4, (4,))
        assert tree_size(t) == 1 and tree_depth(t) == 0

    def test_mirrored_attribute(self):
        t = build_dnpi(mirror())
        assert isinstance(t.root, Node) and t.root.attribute == "a"
        assert tree_size(t) == 2
        assert [classify(t, [v]) for v in ("0", "1")] == ["0", "1"]

    def test_min_split_above_n_gives_a_leaf(self):
        d = mirror()
        assert tree_size(build_dnpi(d, BuildParams(min_split=len(d) + 1))) == 1
        assert tree_size(build_dnpi(d, BuildParams(min_split=len(d)))) == 2

    def test_empty_branch_becomes_majority_leaf(self):
        d = make_dataset({"a": ["x", "x", "x", "y", "y", "y", "y"]}, list("PPPNNNN"), labels={"a": ("x", "y", "z")})
        t = build_dnpi(d)
        assert dict(t.root.branches)["z"] == Leaf("N", 0, (0, 0))
        assert tree_size(t) == 3

    def test_gain_ratio_tree(self):
        assert tree_size(build_gain_ratio_tree(mirror())) == 2
        assert tree_size(build_gain_ratio_tree(xor())) == 1  # no attribute is informative at the root

    def test_build_tree_dispatches(self):
        assert build_tree(xor(), BuildParams(algorithm="gain_ratio")).params.algorithm == "gain_ratio"
        assert build_tree(xor(), BuildParams()).params.algorithm == "dnpi"

    def test_bad_params(self):
        with pytest.raises(InputDomainError):
            BuildParams(min_split=1)
        with pytest.raises(InputDomainError):
            BuildParams(algorithm="cart")

    def test_needs_categorical_data(self):
        from dnpi.data import Attribute, Dataset
        d = Dataset((Attribute("x", numeric=True),), "class", ("A",), ((1.0,),), ("A",))
        with pytest.raises(ValueError):
            build_dnpi(d)

    def test_lenses_tree_is_deterministic_and_shallow(self):
        d = load_lenses()
        t1, t2 = build_dnpi(d), build_dnpi(d)
        assert t1 == t2
        assert tree_depth(t1) <= len(d.attributes)
        assert replay_stop_rule(t1, d) == []


class TestClassify:
    def test_unknown_value_falls_back(self):
        t = build_dnpi(mirror())
        assert classify(t, {"a": "7"}) == t.root.fallback

    def test_missing_attribute(self):
        t = build_dnpi(mirror())
        with pytest.raises(InputDomainError):
            classify(t, {"b": "0"})
        with pytest.raises(InputDomainError):
            classify(t, ["0", "1"])

    def test_predict_on_training_data(self):
        d = load_lenses()
        t = build_gain_ratio_tree(d)
        assert predict(t, d) == list(d.targets)  # lenses has no conflicting duplicates


def test_serialization_round_trip():
    t = build_dnpi(load_lenses())
    assert DecisionTree.loads(t.dumps()) == t
    with pytest.raises(InputDomainError):
        DecisionTree.from_dict({"format": "other"})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_stop_rule_replays_on_synthetic_data(seed):
    d = synthetic_dataset(np.random.default_rng(seed))
    t = build_dnpi(d)
    assert replay_stop_rule(t, d) == []
    assert unsplit_leaves_with_eligible_attribute(t, d) == []
    assert tree_depth(t) <= len(d.attributes)
