"""Direct NPI (D-NPI) classification trees with the Correct Indication split criterion."""

__version__ = "0.1.0"

from .ci import CIScore, ci_binary, ci_multinomial, ci_polytope_oracle, correct_indication
from .data import Attribute, Dataset, load_csv
from .direct import ContingencyView, conditional_class_interval, majority_class_map
from .npi import ProbabilityInterval
from .tree import BuildParams, DecisionTree, build_dnpi, build_gain_ratio_tree, classify, tree_size

__all__ = [
    "Attribute",
    "BuildParams",
    "CIScore",
    "ContingencyView",
    "Dataset",
    "DecisionTree",
    "ProbabilityInterval",
    "build_dnpi",
    "build_gain_ratio_tree",
    "ci_binary",
    "ci_multinomial",
    "ci_polytope_oracle",
    "classify",
    "conditional_class_interval",
    "correct_indication",
    "load_csv",
    "majority_class_map",
    "tree_size",
]
