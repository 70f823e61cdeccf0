"""Behavioural relations on probabilistic automata, computed exactly and
cross-checked against a brute-force logical oracle.

All probabilities are :class:`fractions.Fraction`; nothing is rounded.
"""

from .errors import FormulaSyntaxError, FragmentError, ModelError, PabisimError, ResourceCapError
from .generate import GenParams, generate_random
from .logic import ModelChecker, check, parse_formula, parse_path_formula, sat
from .model import Distribution, ProbAutomaton, disjoint_union, format_model, interleave, parse_model
from .oracle import (
    FormulaBudget,
    distinguishing_state_formula,
    logical_equiv,
    logical_partition,
    logical_preorder,
)
from .reach import PatternSet, bounded_reach, pattern_opt, stuttering_pattern_opt, unbounded_reach
from .relation import Relation
from .relations import RelationQuery, Verdict, compute, relate

__version__ = "0.1.0"

__all__ = [
    "Distribution",
    "FormulaBudget",
    "FormulaSyntaxError",
    "FragmentError",
    "GenParams",
    "ModelChecker",
    "ModelError",
    "PabisimError",
    "PatternSet",
    "ProbAutomaton",
    "Relation",
    "RelationQuery",
    "ResourceCapError",
    "Verdict",
    "bounded_reach",
    "check",
    "compute",
    "disjoint_union",
    "distinguishing_state_formula",
    "format_model",
    "generate_random",
    "interleave",
    "logical_equiv",
    "logical_partition",
    "logical_preorder",
    "parse_formula",
    "parse_model",
    "parse_path_formula",
    "pattern_opt",
    "relate",
    "sat",
    "stuttering_pattern_opt",
    "unbounded_reach",
]
