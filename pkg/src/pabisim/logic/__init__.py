"""PCTL / PCTL* syntax, fragments and model checking."""

from .checker import ModelChecker, check, compile_cone_patterns, compile_stutter_patterns, path_value_bounds, path_values, sat, sat_states
from .fragments import FragmentTag, classify, depth, horizon, in_fragment, normalize_depth1
from .parser import parse_formula, parse_path_formula
from .syntax import (
    FALSE,
    TRUE,
    And,
    Atom,
    BoundedUntil,
    Const,
    Formula,
    Next,
    Not,
    Or,
    Prob,
    Until,
    conj,
    disj,
    is_state,
    neg,
)

__all__ = [
    "ModelChecker", "check", "sat", "sat_states", "path_values", "path_value_bounds",
    "compile_cone_patterns", "compile_stutter_patterns",
    "FragmentTag", "classify", "depth", "horizon", "in_fragment", "normalize_depth1",
    "parse_formula", "parse_path_formula",
    "Formula", "Atom", "Const", "Not", "And", "Or", "Prob", "Next", "Until", "BoundedUntil",
    "TRUE", "FALSE", "conj", "disj", "neg", "is_state",
]
