from fractions import Fraction

import pytest

from pabisim.errors import FormulaSyntaxError, FragmentError
from pabisim.generate import generate_random, sample_params
from pabisim.logic import (
    And,
    Atom,
    BoundedUntil,
    FragmentTag,
    ModelChecker,
    Next,
    Not,
    Or,
    Prob,
    Until,
    classify,
    depth,
    horizon,
    in_fragment,
    normalize_depth1,
    parse_formula,
    parse_path_formula,
    path_value_bounds,
    sat,
)
from pabisim.oracle import path_formula_value_set

F = Fraction
a, b, c = Atom("a"), Atom("b"), Atom("c")


# --------------------------------------------------------------------------
# parsing


@pytest.mark.parametrize(
    "text, tree",
    [
        ("a | b & c", Or(a, And(b, c))),
        ("!a U b U c", Until(Not(a), Until(b, c))),
        ("X a & b", And(Next(a), b)),
        ("a U<=3 b | c", Or(BoundedUntil(a, b, 3), c)),
        ("(a | b) & c", And(Or(a, b), c)),
        ("X X a", Next(Next(a))),
    ],
)
def test_precedence(text, tree):
    assert parse_path_formula(text) == tree


def test_probability_operator_parses_decimal_and_ratio():
    assert parse_formula("P<0.5 [ X a ]") == Prob("<", F(1, 2), Next(a))
    assert parse_formula("P>=7/20 [ a U b ]") == Prob(">=", F(7, 20), Until(a, b))


@pytest.mark.parametrize(
    "text",
    ["P<0.5 [ X X l4 ]", "a | b & c", "!(a | b)", "P>=1/2 [ (a U b) | (c U a) ]", "P<=1 [ X (a & X b) ]", "P>0 [ a U<=2 b ]"],
)
def test_printing_round_trips(text):
    f = parse_path_formula(text)
    assert parse_path_formula(str(f)) == f


@pytest.mark.parametrize(
    "text",
    ["X a", "a U b", "P>=2 [ X a ]", "P>=1/2 X a", "a &", "(a", "a $ b", "P>=1/2 [ X a ] b"],
)
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_syntax_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("a & $")
    assert "$" in str(info.value)


# --------------------------------------------------------------------------
# fragments


def tags(text):
    return {str(t) for t in classify(parse_formula(text))}


def test_classify_next():
    assert tags("P>=1/2 [ X a ]") == {"PCTL", "PCTL-", "PCTL-1", "PCTL*", "PCTL*-", "PCTL*-1", "PCTLs", "PCTL*s"}


def test_classify_bounded_until_indexes_by_bound():
    assert tags("P>=1/2 [ a U<=3 b ]") == {"PCTL", "PCTL-", "PCTL-3", "PCTLs"}


def test_classify_until_without_next():
    assert tags("P<1/2 [ a U b ]") == {"PCTL", "PCTL*", "PCTL*\\X", "PCTL\\X"}


def test_classify_star_depth_and_safety():
    assert tags("P>=1/2 [ X a & X X b ]") == {"PCTL*", "PCTL*-", "PCTL*-2", "PCTL*s"}
    assert "PCTLs" in tags("!a & P>=1/2 [ X b ]")
    assert "PCTLs" not in tags("a & !P>=1/2 [ X b ]")
    assert "PCTLs" not in tags("P<=1/2 [ X b ]")


def test_in_fragment_is_monotone_in_index():
    phi = parse_formula("P>=1/2 [ a U<=2 b ]")
    assert in_fragment(phi, FragmentTag("PCTL-", 2))
    assert in_fragment(phi, FragmentTag("PCTL-", 5))
    assert not in_fragment(phi, FragmentTag("PCTL-", 1))


def test_depth_and_horizon():
    assert depth(parse_path_formula("X (a & X b) | X c")) == 2
    assert horizon(parse_path_formula("X (a U<=3 b)")) == 4
    with pytest.raises(FragmentError):
        depth(parse_path_formula("a U b"))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("P>=1/2 [ X a & X b ]", "P>=1/2 [ X (a & b) ]"),
        ("P>=1/2 [ X a & b ]", "b & P>=1/2 [ X a ]"),
        ("P>=1/2 [ X a | b ]", "b | !b & P>=1/2 [ X a ]"),
    ],
)
def test_normalize_depth1(text, expected):
    assert str(normalize_depth1(parse_formula(text))) == expected


def test_normalize_depth1_preserves_truth(cone):
    for text in ["P>=1/3 [ X l1 | top ]", "P<=1/2 [ !(X l1) & top ]", "P>1/4 [ X (l1 | l3) & top ]"]:
        phi = parse_formula(text)
        assert sat(cone, phi) == sat(cone, normalize_depth1(phi))


# --------------------------------------------------------------------------
# checking


def test_probability_operators_use_matching_extreme(cone):
    psi = "X (l1 | l3) & X X (l1 | l3)"
    at_most = parse_formula(f"P<=0.38 [ {psi} ]")
    at_least = parse_formula(f"P>=0.35 [ {psi} ]")
    s, r = cone.index("s"), cone.index("r")
    assert s in sat(cone, at_most) and r not in sat(cone, at_most)
    assert {s, r} <= sat(cone, at_least)


def test_cone_values_match_path_enumeration(cone):
    psi = parse_path_formula("X (l1 | l3) & X X (l1 | l3)")
    lo, hi = path_value_bounds(cone, psi)
    assert (lo[0], hi[0], lo[1], hi[1]) == (F(7, 20), F(19, 50), F(7, 20), F(39, 100))
    for u in cone.states:
        vals = path_formula_value_set(cone, u, psi)
        assert (min(vals), max(vals)) == (lo[u], hi[u])


def test_stuttering_values(stutter):
    psi = parse_path_formula("((top | l1) U l5) | ((top | l3) U l4)")
    lo, hi = path_value_bounds(stutter, psi)
    assert (hi[0], hi[1]) == (F(17, 50), F(9, 25))
    assert lo[0] == lo[1] == F(17, 50)


def test_negated_path_formula_swaps_extremes(stutter):
    psi = parse_path_formula("(top | l1) U l5")
    lo, hi = path_value_bounds(stutter, psi)
    nlo, nhi = path_value_bounds(stutter, Not(psi))
    assert nlo == [1 - x for x in hi] and nhi == [1 - x for x in lo]


def test_mixed_next_and_until_rejected(cone):
    with pytest.raises(FragmentError):
        ModelChecker(cone).values(parse_path_formula("X l1 & (top U l4)"), "sup")


def test_nested_probability(principal):
    # the absorbing l1 and l2 states satisfy the inner formula; every move of
    # r reaches them with probability 1/2, while one move of s avoids them
    inner = "P>=1 [ X (l1 | l2) ]"
    assert sat(principal, parse_formula(inner)) == frozenset({2, 3})
    outer = parse_formula(f"P>=1/2 [ X {inner} ]")
    assert principal.index("r") in sat(principal, outer)
    assert principal.index("s") not in sat(principal, outer)


def test_checker_caches(cone):
    mc = ModelChecker(cone)
    phi = parse_formula("P>=1/2 [ X l1 ]")
    assert mc.sat(phi) is mc.sat(phi)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize(
    "text",
    ["X p & X X q", "X (p | X !q)", "!(X p) | X X p", "p U<=2 q", "X (p U<=1 q) & X q"],
)
def test_until_free_values_match_enumeration(seed, text):
    a = generate_random(sample_params(seed, 3))
    props = sorted(a.props)
    text = text.replace("p", props[0]).replace("q", props[-1])
    psi = parse_path_formula(text)
    lo, hi = path_value_bounds(a, psi)
    for u in a.states:
        vals = path_formula_value_set(a, u, psi)
        assert (min(vals), max(vals)) == (lo[u], hi[u])
