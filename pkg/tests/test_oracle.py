from fractions import Fraction

import pytest

from pabisim.generate import generate_random, sample_params
from pabisim.logic import FragmentTag, check, in_fragment, sat
from pabisim.oracle import (
    FormulaBudget,
    InseparableError,
    distinguishing_state_formula,
    enumerate_path_events,
    label_formula,
    logical_equiv,
    logical_partition,
    logical_preorder,
)
from pabisim.relation import Relation
from pabisim.relations import RelationQuery, compute

F = Fraction


# --------------------------------------------------------------------------
# budgets


def test_budget_parses_indexed_fragment():
    b = FormulaBudget("PCTL-3")
    assert b.fragment == FragmentTag("PCTL-", 3) and b.max_depth == 3
    assert str(b) == "PCTL-3 (depth 3, P-nesting stable, union size any)"


@pytest.mark.parametrize("text", ["PCTL*", "PCTL*\\X", "foo", "PCTL-x"])
def test_budget_rejects_unsupported_fragments(text):
    with pytest.raises(ValueError):
        FormulaBudget(text)


def test_budget_rejects_negative_bounds():
    with pytest.raises(ValueError):
        FormulaBudget("PCTL", max_until_nesting=-1)


# --------------------------------------------------------------------------
# event enumeration


def test_union_size_limits_event_count(principal):
    full = list(enumerate_path_events(principal, FormulaBudget("PCTL-1")))
    small = list(enumerate_path_events(principal, FormulaBudget("PCTL-1", max_boolean_size=1)))
    assert len(full) == 211 and len(small) == 25
    assert set(small) < set(full)


def test_events_respect_fragment(principal):
    for frag in ("PCTL-2", "PCTL\\X", "PCTL*-2", "PCTLs"):
        tag = FormulaBudget(frag).fragment
        kinds = {type(e).__name__ for e in enumerate_path_events(principal, FormulaBudget(frag))}
        if tag.base == "PCTL\\X":
            assert kinds == {"Until"}
        elif tag.base == "PCTL-":
            assert kinds == {"Next", "BoundedUntil"}
        elif tag.base == "PCTL*-":
            assert kinds == {"Next"}
        else:
            assert kinds == {"Next", "BoundedUntil", "Until"}


# --------------------------------------------------------------------------
# equivalence


def test_bounded_fragment_cannot_split_convex_middle(middle):
    v = logical_equiv(middle, "s", "r", FormulaBudget("PCTL-3"))
    assert v.equivalent
    assert logical_equiv(middle, "s", "r", FormulaBudget("PCTL")).equivalent


def test_depth_two_star_splits_cone(cone):
    assert logical_equiv(cone, "s", "r", FormulaBudget("PCTL*-1")).equivalent
    v = logical_equiv(cone, "s", "r", FormulaBudget("PCTL*-2"))
    assert not v.equivalent
    assert v.value_s == (F(7, 20), F(19, 50)) and v.value_r == (F(7, 20), F(39, 100))
    assert str(v.formula) == "P<=19/50 [ X (l1 & X l1) | X (l3 & X l3) ]"


def test_bounded_until_splits_cone_by_infimum(cone):
    v = logical_equiv(cone, "s", "r", FormulaBudget("PCTL-2"))
    assert not v.equivalent
    assert v.value_s == (F(31, 50), F(13, 20)) and v.value_r == (F(61, 100), F(13, 20))
    assert v.formula.op == ">="


def test_until_splits_stutter(stutter):
    v = logical_equiv(stutter, "s", "r", FormulaBudget("PCTL\\X"))
    assert not v.equivalent
    assert v.value_s[1] == F(14, 25) and v.value_r[1] == F(29, 50)
    assert in_fragment(v.formula, FragmentTag("PCTL\\X"))


def test_label_difference_is_reported(cone):
    v = logical_equiv(cone, "s", "s1", FormulaBudget("PCTL-1"))
    assert not v.equivalent and v.value_s == (1, 1)


@pytest.mark.parametrize("fixture_name", ["middle", "cone", "stutter", "principal"])
@pytest.mark.parametrize("frag", ["PCTL-1", "PCTL-2", "PCTL*-2", "PCTL\\X"])
def test_distinguishing_formulas_separate_and_stay_in_fragment(request, fixture_name, frag):
    a = request.getfixturevalue(fixture_name)
    budget = FormulaBudget(frag)
    part = logical_partition(a, budget)
    for s in a.states:
        for r in a.states:
            v = part.verdict(s, r)
            if v.equivalent:
                continue
            truth = check(a, v.formula)
            assert truth[s] != truth[r]
            assert in_fragment(v.formula, budget.fragment)


def test_nesting_budget_limits_rounds(principal):
    flat = logical_partition(principal, FormulaBudget("PCTL-1", max_until_nesting=0))
    assert flat.relation == Relation.label_equality(principal)
    assert logical_partition(principal, FormulaBudget("PCTL-1")).rounds >= 1


# --------------------------------------------------------------------------
# distinguishing formulae for classes


def test_distinguishing_formula_defines_target(principal):
    phi = distinguishing_state_formula(principal, Relation.label_equality(principal), {"s1", "s2"})
    assert {principal.names[u] for u in sat(principal, phi)} == {"s1", "s2"}


def test_distinguishing_formula_for_split_pair(cone):
    rel = Relation.identity(cone.n)
    phi = distinguishing_state_formula(cone, rel, {"s"}, FormulaBudget("PCTL*-2"))
    assert sat(cone, phi) == frozenset({cone.index("s")})


def test_inseparable_classes_raise(middle):
    with pytest.raises(InseparableError) as info:
        distinguishing_state_formula(middle, Relation.identity(middle.n), {"s"})
    assert info.value.pair == (0, 1)


def test_target_must_be_union_of_classes(middle):
    with pytest.raises(ValueError):
        distinguishing_state_formula(middle, Relation.label_equality(middle), {"s"})


def test_label_formula_is_exact(product):
    for u in product.states:
        hit = sat(product, label_formula(product, u))
        assert hit == frozenset(v for v in product.states if product.labels[v] == product.labels[u])


# --------------------------------------------------------------------------
# safe preorder


def test_preorder_needs_safe_fragment(middle):
    with pytest.raises(ValueError):
        logical_preorder(middle, "s", "r", FormulaBudget("PCTL"))


def test_preorder_on_fixtures(middle, principal, cone):
    assert logical_preorder(middle, "s", "r", FormulaBudget("PCTLs")).below
    v = logical_preorder(principal, "s", "r", FormulaBudget("PCTLs"))
    assert not v.below and str(v.formula) == "P>=1/2 [ X (l1 | l2) ]"
    for frag in ("PCTLs", "PCTL*s"):
        w = logical_preorder(cone, "r", "s", FormulaBudget(frag, max_depth=2))
        assert not w.below
        assert in_fragment(w.formula, FragmentTag(frag))
        truth = check(cone, w.formula)
        assert truth[cone.index("s")] and not truth[cone.index("r")]


@pytest.mark.parametrize("seed", range(10))
def test_strong_simulation_is_sound_for_safe_formulae(seed):
    a = generate_random(sample_params(seed, 4))
    rel = compute(a, RelationQuery("strong-prob-sim"))
    budget = FormulaBudget("PCTLs", max_depth=2)
    for s, r in rel.pairs():
        assert logical_preorder(a, s, r, budget).below
