from fractions import Fraction

import pytest

from pabisim.generate import generate_random, sample_params
from pabisim.model import parse_model
from pabisim.relation import Relation
from pabisim.relations import (
    BISIMULATIONS,
    RelationQuery,
    Trace,
    compute,
    downsets,
    relate,
    strong_1_depth,
)

F = Fraction


def verdict(a, name, depth=None, direction=None, pair=("s", "r"), **kw):
    return relate(a, RelationQuery(name, depth=depth, direction=direction, **kw), pair)


# --------------------------------------------------------------------------
# queries


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        ({"name": "no-such"}, "unknown relation"),
        ({"name": "strong-i"}, "needs a depth"),
        ({"name": "strong-i", "depth": 0}, "needs a depth"),
        ({"name": "strong-1", "depth": 2}, "takes no depth"),
        ({"name": "strong-1", "direction": "sideways"}, "unknown direction"),
        ({"name": "weak-sim", "direction": "match-both"}, "bisimulations only"),
    ],
)
def test_query_validation(kwargs, fragment):
    with pytest.raises(ValueError) as info:
        RelationQuery(**kwargs)
    assert fragment in str(info.value)


def test_default_directions():
    assert RelationQuery("weak-bisim").effective_direction == "match-at-least"
    assert RelationQuery("weak-sim").effective_direction == "match-at-most"
    assert RelationQuery("sim-i", depth=1).is_simulation


def test_event_simulations_reject_at_least(middle):
    with pytest.raises(ValueError):
        compute(middle, RelationQuery("sim-i", depth=1, direction="match-at-least"))


# --------------------------------------------------------------------------
# convex_middle: one extra transition that no mixture reproduces


def test_middle_transition_breaks_strong_bisimulation(middle):
    v = verdict(middle, "strong-prob-bisim")
    assert not v.related
    assert v.witness.kind == "transition"
    assert "no match" in v.witness.describe(middle)


@pytest.mark.parametrize(
    "name, depth",
    [("strong-1", None), ("strong-branching-i", 1), ("strong-branching-i", 2), ("strong-i", 2), ("weak-branching-bisim", None)],
)
def test_middle_related_by_optimum_matching(middle, name, depth):
    assert verdict(middle, name, depth).related


def test_middle_simulation_is_one_sided(middle):
    assert verdict(middle, "strong-prob-sim").related
    assert not verdict(middle, "strong-prob-sim", pair=("r", "s")).related


# --------------------------------------------------------------------------
# cone_split: a depth-two conjunction of next-step events


def test_cone_depth_two_pattern_witness(cone):
    v = verdict(cone, "strong-i", 2)
    assert not v.related
    w = v.witness
    assert w.kind == "patterns" and w.mode == "sup"
    assert w.values == (F(19, 50), F(39, 100))
    assert w.replay(cone) == w.values
    assert verdict(cone, "strong-i", 1).related


def test_cone_bounded_until_needs_infimum(cone):
    assert verdict(cone, "strong-branching-i", 2).related
    v = verdict(cone, "strong-branching-i", 2, "match-both")
    assert not v.related
    w = v.witness
    assert (w.kind, w.mode, w.steps) == ("bounded", "inf", 2)
    assert w.values == (F(31, 50), F(61, 100))
    assert w.replay(cone) == w.values


# --------------------------------------------------------------------------
# principal_only: single classes are too coarse as targets


def test_principal_classes_miss_union(principal):
    only = strong_1_depth(principal, principal_only=True)
    full = strong_1_depth(principal)
    s, r = principal.index("s"), principal.index("r")
    assert only.related(s, r) and not full.related(s, r)


def test_principal_downset_witness(principal):
    v = verdict(principal, "strong-1")
    w = v.witness
    assert w.kind == "downset" and w.values == (1, F(1, 2))
    assert {principal.names[x] for x in w.C} == {"s1", "s2"}
    assert w.replay(principal) == w.values


def test_principal_only_needs_at_least(principal):
    with pytest.raises(ValueError):
        strong_1_depth(principal, "match-at-most", principal_only=True)


# --------------------------------------------------------------------------
# stutter_split: unbounded until


def test_stutter_until_witness(stutter):
    v = verdict(stutter, "weak-branching-bisim")
    assert not v.related
    w = v.witness
    assert w.kind == "until" and w.values == (F(14, 25), F(29, 50))
    assert w.replay(stutter) == w.values


def test_stutter_weak_bisim_witness_replays(stutter):
    v = verdict(stutter, "weak-bisim")
    assert not v.related
    assert v.witness.kind == "stutter"
    assert v.witness.replay(stutter) == v.witness.values


def test_stutter_at_most_direction(stutter):
    w = verdict(stutter, "weak-branching-bisim", direction="match-at-most").witness
    assert w.values == (F(21, 50), F(11, 25))


# --------------------------------------------------------------------------
# general behaviour


def test_label_witness():
    a = parse_model("pa x\nabsorbing u label p\nabsorbing v label q\n")
    v = relate(a, RelationQuery("strong-1"), ("u", "v"))
    assert not v.related and v.witness.kind == "label"


def test_report_lists_classes_and_pair(cone):
    text = verdict(cone, "strong-i", 2).report(cone)
    assert "relation: strong-i" in text
    assert "related: no" in text
    assert "witness: s vs r: patterns" in text
    assert "caps hit: none" in text


def test_caps_are_reported(cone):
    v = verdict(cone, "sim-i", 1, max_events=50)
    assert v.caps_hit
    assert "caps hit: none" not in v.report(cone)


def test_trace_counts_rounds(stutter):
    trace = Trace()
    compute(stutter, RelationQuery("weak-branching-bisim"), trace)
    assert trace.rounds >= 1 and (0, 1) in trace.witnesses


def test_downsets_helper():
    rel = Relation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1)])
    assert sorted(map(sorted, downsets(rel))) == [[], [0], [0, 1], [0, 1, 2], [0, 2], [2]]
    with pytest.raises(ValueError):
        downsets(Relation.from_pairs(2, [(0, 1)]))


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize(
    "name, depth",
    [("strong-prob-bisim", None), ("strong-1", None), ("strong-branching-i", 2), ("strong-i", 2), ("weak-branching-bisim", None)],
)
def test_bisimulations_are_equivalences(seed, name, depth):
    a = generate_random(sample_params(seed, 4))
    rel = compute(a, RelationQuery(name, depth=depth))
    assert rel.is_reflexive() and rel.is_symmetric() and rel.is_transitive()
    assert rel <= Relation.label_equality(a)


@pytest.mark.parametrize("seed", range(8))
def test_simulations_are_reflexive_and_label_respecting(seed):
    a = generate_random(sample_params(seed, 4))
    for q in (RelationQuery("strong-prob-sim"), RelationQuery("branching-sim-i", depth=1)):
        rel = compute(a, q)
        assert rel.is_reflexive()
        assert rel <= Relation.label_equality(a)


@pytest.mark.parametrize("seed", range(15))
@pytest.mark.parametrize("name, depth", [("strong-1", None), ("strong-i", 2)])
def test_match_both_adds_nothing_for_closed_event_families(seed, name, depth):
    a = generate_random(sample_params(seed, 4))
    plain = compute(a, RelationQuery(name, depth=depth))
    both = compute(a, RelationQuery(name, depth=depth, direction="match-both"))
    assert plain == both


@pytest.mark.parametrize("seed", range(15))
def test_match_both_refines_at_least(seed):
    a = generate_random(sample_params(seed, 4))
    for name, depth in (("strong-branching-i", 2), ("weak-branching-bisim", None)):
        plain = compute(a, RelationQuery(name, depth=depth))
        both = compute(a, RelationQuery(name, depth=depth, direction="match-both"))
        assert both <= plain


def test_bisimulation_names_cover_query_defaults():
    for name in BISIMULATIONS:
        depth = 1 if name in ("strong-i", "strong-branching-i") else None
        assert RelationQuery(name, depth=depth).effective_direction == "match-at-least"
