from fractions import Fraction

import pytest

from pabisim.errors import ModelError
from pabisim.lp import convex_combination, feasible_point
from pabisim.model import Distribution, disjoint_union, format_model, interleave, parse_model, to_fraction
from pabisim.relation import Relation
from pabisim.transitions import (
    branching_transition_vertices,
    combined_weight_match,
    find_weight_function,
    hull_contains,
)

F = Fraction


def test_to_fraction_is_exact():
    assert to_fraction("0.1") == F(1, 10)
    assert to_fraction("7/20") == F(7, 20)
    assert to_fraction("1") == 1
    with pytest.raises(ValueError):
        to_fraction("1e-3")


def test_distribution_drops_zero_and_checks_sum():
    d = Distribution({0: F(1, 2), 1: F(1, 2), 2: F(0)})
    assert d.support == {0, 1}
    assert d.mass({1, 2}) == F(1, 2)
    assert d[5] == 0
    with pytest.raises(ValueError):
        Distribution({0: F(1, 3)})


def test_distribution_hash_and_equality():
    a = Distribution({0: F(1, 4), 1: F(3, 4)})
    b = Distribution([(1, F(3, 4)), (0, F(1, 4))])
    assert a == b and len({a, b}) == 1
    assert Distribution.dirac(3).is_dirac()


def test_parse_round_trip(middle):
    text = format_model(middle)
    again = parse_model(text)
    assert format_model(again) == text
    assert again.names == middle.names
    assert again.labels == middle.labels


def test_parse_accepts_decimals_and_ratios():
    a = parse_model("pa x\nstate a label p\nabsorbing b\ninit a\ntrans a -> 0.5:b 1/2:a  # note\n")
    assert a.transitions[0][0][a.index("a")] == F(1, 2)
    assert a.initial == {0}
    assert a.transitions[1] == (Distribution.dirac(1),)


def test_parse_accepts_bytes():
    a = parse_model(b"pa x\nstate a\ntrans a -> 1:a\n")
    assert a.n == 1


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("pa x\nstate a\ntrans a -> 0.5:a\n", "sums to 1/2"),
        ("pa x\nstate a\ntrans a -> 1:b\n", "undeclared state b"),
        ("pa x\nstate a\nstate a\n", "declared twice"),
        ("pa x\nstate a\nfoo a\n", "unknown keyword"),
        ("pa x\nstate a\ntrans a -> 3/2:a\n", "outside (0,1]"),
        ("", "no states"),
        ("pa x\nstate a\ninit b\n", "undeclared state b"),
        ("pa x\npa y\nstate a\n", "duplicate 'pa'"),
    ],
)
def test_parse_errors_name_the_problem(text, fragment):
    with pytest.raises(ModelError) as info:
        parse_model(text)
    assert fragment in str(info.value)


def test_parse_error_carries_line_number():
    with pytest.raises(ModelError) as info:
        parse_model("pa x\n\nstate a\ntrans a -> 0.3:a\n")
    assert info.value.line == 4


def test_parse_rejects_bad_utf8():
    with pytest.raises(ModelError):
        parse_model(b"pa x\nstate \xff\n")


def test_interleave_shape(middle, coin):
    p = interleave(middle, coin)
    assert p.n == middle.n * coin.n
    st = p.index("(s,t)")
    # two moves of s plus the coin toss
    assert len(p.transitions[st]) == 3
    assert p.labels[st] == {"top@1", "c@2"}
    assert p.initial == {p.index("(s,t)"), p.index("(r,t)")}


def test_interleave_lists_shared_moves_once(middle, coin):
    p = interleave(middle, coin)
    u = p.index("(s1,t1)")
    assert p.transitions[u] == (Distribution.dirac(u),)


def test_interleave_round_trips_through_text(middle, coin):
    p = interleave(middle, coin)
    q = parse_model(format_model(p))
    assert q.names == p.names and q.transitions == p.transitions


def test_disjoint_union_renames_clashes(middle):
    u = disjoint_union(middle, middle)
    assert u.n == 2 * middle.n
    assert "s_2" in u.names and "s1_2" in u.names


def test_index_accepts_spaces_and_ints(product):
    assert product.index("(s, t)") == product.index("(s,t)")
    assert product.index(0) == 0
    with pytest.raises(KeyError):
        product.index("nope")


def test_scaled_view_is_exact(cone):
    sv = cone.scaled
    for mus, smus in zip(cone.transitions, sv.trans):
        for mu, smu in zip(mus, smus):
            for (v, p), (w, k) in zip(mu.items(), smu):
                assert v == w and F(k, sv.denom) == p


# --------------------------------------------------------------------------
# linear programming


def test_feasible_point_finds_solution():
    x = feasible_point([[1, 1, 0], [0, 1, 1]], [F(1), F(1, 2)])
    assert x is not None
    assert x[0] + x[1] == 1 and x[1] + x[2] == F(1, 2)
    assert all(v >= 0 for v in x)


def test_feasible_point_reports_infeasible():
    assert feasible_point([[1, 1]], [F(-1)]) is None
    assert feasible_point([[1, 0], [1, 0]], [F(1), F(2)]) is None


def test_convex_combination_middle_point():
    pts = [[F(3, 10), F(3, 10), F(2, 5)], [F(1, 2), F(2, 5), F(1, 10)]]
    lam = convex_combination(pts, [F(2, 5), F(7, 20), F(1, 4)])
    assert lam == [F(1, 2), F(1, 2)]
    assert convex_combination(pts, [F(2, 5), F(3, 10), F(3, 10)]) is None


# --------------------------------------------------------------------------
# relations as matrices


def test_relation_from_partition_and_classes():
    r = Relation.from_partition(4, [[0, 2], [1], [3]])
    assert r.is_equivalence()
    assert r.related(0, 2) and r.related(2, 0) and not r.related(0, 1)
    assert sorted(map(sorted, r.classes())) == [[0, 2], [1], [3]]


def test_relation_downsets_of_preorder():
    # 0 below 1, 1 below 2
    r = Relation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)])
    assert r.is_transitive() and not r.is_symmetric()
    assert r.down(1) == {0, 1}
    assert sorted(map(sorted, r.downsets())) == [[], [0], [0, 1], [0, 1, 2]]


def test_relation_transitive_closure_and_subset():
    r = Relation.from_pairs(3, [(0, 1), (1, 2)])
    c = r.transitive_closure()
    assert c.related(0, 2)
    assert r <= c and not c <= r


def test_label_equality(middle):
    r = Relation.label_equality(middle)
    assert r.related(middle.index("s"), middle.index("r"))
    assert not r.related(middle.index("s1"), middle.index("s2"))


# --------------------------------------------------------------------------
# transitions


def test_hull_contains_middle_transition(middle):
    s, r = middle.index("s"), middle.index("r")
    proj = [dict(mu.items()) for mu in middle.transitions[s]]
    mid = dict(middle.transitions[r][1].items())
    assert hull_contains(proj, mid) is None
    assert hull_contains(proj, dict(middle.transitions[r][0].items())) == [1, 0]
    halfway = {u: (proj[0].get(u, 0) + proj[1].get(u, 0)) / 2 for u in middle.states}
    assert hull_contains(proj, halfway) == [F(1, 2), F(1, 2)]


def test_weight_function_identity(middle):
    rel = Relation.identity(middle.n)
    mu = middle.transitions[0][0]
    w = find_weight_function(mu, mu, rel)
    assert w is not None
    assert find_weight_function(mu, middle.transitions[0][1], rel) is None


def test_combined_weight_match(middle):
    rel = Relation.label_equality(middle)
    s, r = middle.index("s"), middle.index("r")
    assert combined_weight_match(middle, middle.transitions[s][0], r, rel) is not None
    # r's middle transition is no mixture of s's transitions
    assert combined_weight_match(middle, middle.transitions[r][1], s, rel) is None


def test_branching_vertices_absorbing(middle):
    rel = Relation.label_equality(middle)
    u = middle.index("s1")
    assert branching_transition_vertices(middle, u, rel, 2) == {Distribution.dirac(u)}
