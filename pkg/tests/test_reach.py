from fractions import Fraction

import pytest

from pabisim.generate import generate_random, sample_params
from pabisim.model import parse_model
from pabisim.oracle import bounded_reach_by_enumeration, scheduler_value_set
from pabisim.reach import (
    PatternSet,
    bounded_reach,
    bounded_reach_all,
    bounded_values_scaled,
    pattern_opt,
    replay_bounded,
    replay_pattern,
    replay_stuttering,
    replay_unbounded,
    solve_linear,
    stuttering_pattern_opt,
    unbounded_reach,
)

F = Fraction


def ids(a, *names):
    return {a.index(n) for n in names}


def test_bounded_reach_zero_steps(cone):
    s = cone.index("s")
    assert bounded_reach(cone, s, ids(cone, "s"), ids(cone, "s"), 0, "sup")[0] == 1
    assert bounded_reach(cone, s, ids(cone, "s"), ids(cone, "s4"), 0, "sup")[0] == 0


def test_bounded_reach_cone_values(cone):
    C = ids(cone, "s", "r", "s1", "s2", "s3")
    Cp = ids(cone, "s4")
    s, r = cone.index("s"), cone.index("r")
    assert bounded_reach(cone, s, C, Cp, 2, "inf")[0] == F(31, 50)
    assert bounded_reach(cone, r, C, Cp, 2, "inf")[0] == F(61, 100)
    assert bounded_reach(cone, s, C, Cp, 2, "sup")[0] == F(13, 20)
    assert bounded_reach(cone, r, C, Cp, 2, "sup")[0] == F(13, 20)


def test_bounded_reach_three_step_event(cone):
    C = ids(cone, "s", "r", "s3")
    Cp = ids(cone, "s1", "s4")
    assert bounded_reach(cone, cone.index("s"), C, Cp, 3, "sup")[0] == F(3, 5)
    assert bounded_reach(cone, cone.index("r"), C, Cp, 3, "sup")[0] == F(5, 8)


def test_bounded_matches_enumeration_on_fixture(cone):
    C = ids(cone, "s", "r", "s1", "s3")
    Cp = ids(cone, "s4", "s2")
    for u in cone.states:
        for n in range(4):
            lo, hi = bounded_reach_by_enumeration(cone, u, C, Cp, n)
            assert bounded_reach(cone, u, C, Cp, n, "inf")[0] == lo
            assert bounded_reach(cone, u, C, Cp, n, "sup")[0] == hi


def test_policy_witness_replays(cone):
    C = ids(cone, "s", "r", "s1", "s2", "s3")
    Cp = ids(cone, "s4")
    for mode in ("sup", "inf"):
        values, witness = bounded_reach_all(cone, C, Cp, 3, mode)
        for u in cone.states:
            assert replay_bounded(cone, u, C, Cp, 3, witness) == values[u]


def test_bounded_values_scaled_agree(cone):
    C = frozenset(ids(cone, "s", "r", "s3"))
    Cp = frozenset(ids(cone, "s1", "s4"))
    vals, denom, _ = bounded_values_scaled(cone, C, Cp, 3, "sup")
    for u in cone.states:
        assert F(vals[u], denom**3) == bounded_reach(cone, u, C, Cp, 3, "sup")[0]


def test_scheduler_value_set_contains_both_optima(middle):
    s = middle.index("r")
    vals = scheduler_value_set(middle, s, ids(middle, "r"), ids(middle, "s1"), 1)
    assert vals == {F(3, 10), F(2, 5), F(1, 2)}


def test_invalid_mode_rejected(cone):
    with pytest.raises(ValueError):
        bounded_reach(cone, 0, set(), set(), 1, "max")


def test_unbounded_reach_with_loops():
    a = parse_model(
        "pa loop\nstate a label p\nstate b label p\nabsorbing g label goal\nabsorbing d label dead\n"
        "trans a -> 1/2:a 1/2:g\ntrans a -> 1:b\ntrans b -> 1/3:g 2/3:d\n"
    )
    C, Cp = ids(a, "a", "b"), ids(a, "g")
    hi, wh = unbounded_reach(a, a.index("a"), C, Cp, "sup")
    lo, wl = unbounded_reach(a, a.index("a"), C, Cp, "inf")
    assert hi == 1 and lo == F(1, 3)
    assert replay_unbounded(a, a.index("a"), C, Cp, wh) == 1
    assert replay_unbounded(a, a.index("a"), C, Cp, wl) == F(1, 3)


def test_unbounded_inf_zero_on_self_loop():
    a = parse_model("pa x\nstate a label p\nabsorbing g label q\ntrans a -> 1:a\ntrans a -> 1:g\n")
    assert unbounded_reach(a, 0, {0}, {1}, "inf")[0] == 0
    assert unbounded_reach(a, 0, {0}, {1}, "sup")[0] == 1


def test_solve_linear_exact():
    x = solve_linear([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)])
    assert x == [F(4, 5), F(7, 5)]


def test_pattern_opt_cone_fixture(cone):
    i = cone.index
    pats = PatternSet([[{i("s"), i("r")}, {i("s1")}, {i("s1")}], [{i("s"), i("r")}, {i("s3")}, {i("s3")}]])
    assert pats.length == 3
    s_val, s_w = pattern_opt(cone, i("s"), pats, "sup")
    r_val, r_w = pattern_opt(cone, i("r"), pats, "sup")
    assert (s_val, r_val) == (F(19, 50), F(39, 100))
    assert replay_pattern(cone, i("r"), pats, r_w) == F(39, 100)
    assert pattern_opt(cone, i("s"), pats, "inf")[0] == F(7, 20)


def test_pattern_set_rejects_empty_pattern_and_drops_extensions():
    with pytest.raises(ValueError):
        PatternSet([[]])
    pats = PatternSet([[{0}, {1}], [{0}], [{2}, {1}]])
    assert len(pats) == 2 and pats.length == 2


def test_empty_pattern_set_has_value_zero(cone):
    assert pattern_opt(cone, 0, PatternSet([]), "sup")[0] == 0


def test_stuttering_pattern_values(stutter):
    i = stutter.index
    pats = PatternSet([[{i("s"), i("r"), i("s1")}, {i("s5")}], [{i("s"), i("r"), i("s3")}, {i("s4")}]])
    s_val, _ = stuttering_pattern_opt(stutter, i("s"), pats, "sup")
    r_val, r_w = stuttering_pattern_opt(stutter, i("r"), pats, "sup")
    assert (s_val, r_val) == (F(17, 50), F(9, 25))
    assert replay_stuttering(stutter, i("r"), pats, r_w) == F(9, 25)


@pytest.mark.parametrize("seed", range(12))
def test_bounded_reach_random_against_enumeration(seed):
    a = generate_random(sample_params(seed, 4))
    C = set(a.states) - {a.n - 1}
    Cp = {a.n - 1}
    for u in a.states:
        lo, hi = bounded_reach_by_enumeration(a, u, C, Cp, 3)
        assert bounded_reach(a, u, C, Cp, 3, "inf")[0] == lo
        assert bounded_reach(a, u, C, Cp, 3, "sup")[0] == hi
