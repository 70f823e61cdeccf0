"""Property-based checks on automata drawn directly by hypothesis."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from pabisim.logic import Next, Not, Prob, path_value_bounds, sat
from pabisim.logic.syntax import Atom
from pabisim.model import Distribution, ProbAutomaton, format_model, interleave, parse_model
from pabisim.oracle import bounded_reach_by_enumeration
from pabisim.reach import PatternSet, bounded_reach, pattern_opt
from pabisim.relation import Relation
from pabisim.relations import RelationQuery, compute

F = Fraction
PROPS = ("p", "q")


@st.composite
def distributions(draw, n):
    size = draw(st.integers(1, min(n, 3)))
    targets = draw(st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True))
    weights = draw(st.lists(st.integers(1, 4), min_size=size, max_size=size))
    total = sum(weights)
    return Distribution({t: F(w, total) for t, w in zip(targets, weights)})


@st.composite
def automata(draw, max_states=4):
    n = draw(st.integers(1, max_states))
    transitions = []
    for _ in range(n):
        mus = draw(st.lists(distributions(n), min_size=1, max_size=2))
        transitions.append(tuple(dict.fromkeys(mus)))
    labels = tuple(frozenset({draw(st.sampled_from(PROPS))}) for _ in range(n))
    return ProbAutomaton("h", tuple(f"u{k}" for k in range(n)), tuple(transitions), frozenset({0}), frozenset(PROPS), labels)


def state_sets(n):
    return st.frozensets(st.integers(0, n - 1))


common = settings(max_examples=60, deadline=None)


@common
@given(automata())
def test_text_round_trip(a):
    b = parse_model(format_model(a))
    assert b.transitions == a.transitions and b.labels == a.labels


@common
@given(st.data())
def test_bounded_reach_against_enumeration(data):
    a = data.draw(automata())
    C = data.draw(state_sets(a.n))
    Cp = data.draw(state_sets(a.n))
    n = data.draw(st.integers(0, 3))
    for u in a.states:
        lo, hi = bounded_reach_by_enumeration(a, u, C, Cp, n)
        assert bounded_reach(a, u, C, Cp, n, "inf")[0] == lo
        assert bounded_reach(a, u, C, Cp, n, "sup")[0] == hi


@common
@given(st.data())
def test_bounded_reach_monotone_in_steps(data):
    a = data.draw(automata())
    C = data.draw(state_sets(a.n))
    Cp = data.draw(state_sets(a.n))
    for u in a.states:
        for mode in ("inf", "sup"):
            vals = [bounded_reach(a, u, C, Cp, k, mode)[0] for k in range(4)]
            assert vals == sorted(vals)


@common
@given(st.data())
def test_next_complement(data):
    a = data.draw(automata())
    C = data.draw(state_sets(a.n))
    everything = frozenset(a.states)
    for u in a.states:
        hi = pattern_opt(a, u, PatternSet([[everything, C]]), "sup")[0]
        lo_rest = pattern_opt(a, u, PatternSet([[everything, everything - C]]), "inf")[0]
        assert hi + lo_rest == 1


@common
@given(automata(), st.sampled_from(PROPS), st.fractions(0, 1, max_denominator=8))
def test_negated_threshold_flips(a, p, q):
    psi = Next(Atom(p))
    at_least = sat(a, Prob(">=", q, psi))
    below = sat(a, Prob("<", q, psi))
    lo, hi = path_value_bounds(a, psi)
    assert at_least == frozenset(u for u in a.states if lo[u] >= q)
    assert below == frozenset(u for u in a.states if hi[u] < q)
    assert sat(a, Not(Prob(">=", q, psi))) == frozenset(a.states) - at_least


@common
@given(automata())
def test_bisimulation_chain(a):
    spb = compute(a, RelationQuery("strong-prob-bisim"))
    s1 = compute(a, RelationQuery("strong-1"))
    sb1 = compute(a, RelationQuery("strong-branching-i", depth=1))
    assert spb <= s1 <= Relation.label_equality(a)
    assert s1 == sb1


@settings(max_examples=25, deadline=None)
@given(automata(max_states=3), automata(max_states=2))
def test_strong_1_is_congruence(a, b):
    rel_a = compute(a, RelationQuery("strong-1"))
    p = interleave(a, b)
    rel_p = compute(p, RelationQuery("strong-1"))
    for s, r in rel_a.pairs():
        for t in b.states:
            assert rel_p.related(s * b.n + t, r * b.n + t)
