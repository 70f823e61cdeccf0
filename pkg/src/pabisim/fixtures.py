"""The regression corpus: small hand-built automata with expected answers.

Every expectation carries a provenance tag:

``published``
    the answer stated alongside the example when it was first described;
``trivial``
    follows from the definitions at a glance;
``derived``
    computed here and confirmed by the independent check named in
    ``oracle``.

A published expectation may be marked ``disputed``; the note then names the
formula or event that contradicts it, found and re-verified by the oracle.
The runner still compares against the published answer, so a disputed
expectation shows up as a failure rather than being quietly dropped.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib.resources import files
from typing import Any, Callable

from .logic import BoundedUntil, check, parse_formula, path_value_bounds, sat
from .model import ProbAutomaton, disjoint_union, format_model, interleave, parse_model
from .oracle import (
    FormulaBudget,
    bounded_reach_by_enumeration,
    distinguishing_state_formula,
    logical_equiv,
    logical_preorder,
    path_formula_value_set,
)
from .relation import Relation
from .relations import RelationQuery, relate, strong_1_depth

__all__ = [
    "Expectation",
    "Fixture",
    "Outcome",
    "FIXTURES",
    "load_data",
    "fixture",
    "fixture_model",
    "run_fixture",
    "run_corpus",
]

PUBLISHED, TRIVIAL, DERIVED = "published", "trivial", "derived"


@dataclass(frozen=True)
class Expectation:
    """One query against a fixture and the answer it should produce.

    ``op`` selects the computation (see :data:`OPS`); ``args`` are its
    keyword arguments.
    """

    op: str
    args: tuple[tuple[str, Any], ...]
    expected: Any
    provenance: str
    oracle: str | None = None
    disputed: str | None = None

    def __post_init__(self):
        if self.provenance not in (PUBLISHED, TRIVIAL, DERIVED):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance == DERIVED and not self.oracle:
            raise ValueError("a derived expectation must name its oracle")
        if self.op not in OPS:
            raise ValueError(f"unknown fixture operation {self.op!r}")

    @property
    def kwargs(self) -> dict:
        return dict(self.args)

    def describe(self) -> str:
        parts = [f"{k}={_show(v)}" for k, v in self.args]
        return f"{self.op}({', '.join(parts)})"


@dataclass(frozen=True)
class Fixture:
    name: str
    model: Callable[[], ProbAutomaton]
    expectations: tuple[Expectation, ...]
    summary: str = ""

    @property
    def text(self) -> str:
        return format_model(self.model())


@dataclass
class Outcome:
    fixture: str
    expectation: Expectation
    actual: Any
    passed: bool
    seconds: float
    detail: str = ""

    def line(self) -> str:
        e = self.expectation
        status = "PASS" if self.passed else "FAIL"
        tag = e.provenance + (f", oracle: {e.oracle}" if e.oracle else "")
        out = (
            f"{status} {self.fixture}: {e.describe()} -> {_show(self.actual)}"
            f" (expected {_show(e.expected)}; {tag}; {self.seconds:.2f}s)"
        )
        if self.detail:
            out += f"\n     {self.detail}"
        if e.disputed:
            out += f"\n     disputed: {e.disputed}"
        return out


def _show(v) -> str:
    if isinstance(v, tuple):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    if isinstance(v, frozenset):
        return "{" + ",".join(sorted(map(str, v))) + "}"
    return str(v)


# --------------------------------------------------------------------------
# operations


def _op_relate(a, relation, pair, depth=None, direction=None, max_events=200_000):
    v = relate(a, RelationQuery(relation, depth=depth, direction=direction, max_events=max_events), pair)
    detail = v.witness.describe(a) if v.witness is not None else ""
    if v.caps_hit:
        detail = (detail + "; " if detail else "") + "caps: " + ", ".join(v.caps_hit)
    return v.related, detail


def _op_witness_values(a, relation, pair, depth=None):
    v = relate(a, RelationQuery(relation, depth=depth), pair)
    if v.witness is None or v.witness.values is None:
        return None, "no valued witness"
    replayed = v.witness.replay(a)
    if replayed != v.witness.values:
        return None, f"witness does not replay: {replayed}"
    return v.witness.values, v.witness.describe(a)


def _op_principal(a, pair):
    rel = strong_1_depth(a, principal_only=True)
    return rel.related(a.index(pair[0]), a.index(pair[1])), ""


def _op_mc(a, formula, state):
    return check(a, parse_formula(formula))[a.index(state)], ""


def _op_path_value(a, formula, state, mode):
    """Optimal value of the path formula under ``P`` in ``formula``."""
    phi = parse_formula(formula)
    lo, hi = path_value_bounds(a, phi.path)
    u = a.index(state)
    return (hi if mode == "sup" else lo)[u], ""


def _op_enum_path_value(a, formula, state, mode):
    """The same value by exhaustive deterministic-scheduler enumeration."""
    phi = parse_formula(formula)
    psi = phi.path
    u = a.index(state)
    if isinstance(psi, BoundedUntil):
        lo, hi = bounded_reach_by_enumeration(a, u, sat(a, psi.left), sat(a, psi.right), psi.bound)
    else:
        values = path_formula_value_set(a, u, psi)
        lo, hi = min(values), max(values)
    return (hi if mode == "sup" else lo), ""


def _op_oracle_equiv(a, fragment, pair):
    v = logical_equiv(a, pair[0], pair[1], FormulaBudget(fragment))
    detail = "" if v.equivalent else f"{v.formula}: {_show(v.value_s)} vs {_show(v.value_r)}"
    return v.equivalent, detail


def _op_oracle_preorder(a, fragment, pair):
    v = logical_preorder(a, pair[0], pair[1], FormulaBudget(fragment))
    return v.below, "" if v.below else f"refuted by {v.formula}"


def _op_distinguish(a, target):
    rel = Relation.label_equality(a)
    tgt = frozenset(a.index(x) for x in target)
    f = distinguishing_state_formula(a, rel, tgt)
    got = sat(a, f)
    return frozenset(a.names[u] for u in got), str(f)


OPS = {
    "relate": _op_relate,
    "witness-values": _op_witness_values,
    "principal-only": _op_principal,
    "mc": _op_mc,
    "path-value": _op_path_value,
    "enum-path-value": _op_enum_path_value,
    "oracle-equiv": _op_oracle_equiv,
    "oracle-preorder": _op_oracle_preorder,
    "distinguish": _op_distinguish,
}


# --------------------------------------------------------------------------
# corpus


@lru_cache(maxsize=None)
def load_data(filename: str) -> ProbAutomaton:
    """A model shipped in the package's ``data`` directory."""
    return parse_model(files("pabisim.data").joinpath(filename).read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def _product() -> ProbAutomaton:
    return interleave(load_data("convex_middle.pa"), load_data("coin.pa"))


@lru_cache(maxsize=None)
def _halves() -> ProbAutomaton:
    return disjoint_union(load_data("convex_middle_left.pa"), load_data("convex_middle_right.pa"))


def E(op, expected, provenance, oracle=None, disputed=None, **args) -> Expectation:
    return Expectation(op, tuple(args.items()), expected, provenance, oracle, disputed)


SR = ("s", "r")
RS = ("r", "s")
PAIR_T = ("(s,t)", "(r,t)")
CONE_FORMULA = "P<=0.38 [ X (l1 | l3) & X X (l1 | l3) ]"
PRODUCT_FORMULA = (
    "P<=0.34 [ ((top@1 & c@2) | (a1@1 & c@2) | (a3@1 & c@2)) U<=2 ((a1@1 & c2@2) | (a3@1 & c1@2)) ]"
)
STUTTER_FORMULA = "P<=0.34 [ ((top | l1) U l5) | ((top | l3) U l4) ]"

_CONE_DISPUTE = (
    "the event C={s,r,s3} U<=3 C'={s1,s4} has sup 3/5 at s and 5/8 at r; "
    "the oracle separates s and r in PCTL-3 with P<=3/5[(top|l3) U<=3 (l1|l4)]"
)
_STUTTER_DISPUTE = (
    "the event C={s,r,s2,s3,s4} U C'={s1,s5} has sup 14/25 at s and 29/50 at r; "
    "the oracle separates s and r in PCTL without next"
)

FIXTURES: tuple[Fixture, ...] = (
    Fixture(
        "convex_middle",
        lambda: load_data("convex_middle.pa"),
        (
            E("relate", False, PUBLISHED, relation="strong-prob-bisim", pair=SR),
            E("relate", True, PUBLISHED, relation="strong-1", pair=SR),
            *(E("relate", True, PUBLISHED, relation="strong-branching-i", depth=i, pair=SR) for i in (1, 2, 3, 4)),
            E("oracle-equiv", True, PUBLISHED, fragment="PCTL-3", pair=SR),
            E("relate", True, DERIVED, "oracle PCTL*-2 partition", relation="strong-i", depth=2, pair=SR),
            E("relate", True, DERIVED, "oracle PCTL\\X partition", relation="weak-branching-bisim", pair=SR),
            E("relate", True, DERIVED, "per-transition weight-function flow; safe-fragment oracle",
              relation="strong-prob-sim", pair=SR),
            E("relate", False, DERIVED, "per-transition weight-function flow",
              relation="strong-prob-sim", pair=RS),
            E("oracle-preorder", True, DERIVED, "safe-fragment oracle (simulation soundness)",
              fragment="PCTLs", pair=SR),
            E("distinguish", frozenset({"s1", "s2", "s3"}), DERIVED, "satisfaction set replayed by the checker",
              target=("s1", "s2", "s3")),
            E("relate", True, TRIVIAL, relation="strong-1", pair=("s", "s")),
        ),
        "r has one extra transition that s cannot mix together",
    ),
    Fixture(
        "cone_split",
        lambda: load_data("cone_split.pa"),
        (
            E("mc", True, PUBLISHED, formula=CONE_FORMULA, state="s"),
            E("mc", False, PUBLISHED, formula=CONE_FORMULA, state="r"),
            E("path-value", Fraction(39, 100), DERIVED, "horizon-2 scheduler enumeration",
              formula=CONE_FORMULA, state="r", mode="sup"),
            E("enum-path-value", Fraction(39, 100), DERIVED, "horizon-2 scheduler enumeration",
              formula=CONE_FORMULA, state="r", mode="sup"),
            E("relate", False, PUBLISHED, relation="strong-i", depth=2, pair=SR),
            E("witness-values", (Fraction(19, 50), Fraction(39, 100)), DERIVED,
              "witness replay through the pattern engine", relation="strong-i", depth=2, pair=SR),
            E("oracle-equiv", False, PUBLISHED, fragment="PCTL*-2", pair=SR),
            E("oracle-equiv", False, DERIVED, "distinguishing formula re-checked by the model checker",
              fragment="PCTL-2", pair=SR),
            E("relate", False, DERIVED, "oracle PCTL-2 partition",
              relation="strong-branching-i", depth=2, direction="match-both", pair=SR),
            *(
                E("relate", True, PUBLISHED, disputed=_CONE_DISPUTE if i >= 3 else None,
                  relation="strong-branching-i", depth=i, pair=SR)
                for i in (1, 2, 3, 4)
            ),
        ),
        "a depth-2 cone conjunction separates s and r",
    ),
    Fixture(
        "principal_only",
        lambda: load_data("principal_only.pa"),
        (
            E("principal-only", True, PUBLISHED, pair=SR),
            E("relate", False, PUBLISHED, relation="strong-1", pair=SR),
            E("mc", False, PUBLISHED, formula="P>=1/2 [ X (l1 | l2) ]", state="s"),
            E("mc", True, PUBLISHED, formula="P>=1/2 [ X (l1 | l2) ]", state="r"),
            E("distinguish", frozenset({"s1", "s2"}), PUBLISHED, target=("s1", "s2")),
        ),
        "single-class target sets miss a two-class union",
    ),
    Fixture(
        "stutter_split",
        lambda: load_data("stutter_split.pa"),
        (
            E("relate", True, PUBLISHED, disputed=_STUTTER_DISPUTE, relation="weak-branching-bisim", pair=SR),
            E("relate", False, PUBLISHED, relation="weak-bisim", pair=SR),
            E("mc", True, PUBLISHED, formula=STUTTER_FORMULA, state="s"),
            E("mc", False, PUBLISHED, formula=STUTTER_FORMULA, state="r"),
            E("path-value", Fraction(17, 50), DERIVED, "stuttering-pattern product engine",
              formula=STUTTER_FORMULA, state="s", mode="sup"),
            E("path-value", Fraction(9, 25), PUBLISHED, formula=STUTTER_FORMULA, state="r", mode="sup"),
        ),
        "a disjunction of untils separates s and r",
    ),
    Fixture(
        "convex_middle_coin",
        _product,
        (
            E("path-value", Fraction(17, 50), DERIVED, "horizon-2 scheduler enumeration",
              formula=PRODUCT_FORMULA, state="(s,t)", mode="sup"),
            E("path-value", Fraction(9, 25), PUBLISHED, formula=PRODUCT_FORMULA, state="(r,t)", mode="sup"),
            E("enum-path-value", Fraction(17, 50), DERIVED, "horizon-2 scheduler enumeration",
              formula=PRODUCT_FORMULA, state="(s,t)", mode="sup"),
            E("enum-path-value", Fraction(9, 25), DERIVED, "horizon-2 scheduler enumeration",
              formula=PRODUCT_FORMULA, state="(r,t)", mode="sup"),
            E("mc", True, PUBLISHED, formula=PRODUCT_FORMULA, state="(s,t)"),
            E("mc", False, PUBLISHED, formula=PRODUCT_FORMULA, state="(r,t)"),
            E("relate", True, PUBLISHED, relation="strong-1", pair=PAIR_T),
            E("relate", False, PUBLISHED, relation="strong-branching-i", depth=2, pair=PAIR_T),
            E("relate", False, PUBLISHED, relation="strong-i", depth=2, pair=PAIR_T),
            E("relate", False, PUBLISHED, relation="weak-branching-bisim", pair=PAIR_T),
            E("relate", False, PUBLISHED, relation="weak-bisim", pair=PAIR_T),
        ),
        "convex_middle composed with a coin: bounded-until relations stop being congruences",
    ),
    Fixture(
        "convex_middle_halves",
        _halves,
        (
            E("relate", False, PUBLISHED, relation="strong-prob-bisim", pair=SR),
            E("relate", True, PUBLISHED, relation="strong-1", pair=SR),
            E("relate", True, TRIVIAL, relation="strong-prob-bisim", pair=("s1", "s1_2")),
        ),
        "the two halves placed side by side behave like convex_middle",
    ),
)


def fixture(name: str) -> Fixture:
    for fx in FIXTURES:
        if fx.name == name:
            return fx
    raise KeyError(f"no fixture named {name!r}")


def fixture_model(name: str) -> ProbAutomaton:
    return fixture(name).model()


def run_fixture(fx: Fixture) -> list[Outcome]:
    a = fx.model()
    out = []
    for e in fx.expectations:
        t0 = time.perf_counter()
        actual, detail = OPS[e.op](a, **e.kwargs)
        out.append(Outcome(fx.name, e, actual, actual == e.expected, time.perf_counter() - t0, detail))
    return out


def run_corpus(names=None) -> list[Outcome]:
    """Run every fixture (or the named ones) in corpus order."""
    chosen = FIXTURES if names is None else [fixture(n) for n in names]
    return [o for fx in chosen for o in run_fixture(fx)]
