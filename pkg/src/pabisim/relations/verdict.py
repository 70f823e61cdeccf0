"""Queries, witnesses and verdicts returned by the relation checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..model import ProbAutomaton
from ..reach import (
    PatternSet,
    bounded_reach,
    pattern_opt,
    stuttering_pattern_opt,
    unbounded_reach,
)
from ..relation import Relation

__all__ = ["RelationQuery", "Witness", "Verdict", "Trace", "RELATION_NAMES", "one_step_value"]

BISIMULATIONS = (
    "strong-prob-bisim",
    "branching-prob-bisim",
    "strong-1",
    "strong-branching-i",
    "strong-i",
    "weak-branching-bisim",
    "weak-bisim",
)
SIMULATIONS = ("strong-prob-sim", "branching-sim-i", "sim-i", "weak-branching-sim", "weak-sim")
RELATION_NAMES = BISIMULATIONS + SIMULATIONS
INDEXED = ("strong-branching-i", "strong-i", "branching-sim-i", "sim-i")


@dataclass(frozen=True)
class RelationQuery:
    """Which relation to compute and with which parameters.

    ``direction`` is ``"match-at-least"``, ``"match-at-most"`` or
    ``"match-both"`` (sup and inf compared on every event, bisimulations
    only); ``None`` picks the default (at-least for bisimulations, at-most
    for simulations).
    ``pattern_length`` and ``antichain_size`` bound the pattern enumeration of
    the weak relations; ``max_events`` bounds any single enumeration.
    """

    name: str
    depth: int | None = None
    direction: str | None = None
    pattern_length: int | None = None
    antichain_size: int = 2
    max_events: int = 200_000
    branching_depth: int | None = None

    def __post_init__(self):
        if self.name not in RELATION_NAMES:
            raise ValueError(f"unknown relation {self.name!r}")
        if self.name in INDEXED:
            if self.depth is None or self.depth < 1:
                raise ValueError(f"{self.name} needs a depth >= 1")
        elif self.depth is not None and self.name != "branching-prob-bisim":
            raise ValueError(f"{self.name} takes no depth")
        if self.direction not in (None, "match-at-least", "match-at-most", "match-both"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.direction == "match-both" and self.name in SIMULATIONS:
            raise ValueError("match-both applies to bisimulations only")

    @property
    def effective_direction(self) -> str:
        if self.direction is not None:
            return self.direction
        return "match-at-most" if self.name in SIMULATIONS else "match-at-least"

    @property
    def is_simulation(self) -> bool:
        return self.name in SIMULATIONS


@dataclass
class Witness:
    """Evidence that a pair was separated.

    ``kind`` is one of ``label``, ``transition`` (a transition with no
    combined match), ``downset`` (one-step mass of a set over plain
    transitions), ``bounded`` (``C U<=j C'``), ``until`` (``C U C'``),
    ``patterns`` or ``stutter``.  ``values`` holds the optimal values at the
    two states in ``mode``; for ``downset`` witnesses the values are the
    max (``sup``) or the relevant min (``inf``) over plain transitions.
    """

    kind: str
    s: int
    r: int
    mode: str | None = None
    values: tuple[Fraction, Fraction] | None = None
    C: frozenset[int] | None = None
    Cp: frozenset[int] | None = None
    steps: int | None = None
    patterns: PatternSet | None = None
    transition: int | None = None
    note: str = ""

    def describe(self, a: ProbAutomaton) -> str:
        names = a.names
        fmt = lambda X: "{" + ",".join(names[x] for x in sorted(X)) + "}"
        head = f"{names[self.s]} vs {names[self.r]}: "
        if self.kind == "label":
            return head + "labels differ"
        if self.kind == "transition":
            return head + f"transition #{self.transition} of {names[self.s]} has no match at {names[self.r]}" + (
                f" ({self.note})" if self.note else ""
            )
        if self.kind == "downset":
            body = f"one-step mass of C={fmt(self.C)}"
        elif self.kind == "bounded":
            body = f"C={fmt(self.C)} U<={self.steps} C'={fmt(self.Cp)}"
        elif self.kind == "until":
            body = f"C={fmt(self.C)} U C'={fmt(self.Cp)}"
        elif self.kind in ("patterns", "stutter"):
            body = ("stuttering " if self.kind == "stutter" else "") + "patterns " + self.patterns.describe(names)
        else:
            body = self.kind
        vs, vr = self.values
        return head + f"{body}, {self.mode} {vs} vs {vr}"

    def replay(self, a: ProbAutomaton) -> tuple[Fraction, Fraction] | None:
        """Recompute the two values from scratch with the public engines."""
        if self.values is None:
            return None
        out = []
        for u in (self.s, self.r):
            if self.kind == "downset":
                out.append(one_step_value(a, u, self.C, self.mode))
            elif self.kind == "bounded":
                out.append(bounded_reach(a, u, self.C, self.Cp, self.steps, self.mode)[0])
            elif self.kind == "until":
                out.append(unbounded_reach(a, u, self.C, self.Cp, self.mode)[0])
            elif self.kind == "patterns":
                out.append(pattern_opt(a, u, self.patterns, self.mode)[0])
            elif self.kind == "stutter":
                out.append(stuttering_pattern_opt(a, u, self.patterns, self.mode)[0])
            else:
                return None
        return out[0], out[1]


def one_step_value(a: ProbAutomaton, u: int, C, mode: str) -> Fraction:
    """Max (``sup``), min (``inf``) or least positive (``inf+``) value of
    ``μ(C)`` over the plain transitions of ``u``; 0 when there is none."""
    masses = [mu.mass(C) for mu in a.transitions[u]]
    if mode == "inf+":
        masses = [m for m in masses if m > 0]
    if not masses:
        return Fraction(0)
    return max(masses) if mode == "sup" else min(masses)


@dataclass
class Trace:
    """Side information gathered while computing a relation."""

    witnesses: dict[tuple[int, int], Witness] = field(default_factory=dict)
    caps_hit: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    rounds: int = 0

    def separate(self, w: Witness, symmetric: bool = True) -> None:
        self.witnesses.setdefault((w.s, w.r), w)
        if symmetric:
            mirrored = Witness(**{**w.__dict__, "s": w.r, "r": w.s})
            if mirrored.values is not None:
                mirrored.values = (w.values[1], w.values[0])
            self.witnesses.setdefault((w.r, w.s), mirrored)

    def cap(self, message: str) -> None:
        if message not in self.caps_hit:
            self.caps_hit.append(message)


@dataclass
class Verdict:
    query: RelationQuery
    relation: Relation
    pair: tuple[int, int] | None = None
    related: bool | None = None
    witness: Witness | None = None
    caps_hit: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)

    def report(self, a: ProbAutomaton) -> str:
        q = self.query
        lines = [f"relation: {q.name}"]
        if q.depth is not None:
            lines.append(f"depth: {q.depth}")
        lines.append(f"direction: {q.effective_direction}")
        for k, v in self.params.items():
            lines.append(f"{k}: {v}")
        lines.append("caps hit: " + ("; ".join(self.caps_hit) if self.caps_hit else "none"))
        for n in self.notes:
            lines.append(f"note: {n}")
        rel = self.relation
        if rel.kind == "equivalence" and rel.is_symmetric():
            lines.append("classes:")
            for cls in rel.classes():
                lines.append("  {" + ", ".join(a.names[x] for x in sorted(cls)) + "}")
        else:
            lines.append("preorder (row s lists every r with s below r):")
            for s in a.states:
                ups = [a.names[r] for r in a.states if rel.related(s, r)]
                lines.append(f"  {a.names[s]} <= " + ", ".join(ups))
        if self.pair is not None:
            s, r = self.pair
            lines.append(f"pair: {a.names[s]},{a.names[r]}")
            lines.append(f"related: {'yes' if self.related else 'no'}")
            if self.witness is not None:
                lines.append("witness: " + self.witness.describe(a))
        return "\n".join(lines)
