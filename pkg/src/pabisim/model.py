"""Probabilistic automata with exact rational distributions.

The textual format is line based::

    pa coin
    state t label c0
    absorbing t1 label heads
    absorbing t2 label tails
    init t
    trans t -> 2/5:t1 0.6:t2

Lines starting with ``#`` (and trailing ``#`` comments) are ignored.  State
ids are identifiers, or the composed display form ``(a,b)`` produced by
:func:`interleave`, so composed models round-trip through the format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Mapping

from .errors import ModelError

__all__ = [
    "Distribution",
    "ProbAutomaton",
    "parse_model",
    "format_model",
    "interleave",
    "disjoint_union",
    "to_fraction",
]


def to_fraction(text: str) -> Fraction:
    """Parse a decimal (``0.35``) or ratio (``7/20``) literal exactly."""
    text = text.strip()
    if not re.fullmatch(r"\d+(\.\d*)?|\.\d+|\d+/\d+", text):
        raise ValueError(f"not a probability literal: {text!r}")
    value = Fraction(text)
    return value


class Distribution:
    """Finite-support probability distribution over state indices.

    Zero entries are dropped; the remaining masses must sum to exactly one.
    Instances are immutable and hashable, so they can live in sets.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]]):
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[int, Fraction] = {}
        for state, p in items:
            p = Fraction(p)
            if p < 0:
                raise ModelError(f"negative probability {p} for state {state}")
            if p:
                acc[state] = acc.get(state, Fraction(0)) + p
        total = sum(acc.values(), Fraction(0))
        if total != 1:
            raise ModelError(f"distribution sums to {total}")
        self._entries = tuple(sorted(acc.items()))
        self._hash = hash(self._entries)

    @classmethod
    def dirac(cls, state: int) -> "Distribution":
        return cls({state: Fraction(1)})

    def items(self):
        return self._entries

    @property
    def support(self) -> frozenset[int]:
        return frozenset(s for s, _ in self._entries)

    def __getitem__(self, state: int) -> Fraction:
        for s, p in self._entries:
            if s == state:
                return p
        return Fraction(0)

    def mass(self, states) -> Fraction:
        """Probability assigned to a set of states."""
        return sum((p for s, p in self._entries if s in states), Fraction(0))

    def project(self, block_of) -> dict[int, Fraction]:
        """Lift to blocks: ``block_of[state]`` gives the block id of a state."""
        out: dict[int, Fraction] = {}
        for s, p in self._entries:
            b = block_of[s]
            out[b] = out.get(b, Fraction(0)) + p
        return out

    def is_dirac(self) -> bool:
        return len(self._entries) == 1

    def __eq__(self, other):
        return isinstance(other, Distribution) and self._entries == other._entries

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __repr__(self):
        inner = ", ".join(f"{s}: {p}" for s, p in self._entries)
        return f"Distribution({{{inner}}})"


@dataclass(frozen=True, eq=False)
class ProbAutomaton:
    """States are dense indices ``0..n-1``; ``names`` gives their display ids."""

    name: str
    names: tuple[str, ...]
    transitions: tuple[tuple[Distribution, ...], ...]
    initial: frozenset[int]
    props: frozenset[str]
    labels: tuple[frozenset[str], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.transitions) != n or len(self.labels) != n:
            raise ModelError("names, transitions and labels must have equal length")
        if len(set(self.names)) != n:
            raise ModelError("duplicate state id")
        for mus in self.transitions:
            for mu in mus:
                for s, _ in mu.items():
                    if not 0 <= s < n:
                        raise ModelError(f"distribution refers to unknown state index {s}")
        for lab in self.labels:
            if not lab <= self.props:
                raise ModelError(f"labels {sorted(lab - self.props)} missing from props")
        for i in self.initial:
            if not 0 <= i < n:
                raise ModelError(f"unknown initial state index {i}")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def states(self) -> range:
        return range(len(self.names))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, state: str | int) -> int:
        """Resolve a display id (or pass through an index)."""
        if isinstance(state, int):
            if not 0 <= state < self.n:
                raise KeyError(state)
            return state
        key = state.replace(" ", "")
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"unknown state {state!r} in automaton {self.name!r}") from None

    def states_with(self, *props: str) -> frozenset[int]:
        return frozenset(i for i in self.states if all(p in self.labels[i] for p in props))

    @cached_property
    def successors(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(s for mu in mus for s, _ in mu.items()) for mus in self.transitions
        )

    @cached_property
    def predecessors(self) -> tuple[frozenset[int], ...]:
        pre: list[set[int]] = [set() for _ in self.states]
        for u, succ in enumerate(self.successors):
            for v in succ:
                pre[v].add(u)
        return tuple(frozenset(p) for p in pre)

    @cached_property
    def scaled(self) -> "ScaledView":
        return ScaledView(self)

    def __repr__(self):
        return f"ProbAutomaton({self.name!r}, {self.n} states)"


class ScaledView:
    """Integer view of an automaton: every probability is ``w / denom``.

    Engines that evaluate thousands of events use this to stay in integer
    arithmetic; a value computed over ``k`` steps is an integer over
    ``denom**k``.
    """

    def __init__(self, a: ProbAutomaton):
        denom = 1
        for mus in a.transitions:
            for mu in mus:
                for _, p in mu.items():
                    denom = lcm(denom, p.denominator)
        self.denom = denom
        self.trans: tuple[tuple[tuple[tuple[int, int], ...], ...], ...] = tuple(
            tuple(tuple((v, int(p * denom)) for v, p in mu.items()) for mu in mus)
            for mus in a.transitions
        )


# --------------------------------------------------------------------------
# text format

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_PROP = r"[A-Za-z_][A-Za-z0-9_@]*"


def _id_pattern(depth: int = 3) -> str:
    pat = _IDENT
    for _ in range(depth):
        pat = rf"(?:{_IDENT}|\((?:{pat}),(?:{pat})\))"
    return pat


_STATE_ID = _id_pattern()
_STATE_RE = re.compile(rf"({_STATE_ID})")
_LABEL_RE = re.compile(rf"{_PROP}(?:,{_PROP})*")


def _normalize_spaces(line: str) -> str:
    # composite ids may be written "(s, t)"; squeeze spaces inside parentheses
    out, depth = [], 0
    for ch in line:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch.isspace() and depth > 0:
            continue
        out.append(ch)
    return "".join(out)


def parse_model(text: bytes | str) -> ProbAutomaton:
    """Parse and validate a model; errors carry the offending line number."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelError(f"model is not valid UTF-8: {exc}") from None

    name = "model"
    order: list[str] = []
    labels: dict[str, frozenset[str]] = {}
    absorbing: set[str] = set()
    inits: list[tuple[int, str]] = []
    trans_lines: list[tuple[int, str, list[tuple[str, str]]]] = []
    seen_pa = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        line = _normalize_spaces(line)
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "pa":
            if seen_pa:
                raise ModelError("duplicate 'pa' header", lineno)
            if not re.fullmatch(r"[A-Za-z0-9_.\-]+", rest):
                raise ModelError(f"bad automaton name {rest!r}", lineno)
            name, seen_pa = rest, True
        elif keyword in ("state", "absorbing"):
            m = re.fullmatch(rf"({_STATE_ID})(?:\s+label\s+(\S+))?", rest)
            if not m:
                raise ModelError(f"expected '{keyword} <id> [label p,q,...]'", lineno)
            sid, lab = m.group(1), m.group(2)
            if lab is not None and not _LABEL_RE.fullmatch(lab):
                raise ModelError(f"bad label list {lab!r}", lineno)
            if sid in labels:
                raise ModelError(f"state {sid} declared twice", lineno)
            order.append(sid)
            labels[sid] = frozenset(lab.split(",")) if lab else frozenset()
            if keyword == "absorbing":
                absorbing.add(sid)
        elif keyword == "init":
            if not re.fullmatch(_STATE_ID, rest):
                raise ModelError("expected 'init <id>'", lineno)
            inits.append((lineno, rest))
        elif keyword == "trans":
            m = re.fullmatch(rf"({_STATE_ID})\s*->\s*(.+)", rest)
            if not m:
                raise ModelError("expected 'trans <id> -> <prob>:<id> ...'", lineno)
            targets = []
            for tok in m.group(2).split():
                pm = re.fullmatch(rf"([0-9./]+):({_STATE_ID})", tok)
                if not pm:
                    raise ModelError(f"bad successor entry {tok!r}", lineno)
                targets.append((pm.group(1), pm.group(2)))
            trans_lines.append((lineno, m.group(1), targets))
        else:
            raise ModelError(f"unknown keyword {keyword!r}", lineno)

    if not order:
        raise ModelError("model declares no states")
    index = {sid: i for i, sid in enumerate(order)}
    transitions: list[list[Distribution]] = [[] for _ in order]
    for sid in order:
        if sid in absorbing:
            transitions[index[sid]].append(Distribution.dirac(index[sid]))
    for lineno, src, targets in trans_lines:
        if src not in index:
            raise ModelError(f"reference to undeclared state {src}", lineno)
        entries: dict[int, Fraction] = {}
        for ptxt, tgt in targets:
            if tgt not in index:
                raise ModelError(f"reference to undeclared state {tgt}", lineno)
            try:
                p = to_fraction(ptxt)
            except (ValueError, ZeroDivisionError):
                raise ModelError(f"bad probability {ptxt!r}", lineno) from None
            if p <= 0 or p > 1:
                raise ModelError(f"probability {p} outside (0,1]", lineno)
            entries[index[tgt]] = entries.get(index[tgt], Fraction(0)) + p
        total = sum(entries.values(), Fraction(0))
        if total != 1:
            raise ModelError(f"distribution sums to {total}", lineno)
        transitions[index[src]].append(Distribution(entries))
    initial = set()
    for lineno, sid in inits:
        if sid not in index:
            raise ModelError(f"reference to undeclared state {sid}", lineno)
        initial.add(index[sid])
    props = frozenset().union(*labels.values())
    return ProbAutomaton(
        name=name,
        names=tuple(order),
        transitions=tuple(tuple(t) for t in transitions),
        initial=frozenset(initial),
        props=props,
        labels=tuple(labels[s] for s in order),
    )


def _fmt_prob(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def format_model(a: ProbAutomaton) -> str:
    """Render an automaton in the model format (inverse of parse_model)."""
    lines = [f"pa {a.name}"]
    for i, sid in enumerate(a.names):
        lab = ",".join(sorted(a.labels[i]))
        lines.append(f"state {sid}" + (f" label {lab}" if lab else ""))
    for i in sorted(a.initial):
        lines.append(f"init {a.names[i]}")
    for i, sid in enumerate(a.names):
        for mu in a.transitions[i]:
            succ = " ".join(f"{_fmt_prob(p)}:{a.names[v]}" for v, p in mu.items())
            lines.append(f"trans {sid} -> {succ}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# composition


def interleave(a: ProbAutomaton, b: ProbAutomaton) -> ProbAutomaton:
    """Interleaving composition a ∥ b.

    State ``(s,t)`` has index ``s * b.n + t``.  Each transition of ``s`` moves
    the left component with ``t`` fixed, each transition of ``t`` moves the
    right one; a move both sides can make is listed once.  Propositions are
    tagged ``p@1`` and ``q@2``.
    """
    nb = b.n
    names, transitions, labels = [], [], []
    for s in a.states:
        for t in b.states:
            names.append(f"({a.names[s]},{b.names[t]})")
            moves = [
                Distribution({u * nb + t: p for u, p in mu.items()}) for mu in a.transitions[s]
            ]
            moves += [
                Distribution({s * nb + v: p for v, p in nu.items()}) for nu in b.transitions[t]
            ]
            transitions.append(tuple(dict.fromkeys(moves)))
            labels.append(
                frozenset(f"{p}@1" for p in a.labels[s]) | frozenset(f"{q}@2" for q in b.labels[t])
            )
    props = frozenset(f"{p}@1" for p in a.props) | frozenset(f"{q}@2" for q in b.props)
    initial = frozenset(s * nb + t for s in a.initial for t in b.initial)
    return ProbAutomaton(
        name=f"{a.name}_par_{b.name}",
        names=tuple(names),
        transitions=tuple(transitions),
        initial=initial,
        props=props,
        labels=tuple(labels),
    )


def disjoint_union(a: ProbAutomaton, b: ProbAutomaton, suffix: str = "_2") -> ProbAutomaton:
    """Place two automata side by side; b's states follow a's, ids get ``suffix``
    when they clash.  Propositions are shared, which is what relating states
    across the two parts needs."""
    used = set(a.names)
    bnames = []
    for sid in b.names:
        new = sid
        if new in used and new.startswith("("):
            raise ModelError(f"composite id {sid} clashes and cannot be renamed")
        while new in used:
            new += suffix
        used.add(new)
        bnames.append(new)
    off = a.n
    shifted = tuple(
        tuple(Distribution({v + off: p for v, p in mu.items()}) for mu in mus)
        for mus in b.transitions
    )
    return ProbAutomaton(
        name=f"{a.name}_plus_{b.name}",
        names=a.names + tuple(bnames),
        transitions=a.transitions + shifted,
        initial=a.initial | frozenset(i + off for i in b.initial),
        props=a.props | b.props,
        labels=a.labels + b.labels,
    )
