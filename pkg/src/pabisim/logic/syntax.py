"""Formula AST shared by state and path formulae.

State and path formulae use one node family: a formula is a *state* formula
when no temporal operator occurs outside a ``Prob`` node.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "Formula",
    "Atom",
    "Const",
    "Not",
    "And",
    "Or",
    "Prob",
    "Next",
    "Until",
    "BoundedUntil",
    "TRUE",
    "FALSE",
    "is_state",
    "conj",
    "disj",
    "neg",
    "subformulas",
]


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"!{_wrap(self.arg, 4)}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left, 2)} & {_wrap(self.right, 2)}"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left, 1)} | {_wrap(self.right, 1)}"


@dataclass(frozen=True)
class Prob:
    op: str  # one of "<", "<=", ">=", ">"
    q: Fraction
    path: "Formula"

    def __post_init__(self):
        if self.op not in ("<", "<=", ">=", ">"):
            raise ValueError(f"bad comparison {self.op!r}")
        if not 0 <= self.q <= 1:
            raise ValueError(f"threshold {self.q} outside [0,1]")

    def __str__(self):
        q = self.q
        qs = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return f"P{self.op}{qs} [ {self.path} ]"


@dataclass(frozen=True)
class Next:
    arg: "Formula"

    def __str__(self):
        return f"X {_wrap(self.arg, 4)}"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left, 4)} U {_wrap(self.right, 3)}"


@dataclass(frozen=True)
class BoundedUntil:
    left: "Formula"
    right: "Formula"
    bound: int

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("until bound must be nonnegative")

    def __str__(self):
        return f"{_wrap(self.left, 4)} U<={self.bound} {_wrap(self.right, 3)}"


Formula = Union[Atom, Const, Not, And, Or, Prob, Next, Until, BoundedUntil]
TRUE = Const(True)
FALSE = Const(False)

# binding strength used when printing: | 1, & 2, U 3, unary 4, atoms 5
_LEVEL = {Or: 1, And: 2, Until: 3, BoundedUntil: 3, Not: 4, Next: 4}


def _wrap(f, level):
    own = _LEVEL.get(type(f), 5)
    text = str(f)
    return f"({text})" if own < level else text


def is_state(f: Formula) -> bool:
    """True when no temporal operator occurs outside a probability operator."""
    if isinstance(f, (Atom, Const, Prob)):
        return True
    if isinstance(f, Not):
        return is_state(f.arg)
    if isinstance(f, (And, Or)):
        return is_state(f.left) and is_state(f.right)
    return False


def conj(*parts: Formula) -> Formula:
    """Conjunction with constant folding; empty conjunction is ``true``."""
    out: Formula | None = None
    for p in parts:
        if p == FALSE:
            return FALSE
        if p == TRUE:
            continue
        out = p if out is None else And(out, p)
    return TRUE if out is None else out


def disj(*parts: Formula) -> Formula:
    out: Formula | None = None
    for p in parts:
        if p == TRUE:
            return TRUE
        if p == FALSE:
            continue
        out = p if out is None else Or(out, p)
    return FALSE if out is None else out


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def subformulas(f: Formula):
    """Yield every node, parents before children."""
    yield f
    if isinstance(f, (Not, Next)):
        yield from subformulas(f.arg)
    elif isinstance(f, (And, Or, Until, BoundedUntil)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Prob):
        yield from subformulas(f.path)
