"""Recursive-descent parser for the textual formula syntax.

Binding, tightest first: ``!`` and ``X``, then ``U`` / ``U<=n`` (right
associative), then ``&``, then ``|``.  Probability operators are written
``P>=q [ path ]`` with ``q`` a decimal or a ratio.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import FormulaSyntaxError
from .syntax import FALSE, TRUE, And, Atom, BoundedUntil, Formula, Next, Not, Or, Prob, Until, is_state

__all__ = ["parse_formula", "parse_path_formula"]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<prob>P\s*(?:<=|>=|<|>))
  | (?P<buntil>U\s*<=\s*\d+)
  | (?P<num>\d+/\d+|\d+(?:\.\d*)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_@]*)
  | (?P<sym>[!&|()\[\]])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"X", "U", "true", "false"}


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group(kind)
            if kind == "ident" and value in _KEYWORDS:
                kind = value
            out.append((kind, value, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind or value is not None and tok[1] != value:
            want = value or kind
            got = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek()[:2] == ("sym", "|"):
            self.take()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_until()
        while self.peek()[:2] == ("sym", "&"):
            self.take()
            left = And(left, self.parse_until())
        return left

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        kind, value, _ = self.peek()
        if kind == "U":
            self.take()
            return Until(left, self.parse_until())
        if kind == "buntil":
            self.take()
            bound = int(re.sub(r"\D", "", value))
            return BoundedUntil(left, self.parse_until(), bound)
        return left

    def parse_unary(self) -> Formula:
        kind, value, pos = self.peek()
        if (kind, value) == ("sym", "!"):
            self.take()
            return Not(self.parse_unary())
        if kind == "X":
            self.take()
            return Next(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "ident":
            self.take()
            return Atom(value)
        if kind == "true":
            self.take()
            return TRUE
        if kind == "false":
            self.take()
            return FALSE
        if (kind, value) == ("sym", "("):
            self.take()
            inner = self.parse_or()
            self.take("sym", ")")
            return inner
        if kind == "prob":
            self.take()
            op = value[1:].strip()
            _, qtext, qpos = self.take("num")
            q = Fraction(qtext)
            if not 0 <= q <= 1:
                raise FormulaSyntaxError(f"threshold {q} outside [0,1]", qpos)
            self.take("sym", "[")
            path = self.parse_or()
            self.take("sym", "]")
            return Prob(op, q, path)
        raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", pos)


def parse_path_formula(text: str) -> Formula:
    """Parse a formula that may contain temporal operators at top level."""
    p = _Parser(text)
    f = p.parse_or()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"trailing input {value!r}", pos)
    return f


def parse_formula(text: str) -> Formula:
    """Parse a state formula (temporal operators only under ``P``)."""
    f = parse_path_formula(text)
    if not is_state(f):
        raise FormulaSyntaxError("temporal operator outside a probability operator", 0)
    return f
