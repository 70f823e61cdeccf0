"""Model checking for the supported fragments.

``P≥q`` and ``P>q`` hold when every scheduler meets the bound, so they are
decided against the infimum; ``P≤q`` and ``P<q`` against the supremum.

Path formulae are routed by shape:

* a state formula, ``X φ``, ``φ U<=n φ`` and ``φ U φ`` go to the dedicated
  engines;
* other until-free formulae (boolean combinations of ``X`` and bounded
  until) are compiled into a cone pattern set;
* formulae with unbounded until and no ``X`` are compiled into stuttering
  patterns: a state formula is a one-set pattern, ``∨`` is union, ``U``
  concatenates, and an outermost ``¬`` complements the value.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import FragmentError, ResourceCapError
from ..model import ProbAutomaton
from ..reach import (
    PatternSet,
    bounded_reach_all,
    pattern_opt_all,
    stuttering_pattern_opt_all,
    unbounded_reach_all,
)
from .fragments import horizon
from .syntax import And, Atom, BoundedUntil, Const, Formula, Next, Not, Or, Prob, Until, is_state

__all__ = [
    "ModelChecker",
    "check",
    "sat_states",
    "sat",
    "path_values",
    "path_value_bounds",
    "compile_cone_patterns",
    "compile_stutter_patterns",
    "PATTERN_DEPTH_CAP",
]

PATTERN_DEPTH_CAP = 4


class ModelChecker:
    """Evaluator bound to one automaton; satisfaction sets and path values
    are cached, so reuse one instance for many related queries."""

    def __init__(self, a: ProbAutomaton, depth_cap: int = PATTERN_DEPTH_CAP):
        self.a = a
        self.depth_cap = depth_cap
        self.cache: dict = {}
        self.everything = frozenset(a.states)

    # state formulae ---------------------------------------------------

    def sat(self, phi: Formula) -> frozenset[int]:
        if phi in self.cache:
            return self.cache[phi]
        a = self.a
        if isinstance(phi, Atom):
            out = frozenset(u for u in a.states if phi.name in a.labels[u])
        elif isinstance(phi, Const):
            out = self.everything if phi.value else frozenset()
        elif isinstance(phi, Not):
            out = self.everything - self.sat(phi.arg)
        elif isinstance(phi, And):
            out = self.sat(phi.left) & self.sat(phi.right)
        elif isinstance(phi, Or):
            out = self.sat(phi.left) | self.sat(phi.right)
        elif isinstance(phi, Prob):
            mode = "inf" if phi.op in (">=", ">") else "sup"
            vals = self.values(phi.path, mode)
            q, op = phi.q, phi.op
            test = {
                ">=": lambda x: x >= q,
                ">": lambda x: x > q,
                "<=": lambda x: x <= q,
                "<": lambda x: x < q,
            }[op]
            out = frozenset(u for u in a.states if test(vals[u]))
        else:
            raise FragmentError(f"not a state formula: {phi}", phi)
        self.cache[phi] = out
        return out

    # path formulae ----------------------------------------------------

    def values(self, psi: Formula, mode: str) -> list[Fraction]:
        key = ("values", psi, mode)
        if key in self.cache:
            return self.cache[key]
        out = self._values(psi, mode)
        self.cache[key] = out
        return out

    def _values(self, psi, mode):
        a = self.a
        S = self.everything
        if is_state(psi):
            hit = self.sat(psi)
            return [Fraction(1) if u in hit else Fraction(0) for u in a.states]
        if isinstance(psi, Next) and is_state(psi.arg):
            vals, _ = pattern_opt_all(a, PatternSet([[S, self.sat(psi.arg)]]), mode)
            return [vals[u] for u in a.states]
        if isinstance(psi, BoundedUntil) and is_state(psi.left) and is_state(psi.right):
            vals, _ = bounded_reach_all(a, self.sat(psi.left), self.sat(psi.right), psi.bound, mode)
            return vals
        if isinstance(psi, Until) and is_state(psi.left) and is_state(psi.right):
            vals, _ = unbounded_reach_all(a, self.sat(psi.left), self.sat(psi.right), mode)
            return vals
        kinds = _temporal_kinds(psi)
        if Until not in kinds:
            pats = compile_cone_patterns(a, psi, self.sat, self.depth_cap)
            vals, _ = pattern_opt_all(a, pats, mode)
            return [vals[u] for u in a.states]
        if Next in kinds or BoundedUntil in kinds:
            raise FragmentError(f"unsupported mix of next-step and until operators in {psi}", psi)
        if isinstance(psi, Not):
            other = "inf" if mode == "sup" else "sup"
            return [1 - x for x in self.values(psi.arg, other)]
        pats = compile_stutter_patterns(psi, self.sat)
        vals, _ = stuttering_pattern_opt_all(a, pats, mode)
        return [vals[u] for u in a.states]


def _temporal_kinds(psi) -> set:
    if is_state(psi):
        return set()
    if isinstance(psi, (Not, Next)):
        return {type(psi)} | _temporal_kinds(psi.arg)
    return {type(psi)} | _temporal_kinds(psi.left) | _temporal_kinds(psi.right)


def _state_leaves(psi, out: list):
    if is_state(psi):
        if psi not in out:
            out.append(psi)
    elif isinstance(psi, (Not, Next)):
        _state_leaves(psi.arg, out)
    else:
        _state_leaves(psi.left, out)
        _state_leaves(psi.right, out)


def _kleene_and(vals):
    if any(v is False for v in vals):
        return False
    return True if all(v is True for v in vals) else None


def _kleene_or(vals):
    if any(v is True for v in vals):
        return True
    return False if all(v is False for v in vals) else None


def _eval3(psi, seq, pos, leaf_index):
    """Kleene evaluation of an until-free path formula on a cell prefix.

    ``seq`` holds truth vectors of the state leaves; ``None`` means the
    prefix is too short to decide.
    """
    if is_state(psi):
        if pos >= len(seq):
            return None
        return seq[pos][leaf_index[psi]]
    if isinstance(psi, Not):
        v = _eval3(psi.arg, seq, pos, leaf_index)
        return None if v is None else not v
    if isinstance(psi, And):
        l = _eval3(psi.left, seq, pos, leaf_index)
        if l is False:
            return False
        r = _eval3(psi.right, seq, pos, leaf_index)
        if r is False:
            return False
        return True if (l and r) else None
    if isinstance(psi, Or):
        l = _eval3(psi.left, seq, pos, leaf_index)
        if l is True:
            return True
        r = _eval3(psi.right, seq, pos, leaf_index)
        if r is True:
            return True
        return False if (l is False and r is False) else None
    if isinstance(psi, Next):
        return _eval3(psi.arg, seq, pos + 1, leaf_index)
    if isinstance(psi, BoundedUntil):
        # some k <= n has the right operand at pos+k and the left one before it
        options = []
        for k in range(psi.bound + 1):
            parts = [_eval3(psi.left, seq, pos + j, leaf_index) for j in range(k)]
            parts.append(_eval3(psi.right, seq, pos + k, leaf_index))
            options.append(_kleene_and(parts))
        return _kleene_or(options)
    raise FragmentError(f"unexpected operator in until-free formula: {psi}", psi)


def compile_cone_patterns(a: ProbAutomaton, psi, sat, depth_cap=PATTERN_DEPTH_CAP) -> PatternSet:
    """Cone patterns whose union is exactly the paths satisfying ``psi``.

    States are grouped into cells by the truth values of the state leaves.
    Prefixes of cells are extended (only along successors actually present in
    the automaton) until the formula's truth is settled; settled-true prefixes
    become patterns.
    """
    h = horizon(psi)
    if h > depth_cap:
        raise ResourceCapError("pattern-depth", depth_cap, f"formula inspects {h} steps")
    leaves: list = []
    _state_leaves(psi, leaves)
    leaf_index = {leaf: k for k, leaf in enumerate(leaves)}
    sats = [sat(leaf) for leaf in leaves]
    cell_of: dict[tuple, set] = {}
    for u in a.states:
        cell_of.setdefault(tuple(u in s for s in sats), set()).add(u)
    cells = {vec: frozenset(members) for vec, members in cell_of.items()}
    vec_of = {u: vec for vec, members in cells.items() for u in members}
    patterns = []

    def extend(prefix_vecs, states_here):
        verdict = _eval3(psi, prefix_vecs, 0, leaf_index)
        if verdict is True:
            patterns.append([cells[v] for v in prefix_vecs])
            return
        if verdict is False or len(prefix_vecs) > h + 1:
            return
        succ = set()
        for u in states_here:
            succ |= a.successors[u]
        by_vec: dict[tuple, set] = {}
        for v in succ:
            by_vec.setdefault(vec_of[v], set()).add(v)
        for vec in sorted(by_vec):
            extend(prefix_vecs + [vec], by_vec[vec])

    for vec in sorted(cells):
        extend([vec], cells[vec])
    return PatternSet(patterns)


def compile_stutter_patterns(psi, sat) -> PatternSet:
    """Stuttering patterns for until formulae built from ``∨`` and ``U``.

    The left operand of every until must be a state formula: for nested
    left operands the concatenation reading is not faithful, so they are
    rejected.
    """

    def rec(f):
        if is_state(f):
            return [(sat(f),)]
        if isinstance(f, Or):
            return rec(f.left) + rec(f.right)
        if isinstance(f, Until):
            if not is_state(f.left):
                raise FragmentError(f"until with a temporal left operand is not supported: {f}", f)
            left = sat(f.left)
            return [(left,) + p for p in rec(f.right)]
        if isinstance(f, Not):
            raise FragmentError(f"negation over a temporal formula is only supported outermost: {f}", f)
        raise FragmentError(f"operator not supported in next-free path formulae: {f}", f)

    return PatternSet(rec(psi))


def check(a: ProbAutomaton, phi: Formula, depth_cap: int = PATTERN_DEPTH_CAP) -> dict[int, bool]:
    """Truth value of a state formula at every state."""
    if not is_state(phi):
        raise FragmentError("check expects a state formula", phi)
    hit = ModelChecker(a, depth_cap).sat(phi)
    return {u: u in hit for u in a.states}


sat_states = check


def sat(a: ProbAutomaton, phi: Formula, depth_cap: int = PATTERN_DEPTH_CAP) -> frozenset[int]:
    return ModelChecker(a, depth_cap).sat(phi)


def path_values(a: ProbAutomaton, psi: Formula, mode: str, depth_cap: int = PATTERN_DEPTH_CAP) -> list[Fraction]:
    """Optimal probability of a path formula at every state."""
    return ModelChecker(a, depth_cap).values(psi, mode)


def path_value_bounds(a: ProbAutomaton, psi: Formula, depth_cap: int = PATTERN_DEPTH_CAP):
    """``(inf, sup)`` lists over all states."""
    c = ModelChecker(a, depth_cap)
    return c.values(psi, "inf"), c.values(psi, "sup")
