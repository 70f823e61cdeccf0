"""Brute-force logical equivalence and preorder by formula enumeration.

The oracle never looks at the relation checkers.  It grows the set of
definable state sets in rounds: each round enumerates the path formulae of
a fragment over the current cells (or, for safe fragments, over the current
lattice of satisfaction sets), evaluates their exact optimal values with the
model checker, and splits on any difference.  Because thresholds range over
a dense set and both strict and non-strict bounds exist, two states are
separated by some ``P⋈q ψ`` exactly when the infimum or the supremum of
``ψ`` differs between them; no threshold enumeration is needed.

To keep formulae small while a round runs, each cell is named by a fresh
atom on a relabelled copy of the automaton; reported formulae substitute the
real characteristic formulae back and are re-checked on the original.

Also here: exhaustive enumeration of deterministic history-dependent
schedulers for bounded reachability, and an explicit path-tree evaluator for
until-free path formulae, used as independent references for the engines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .errors import PabisimError, ResourceCapError
from .logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    BoundedUntil,
    Const,
    FragmentTag,
    ModelChecker,
    Next,
    Not,
    Or,
    Prob,
    Until,
    check,
    conj,
    disj,
    is_state,
    neg,
)
from .logic.syntax import Formula
from .model import ProbAutomaton
from .relation import Relation

__all__ = [
    "FormulaBudget",
    "LogicalVerdict",
    "LogicalPartition",
    "PreorderVerdict",
    "enumerate_path_events",
    "logical_partition",
    "logical_equiv",
    "logical_preorder",
    "distinguishing_state_formula",
    "label_formula",
    "substitute",
    "scheduler_value_set",
    "bounded_reach_by_enumeration",
    "path_formula_value_set",
    "InseparableError",
]

FRAGMENTS = ("PCTL", "PCTL-", "PCTL*-", "PCTL\\X", "PCTLs", "PCTL*s")
OPTION_CAP = 200_000


@dataclass(frozen=True)
class FormulaBudget:
    """Which formulae the oracle may use.

    ``max_depth`` is the ``X`` depth for the star fragments and the largest
    step bound of bounded until otherwise.  ``max_until_nesting`` bounds the
    number of nested ``P`` rounds (``None``: until nothing changes).
    ``max_boolean_size`` bounds how many cells a state-formula operand may
    join (``None``: any number).
    """

    fragment: FragmentTag
    max_depth: int = 1
    max_until_nesting: int | None = None
    max_boolean_size: int | None = None

    def __post_init__(self):
        if isinstance(self.fragment, str):
            object.__setattr__(self, "fragment", _parse_tag(self.fragment))
        if self.fragment.base not in FRAGMENTS:
            raise ValueError(f"the oracle does not enumerate {self.fragment}")
        if self.fragment.index is not None:
            object.__setattr__(self, "max_depth", self.fragment.index)
        for v in (self.max_depth, self.max_until_nesting, self.max_boolean_size):
            if v is not None and v < 0:
                raise ValueError("budget bounds must be nonnegative")

    @property
    def safe(self) -> bool:
        return self.fragment.base in ("PCTLs", "PCTL*s")

    def __str__(self):
        nest = "stable" if self.max_until_nesting is None else self.max_until_nesting
        size = "any" if self.max_boolean_size is None else self.max_boolean_size
        return f"{self.fragment} (depth {self.max_depth}, P-nesting {nest}, union size {size})"


def _parse_tag(text: str) -> FragmentTag:
    for base in sorted(FRAGMENTS, key=len, reverse=True):
        if text.startswith(base):
            rest = text[len(base):]
            if rest == "":
                return FragmentTag(base)
            if rest.isdigit():
                return FragmentTag(base, int(rest))
    raise ValueError(f"unknown fragment {text!r}")


# --------------------------------------------------------------------------
# formula helpers


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Replace atoms by formulae."""
    if isinstance(f, Atom):
        return mapping.get(f.name, f)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, Next):
        return Next(substitute(f.arg, mapping))
    if isinstance(f, Prob):
        return Prob(f.op, f.q, substitute(f.path, mapping))
    if isinstance(f, BoundedUntil):
        return BoundedUntil(substitute(f.left, mapping), substitute(f.right, mapping), f.bound)
    return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))


def label_formula(a: ProbAutomaton, u: int) -> Formula:
    """Short formula true exactly at the states labelled like ``u``."""
    mine = a.labels[u]
    pos = conj(*(Atom(p) for p in sorted(mine)))
    negs = []
    for other in sorted({lab for lab in a.labels if lab != mine and mine <= lab}, key=sorted):
        negs.append(neg(Atom(sorted(other - mine)[0])))
    return conj(pos, *dict.fromkeys(negs))


def _relabel(a: ProbAutomaton, names: list[str], sets: list[frozenset[int]]) -> ProbAutomaton:
    labels = [set(lab) for lab in a.labels]
    for name, members in zip(names, sets):
        for u in members:
            labels[u].add(name)
    return ProbAutomaton(
        a.name,
        a.names,
        a.transitions,
        a.initial,
        a.props | frozenset(names),
        tuple(frozenset(lab) for lab in labels),
    )


def _union_formula(names: list[str], idx) -> Formula:
    return disj(*(Atom(names[k]) for k in idx))


def _subsets(k: int, limit: int | None, min_size: int = 1):
    top = k if limit is None else min(k, limit)
    for size in range(min_size, top + 1):
        yield from combinations(range(k), size)


# --------------------------------------------------------------------------
# path events


def enumerate_path_events(a: ProbAutomaton, budget: FormulaBudget, cells=None, names=None):
    """Path formulae of the fragment over unions of ``cells``.

    ``cells`` defaults to the label classes and ``names`` to atoms naming
    them (the formulae then use those atom names; see :func:`substitute`).
    For the until-free star fragment the full family is exponential, so this
    stream lists only single cone chains ``X(φ1 ∧ X(φ2 ∧ ...))``; the
    partition oracle covers all antichains through its option program.
    """
    if cells is None:
        cells = [frozenset(c) for c in Relation.label_equality(a).classes()]
    if names is None:
        names = [f"#c{k}" for k in range(len(cells))]
    k = len(cells)
    base = budget.fragment.base
    lim = budget.max_boolean_size
    seen = set()

    def emit(f):
        if f not in seen:
            seen.add(f)
            return True
        return False

    if base in ("PCTL-", "PCTL", "PCTLs"):
        for D in _subsets(k, lim):
            f = Next(_union_formula(names, D))
            if emit(f):
                yield f
    if base in ("PCTL-", "PCTL", "PCTL\\X", "PCTLs"):
        bounds = []
        if base != "PCTL\\X":
            bounds += list(range(1, budget.max_depth + 1))
        if base in ("PCTL", "PCTL\\X", "PCTLs"):
            bounds.append(None)
        for choice in product((0, 1, 2), repeat=k):
            left = [c for c in range(k) if choice[c] == 0]
            right = [c for c in range(k) if choice[c] == 1]
            if not right or not left:
                continue  # empty left operand: a state formula
            if lim is not None and (len(left) > lim or len(right) > lim):
                continue
            L, R = _union_formula(names, left), _union_formula(names, right)
            for n in bounds:
                f = Until(L, R) if n is None else BoundedUntil(L, R, n)
                if emit(f):
                    yield f
    if base in ("PCTL*-", "PCTL*s"):
        for depth in range(1, budget.max_depth + 1):
            for chain in product(list(_subsets(k, lim)), repeat=depth):
                body: Formula = TRUE
                for D in reversed(chain):
                    body = Next(conj(_union_formula(names, D), body))
                if emit(body):
                    yield body


# --------------------------------------------------------------------------
# partition oracle


@dataclass
class LogicalVerdict:
    """``equivalent`` under the budget, or the distinguishing formula.

    ``value_s`` and ``value_r`` are ``(inf, sup)`` of ``path`` at the two
    states; ``formula`` is a state formula true at exactly one of them.
    """

    equivalent: bool
    budget: FormulaBudget
    formula: Formula | None = None
    path: Formula | None = None
    value_s: tuple[Fraction, Fraction] | None = None
    value_r: tuple[Fraction, Fraction] | None = None
    rounds: int = 0

    def __str__(self):
        if self.equivalent:
            return f"equivalent under budget {self.budget}"
        return (
            f"distinguished by {self.formula}: (inf, sup) "
            f"{_pair(self.value_s)} vs {_pair(self.value_r)}"
        )


def _pair(v):
    return f"({v[0]}, {v[1]})"


@dataclass
class _Split:
    names: list[str]
    formulas: list[Formula]
    path: Formula
    values: dict[int, tuple[Fraction, Fraction]]


@dataclass
class LogicalPartition:
    """Result of the stratified refinement."""

    automaton: ProbAutomaton
    budget: FormulaBudget
    cells: list[frozenset[int]]
    formulas: list[Formula]
    rounds: int
    splits: dict[tuple[int, int], _Split] = field(default_factory=dict)

    @property
    def relation(self) -> Relation:
        return Relation.from_partition(self.automaton.n, self.cells)

    def verdict(self, s: int, r: int) -> LogicalVerdict:
        if s == r or self.relation.related(s, r):
            return LogicalVerdict(True, self.budget, rounds=self.rounds)
        a = self.automaton
        if a.labels[s] != a.labels[r]:
            f = label_formula(a, s)
            one = (Fraction(1), Fraction(1))
            zero = (Fraction(0), Fraction(0))
            return LogicalVerdict(False, self.budget, f, f, one, zero, self.rounds)
        sp = self.splits[(s, r)]
        mapping = dict(zip(sp.names, sp.formulas))
        psi = substitute(sp.path, mapping)
        vs, vr = sp.values[s], sp.values[r]
        phi = _separating_prob(psi, vs, vr)
        truth = check(a, phi)
        if truth[s] == truth[r]:
            raise PabisimError(f"internal error: {phi} does not separate the pair")
        return LogicalVerdict(False, self.budget, phi, psi, vs, vr, self.rounds)


def _separating_prob(psi, vs, vr) -> Formula:
    (lo_s, hi_s), (lo_r, hi_r) = vs, vr
    if hi_s != hi_r:
        return Prob("<=", min(hi_s, hi_r), psi)
    return Prob(">=", max(lo_s, lo_r), psi)


def _exclude(psi, vg, vh) -> Formula:
    """A ``P`` constraint on ``psi`` true at value ``vg`` and false at ``vh``."""
    (lo_g, hi_g), (lo_h, hi_h) = vg, vh
    if hi_g != hi_h:
        return Prob("<=", hi_g, psi) if hi_g < hi_h else neg(Prob("<=", hi_h, psi))
    return Prob(">=", lo_g, psi) if lo_g > lo_h else neg(Prob(">=", lo_h, psi))


def _star_events(a: ProbAutomaton, names, cells, depth: int, limit):
    """``(formula, inf, sup)`` for every set of cell sequences of length ``depth + 1``.

    Options at depth ``m`` are disjunctions ``⋁ X(φ_c ∧ ρ_c)`` with each
    ``ρ_c`` an option of depth ``m - 1`` (or omitted).  After the first step
    the subtrees are independent, so their optima add up per transition;
    distinct value vectors are kept with one formula each.  Arithmetic is on
    integers over ``denom**m``.
    """
    N = a.n
    trans = a.scaled.trans
    D = a.scaled.denom
    slots = [(v, t) for v in range(N) for t in range(len(trans[v]))]
    owner = {}
    for c, cell in enumerate(cells):
        for w in cell:
            owner[w] = c
    # per slot and cell: [(state, weight)]
    parts = [[[] for _ in cells] for _ in slots]
    for n, (v, t) in enumerate(slots):
        for w, wt in trans[v][t]:
            parts[n][owner[w]].append((w, wt))
    mine = [[n for n, (v2, _) in enumerate(slots) if v2 == v] for v in range(N)]
    one = tuple([1] * N)
    opts: dict = {(one, one): TRUE}
    scale = 1
    for _ in range(depth):
        zero = tuple([0] * (2 * len(slots)))
        partial = {zero: None}
        for c in range(len(cells)):
            contribs = []
            for (lo, hi), rho in opts.items():
                add = []
                for n in range(len(slots)):
                    pc = parts[n][c]
                    add.append(sum(wt * lo[w] for w, wt in pc))
                    add.append(sum(wt * hi[w] for w, wt in pc))
                if any(add):
                    contribs.append((add, Next(conj(Atom(names[c]), rho))))
            grown = dict(partial)
            for key, f in partial.items():
                for add, g in contribs:
                    nk = tuple([x + y for x, y in zip(key, add)])
                    if nk not in grown:
                        grown[nk] = g if f is None else Or(f, g)
                if len(grown) > OPTION_CAP:
                    raise ResourceCapError("oracle-options", OPTION_CAP, "star fragment enumeration")
            partial = grown
        new = {
            (tuple(x * D for x in lo), tuple(x * D for x in hi)): f for (lo, hi), f in opts.items()
        }
        for key, f in partial.items():
            if f is None:
                continue
            lo = tuple(min((key[2 * n] for n in mine[v]), default=0) for v in range(N))
            hi = tuple(max((key[2 * n + 1] for n in mine[v]), default=0) for v in range(N))
            new.setdefault((lo, hi), f)
        opts = new
        scale *= D
    for (lo, hi), f in opts.items():
        if f is not TRUE:
            yield f, [Fraction(x, scale) for x in lo], [Fraction(x, scale) for x in hi]


def logical_partition(a: ProbAutomaton, budget: FormulaBudget) -> LogicalPartition:
    """Coarsest partition induced by the fragment under ``budget``."""
    if budget.safe:
        raise ValueError("safe fragments induce a preorder; use logical_preorder")
    cells = [frozenset(c) for c in Relation.label_equality(a).classes()]
    formulas = [label_formula(a, min(c)) for c in cells]
    result = LogicalPartition(a, budget, cells, formulas, 0)
    rounds = 0
    while budget.max_until_nesting is None or rounds < budget.max_until_nesting:
        names = [f"#c{k}" for k in range(len(cells))]
        aug = _relabel(a, names, cells)
        mc = ModelChecker(aug)
        if budget.fragment.base == "PCTL*-":
            events = _star_events(aug, names, cells, budget.max_depth, budget.max_boolean_size)
        else:
            events = (
                (psi, mc.values(psi, "inf"), mc.values(psi, "sup"))
                for psi in enumerate_path_events(aug, budget, cells, names)
            )
        sig: dict[int, list] = {u: [] for u in a.states}
        recorded = []
        for psi, lo, hi in events:
            useful = False
            for cell in cells:
                first = next(iter(cell))
                if any((lo[u], hi[u]) != (lo[first], hi[first]) for u in cell):
                    useful = True
                    break
            if not useful:
                continue
            for u in a.states:
                sig[u].append((lo[u], hi[u]))
            recorded.append(psi)
        rounds += 1
        new_cells, new_formulas = [], []
        changed = False
        for cell, phi in zip(cells, formulas):
            groups: dict[tuple, list[int]] = {}
            for u in sorted(cell):
                groups.setdefault(tuple(sig[u]), []).append(u)
            parts = sorted(groups.values(), key=lambda g: g[0])
            if len(parts) == 1:
                new_cells.append(cell)
                new_formulas.append(phi)
                continue
            changed = True
            mapping = dict(zip(names, formulas))
            for g in parts:
                constraints = []
                for h in parts:
                    if h is g:
                        continue
                    e = next(k for k, (x, y) in enumerate(zip(sig[g[0]], sig[h[0]])) if x != y)
                    psi = substitute(recorded[e], mapping)
                    constraints.append(_exclude(psi, sig[g[0]][e], sig[h[0]][e]))
                    for s in g:
                        for r in h:
                            ks = next(k for k, (x, y) in enumerate(zip(sig[s], sig[r])) if x != y)
                            result.splits[(s, r)] = _Split(
                                names,
                                list(formulas),
                                recorded[ks],
                                {s: sig[s][ks], r: sig[r][ks]},
                            )
                new_cells.append(frozenset(g))
                new_formulas.append(conj(phi, *constraints))
        order = sorted(range(len(new_cells)), key=lambda k: min(new_cells[k]))
        cells = [new_cells[k] for k in order]
        formulas = [new_formulas[k] for k in order]
        result.cells, result.formulas, result.rounds = cells, formulas, rounds
        if not changed:
            break
    return result


def logical_equiv(a: ProbAutomaton, s, r, budget: FormulaBudget) -> LogicalVerdict:
    """Are ``s`` and ``r`` indistinguishable by the fragment under ``budget``?"""
    s, r = a.index(s), a.index(r)
    return logical_partition(a, budget).verdict(s, r)


class InseparableError(PabisimError):
    def __init__(self, s: int, r: int, budget: FormulaBudget):
        super().__init__(f"states {s} and {r} are not separated under budget {budget}")
        self.pair = (s, r)


def distinguishing_state_formula(
    a: ProbAutomaton, classes: Relation, target, budget: FormulaBudget | None = None
) -> Formula:
    """State formula whose satisfaction set is exactly ``target``.

    ``target`` must be a union of classes of ``classes``.  Every class must
    be a union of cells of the logical partition under ``budget`` (default:
    full PCTL with step bounds up to the number of states); otherwise the
    classes cannot be told apart and :class:`InseparableError` is raised.
    """
    budget = budget or FormulaBudget(FragmentTag("PCTL"), max_depth=max(1, a.n))
    target = frozenset(a.index(x) for x in target)
    block = classes.block_of()
    for s in target:
        for r in a.states:
            if block[r] == block[s] and r not in target:
                raise ValueError("target is not a union of classes")
    part = logical_partition(a, budget)
    cell_of = part.relation.block_of()
    for s in a.states:
        for r in a.states:
            if block[s] != block[r] and cell_of[s] == cell_of[r]:
                raise InseparableError(s, r, budget)
    chosen = [f for c, f in zip(part.cells, part.formulas) if c <= target]
    phi = disj(*chosen)
    truth = check(a, phi)
    if frozenset(u for u in a.states if truth[u]) != target:
        raise PabisimError(f"internal error: {phi} does not define the target")
    return phi


# --------------------------------------------------------------------------
# safe preorder


@dataclass
class PreorderVerdict:
    below: bool
    budget: FormulaBudget
    formula: Formula | None = None

    def __str__(self):
        if self.below:
            return f"below under budget {self.budget}"
        return f"refuted by {self.formula}"


def _safe_lattice(a: ProbAutomaton, budget: FormulaBudget) -> dict[frozenset[int], Formula]:
    """Satisfaction sets of safe formulae under the budget, each with a formula."""
    everything = frozenset(a.states)
    lat: dict[frozenset[int], Formula] = {everything: TRUE, frozenset(): FALSE}
    for p in sorted(a.props):
        on = frozenset(u for u in a.states if p in a.labels[u])
        lat.setdefault(on, Atom(p))
        lat.setdefault(everything - on, Not(Atom(p)))

    def close():
        changed = True
        while changed:
            changed = False
            items = list(lat.items())
            for (x, fx), (y, fy) in combinations(items, 2):
                for z, fz in ((x & y, conj(fx, fy)), (x | y, disj(fx, fy))):
                    if z not in lat:
                        lat[z] = fz
                        changed = True

    close()
    rounds = 0
    while budget.max_until_nesting is None or rounds < budget.max_until_nesting:
        sets = sorted(lat, key=lambda x: (len(x), sorted(x)))
        names = [f"#l{k}" for k in range(len(sets))]
        aug = _relabel(a, names, sets)
        mc = ModelChecker(aug)
        mapping = {nm: lat[x] for nm, x in zip(names, sets)}
        before = len(lat)
        for psi in _safe_events(budget, names):
            lo = mc.values(psi, "inf")
            for q in sorted(set(lo)):
                if q == 0:
                    continue
                hit = frozenset(u for u in a.states if lo[u] >= q)
                if hit not in lat:
                    lat[hit] = Prob(">=", q, substitute(psi, mapping))
        close()
        rounds += 1
        if len(lat) == before:
            break
    return lat


def _safe_events(budget: FormulaBudget, names):
    atoms = [Atom(n) for n in names]
    star = budget.fragment.base == "PCTL*s"
    # the star fragment has no step-bounded until; its depth bounds X chains
    bounds = [] if star else list(range(1, budget.max_depth + 1))
    for x in atoms:
        yield Next(x)
    for x in atoms:
        for y in atoms:
            for n in bounds:
                yield BoundedUntil(x, y, n)
            yield Until(x, y)
    if star:
        for depth in range(2, budget.max_depth + 1):
            for chain in product(atoms, repeat=depth):
                body: Formula = TRUE
                for x in reversed(chain):
                    body = Next(conj(x, body))
                yield body


def logical_preorder(a: ProbAutomaton, s, r, budget: FormulaBudget) -> PreorderVerdict:
    """Does every safe formula (under the budget) true at ``r`` hold at ``s``?"""
    if not budget.safe:
        raise ValueError("logical_preorder needs a safe fragment")
    s, r = a.index(s), a.index(r)
    for x, f in _safe_lattice(a, budget).items():
        if r in x and s not in x:
            return PreorderVerdict(False, budget, f)
    return PreorderVerdict(True, budget)


# --------------------------------------------------------------------------
# brute force over schedulers


def scheduler_value_set(a: ProbAutomaton, s: int, C, Cp, n: int) -> frozenset[Fraction]:
    """Values of ``C U<=n C'`` under every deterministic history-dependent scheduler.

    Each finite history picks its own transition, so after a choice the
    successors' subtrees are scheduled independently and every combination
    of their values occurs.
    """
    C, Cp = frozenset(C), frozenset(Cp)
    memo: dict = {}

    def values(u: int, k: int) -> frozenset[Fraction]:
        if u in Cp:
            return frozenset({Fraction(1)})
        if u not in C or k == 0 or not a.transitions[u]:
            return frozenset({Fraction(0)})
        key = (u, k)
        if key in memo:
            return memo[key]
        out: set[Fraction] = set()
        for mu in a.transitions[u]:
            sums = {Fraction(0)}
            for v, p in mu.items():
                sums = {x + p * y for x in sums for y in values(v, k - 1)}
            out |= sums
        memo[key] = frozenset(out)
        return memo[key]

    return values(s, n)


def bounded_reach_by_enumeration(a: ProbAutomaton, s: int, C, Cp, n: int) -> tuple[Fraction, Fraction]:
    """``(inf, sup)`` of ``C U<=n C'`` over all enumerated schedulers."""
    vals = scheduler_value_set(a, s, C, Cp, n)
    return min(vals), max(vals)


def _holds_on_path(a: ProbAutomaton, psi, path: tuple[int, ...], pos: int, sat) -> bool:
    if is_state(psi):
        return path[pos] in sat(psi)
    if isinstance(psi, Not):
        return not _holds_on_path(a, psi.arg, path, pos, sat)
    if isinstance(psi, And):
        return _holds_on_path(a, psi.left, path, pos, sat) and _holds_on_path(a, psi.right, path, pos, sat)
    if isinstance(psi, Or):
        return _holds_on_path(a, psi.left, path, pos, sat) or _holds_on_path(a, psi.right, path, pos, sat)
    if isinstance(psi, Next):
        return _holds_on_path(a, psi.arg, path, pos + 1, sat)
    if isinstance(psi, BoundedUntil):
        for k in range(psi.bound + 1):
            if _holds_on_path(a, psi.right, path, pos + k, sat):
                return True
            if not _holds_on_path(a, psi.left, path, pos + k, sat):
                return False
        return False
    raise ValueError(f"explicit evaluation needs an until-free formula, got {psi}")


def _reach(psi) -> int:
    if is_state(psi):
        return 0
    if isinstance(psi, (Not,)):
        return _reach(psi.arg)
    if isinstance(psi, Next):
        return 1 + _reach(psi.arg)
    if isinstance(psi, BoundedUntil):
        return psi.bound + max(_reach(psi.left), _reach(psi.right))
    if isinstance(psi, (And, Or)):
        return max(_reach(psi.left), _reach(psi.right))
    raise ValueError(f"explicit evaluation needs an until-free formula, got {psi}")


def path_formula_value_set(a: ProbAutomaton, s: int, psi) -> frozenset[Fraction]:
    """Values of an until-free path formula under every deterministic scheduler.

    Paths are unfolded explicitly to the formula's horizon and the formula is
    evaluated on each full prefix.  Every state needs a transition.
    """
    h = _reach(psi)
    cache: dict = {}

    def sat(phi):
        if phi not in cache:
            truth = check(a, phi)
            cache[phi] = frozenset(u for u in a.states if truth[u])
        return cache[phi]

    def values(path: tuple[int, ...]) -> frozenset[Fraction]:
        if len(path) == h + 1:
            return frozenset({Fraction(1) if _holds_on_path(a, psi, path, 0, sat) else Fraction(0)})
        u = path[-1]
        if not a.transitions[u]:
            raise ValueError(f"state {a.names[u]} has no transition")
        out: set[Fraction] = set()
        for mu in a.transitions[u]:
            sums = {Fraction(0)}
            for v, p in mu.items():
                sums = {x + p * y for x in sums for y in values(path + (v,))}
            out |= sums
        return frozenset(out)

    return values((s,))
