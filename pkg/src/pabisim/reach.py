"""Optimal-scheduler probabilities for constrained reachability and cone patterns.

All engines are exact.  Bounded queries use backward induction over the
horizon (the optimum over history-dependent deterministic schedulers is
attained by a step-indexed memoryless one).  Unbounded queries use policy
iteration with exact linear solves.  Among equally good transitions the
lowest index wins, so witnesses are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from .errors import ResourceCapError
from .model import ProbAutomaton

__all__ = [
    "Mode",
    "PatternSet",
    "PolicyWitness",
    "bounded_reach",
    "bounded_reach_all",
    "bounded_values_scaled",
    "unbounded_reach",
    "unbounded_reach_all",
    "pattern_opt",
    "pattern_opt_all",
    "stuttering_pattern_opt",
    "stuttering_pattern_opt_all",
    "replay_bounded",
    "replay_unbounded",
    "replay_pattern",
    "replay_stuttering",
    "solve_linear",
    "ACCEPTOR_CAP",
]

Mode = Literal["sup", "inf"]
ACCEPTOR_CAP = 50000


def _check_mode(mode: str) -> None:
    if mode not in ("sup", "inf"):
        raise ValueError(f"mode must be 'sup' or 'inf', got {mode!r}")


def _better(mode: str, x, y) -> bool:
    return x > y if mode == "sup" else x < y


@dataclass(frozen=True)
class PolicyWitness:
    """Deterministic policy achieving a reported optimum.

    ``choice`` maps ``(state, step, memory)`` to a transition index.  ``step``
    is the number of steps already taken for finite-horizon policies and
    ``None`` for stationary ones; ``memory`` is the pattern-tracking state
    (``None`` when the query needs none).
    """

    kind: Literal["finite-horizon", "stationary"]
    choice: dict = field(default_factory=dict)

    def pick(self, state: int, step=None, memory=None):
        return self.choice.get((state, step, memory))


class PatternSet:
    """Set of nonempty sequences of state sets, kept prefix free.

    A pattern that extends another pattern of the set describes a sub-cone of
    it, so it is dropped on construction.
    """

    __slots__ = ("patterns",)

    def __init__(self, patterns: Iterable[Sequence[Iterable[int]]]):
        pats = {tuple(frozenset(c) for c in p) for p in patterns}
        if any(len(p) == 0 for p in pats):
            raise ValueError("patterns must be nonempty")
        keep = []
        for p in sorted(pats, key=len):
            if not any(p[: len(q)] == q for q in keep):
                keep.append(p)
        self.patterns: tuple[tuple[frozenset[int], ...], ...] = tuple(
            sorted(keep, key=lambda p: (len(p), [sorted(c) for c in p]))
        )

    @property
    def length(self) -> int:
        return max((len(p) for p in self.patterns), default=0)

    def __iter__(self):
        return iter(self.patterns)

    def __len__(self):
        return len(self.patterns)

    def __eq__(self, other):
        return isinstance(other, PatternSet) and set(self.patterns) == set(other.patterns)

    def __hash__(self):
        return hash(frozenset(self.patterns))

    def describe(self, names: Sequence[str] | None = None) -> str:
        def fmt(c):
            items = sorted(c)
            if names is not None:
                items = [names[x] for x in items]
            return "{" + ",".join(map(str, items)) + "}"

        return "{" + ", ".join("<" + ",".join(fmt(c) for c in p) + ">" for p in self.patterns) + "}"

    def __repr__(self):
        return f"PatternSet({self.describe()})"


# --------------------------------------------------------------------------
# bounded reachability


def bounded_values_scaled(
    a: ProbAutomaton, C, Cp, n: int, mode: str, want_policy: bool = False, region=None
):
    """Values of ``C U<=n C'`` at every state as integers over ``denom**n``.

    Returns ``(values, denom, policy)`` where ``policy[k][u]`` is the index
    chosen at ``u`` with ``k`` steps remaining (``None`` when no choice is
    made there).  With ``region`` only those states are updated, which is
    exact for any state whose ``n``-step successors all lie in the region.
    """
    _check_mode(mode)
    sv = a.scaled
    D = sv.denom
    N = a.n
    inC = [u in C for u in range(N)]
    inCp = [u in Cp for u in range(N)]
    vals = [1 if inCp[u] else 0 for u in range(N)]
    policy = [] if want_policy else None
    scale = 1
    sup = mode == "sup"
    for k in range(1, n + 1):
        scale *= D
        new = [0] * N
        step_choice = [None] * N if want_policy else None
        for u in range(N) if region is None else region:
            if inCp[u]:
                new[u] = scale
            elif inC[u]:
                best, arg = None, None
                for t, mu in enumerate(sv.trans[u]):
                    x = 0
                    for v, w in mu:
                        x += w * vals[v]
                    if best is None or (x > best if sup else x < best):
                        best, arg = x, t
                new[u] = 0 if best is None else best
                if want_policy:
                    step_choice[u] = arg
        vals = new
        if want_policy:
            policy.append(step_choice)
    if want_policy:
        policy.insert(0, [None] * N)  # k = 0: no move
    return vals, D, policy


def bounded_reach_all(a: ProbAutomaton, C, Cp, n: int, mode: Mode):
    """Optimal values at all states plus one step-indexed witness policy."""
    if n < 0:
        raise ValueError("horizon must be nonnegative")
    vals, D, policy = bounded_values_scaled(a, C, Cp, n, mode, want_policy=True)
    scale = D**n
    values = [Fraction(v, scale) for v in vals]
    choice = {}
    for k in range(1, n + 1):
        for u, t in enumerate(policy[k]):
            if t is not None:
                choice[(u, n - k, None)] = t
    return values, PolicyWitness("finite-horizon", choice)


def bounded_reach(a: ProbAutomaton, s: int, C, Cp, n: int, mode: Mode):
    """Optimal probability of reaching ``C'`` via ``C`` within ``n`` steps."""
    values, witness = bounded_reach_all(a, C, Cp, n, mode)
    return values[s], witness


def replay_bounded(a: ProbAutomaton, s: int, C, Cp, n: int, witness: PolicyWitness) -> Fraction:
    """Sum path masses of the runs that satisfy the query under ``witness``."""

    def walk(u: int, step: int) -> Fraction:
        if u in Cp:
            return Fraction(1)
        if u not in C or step == n:
            return Fraction(0)
        t = witness.pick(u, step)
        if t is None:
            if not a.transitions[u]:
                return Fraction(0)
            raise ValueError(f"witness has no choice at state {u}, step {step}")
        return sum((p * walk(v, step + 1) for v, p in a.transitions[u][t].items()), Fraction(0))

    return walk(s, 0)


# --------------------------------------------------------------------------
# unbounded reachability on an explicit MDP


def solve_linear(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve a nonsingular square system exactly by Gauss-Jordan elimination."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        prow = M[col]
        inv = 1 / prow[col]
        for j in range(col, n + 1):
            prow[j] *= inv
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                row = M[r]
                for j in range(col, n + 1):
                    if prow[j]:
                        row[j] -= f * prow[j]
    return [M[i][n] for i in range(n)]


def _evaluate(trans, maybe: list[int], target: set[int], policy: dict[int, int]) -> dict[int, Fraction]:
    pos = {u: k for k, u in enumerate(maybe)}
    m = len(maybe)
    A = [[Fraction(0)] * m for _ in range(m)]
    b = [Fraction(0)] * m
    for k, u in enumerate(maybe):
        A[k][k] += 1
        for v, p in trans[u][policy[u]]:
            if v in target:
                b[k] += p
            elif v in pos:
                A[k][pos[v]] -= p
    x = solve_linear(A, b) if m else []
    return {u: x[k] for k, u in enumerate(maybe)}


def _solve_reach(trans, target: set[int], allowed: set[int], mode: str):
    """Optimal until-probabilities on an explicit MDP.

    ``trans[u]`` is a list of distributions given as ``[(v, Fraction), ...]``.
    Returns ``(values, policy)``; ``policy`` maps each state that needs a
    decision to a transition index.
    """
    N = len(trans)
    live = [u for u in range(N) if u in allowed and u not in target]
    if mode == "sup":
        # states that can reach the target at all, with attractor layers
        layer = {u: 0 for u in target}
        frontier = True
        policy: dict[int, int] = {}
        while frontier:
            frontier = False
            for u in live:
                if u in layer:
                    continue
                for t, mu in enumerate(trans[u]):
                    if any(v in layer for v, _ in mu):
                        layer[u] = 1 + min(layer[v] for v, _ in mu if v in layer)
                        policy[u] = t
                        frontier = True
                        break
        maybe = [u for u in live if u in layer]
    else:
        pos = set(target)
        changed = True
        while changed:
            changed = False
            for u in live:
                if u in pos or not trans[u]:
                    continue
                if all(any(v in pos for v, _ in mu) for mu in trans[u]):
                    pos.add(u)
                    changed = True
        maybe = [u for u in live if u in pos]
        policy = {u: 0 for u in maybe}

    maybe_set = set(maybe)
    while True:
        x = _evaluate(trans, maybe, target, policy)

        def q(mu):
            return sum(
                (p * (1 if v in target else x.get(v, 0)) for v, p in mu), Fraction(0)
            )

        switched = False
        for u in maybe:
            cur = q(trans[u][policy[u]])
            best, arg = cur, policy[u]
            for t, mu in enumerate(trans[u]):
                val = q(mu)
                if _better(mode, val, best) or (val == best and t < arg and mode == "inf"):
                    best, arg = val, t
            if arg != policy[u] and _better(mode, best, cur):
                policy[u] = arg
                switched = True
            elif arg != policy[u] and mode == "inf":
                policy[u] = arg  # tie: prefer the lower index (all policies are proper here)
        if not switched:
            x = _evaluate(trans, maybe, target, policy)
            break

    values = []
    for u in range(N):
        if u in target:
            values.append(Fraction(1))
        elif u in maybe_set:
            values.append(x[u])
        else:
            values.append(Fraction(0))
    # zero-valued live states still get a (lowest-index) choice for completeness
    for u in live:
        if u not in policy and trans[u]:
            policy[u] = 0
    return values, policy


def unbounded_reach_all(a: ProbAutomaton, C, Cp, mode: Mode):
    _check_mode(mode)
    trans = [[list(mu.items()) for mu in mus] for mus in a.transitions]
    target = set(Cp)
    allowed = set(C)
    values, policy = _solve_reach(trans, target, allowed, mode)
    choice = {(u, None, None): t for u, t in policy.items()}
    return values, PolicyWitness("stationary", choice)


def unbounded_reach(a: ProbAutomaton, s: int, C, Cp, mode: Mode):
    """Optimal probability of ``C U C'`` from ``s``."""
    values, witness = unbounded_reach_all(a, C, Cp, mode)
    return values[s], witness


def replay_unbounded(a: ProbAutomaton, s: int, C, Cp, witness: PolicyWitness) -> Fraction:
    """Value of the Markov chain induced by a stationary witness."""
    trans = []
    for u in a.states:
        t = witness.pick(u)
        if u in Cp or u not in C or t is None:
            trans.append([[(u, Fraction(1))]])
        else:
            trans.append([list(a.transitions[u][t].items())])
    # one choice per state: the sup solver just evaluates the chain
    values, _ = _solve_reach(trans, set(Cp), set(C), "sup")
    return values[s]


# --------------------------------------------------------------------------
# cone patterns


def pattern_opt_all(a: ProbAutomaton, pats: PatternSet, mode: Mode, starts=None):
    """Values of a pattern event at ``starts`` (default: all states)."""
    _check_mode(mode)
    pats = pats if isinstance(pats, PatternSet) else PatternSet(pats)
    plist = pats.patterns
    memo: dict = {}
    choice: dict = {}

    def value(u: int, j: int, alive: tuple[int, ...]) -> Fraction:
        nxt = tuple(k for k in alive if u in plist[k][j])
        if not nxt:
            return Fraction(0)
        if any(len(plist[k]) == j + 1 for k in nxt):
            return Fraction(1)
        key = (u, j, nxt)
        if key in memo:
            return memo[key]
        best, arg = None, None
        for t, mu in enumerate(a.transitions[u]):
            x = sum((p * value(v, j + 1, nxt) for v, p in mu.items()), Fraction(0))
            if best is None or _better(mode, x, best):
                best, arg = x, t
        best = Fraction(0) if best is None else best
        memo[key] = best
        if arg is not None:
            choice[(u, j, nxt)] = arg
        return best

    everyone = tuple(range(len(plist)))
    states = a.states if starts is None else starts
    values = {u: value(u, 0, everyone) for u in states}
    return values, PolicyWitness("finite-horizon", choice)


def pattern_opt(a: ProbAutomaton, s: int, pats: PatternSet, mode: Mode):
    """Optimal probability that the run begins with one of the patterns."""
    values, witness = pattern_opt_all(a, pats, mode, starts=[s])
    return values[s], witness


def replay_pattern(a: ProbAutomaton, s: int, pats: PatternSet, witness: PolicyWitness) -> Fraction:
    plist = pats.patterns

    def walk(u: int, j: int, alive: tuple[int, ...]) -> Fraction:
        nxt = tuple(k for k in alive if u in plist[k][j])
        if not nxt:
            return Fraction(0)
        if any(len(plist[k]) == j + 1 for k in nxt):
            return Fraction(1)
        t = witness.pick(u, j, nxt)
        if t is None:
            if not a.transitions[u]:
                return Fraction(0)
            raise ValueError(f"witness has no choice at state {u}, position {j}")
        return sum((p * walk(v, j + 1, nxt) for v, p in a.transitions[u][t].items()), Fraction(0))

    return walk(s, 0, tuple(range(len(plist))))


# --------------------------------------------------------------------------
# stuttering patterns


class _StutterAcceptor:
    """Subset construction for stuttering closures of a pattern set.

    A configuration is a set of ``(pattern, position)`` pairs, closed under
    skipping non-final positions.  Reading a state either accepts (it lies in
    the final set of a live pattern that reached its last position) or keeps
    the positions whose set contains it.
    """

    def __init__(self, pats: PatternSet, cap: int):
        self.plist = pats.patterns
        self.cap = cap
        self.start = self.close((k, 0) for k in range(len(self.plist)))
        self.seen = {self.start}
        self._step: dict = {}

    def close(self, positions) -> frozenset:
        out = set()
        for k, i in positions:
            last = len(self.plist[k]) - 1
            while True:
                out.add((k, i))
                if i >= last:
                    break
                i += 1
        return frozenset(out)

    def read(self, config: frozenset, u: int):
        key = (config, u)
        if key in self._step:
            return self._step[key]
        accept = False
        keep = []
        for k, i in config:
            pat = self.plist[k]
            if u in pat[i]:
                if i == len(pat) - 1:
                    accept = True
                    break
                keep.append((k, i))
        result = (True, None) if accept else (False, self.close(keep))
        if not accept and result[1] not in self.seen:
            self.seen.add(result[1])
            if len(self.seen) > self.cap:
                raise ResourceCapError("pattern-acceptor", self.cap, "subset construction")
        self._step[key] = result
        return result


def stuttering_pattern_opt_all(
    a: ProbAutomaton, pats: PatternSet, mode: Mode, starts=None, cap: int = ACCEPTOR_CAP
):
    _check_mode(mode)
    pats = pats if isinstance(pats, PatternSet) else PatternSet(pats)
    acc = _StutterAcceptor(pats, cap)
    index: dict = {}
    nodes: list = []
    ACCEPT, DEAD = 0, 1
    nodes.extend(["accept", "dead"])
    trans: list = [[[(ACCEPT, Fraction(1))]], [[(DEAD, Fraction(1))]]]

    def node(u: int, config: frozenset) -> int:
        accepted, nxt = acc.read(config, u)
        if accepted:
            return ACCEPT
        if not nxt:
            return DEAD
        key = (u, nxt)
        if key not in index:
            index[key] = len(nodes)
            nodes.append(key)
            trans.append(None)
            if len(nodes) > cap:
                raise ResourceCapError("pattern-acceptor", cap, "product construction")
        return index[key]

    states = list(a.states if starts is None else starts)
    roots = {u: node(u, acc.start) for u in states}
    k = 2
    while k < len(nodes):
        u, config = nodes[k]
        outs = []
        for mu in a.transitions[u]:
            dist: dict[int, Fraction] = {}
            for v, p in mu.items():
                w = node(v, config)
                dist[w] = dist.get(w, Fraction(0)) + p
            outs.append(list(dist.items()))
        trans[k] = outs
        k += 1
    allowed = set(range(2, len(nodes)))
    values, policy = _solve_reach(trans, {ACCEPT}, allowed, mode)
    choice = {(nodes[w][0], None, nodes[w][1]): t for w, t in policy.items() if w >= 2}
    result = {u: values[roots[u]] for u in states}
    return result, PolicyWitness("stationary", choice)


def stuttering_pattern_opt(a: ProbAutomaton, s: int, pats: PatternSet, mode: Mode, cap: int = ACCEPTOR_CAP):
    """Optimal probability of the stuttering closure of ``pats`` from ``s``."""
    values, witness = stuttering_pattern_opt_all(a, pats, mode, starts=[s], cap=cap)
    return values[s], witness


def replay_stuttering(a: ProbAutomaton, s: int, pats: PatternSet, witness: PolicyWitness) -> Fraction:
    """Evaluate the chain that the witness induces on the pattern product."""
    acc = _StutterAcceptor(pats, ACCEPTOR_CAP)
    index: dict = {}
    nodes: list = ["accept", "dead"]
    trans: list = [[[(0, Fraction(1))]], [[(1, Fraction(1))]]]

    def node(u, config):
        accepted, nxt = acc.read(config, u)
        if accepted:
            return 0
        if not nxt:
            return 1
        if (u, nxt) not in index:
            index[(u, nxt)] = len(nodes)
            nodes.append((u, nxt))
            trans.append(None)
        return index[(u, nxt)]

    root = node(s, acc.start)
    k = 2
    while k < len(nodes):
        u, config = nodes[k]
        t = witness.pick(u, None, config)
        if t is None:
            trans[k] = [] if not a.transitions[u] else None
            if trans[k] is None:
                raise ValueError(f"witness has no choice at product node {k}")
        else:
            dist: dict[int, Fraction] = {}
            for v, p in a.transitions[u][t].items():
                w = node(v, config)
                dist[w] = dist.get(w, Fraction(0)) + p
            trans[k] = [list(dist.items())]
        k += 1
    values, _ = _solve_reach(trans, {0}, set(range(2, len(nodes))), "sup")
    return values[root]
