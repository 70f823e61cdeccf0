"""Combined transitions, branching transitions and weight functions.

Combined transitions form a continuum, so none of these functions enumerate
them: each question is reduced to an exact linear feasibility problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import ResourceCapError
from .lp import convex_combination, feasible_point
from .model import Distribution, ProbAutomaton
from .relation import Relation

__all__ = [
    "WeightFunction",
    "can_combine_match",
    "hull_contains",
    "branching_transition_vertices",
    "find_weight_function",
    "combined_weight_match",
    "VERTEX_CAP",
]

VERTEX_CAP = 20000


def _vectors(projections: list[Mapping[int, Fraction]], target: Mapping[int, Fraction]):
    keys = sorted(set(target).union(*[p.keys() for p in projections]))
    pts = [[p.get(k, Fraction(0)) for k in keys] for p in projections]
    return pts, [Fraction(target.get(k, 0)) for k in keys]


def hull_contains(
    projections: list[Mapping[int, Fraction]], target: Mapping[int, Fraction]
) -> list[Fraction] | None:
    """Convex weights expressing ``target`` from ``projections``, if any."""
    if not projections:
        return None
    target = {k: v for k, v in target.items() if v}
    for k, p in enumerate(projections):
        if {kk: v for kk, v in p.items() if v} == target:
            w = [Fraction(0)] * len(projections)
            w[k] = Fraction(1)
            return w
    pts, tgt = _vectors(projections, target)
    return convex_combination(pts, tgt)


def can_combine_match(
    a: ProbAutomaton, s: int, target: Mapping[int, Fraction], classes: Relation
) -> bool:
    """Does some combined transition of ``s`` project onto ``target``?

    ``target`` maps class ids (positions in ``classes.classes()``) to mass.
    """
    block = classes.block_of()
    projections = [mu.project(block) for mu in a.transitions[s]]
    return hull_contains(projections, target) is not None


def branching_transition_vertices(
    a: ProbAutomaton,
    s: int,
    classes: Relation,
    depth: int,
    cap: int = VERTEX_CAP,
    _memo: dict | None = None,
) -> frozenset[Distribution]:
    """Distributions reachable by branching moves that stay inside ``[s]``.

    Depth 0 gives ``{δ_s}``.  At depth ``d`` a transition ``μ`` of ``s`` may be
    followed, and every successor in ``[s]`` may in turn resolve into any of
    its own depth ``d-1`` vertices; successors outside the class stop.  The
    convex hull of the result is the set of branching combined transitions up
    to the bound.
    """
    memo = {} if _memo is None else _memo
    block = classes.block_of()

    def rec(u: int, d: int) -> frozenset[Distribution]:
        key = (u, d)
        if key in memo:
            return memo[key]
        out = {Distribution.dirac(u)}
        if d > 0:
            for mu in a.transitions[u]:
                partials: list[dict[int, Fraction]] = [{}]
                for v, p in mu.items():
                    if block[v] == block[u]:
                        options = rec(v, d - 1)
                    else:
                        options = (Distribution.dirac(v),)
                    grown = []
                    for acc in partials:
                        for nu in options:
                            nxt = dict(acc)
                            for w, q in nu.items():
                                nxt[w] = nxt.get(w, Fraction(0)) + p * q
                            grown.append(nxt)
                    partials = grown
                    if len(partials) > cap:
                        raise ResourceCapError("branching-vertices", cap, f"state {a.names[s]}")
                out.update(Distribution(acc) for acc in partials)
                if len(out) > cap:
                    raise ResourceCapError("branching-vertices", cap, f"state {a.names[s]}")
        memo[key] = frozenset(out)
        return memo[key]

    return rec(s, depth)


@dataclass(frozen=True)
class WeightFunction:
    """Mass transport between two distributions along a relation."""

    weights: Mapping[tuple[int, int], Fraction]

    def check(self, mu: Mapping[int, Fraction] | Distribution, nu, rel: Relation) -> bool:
        mu = dict(mu.items()) if isinstance(mu, Distribution) else dict(mu)
        nu = dict(nu.items()) if isinstance(nu, Distribution) else dict(nu)
        rows: dict[int, Fraction] = {}
        cols: dict[int, Fraction] = {}
        for (u, v), w in self.weights.items():
            if w < 0 or (w > 0 and not rel.related(u, v)):
                return False
            rows[u] = rows.get(u, Fraction(0)) + w
            cols[v] = cols.get(v, Fraction(0)) + w
        drop = lambda d: {k: x for k, x in d.items() if x}
        return drop(rows) == drop(mu) and drop(cols) == drop(nu)


def find_weight_function(mu: Distribution, nu: Distribution, rel: Relation) -> WeightFunction | None:
    """A weight function for ``μ ⊑_R ν``, or None."""
    found = combined_weight_match_dists(mu, [nu], rel)
    return None if found is None else found[1]


def combined_weight_match_dists(
    mu: Distribution, candidates: list[Distribution], rel: Relation
) -> tuple[list[Fraction], WeightFunction] | None:
    """Find λ over ``candidates`` and a weight function from ``μ`` to ``Σ λ_k ν_k``."""
    if not candidates:
        return None
    left = [u for u, _ in mu.items()]
    right = sorted(set().union(*[nu.support for nu in candidates]))
    pairs = [(u, v) for u in left for v in right if rel.related(u, v)]
    if any(not any(p[0] == u for p in pairs) for u in left):
        return None
    nvar = len(pairs) + len(candidates)
    A, b = [], []
    for u in left:
        A.append([Fraction(1) if p[0] == u else Fraction(0) for p in pairs] + [Fraction(0)] * len(candidates))
        b.append(mu[u])
    for v in right:
        row = [Fraction(1) if p[1] == v else Fraction(0) for p in pairs]
        row += [-nu[v] for nu in candidates]
        A.append(row)
        b.append(Fraction(0))
    A.append([Fraction(0)] * len(pairs) + [Fraction(1)] * len(candidates))
    b.append(Fraction(1))
    x = feasible_point(A, b)
    if x is None:
        return None
    assert len(x) == nvar
    weights = {p: x[k] for k, p in enumerate(pairs) if x[k]}
    return x[len(pairs):], WeightFunction(weights)


def combined_weight_match(
    a: ProbAutomaton, mu: Distribution, r: int, rel: Relation
) -> tuple[list[Fraction], WeightFunction] | None:
    """Is ``μ`` simulated by some combined transition of ``r``?"""
    return combined_weight_match_dists(mu, list(a.transitions[r]), rel)
