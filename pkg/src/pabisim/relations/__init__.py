"""Behavioural equivalences and preorders, computed as greatest fixed points."""

from __future__ import annotations

from ..model import ProbAutomaton
from ..relation import Relation
from .refine import clause_ok, label_partition, pair_refine, refine_partition
from .sims import label_preorder, sim_family
from .strong import (
    branching_prob_bisim,
    projected_downsets,
    strong_1_depth,
    strong_branching_i,
    strong_i_depth,
    strong_prob_bisim,
    strong_prob_sim,
)
from .verdict import (
    BISIMULATIONS,
    RELATION_NAMES,
    SIMULATIONS,
    RelationQuery,
    Trace,
    Verdict,
    Witness,
    one_step_value,
)
from .weak import weak_bisim, weak_branching_bisim

__all__ = [
    "BISIMULATIONS",
    "RELATION_NAMES",
    "SIMULATIONS",
    "RelationQuery",
    "Trace",
    "Verdict",
    "Witness",
    "branching_prob_bisim",
    "clause_ok",
    "compute",
    "downsets",
    "label_partition",
    "label_preorder",
    "one_step_value",
    "pair_refine",
    "projected_downsets",
    "refine_partition",
    "relate",
    "sim_family",
    "strong_1_depth",
    "strong_branching_i",
    "strong_i_depth",
    "strong_prob_bisim",
    "strong_prob_sim",
    "weak_bisim",
    "weak_branching_bisim",
]


def downsets(rel: Relation, cap: int | None = None) -> list[frozenset[int]]:
    """All down-closed sets of a reflexive, transitive relation (∅ included)."""
    if not (rel.is_reflexive() and rel.is_transitive()):
        raise ValueError("down-sets need a reflexive and transitive relation")
    return rel.downsets() if cap is None else rel.downsets(cap)


def compute(a: ProbAutomaton, query: RelationQuery, trace: Trace | None = None) -> Relation:
    """The relation named by ``query`` on ``a``."""
    q = query
    d = q.effective_direction
    name = q.name
    if name == "strong-prob-bisim":
        return strong_prob_bisim(a, trace)
    if name == "branching-prob-bisim":
        return branching_prob_bisim(a, q.depth or q.branching_depth, trace)
    if name == "strong-1":
        return strong_1_depth(a, d, trace=trace)
    if name == "strong-branching-i":
        return strong_branching_i(a, q.depth, d, trace, q.max_events)
    if name == "strong-i":
        return strong_i_depth(a, q.depth, d, trace, q.max_events, q.antichain_size)
    if name == "weak-branching-bisim":
        return weak_branching_bisim(a, d, trace, q.max_events)
    if name == "weak-bisim":
        return weak_bisim(a, d, q.pattern_length, q.antichain_size, q.max_events, trace)
    if name == "strong-prob-sim":
        return strong_prob_sim(a, trace)
    if d != "match-at-most":
        raise ValueError(f"{name} only supports match-at-most")
    return sim_family(a, name, q.depth, q.pattern_length, q.antichain_size, q.max_events, trace)


def relate(a: ProbAutomaton, query: RelationQuery, pair: tuple | None = None) -> Verdict:
    """Compute a relation and, for a given pair of states, explain the answer.

    ``pair`` may hold state names or indices.  The witness of a separated
    pair replays with :meth:`Witness.replay`.
    """
    trace = Trace()
    rel = compute(a, query, trace)
    params = {}
    if query.name in ("weak-bisim", "weak-sim", "sim-i") or (
        query.name == "strong-i" and query.effective_direction == "match-at-most"
    ):
        params["pattern length"] = query.pattern_length if query.pattern_length is not None else (
            query.depth if query.name != "weak-bisim" and query.name != "weak-sim" else "classes+1"
        )
        params["antichain size"] = query.antichain_size
    if query.name == "branching-prob-bisim":
        params["derivation depth"] = query.depth or query.branching_depth or a.n
    verdict = Verdict(query, rel, caps_hit=list(trace.caps_hit), notes=list(trace.notes), params=params)
    if pair is not None:
        s, r = a.index(pair[0]), a.index(pair[1])
        verdict.pair = (s, r)
        verdict.related = rel.related(s, r)
        if not verdict.related:
            if a.labels[s] != a.labels[r]:
                verdict.witness = Witness("label", s, r)
            else:
                verdict.witness = trace.witnesses.get((s, r)) or trace.witnesses.get((r, s))
    return verdict
