"""Unbounded-until and stuttering-pattern equivalences."""

from __future__ import annotations

from itertools import combinations, product

from ..model import ProbAutomaton
from ..reach import ACCEPTOR_CAP, PatternSet, _solve_reach, stuttering_pattern_opt_all
from ..relation import Relation
from .patterns import closure_from, pattern_pair_events
from .refine import label_partition, pair_refine, partition_relation, refine_partition
from .strong import (
    AT_LEAST,
    AT_MOST,
    DEFAULT_MAX_EVENTS,
    _check_direction,
    _modes,
    _union,
    projected_downsets,
)
from .verdict import Trace

__all__ = ["weak_branching_bisim", "weak_bisim", "until_values"]


def _plain_trans(a: ProbAutomaton):
    return [[list(mu.items()) for mu in mus] for mus in a.transitions]


def until_values(trans, C, Cp, mode: str, region) -> list:
    """``C U C'`` values, exact on ``region`` when it is closed under successors."""
    allowed = set(C) & region
    values, _ = _solve_reach(trans, set(Cp) & region, allowed, mode)
    return values


def _until_block_events(a: ProbAutomaton, modes=("sup",)):
    trans = _plain_trans(a)

    def events(partition, owner, block):
        c0 = owner[block[0]]
        region = closure_from(a, block)
        others = sorted({owner[v] for v in region} - {c0})
        for choice in product((0, 1, 2), repeat=len(others)):
            tgt = [c for c, x in zip(others, choice) if x == 1]
            if not tgt:
                continue
            mid = [c for c, x in zip(others, choice) if x == 0]
            C = _union(partition, mid + [c0])
            Cp = _union(partition, tgt)
            for mode in modes:
                vals = until_values(trans, C, Cp, mode, region)
                yield {"kind": "until", "mode": mode, "C": C, "Cp": Cp}, 1, {u: vals[u] for u in block}

    return events


def _until_pair_events(a: ProbAutomaton, max_events: int, trace: Trace | None):
    trans = _plain_trans(a)

    def events(R, focus):
        region = closure_from(a, focus)
        ds = projected_downsets(R, region)
        seen = set()
        for Cp in ds:
            if not Cp:
                continue
            for C0 in ds:
                C = C0 - Cp
                if (C, Cp) in seen or not ((C | Cp) & focus):
                    continue
                seen.add((C, Cp))
                if len(seen) > max_events:
                    if trace is not None:
                        trace.cap(f"until events capped at {max_events}")
                    return
                hi = until_values(trans, C, Cp, "sup", region)
                lo = until_values(trans, C, Cp, "inf", region)
                yield {"kind": "until", "C": C, "Cp": Cp}, 1, {u: (hi[u], lo[u], None) for u in focus}

    return events


def weak_branching_bisim(
    a: ProbAutomaton,
    direction: str = AT_LEAST,
    trace: Trace | None = None,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> Relation:
    """Agreement on every unbounded ``C U C'`` over down-closed sets."""
    _check_direction(direction)
    if direction != AT_MOST:
        part = refine_partition(a, label_partition(a), _until_block_events(a, _modes(direction)), trace)
        return partition_relation(a.n, part)
    start = partition_relation(a.n, label_partition(a))
    return pair_refine(a, start, _until_pair_events(a, max_events, trace), "most", True, trace)


# --------------------------------------------------------------------------
# stuttering patterns


def _absorbing(a: ProbAutomaton, u: int) -> bool:
    return all(mu.support == {u} for mu in a.transitions[u])


def _stutter_block_events(
    a: ProbAutomaton,
    length: int | None,
    antichain_size: int,
    max_events: int,
    trace: Trace | None,
    modes=("sup",),
):
    """Stuttering antichains over class unions, pruned to the ones that matter.

    For a block with class ``c0``: patterns whose final set contains ``c0``
    are worth 1 everywhere, so ``c0`` sits in the first set and not in the
    final one.  Non-final sets drop the final set's classes (those states
    accept right away) and classes made only of absorbing states (they can
    never move on).  Neighbouring comparable sets collapse under stuttering,
    so neighbours are kept incomparable.  Patterns worth 0 or worth 1 at
    every block state cannot change a union and are left out of antichains.
    """

    def events(partition, owner, block):
        c0 = owner[block[0]]
        region = closure_from(a, block)
        K = sorted({owner[v] for v in region})
        stuck = {c for c in K if all(_absorbing(a, u) for u in partition[c] if u in region)}
        L = length if length is not None else len(partition) + 1
        if c0 in stuck:
            return
        budget = [max_events]

        def run(pats):
            budget[0] -= 1
            if budget[0] < 0:
                return None
            out = {}
            for mode in modes:
                vals, _ = stuttering_pattern_opt_all(a, pats, mode, starts=block, cap=ACCEPTOR_CAP)
                out[mode] = {u: vals[u] for u in block}
            return out

        def subsets(pool):
            for r in range(1, len(pool) + 1):
                yield from combinations(pool, r)

        finals = [F for F in subsets([c for c in K if c != c0])]
        singles = []

        def sequences(pool, size):
            if size == 0:
                yield ()
                return
            for head in subsets(pool):
                for tail in sequences(pool, size - 1):
                    yield (frozenset(head),) + tail

        exhausted = False
        for nsets in range(2, L + 1):
            for F in finals:
                pool = [c for c in K if c not in F and c not in stuck]
                if c0 not in pool:
                    continue
                for mids in sequences(pool, nsets - 1):
                    if c0 not in mids[0]:
                        continue
                    seq = mids + (frozenset(F),)
                    if any(x <= y or y <= x for x, y in zip(seq, seq[1:])):
                        continue
                    pats = PatternSet([[_union(partition, x) for x in seq]])
                    res = run(pats)
                    if res is None:
                        exhausted = True
                        break
                    if any(set(v.values()) not in ({0}, {1}) for v in res.values()):
                        singles.append(pats)
                    for mode, vals in res.items():
                        yield {"kind": "stutter", "mode": mode, "patterns": pats}, 1, vals
                if exhausted:
                    break
            if exhausted:
                break
        for size in range(2, antichain_size + 1):
            if exhausted:
                break
            for group in combinations(singles, size):
                pats = PatternSet([p for g in group for p in g])
                if len(pats) < size:
                    continue
                res = run(pats)
                if res is None:
                    exhausted = True
                    break
                for mode, vals in res.items():
                    yield {"kind": "stutter", "mode": mode, "patterns": pats}, 1, vals
        if exhausted and trace is not None:
            trace.cap(f"stuttering pattern evaluations capped at {max_events} per block")

    return events


def weak_bisim(
    a: ProbAutomaton,
    direction: str = AT_LEAST,
    pattern_length: int | None = None,
    antichain_size: int = 2,
    max_events: int = DEFAULT_MAX_EVENTS,
    trace: Trace | None = None,
) -> Relation:
    """Agreement on stuttering pattern antichains.

    ``pattern_length`` bounds the number of sets per pattern (default: the
    number of classes plus one) and ``antichain_size`` the number of
    patterns per event.  Anything beyond these bounds is not examined, so
    a "related" answer holds only up to them; hitting ``max_events`` is
    recorded in ``trace``.
    """
    _check_direction(direction)
    if trace is not None:
        trace.notes.append(
            "stuttering patterns up to "
            + ("classes+1" if pattern_length is None else str(pattern_length))
            + f" sets, antichains up to {antichain_size} patterns"
        )
    if direction != AT_MOST:
        events = _stutter_block_events(
            a, pattern_length, antichain_size, max_events, trace, _modes(direction)
        )
        part = refine_partition(a, label_partition(a), events, trace)
        return partition_relation(a.n, part)
    start = partition_relation(a.n, label_partition(a))
    events = pattern_pair_events(a, pattern_length, antichain_size, True, max_events, trace)
    return pair_refine(a, start, events, "most", True, trace)
