"""Capped enumeration of pattern antichains over down-set sequences.

Used where no exact shortcut exists: the match-at-most direction of the
pattern equivalences and the pattern simulations.  Down-sets of a preorder
overlap, so the events are enumerated explicitly: first single patterns by
increasing length, then antichains of up to ``antichain_size`` of them.
"""

from __future__ import annotations

from itertools import combinations, product

from ..model import ProbAutomaton
from ..reach import PatternSet, pattern_opt_all, stuttering_pattern_opt_all
from .refine import reachable_within
from .strong import projected_downsets
from .verdict import Trace

__all__ = ["pattern_pair_events", "closure_from"]


def closure_from(a: ProbAutomaton, start) -> set[int]:
    """States reachable from ``start`` in any number of steps (start included)."""
    seen = set(start)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in a.successors[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _sequences(ds, focus, length: int, stutter: bool):
    """Pattern candidates: cone sequences of ``2..length+1`` sets, or
    stuttering sequences of ``2..length`` sets with incomparable neighbours."""
    sizes = range(2, length + 1) if stutter else range(2, length + 2)
    firsts = [d for d in ds if d & focus]
    for size in sizes:
        for first in firsts:
            for rest in product(ds, repeat=size - 1):
                seq = (first,) + rest
                if stutter and any(x <= y or y <= x for x, y in zip(seq, seq[1:])):
                    continue
                yield seq


def pattern_pair_events(
    a: ProbAutomaton,
    length: int | None,
    antichain_size: int,
    stutter: bool,
    max_events: int,
    trace: Trace | None,
):
    """Event generator for :func:`pair_refine` over pattern antichains.

    ``length`` counts steps for cone patterns and sets for stuttering
    patterns (``None`` picks the number of classes plus one).  Stats are
    exact fractions with scale 1.
    """
    engine = stuttering_pattern_opt_all if stutter else pattern_opt_all
    kind = "stutter" if stutter else "patterns"

    def events(R, focus):
        L = length if length is not None else len(R.classes()) + 1
        region = closure_from(a, focus) if stutter else set().union(*reachable_within(a, focus, L))
        ds = [d for d in projected_downsets(R, region) if d]
        starts = sorted(focus)
        budget = [max_events]

        def evaluate(pats: PatternSet):
            hi, _ = engine(a, pats, "sup", starts=starts)
            lo, _ = engine(a, pats, "inf", starts=starts)
            return {u: (hi[u], lo[u], None) for u in starts}

        def spend() -> bool:
            budget[0] -= 1
            if budget[0] < 0:
                if trace is not None:
                    trace.cap(f"pattern events capped at {max_events}")
                return False
            return True

        singles = []
        for seq in _sequences(ds, focus, L, stutter):
            if not spend():
                return
            pats = PatternSet([seq])
            stats = evaluate(pats)
            his = {st[0] for st in stats.values()}
            if his not in ({0}, {1}):
                singles.append(pats)
            yield {"kind": kind, "patterns": pats}, 1, stats
        for size in range(2, antichain_size + 1):
            for group in combinations(singles, size):
                pats = PatternSet([p for g in group for p in g])
                if len(pats) < size:
                    continue  # one member extends another
                if not spend():
                    return
                yield {"kind": kind, "patterns": pats}, 1, evaluate(pats)

    return events
