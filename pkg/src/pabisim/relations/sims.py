"""One-directional (simulation) counterparts of the event-based equivalences.

Only the first clause is kept and it always matches at most: if ``s ⪯ r``
and ``s`` can give an event positive probability, then ``r`` can push it
down to at most what ``s`` is forced to.  Down-sets are genuine down-sets of
the evolving preorder rather than unions of classes.
"""

from __future__ import annotations

from ..model import ProbAutomaton
from ..relation import Relation
from .patterns import pattern_pair_events
from .refine import label_partition, pair_refine
from .strong import DEFAULT_MAX_EVENTS, _bounded_pair_events
from .verdict import Trace
from .weak import _until_pair_events

__all__ = ["sim_family", "label_preorder"]


def label_preorder(a: ProbAutomaton) -> Relation:
    rel = Relation.from_partition(a.n, label_partition(a))
    return Relation(a.n, rel.rows, "preorder")


def sim_family(
    a: ProbAutomaton,
    name: str,
    depth: int | None = None,
    pattern_length: int | None = None,
    antichain_size: int = 2,
    max_events: int = DEFAULT_MAX_EVENTS,
    trace: Trace | None = None,
) -> Relation:
    """``branching-sim-i``, ``sim-i``, ``weak-branching-sim`` or ``weak-sim``."""
    if name in ("branching-sim-i", "sim-i") and (depth is None or depth < 1):
        raise ValueError(f"{name} needs a depth >= 1")
    if name == "branching-sim-i":
        events = _bounded_pair_events(a, depth, max_events, trace)
    elif name == "sim-i":
        events = pattern_pair_events(a, depth, antichain_size, False, max_events, trace)
    elif name == "weak-branching-sim":
        events = _until_pair_events(a, max_events, trace)
    elif name == "weak-sim":
        events = pattern_pair_events(a, pattern_length, antichain_size, True, max_events, trace)
    else:
        raise ValueError(f"not a simulation variant: {name!r}")
    return pair_refine(a, label_preorder(a), events, "most", False, trace)
