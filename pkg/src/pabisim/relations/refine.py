"""Shared refinement machinery.

Two strategies are used.  Equivalences whose clauses compare one optimum per
event (the default match-at-least direction) are computed by partition
refinement: every block is split by the vector of values its states take on
the events built from the current partition.  Everything else (the
match-at-most direction, the simulations) runs a pair-deletion loop over the
down-sets of the current relation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator

from ..errors import ResourceCapError
from ..model import ProbAutomaton
from ..relation import Relation
from .verdict import Trace, Witness

__all__ = [
    "Partition",
    "label_partition",
    "refine_partition",
    "partition_relation",
    "pair_refine",
    "reachable_within",
    "clause_ok",
    "stats_value",
]

Partition = list[list[int]]


def label_partition(a: ProbAutomaton) -> Partition:
    return [sorted(c) for c in Relation.label_equality(a).classes()]


def partition_relation(n: int, partition: Partition) -> Relation:
    return Relation.from_partition(n, partition)


def owner_of(n: int, partition: Partition) -> list[int]:
    owner = [0] * n
    for k, block in enumerate(partition):
        for s in block:
            owner[s] = k
    return owner


def reachable_within(a: ProbAutomaton, start: Iterable[int], steps: int) -> list[set[int]]:
    """``layers[m]``: states reachable in exactly ``m`` steps (``m = 0..steps``)."""
    layers = [set(start)]
    for _ in range(steps):
        nxt = set()
        for u in layers[-1]:
            nxt |= a.successors[u]
        layers.append(nxt)
    return layers


BlockEvents = Callable[[Partition, list[int], list[int]], Iterator[tuple[dict, int, dict]]]


def refine_partition(
    a: ProbAutomaton, partition: Partition, block_events: BlockEvents, trace: Trace | None
) -> Partition:
    """Split blocks until every block is uniform on every event.

    ``block_events(partition, owner, block)`` yields ``(desc, scale, values)``
    with ``values[u]`` an integer (the value times ``scale``) for each ``u``
    in the block; ``desc`` holds the witness fields of the event, or is a
    callable producing them when building them is costly.
    """
    partition = [sorted(b) for b in partition]
    while True:
        if trace is not None:
            trace.rounds += 1
        owner = owner_of(a.n, partition)
        new: Partition = []
        changed = False
        for block in partition:
            if len(block) == 1:
                new.append(block)
                continue
            sig: dict[int, list] = {u: [] for u in block}
            events = []
            for desc, scale, values in block_events(partition, owner, block):
                first = values[block[0]]
                if all(values[u] == first for u in block):
                    continue  # uniform on the block: cannot split it
                for u in block:
                    sig[u].append(values[u])
                events.append((desc, scale, values))
                if len({tuple(v) for v in sig.values()}) == len(block):
                    break  # already split into singletons this round
            groups: dict[tuple, list[int]] = {}
            for u in block:
                groups.setdefault(tuple(sig[u]), []).append(u)
            parts = sorted(groups.values(), key=lambda g: g[0])
            if len(parts) > 1:
                changed = True
                if trace is not None:
                    _record_splits(trace, parts, sig, events)
            new.extend(parts)
        partition = sorted(new, key=lambda b: b[0])
        if not changed:
            return partition


def _record_splits(trace: Trace, parts, sig, events) -> None:
    for x in range(len(parts)):
        for y in range(x + 1, len(parts)):
            s, r = parts[x][0], parts[y][0]
            k = next(k for k, (vs, vr) in enumerate(zip(sig[s], sig[r])) if vs != vr)
            desc, scale, values = events[k]
            for s2 in parts[x]:
                for r2 in parts[y]:
                    ks = next(
                        (k2 for k2, (vs, vr) in enumerate(zip(sig[s2], sig[r2])) if vs != vr), k
                    )
                    d, sc, vals = events[ks]
                    if callable(d):
                        d = d()
                    trace.separate(
                        Witness(
                            s=s2,
                            r=r2,
                            values=(Fraction(vals[s2], sc), Fraction(vals[r2], sc)),
                            **d,
                        )
                    )


# --------------------------------------------------------------------------
# pair deletion


def stats_value(stat, which: str):
    return stat[{"hi": 0, "lo": 1, "lopos": 2}[which]]


def clause_ok(kind: str, st_s, st_r) -> bool:
    """Does ``r`` answer every obligation that ``s`` raises for one event?

    Stats are ``(hi, lo, lopos)``: the best, the worst and the worst positive
    value (``None`` when absent).  ``kind`` is ``least`` or ``most``, and for
    plain-transition events ``plain-least`` / ``plain-most``.
    """
    hi_s, lo_s, lopos_s = st_s
    hi_r, lo_r, lopos_r = st_r
    if kind in ("least", "plain-least"):
        if not hi_s:
            return True
        return hi_r is not None and hi_r >= hi_s
    if kind == "most":
        if not hi_s:
            return True
        return lo_r is not None and lo_r <= lo_s
    if kind == "plain-most":
        if lopos_s is None:
            return True
        return lo_r is not None and lo_r <= lopos_s
    raise ValueError(kind)


EventStats = Callable[[Relation, set[int]], Iterator[tuple[dict, int, dict]]]


def pair_refine(
    a: ProbAutomaton,
    start: Relation,
    events: EventStats,
    kind: str,
    symmetric: bool,
    trace: Trace | None,
) -> Relation:
    """Greatest relation below ``start`` closed under the event clauses.

    ``events(R, focus)`` yields ``(desc, scale, stats)`` where ``stats[u]``
    is a ``(hi, lo, lopos)`` triple of integers over ``scale`` for each state
    in ``focus``.  Pairs failing a clause are deleted; down-sets are taken
    from the transitive closure of the current relation so that they are
    well defined even if deletion broke transitivity.
    """
    rows = list(start.rows)
    n = a.n
    while True:
        if trace is not None:
            trace.rounds += 1
        current = Relation(n, rows, start.kind)
        pairs = [(s, r) for s in range(n) for r in range(n) if s != r and rows[s] >> r & 1]
        if not pairs:
            return current
        focus = {s for s, _ in pairs} | {r for _, r in pairs}
        alive = set(pairs)
        for desc, scale, stats in events(current.transitive_closure(), focus):
            dead = []
            for s, r in alive:
                forward = clause_ok(kind, stats[s], stats[r])
                if forward and (not symmetric or clause_ok(kind, stats[r], stats[s])):
                    continue
                dead.append((s, r))
                if trace is not None:
                    x, y = (s, r) if not forward else (r, s)
                    w = _pair_witness(desc, scale, stats, x, y, kind)
                    trace.witnesses.setdefault((s, r), w)
            alive.difference_update(dead)
            if not alive:
                break
        removed = set(pairs) - alive
        if not removed:
            return current
        for s, r in removed:
            rows[s] &= ~(1 << r)
            if symmetric:
                rows[r] &= ~(1 << s)


def _pair_witness(desc, scale, stats, s, r, kind):
    d = dict(desc)
    if kind in ("least", "plain-least"):
        mode, idx = "sup", 0
    elif kind == "most":
        mode, idx = "inf", 1
    else:
        mode, idx = "inf+", 2
    vs, vr = stats[s][idx], stats[r][idx]
    if kind == "plain-most":
        vr = stats[r][2] if stats[r][2] is not None else stats[r][1]
    conv = lambda v: Fraction(0) if v is None else Fraction(v, scale)
    d["mode"] = mode
    return Witness(s=s, r=r, values=(conv(vs), conv(vr)), **d)
