"""Binary relations over the states of one automaton."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import ResourceCapError

__all__ = ["Relation", "DOWNSET_CAP"]

DOWNSET_CAP = 1 << 16


class Relation:
    """Boolean matrix over state pairs, stored as one bitmask per row.

    ``kind`` is ``"equivalence"`` or ``"preorder"``.  Row ``s`` holds the
    states ``r`` with ``s R r``.  The kind is a declared intent; the
    ``is_*`` predicates report what actually holds.
    """

    __slots__ = ("n", "rows", "kind")

    def __init__(self, n: int, rows: Sequence[int], kind: str = "preorder"):
        if kind not in ("equivalence", "preorder"):
            raise ValueError(f"unknown relation kind {kind!r}")
        self.n = n
        self.rows = tuple(rows)
        self.kind = kind

    # construction -------------------------------------------------------

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], kind="preorder"):
        rows = [0] * n
        for s, r in pairs:
            rows[s] |= 1 << r
        return cls(n, rows, kind)

    @classmethod
    def from_partition(cls, n: int, blocks: Iterable[Iterable[int]]):
        rows = [0] * n
        covered = 0
        for block in blocks:
            block = list(block)
            mask = 0
            for s in block:
                mask |= 1 << s
            if mask & covered:
                raise ValueError("blocks overlap")
            covered |= mask
            for s in block:
                rows[s] = mask
        if covered != (1 << n) - 1:
            raise ValueError("blocks do not cover all states")
        return cls(n, rows, "equivalence")

    @classmethod
    def identity(cls, n: int, kind="equivalence"):
        return cls(n, [1 << s for s in range(n)], kind)

    @classmethod
    def label_equality(cls, a):
        groups: dict[frozenset, list[int]] = {}
        for s in a.states:
            groups.setdefault(a.labels[s], []).append(s)
        return cls.from_partition(a.n, groups.values())

    # queries -------------------------------------------------------------

    def related(self, s: int, r: int) -> bool:
        return bool(self.rows[s] >> r & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(s, r) for s in range(self.n) for r in range(self.n) if self.rows[s] >> r & 1]

    @property
    def matrix(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(bool(row >> r & 1) for r in range(self.n)) for row in self.rows)

    def down(self, s: int) -> frozenset[int]:
        """Principal down-set: every ``s'`` with ``s' R s``."""
        return frozenset(t for t in range(self.n) if self.rows[t] >> s & 1)

    def is_reflexive(self) -> bool:
        return all(row >> s & 1 for s, row in enumerate(self.rows))

    def is_symmetric(self) -> bool:
        return all(
            self.rows[r] >> s & 1
            for s in range(self.n)
            for r in range(self.n)
            if self.rows[s] >> r & 1
        )

    def is_transitive(self) -> bool:
        for s in range(self.n):
            reach = 0
            row = self.rows[s]
            for r in range(self.n):
                if row >> r & 1:
                    reach |= self.rows[r]
            if reach & ~row:
                return False
        return True

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def transitive_closure(self) -> "Relation":
        rows = list(self.rows)
        changed = True
        while changed:
            changed = False
            for s in range(self.n):
                reach = rows[s]
                for r in range(self.n):
                    if rows[s] >> r & 1:
                        reach |= rows[r]
                if reach != rows[s]:
                    rows[s] = reach
                    changed = True
        return Relation(self.n, rows, self.kind)

    def kernel(self) -> "Relation":
        """Largest equivalence inside the relation (``R ∩ R⁻¹``)."""
        rows = []
        for s in range(self.n):
            mask = 0
            for r in range(self.n):
                if self.rows[s] >> r & 1 and self.rows[r] >> s & 1:
                    mask |= 1 << r
            rows.append(mask)
        return Relation(self.n, rows, "equivalence")

    def classes(self) -> list[frozenset[int]]:
        """Equivalence classes (of the kernel for preorders), ordered by least member."""
        rel = self if self.kind == "equivalence" else self.kernel()
        seen = 0
        out = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            mask = rel.rows[s] | 1 << s
            seen |= mask
            out.append(frozenset(r for r in range(self.n) if mask >> r & 1))
        return out

    def block_of(self) -> list[int]:
        owner = [0] * self.n
        for k, cls in enumerate(self.classes()):
            for s in cls:
                owner[s] = k
        return owner

    def issubset(self, other: "Relation") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def intersect(self, other: "Relation") -> "Relation":
        kind = "equivalence" if self.kind == other.kind == "equivalence" else "preorder"
        return Relation(self.n, [a & b for a, b in zip(self.rows, other.rows)], kind)

    def restrict(self, states: Sequence[int]) -> "Relation":
        """Relation induced on ``states`` (re-indexed in the given order)."""
        rows = []
        for s in states:
            mask = 0
            for k, r in enumerate(states):
                if self.rows[s] >> r & 1:
                    mask |= 1 << k
            rows.append(mask)
        return Relation(len(states), rows, self.kind)

    def downsets(self, cap: int = DOWNSET_CAP) -> list[frozenset[int]]:
        """All down-closed sets, i.e. unions of principal down-sets (∅ included)."""
        principal = []
        for s in range(self.n):
            mask = 0
            for t in range(self.n):
                if self.rows[t] >> s & 1:
                    mask |= 1 << t
            principal.append(mask | 1 << s)
        found = {0}
        for mask in set(principal):
            found |= {x | mask for x in found}
            if len(found) > cap:
                raise ResourceCapError("downsets", cap, f"{len(found)}+ down-sets")
        return [
            frozenset(s for s in range(self.n) if m >> s & 1)
            for m in sorted(found, key=lambda m: (bin(m).count("1"), m))
        ]

    # dunder --------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Relation) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __le__(self, other):
        return self.issubset(other)

    def __repr__(self):
        if self.kind == "equivalence":
            blocks = " ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.classes())
            return f"Relation(equivalence: {blocks})"
        return f"Relation(preorder, {len(self.pairs())} pairs)"
