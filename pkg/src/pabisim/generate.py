"""Seeded random automata for the property suites."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .model import Distribution, ProbAutomaton

__all__ = ["GenParams", "generate_random", "grid_compositions", "sample_params", "DEFAULT_GRID"]

DEFAULT_GRID = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass(frozen=True)
class GenParams:
    seed: int
    states: int = 5
    max_transitions: int = 2
    grid: tuple[Fraction, ...] = DEFAULT_GRID
    alphabet: int = 2

    def __post_init__(self):
        if self.states < 1:
            raise ValueError("need at least one state")
        if self.max_transitions < 1:
            raise ValueError("need at least one transition per state")
        if not self.grid or any(not (0 < g <= 1) for g in self.grid):
            raise ValueError("grid values must lie in (0, 1]")
        if not grid_compositions(tuple(sorted(self.grid)), 64):
            raise ValueError("no way to write 1 as a sum of grid values")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@lru_cache(maxsize=None)
def grid_compositions(grid: tuple[Fraction, ...], max_parts: int) -> tuple[tuple[Fraction, ...], ...]:
    """Nonincreasing tuples of grid values summing to 1, at most ``max_parts`` long."""
    out = []

    def rec(rest: Fraction, bound: Fraction, parts: tuple):
        if rest == 0:
            out.append(parts)
            return
        if len(parts) == max_parts:
            return
        for g in sorted(grid, reverse=True):
            if g <= bound and g <= rest:
                rec(rest - g, g, parts + (g,))

    rec(Fraction(1), Fraction(1), ())
    return tuple(out)


def generate_random(params: GenParams) -> ProbAutomaton:
    """Deterministic in ``params``: the same seed gives the same automaton.

    Every state gets between one and ``max_transitions`` distributions;
    each distribution splits 1 into grid values placed on distinct states.
    Each state carries one atom out of ``alphabet``.
    """
    rng = random.Random(params.seed)
    n = params.states
    comps = grid_compositions(tuple(sorted(params.grid)), n)
    names = tuple(f"q{k}" for k in range(n))
    props = tuple(f"p{k}" for k in range(params.alphabet))
    transitions = []
    for _ in range(n):
        count = rng.randint(1, params.max_transitions)
        mus = []
        for _ in range(count):
            parts = rng.choice(comps)
            targets = rng.sample(range(n), len(parts))
            mu = Distribution({v: p for v, p in zip(targets, parts)})
            if mu not in mus:
                mus.append(mu)
        transitions.append(tuple(mus))
    labels = tuple(frozenset({rng.choice(props)}) if props else frozenset() for _ in range(n))
    return ProbAutomaton(
        f"random{params.seed}",
        names,
        tuple(transitions),
        frozenset({0}),
        frozenset(props),
        labels,
    )


def sample_params(seed: int, max_states: int = 5, **kw) -> GenParams:
    """Suite sampling: the state count (1..``max_states``) is drawn from the seed too."""
    states = random.Random(seed ^ 0x5EED).randint(1, max_states)
    return GenParams(seed=seed, states=states, **kw)
