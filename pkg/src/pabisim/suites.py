"""Property suites over seeded random automata.

Each suite runs a list of checks on the same corpus of generated automata.
A check returns ``None`` when it holds on a sample and a short explanation
otherwise.  Failing samples are serialized to a witness file so that a
disagreement can be replayed with the command-line tool.

Checks marked informational are reported with their counts but do not
count as suite failures; they record evidence about variants (such as the
two-sided direction) that are not part of a suite's claim.
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .generate import GenParams, generate_random, sample_params
from .model import ProbAutomaton, format_model, interleave
from .oracle import FormulaBudget, bounded_reach_by_enumeration, logical_partition
from .reach import bounded_reach, replay_bounded
from .relation import Relation
from .relations import (
    RelationQuery,
    Trace,
    compute,
    sim_family,
    strong_1_depth,
    strong_branching_i,
    strong_i_depth,
    strong_prob_bisim,
    strong_prob_sim,
    weak_bisim,
    weak_branching_bisim,
)

__all__ = [
    "SUITES",
    "Check",
    "CheckResult",
    "SuiteConfig",
    "SuiteResult",
    "run_property_suites",
    "format_report",
]


@dataclass(frozen=True)
class SuiteConfig:
    suites: tuple[str, ...] = ("characterization", "inclusion", "engine", "witness")
    samples: int = 200
    engine_samples: int = 100
    first_seed: int = 0
    max_states: int = 5
    witness_dir: str | None = None

    def __post_init__(self):
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {', '.join(sorted(unknown))}")
        if self.samples < 0 or self.engine_samples < 0:
            raise ValueError("sample counts must be nonnegative")


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[ProbAutomaton, int], str | None]
    informational: bool = False


@dataclass
class CheckResult:
    name: str
    informational: bool
    samples: int = 0
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return self.samples - len(self.failures)

    def merge(self, other: "CheckResult") -> "CheckResult":
        return CheckResult(
            self.name,
            self.informational,
            self.samples + other.samples,
            sorted(self.failures + other.failures),
        )


@dataclass
class SuiteResult:
    suite: str
    samples: int
    checks: list[CheckResult]
    seconds: float
    witness_file: str | None = None

    @property
    def failures(self) -> int:
        """Samples on which some non-informational check failed."""
        bad = {seed for c in self.checks if not c.informational for seed, _ in c.failures}
        return len(bad)

    @property
    def ok(self) -> bool:
        return self.failures == 0


# --------------------------------------------------------------------------
# helpers


def _corpus(config: SuiteConfig, count: int):
    for seed in range(config.first_seed, config.first_seed + count):
        yield seed, generate_random(sample_params(seed, config.max_states))


def _diff(a: ProbAutomaton, got: Relation, want: Relation) -> str | None:
    if got == want:
        return None
    pairs = sorted(set(got.pairs()) ^ set(want.pairs()))
    s, r = pairs[0]
    side = "relation only" if got.related(s, r) else "oracle only"
    return f"{a.names[s]},{a.names[r]} related by {side}; {len(pairs)} pairs differ"


def _subset(a: ProbAutomaton, small: Relation, big: Relation) -> str | None:
    if small <= big:
        return None
    s, r = next(p for p in small.pairs() if not big.related(*p))
    return f"{a.names[s]},{a.names[r]} in the smaller relation only"


def _oracle(fragment: str, **kw):
    budget = FormulaBudget(fragment, **kw)
    return lambda a: logical_partition(a, budget).relation


def _matches(rel_fn, oracle_fn):
    return lambda a, seed: _diff(a, rel_fn(a), oracle_fn(a))


def _within(small_fn, big_fn):
    return lambda a, seed: _subset(a, small_fn(a), big_fn(a))


def _partner(seed: int) -> ProbAutomaton:
    rng = random.Random(seed ^ 0xC0FFEE)
    return generate_random(GenParams(seed=rng.getrandbits(32), states=rng.randint(1, 2)))


def _congruent(rel_fn):
    """``s R r`` implies ``(s,u) R (r,u)`` in the product with a small partner."""

    def run(a: ProbAutomaton, seed: int) -> str | None:
        c = _partner(seed)
        base = rel_fn(a)
        prod = rel_fn(interleave(a, c))
        for s, r in base.pairs():
            for u in c.states:
                if not prod.related(s * c.n + u, r * c.n + u):
                    return f"{a.names[s]},{a.names[r]} related but not after composing at {c.names[u]}"
        return None

    return run


def _symmetric(rel_fn):
    def run(a, seed):
        return None if rel_fn(a).is_symmetric() else "not symmetric"

    return run


ENGINE_QUERIES = 4


def _engine_check(a: ProbAutomaton, seed: int) -> str | None:
    """Bounded reach against scheduler enumeration, plus policy replay.

    Each sample draws a few random queries ``C U<=n C'`` with ``n <= 3``
    and checks them from every state.
    """
    rng = random.Random(seed ^ 0xB0B)
    for _ in range(ENGINE_QUERIES):
        C = {u for u in a.states if rng.random() < 0.7}
        Cp = {u for u in a.states if u not in C and rng.random() < 0.7}
        n = rng.randint(1, 3)
        for s in a.states:
            lo, hi = bounded_reach_by_enumeration(a, s, C, Cp, n)
            for mode, want in (("sup", hi), ("inf", lo)):
                got, witness = bounded_reach(a, s, C, Cp, n, mode)
                if got != want:
                    return f"{mode} at {a.names[s]} (n={n}): engine {got}, enumeration {want}"
                again = replay_bounded(a, s, C, Cp, n, witness)
                if again != got:
                    return f"{mode} witness at {a.names[s]} replays to {again}, reported {got}"
    return None


def _replays(query: RelationQuery):
    """Every separated pair with equal labels has a witness whose values replay."""

    def run(a: ProbAutomaton, seed: int) -> str | None:
        trace = Trace()
        rel = compute(a, query, trace)
        for s in a.states:
            for r in a.states:
                if rel.related(s, r) or a.labels[s] != a.labels[r]:
                    continue
                w = trace.witnesses.get((s, r))
                if w is None:
                    return f"{a.names[s]},{a.names[r]} separated without a witness"
                if w.values is not None and w.replay(a) != w.values:
                    return f"{a.names[s]},{a.names[r]}: {w.describe(a)} replays to {w.replay(a)}"
        return None

    return run


def _label(q: RelationQuery) -> str:
    out = q.name if q.depth is None else f"{q.name}({q.depth})"
    return out if q.direction is None else f"{out}[{q.direction}]"


def _sim(name, depth):
    return lambda a: sim_family(a, name, depth, None, 2, 200_000, None)


SUITES: dict[str, list[Check]] = {
    "characterization": [
        Check("strong_branching_1 = oracle PCTL-1", _matches(lambda a: strong_branching_i(a, 1), _oracle("PCTL-1"))),
        Check("strong_branching_2 = oracle PCTL-2", _matches(lambda a: strong_branching_i(a, 2), _oracle("PCTL-2"))),
        Check("strong_i_depth(2) = oracle PCTL*-2", _matches(lambda a: strong_i_depth(a, 2), _oracle("PCTL*-2"))),
        Check(
            "weak_branching_bisim = oracle PCTL\\X (until nesting <= 2)",
            _matches(weak_branching_bisim, _oracle("PCTL\\X", max_until_nesting=2)),
        ),
        Check("strong_1_depth is symmetric", _symmetric(strong_1_depth)),
        Check(
            "weak_branching_bisim[match-both] = oracle PCTL\\X (until nesting <= 2)",
            _matches(lambda a: weak_branching_bisim(a, "match-both"), _oracle("PCTL\\X", max_until_nesting=2)),
            informational=True,
        ),
        Check(
            "strong_branching_2[match-both] = oracle PCTL-2",
            _matches(lambda a: strong_branching_i(a, 2, "match-both"), _oracle("PCTL-2")),
            informational=True,
        ),
    ],
    "inclusion": [
        *(
            Check(
                f"strong_branching_{i + 1} within strong_branching_{i}",
                _within(lambda a, i=i: strong_branching_i(a, i + 1), lambda a, i=i: strong_branching_i(a, i)),
            )
            for i in (1, 2, 3)
        ),
        *(
            Check(
                f"strong_i_depth({i}) within strong_branching_{i}",
                _within(lambda a, i=i: strong_i_depth(a, i), lambda a, i=i: strong_branching_i(a, i)),
            )
            for i in (1, 2)
        ),
        *(
            Check(f"strong_prob_bisim within strong_i_depth({i})", _within(strong_prob_bisim, lambda a, i=i: strong_i_depth(a, i)))
            for i in (1, 2)
        ),
        *(
            Check(f"strong_prob_sim within branching_sim_{i}", _within(strong_prob_sim, _sim("branching-sim-i", i)))
            for i in (1, 2)
        ),
        Check("strong_i_depth(2) within strong_i_depth(1)", _within(lambda a: strong_i_depth(a, 2), lambda a: strong_i_depth(a, 1))),
        Check(
            "strong_i_depth(1) = strong_branching_1",
            _matches(lambda a: strong_i_depth(a, 1), lambda a: strong_branching_i(a, 1)),
        ),
        Check("strong_1_depth is a congruence for interleaving", _congruent(strong_1_depth)),
        Check("strong_prob_bisim is a congruence for interleaving", _congruent(strong_prob_bisim)),
        Check("strong_prob_sim is a precongruence for interleaving", _congruent(strong_prob_sim)),
        Check("weak_bisim within weak_branching_bisim", _within(weak_bisim, weak_branching_bisim)),
    ],
    "engine": [
        Check("bounded_reach sup/inf = scheduler enumeration, witnesses replay", _engine_check),
    ],
    "witness": [
        Check(f"{_label(q)} witnesses replay", _replays(q))
        for q in (
            RelationQuery("strong-1"),
            RelationQuery("strong-branching-i", depth=2),
            RelationQuery("strong-branching-i", depth=2, direction="match-at-most"),
            RelationQuery("strong-i", depth=2),
            RelationQuery("weak-branching-bisim"),
            RelationQuery("weak-bisim"),
            RelationQuery("branching-sim-i", depth=2),
        )
    ],
}


# --------------------------------------------------------------------------
# running and reporting


def _write_witnesses(path: str, suite: str, failing: dict[int, list[str]], models: dict[int, ProbAutomaton]):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for seed in sorted(failing):
            fh.write(f"# suite {suite}, seed {seed}\n")
            for line in failing[seed]:
                fh.write(f"# {line}\n")
            fh.write(format_model(models[seed]))
            fh.write("\n")


def run_suite(name: str, config: SuiteConfig) -> SuiteResult:
    checks = SUITES[name]
    count = config.engine_samples if name == "engine" else config.samples
    results = [CheckResult(c.name, c.informational) for c in checks]
    failing: dict[int, list[str]] = {}
    models: dict[int, ProbAutomaton] = {}
    t0 = time.perf_counter()
    samples = 0
    for seed, a in _corpus(config, count):
        samples += 1
        for check, res in zip(checks, results):
            res.samples += 1
            why = check.run(a, seed)
            if why is not None:
                res.failures.append((seed, why))
                models[seed] = a
                failing.setdefault(seed, []).append(f"{check.name}: {why}")
    witness = None
    if failing and config.witness_dir is not None:
        witness = os.path.join(config.witness_dir, f"{name}-witnesses.pa.txt")
        _write_witnesses(witness, name, failing, models)
    return SuiteResult(name, samples, results, time.perf_counter() - t0, witness)


def run_property_suites(config: SuiteConfig | None = None) -> list[SuiteResult]:
    """Run the selected suites; the results are deterministic in ``config``."""
    config = config or SuiteConfig()
    return [run_suite(name, config) for name in config.suites]


def format_report(results: list[SuiteResult], examples: int = 3) -> str:
    """Line-oriented report followed by one summary block per suite."""
    lines = []
    for res in results:
        lines.append(f"== suite {res.suite} ({res.samples} automata, {res.seconds:.1f}s)")
        for c in res.checks:
            status = "PASS" if not c.failures else ("INFO" if c.informational else "FAIL")
            lines.append(f"{status} {c.name}: {c.passed}/{c.samples}")
            for seed, why in c.failures[:examples]:
                lines.append(f"     seed {seed}: {why}")
            if len(c.failures) > examples:
                lines.append(f"     ... {len(c.failures) - examples} more")
    for res in results:
        lines += [
            "[summary]",
            f"suite: {res.suite}",
            f"samples: {res.samples}",
            f"failures: {res.failures}",
            f"witness-file: {res.witness_file or '-'}",
        ]
    return "\n".join(lines) + "\n"
