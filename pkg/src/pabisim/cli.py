"""Command-line interface.

Exit codes: 0 when the answer is positive (the formula holds, the states
are related, every check passes), 1 when it is negative, 2 for usage and
parse errors, 3 when a resource cap stopped a computation or left an answer
incomplete.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import FormulaSyntaxError, FragmentError, ModelError, ResourceCapError
from .fixtures import FIXTURES, run_corpus
from .generate import DEFAULT_GRID, GenParams, generate_random
from .logic import ModelChecker, Prob, parse_formula
from .model import ProbAutomaton, format_model, interleave, parse_model, to_fraction
from .relations import RELATION_NAMES, RelationQuery, Trace, compute, relate
from .relations.verdict import INDEXED
from .suites import SUITES, SuiteConfig, format_report, run_property_suites

__all__ = ["main", "build_parser", "TAXONOMY"]

OK, NEGATIVE, USAGE, CAPPED = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _load(path: str) -> ProbAutomaton:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_model(data)


def _split_pair(text: str) -> tuple[str, str]:
    """Split ``s,r`` at the one comma outside parentheses."""
    level = 0
    cuts = []
    for i, ch in enumerate(text):
        if ch == "(":
            level += 1
        elif ch == ")":
            level -= 1
        elif ch == "," and level == 0:
            cuts.append(i)
    if len(cuts) != 1:
        raise _UsageError(f"--pair expects two state ids separated by a comma, got {text!r}")
    return text[: cuts[0]].strip(), text[cuts[0] + 1 :].strip()


def _state(a: ProbAutomaton, sid: str) -> int:
    try:
        return a.index(sid)
    except (KeyError, ValueError, IndexError) as exc:
        raise _UsageError(f"no state {sid!r} in {a.name}") from exc


# --------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    a = _load(args.file)
    ntrans = sum(len(t) for t in a.transitions)
    print(f"{a.name}: {a.n} states, {ntrans} transitions, {len(a.props)} propositions, initial "
          + ", ".join(a.names[u] for u in sorted(a.initial)))
    if args.echo:
        sys.stdout.write(format_model(a))
    return OK


def cmd_mc(args) -> int:
    a = _load(args.file)
    phi = parse_formula(args.formula)
    checker = ModelChecker(a)
    sat = checker.sat(phi)
    values = None
    if isinstance(phi, Prob):
        values = (checker.values(phi.path, "inf"), checker.values(phi.path, "sup"))
    states = [_state(a, args.state)] if args.state else list(a.states)
    for u in states:
        line = f"{a.names[u]}: {'holds' if u in sat else 'fails'}"
        if values is not None:
            line += f"  inf {values[0][u]}  sup {values[1][u]}"
        print(line)
    focus = states if args.state else sorted(a.initial)
    return OK if all(u in sat for u in focus) else NEGATIVE


def _query(args, name=None) -> RelationQuery:
    name = name or args.relation
    depth = args.depth
    if depth is None and name in INDEXED:
        raise _UsageError(f"{name} needs --depth")
    return RelationQuery(
        name,
        depth=depth,
        direction=args.direction,
        pattern_length=args.pattern_length,
        antichain_size=args.antichain_size,
        max_events=args.max_events,
    )


def cmd_relate(args) -> int:
    a = _load(args.file)
    pair = None
    if args.pair:
        s, r = _split_pair(args.pair)
        pair = (_state(a, s), _state(a, r))
    verdict = relate(a, _query(args), pair)
    print(verdict.report(a))
    if pair is None:
        return CAPPED if verdict.caps_hit else OK
    if verdict.related:
        return CAPPED if verdict.caps_hit else OK
    return NEGATIVE


def cmd_compose(args) -> int:
    a, b = _load(args.left), _load(args.right)
    text = format_model(interleave(a, b))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    return OK


# (smaller, larger): every pair related by the first is related by the second.
TAXONOMY = (
    ("strong-prob-bisim", "strong-i"),
    ("strong-i", "strong-branching-i"),
    ("strong-1", "strong-branching-i"),
    ("strong-prob-bisim", "branching-prob-bisim"),
    ("branching-prob-bisim", "weak-branching-bisim"),
    ("branching-prob-bisim", "weak-bisim"),
    ("weak-bisim", "weak-branching-bisim"),
    ("strong-prob-bisim", "strong-prob-sim"),
    ("strong-prob-sim", "branching-sim-i"),
    ("sim-i", "branching-sim-i"),
    ("weak-sim", "weak-branching-sim"),
)


def cmd_taxonomy(args) -> int:
    a = _load(args.file)
    names = list(RELATION_NAMES)
    rels, caps, skipped = {}, {}, {}
    for name in names:
        q = RelationQuery(
            name,
            depth=args.depth if name in INDEXED else None,
            pattern_length=args.pattern_length,
            antichain_size=args.antichain_size,
            max_events=args.max_events,
        )
        trace = Trace()
        try:
            rels[name] = compute(a, q, trace)
            caps[name] = trace.caps_hit
        except ResourceCapError as exc:
            skipped[name] = str(exc)
    expected = set(TAXONOMY)
    short = {n: f"R{k}" for k, n in enumerate(names)}
    print(f"{a.name}: inclusions among relations (depth {args.depth} for indexed ones)")
    for n in names:
        status = "skipped: " + skipped[n] if n in skipped else (
            "caps hit: " + "; ".join(caps[n]) if caps[n] else f"{len(rels[n].pairs())} pairs"
        )
        print(f"  {short[n]:>3} = {n} ({status})")
    cols = [n for n in names if n in rels]
    print("row within column: '+' holds, '.' does not; '!' an expected inclusion fails, '*' expected and holds")
    print("      " + " ".join(f"{short[n]:>3}" for n in cols))
    broken = []
    for x in cols:
        cells = []
        for y in cols:
            holds = rels[x] <= rels[y]
            if (x, y) in expected:
                cells.append("  *" if holds else "  !")
                if not holds:
                    broken.append((x, y))
            else:
                cells.append("  +" if holds else "  .")
        print(f"  {short[x]:>3} " + " ".join(cells))
    for x, y in broken:
        s, r = next(p for p in rels[x].pairs() if not rels[y].related(*p))
        capped = " (a cap was hit, so this may be an artefact)" if caps[x] or caps[y] else ""
        print(f"expected {x} within {y} fails at {a.names[s]},{a.names[r]}{capped}")
    if skipped:
        return CAPPED
    return NEGATIVE if broken else OK


def cmd_regress(args) -> int:
    names = args.fixture or None
    failed = 0
    for outcome in run_corpus(names):
        print(outcome.line())
        failed += not outcome.passed
    total_line = f"fixtures: {failed} expectation(s) failed"
    rc = OK if failed == 0 else NEGATIVE
    if args.suites:
        chosen = tuple(s.strip() for s in args.suites.split(",") if s.strip())
        config = SuiteConfig(
            suites=chosen,
            samples=args.samples,
            engine_samples=args.engine_samples,
            first_seed=args.first_seed,
            witness_dir=args.witness_dir,
        )
        results = run_property_suites(config)
        sys.stdout.write(format_report(results))
        if any(not r.ok for r in results):
            rc = NEGATIVE
    print(total_line)
    return rc


def cmd_random(args) -> int:
    grid = tuple(to_fraction(x.strip()) for x in args.grid.split(",")) if args.grid else DEFAULT_GRID
    params = GenParams(
        seed=args.seed,
        states=args.states,
        max_transitions=args.max_transitions,
        grid=grid,
        alphabet=args.alphabet,
    )
    text = format_model(generate_random(params))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return OK


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _relation_options(p, with_depth_default=None):
    p.add_argument("--depth", type=int, default=with_depth_default, help="index i of the indexed relations")
    p.add_argument("--pattern-length", type=int, default=None, help="longest pattern for the pattern-based relations")
    p.add_argument("--antichain-size", type=int, default=2, help="most patterns per enumerated event")
    p.add_argument("--max-events", type=int, default=200_000, help="cap on any single event enumeration")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pabisim", description="Exact probabilistic-automata logic and bisimulation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="validate a model file")
    p.add_argument("file")
    p.add_argument("--echo", action="store_true", help="print the model in canonical form")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("mc", help="model check a state formula")
    p.add_argument("file")
    p.add_argument("--formula", required=True)
    p.add_argument("--state", help="report only this state (default: all, exit code from the initial states)")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("relate", help="compute a relation and explain one pair")
    p.add_argument("file")
    p.add_argument("--relation", required=True, choices=RELATION_NAMES)
    p.add_argument("--pair", help="two state ids, e.g. s,r or (s,t),(r,t)")
    p.add_argument("--direction", choices=("match-at-least", "match-at-most", "match-both"))
    _relation_options(p)
    p.set_defaults(func=cmd_relate)

    p = sub.add_parser("compose", help="interleave two models")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("taxonomy", help="compute every relation and print their inclusions")
    p.add_argument("file")
    _relation_options(p, with_depth_default=2)
    p.set_defaults(func=cmd_taxonomy, max_events=20_000)

    p = sub.add_parser("regress", help="run the fixture corpus, optionally the property suites")
    p.add_argument("--fixture", action="append", choices=[fx.name for fx in FIXTURES])
    p.add_argument("--suites", help="comma-separated suites: " + ", ".join(SUITES))
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--engine-samples", type=int, default=100)
    p.add_argument("--first-seed", type=int, default=0)
    p.add_argument("--witness-dir", default=None, help="where to write failing automata")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("random", help="emit a seeded random model")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--states", type=int, default=5)
    p.add_argument("--max-transitions", type=int, default=2)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--grid", help="comma-separated probabilities, default 1/4,1/2,3/4,1")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"pabisim: error: {exc}", file=sys.stderr)
        return USAGE
    except (ModelError, FormulaSyntaxError, FragmentError, ValueError) as exc:
        print(f"pabisim: error: {exc}", file=sys.stderr)
        return USAGE
    except ResourceCapError as exc:
        print(f"pabisim: {exc}", file=sys.stderr)
        return CAPPED


if __name__ == "__main__":
    sys.exit(main())
