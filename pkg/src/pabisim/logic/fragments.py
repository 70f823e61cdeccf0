"""Fragment classification, path depth and the depth-one normal form."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..errors import FragmentError
from .syntax import (
    FALSE,
    TRUE,
    And,
    Atom,
    BoundedUntil,
    Const,
    Formula,
    Next,
    Not,
    Or,
    Prob,
    Until,
    conj,
    disj,
    is_state,
    neg,
)

__all__ = ["FragmentTag", "depth", "horizon", "classify", "in_fragment", "normalize_depth1", "path_formulas"]


@dataclass(frozen=True, order=True)
class FragmentTag:
    """A sublogic name, with ``index`` set for the depth-indexed families.

    Indexed tags report the least index; membership holds for every larger
    index as well (see :func:`in_fragment`).
    """

    base: str
    index: int | None = None

    def __str__(self):
        return self.base if self.index is None else f"{self.base}{self.index}"


BASES = ("PCTL", "PCTL-", "PCTL*", "PCTL*-", "PCTL\\X", "PCTL*\\X", "PCTLs", "PCTL*s")


def depth(psi: Formula) -> int:
    """Nesting depth of ``X`` in an until-free path formula."""
    if is_state(psi):
        return 0
    if isinstance(psi, Not):
        return depth(psi.arg)
    if isinstance(psi, (And, Or)):
        return max(depth(psi.left), depth(psi.right))
    if isinstance(psi, Next):
        return 1 + depth(psi.arg)
    raise FragmentError("depth undefined for until", psi)


def horizon(psi: Formula) -> int:
    """Number of future positions an until-free path formula can inspect.

    Like :func:`depth`, but bounded until ``U<=n`` counts ``n`` extra steps.
    """
    if is_state(psi):
        return 0
    if isinstance(psi, Not):
        return horizon(psi.arg)
    if isinstance(psi, (And, Or)):
        return max(horizon(psi.left), horizon(psi.right))
    if isinstance(psi, Next):
        return 1 + horizon(psi.arg)
    if isinstance(psi, BoundedUntil):
        return psi.bound + max(horizon(psi.left), horizon(psi.right))
    raise FragmentError("horizon undefined for unbounded until", psi)


def path_formulas(phi: Formula):
    """Path formulae directly under ``P`` operators, outermost first."""
    if isinstance(phi, Prob):
        yield phi.path
        yield from _nested_probs(phi.path)
    elif isinstance(phi, Not):
        yield from path_formulas(phi.arg)
    elif isinstance(phi, (And, Or)):
        yield from path_formulas(phi.left)
        yield from path_formulas(phi.right)


def _nested_probs(psi):
    if isinstance(psi, Prob):
        yield from path_formulas(psi)
    elif isinstance(psi, (Not, Next)):
        yield from _nested_probs(psi.arg)
    elif isinstance(psi, (And, Or, Until, BoundedUntil)):
        yield from _nested_probs(psi.left)
        yield from _nested_probs(psi.right)


def _ops(psi) -> set:
    """Temporal/boolean operator kinds used at path level (state leaves excluded)."""
    if is_state(psi):
        return set()
    kinds = {type(psi)}
    if isinstance(psi, (Not, Next)):
        return kinds | _ops(psi.arg)
    return kinds | _ops(psi.left) | _ops(psi.right)


def _pctl_shape(psi) -> bool:
    if isinstance(psi, Next):
        return is_state(psi.arg)
    if isinstance(psi, (Until, BoundedUntil)):
        return is_state(psi.left) and is_state(psi.right)
    return False


def _safe_state(phi) -> bool:
    if isinstance(phi, (Atom, Const)):
        return True
    if isinstance(phi, Not):
        return isinstance(phi.arg, Atom)
    if isinstance(phi, (And, Or)):
        return _safe_state(phi.left) and _safe_state(phi.right)
    if isinstance(phi, Prob):
        return phi.op == ">=" and _safe_path(phi.path)
    return False


def _safe_path(psi) -> bool:
    if is_state(psi):
        return _safe_state(psi)
    if isinstance(psi, (And, Or, Until)):
        return _safe_path(psi.left) and _safe_path(psi.right)
    if isinstance(psi, Next):
        return _safe_path(psi.arg)
    if isinstance(psi, BoundedUntil):
        return _safe_path(psi.left) and _safe_path(psi.right)
    return False


def classify(phi: Formula) -> set[FragmentTag]:
    """Every sublogic the state formula belongs to."""
    if not is_state(phi):
        raise FragmentError("classify expects a state formula", phi)
    paths = list(path_formulas(phi))
    ops = [_ops(p) for p in paths]
    tags: set[FragmentTag] = set()

    pctl = all(_pctl_shape(p) for p in paths)
    if pctl:
        tags.add(FragmentTag("PCTL"))
        if not any(isinstance(p, Until) for p in paths):
            tags.add(FragmentTag("PCTL-"))
            idx = max(
                [1] + [p.bound for p in paths if isinstance(p, BoundedUntil)]
            )
            tags.add(FragmentTag("PCTL-", idx))
        if all(isinstance(p, Until) for p in paths):
            tags.add(FragmentTag("PCTL\\X"))

    star = all(BoundedUntil not in o for o in ops)
    if star:
        tags.add(FragmentTag("PCTL*"))
        if all(Until not in o for o in ops):
            tags.add(FragmentTag("PCTL*-"))
            tags.add(FragmentTag("PCTL*-", max([1] + [depth(p) for p in paths])))
        if all(Next not in o for o in ops):
            tags.add(FragmentTag("PCTL*\\X"))

    if _safe_state(phi):
        if pctl:
            tags.add(FragmentTag("PCTLs"))
        if star and all(Not not in o for o in ops):
            tags.add(FragmentTag("PCTL*s"))
    return tags


def in_fragment(phi: Formula, tag: FragmentTag) -> bool:
    tags = classify(phi)
    if tag.index is None:
        return tag in tags
    return any(t.base == tag.base and t.index is not None and t.index <= tag.index for t in tags)


# --------------------------------------------------------------------------
# depth-one normal form


def normalize_depth1(phi: Formula) -> Formula:
    """Rewrite depth-one until-free path formulae into single-``X`` form.

    A depth-one path formula is a boolean combination of state formulae
    evaluated now and ``X``-formulae.  At a fixed state the present-tense
    leaves have fixed truth values, so ``P⋈q(ψ)`` splits into a disjunction
    over their valuations of ``θ_v ∧ P⋈q(X ψ_v)``, where ``ψ_v`` substitutes
    the valuation and strips the ``X`` (``X`` distributes over the boolean
    connectives and commutes with negation).  Constants are folded, so
    ``P≥q(Xa ∧ Xb)`` becomes ``P≥q(X(a ∧ b))`` and ``P≥q(Xa ∧ b)`` with
    ``q > 0`` becomes ``b ∧ P≥q(Xa)``.
    """
    if isinstance(phi, (Atom, Const)):
        return phi
    if isinstance(phi, Not):
        return neg(normalize_depth1(phi.arg))
    if isinstance(phi, And):
        return conj(normalize_depth1(phi.left), normalize_depth1(phi.right))
    if isinstance(phi, Or):
        return disj(normalize_depth1(phi.left), normalize_depth1(phi.right))
    if not isinstance(phi, Prob):
        raise FragmentError("normalize_depth1 expects a state formula", phi)

    psi = _normalize_inner(phi.path)
    if depth(psi) > 1:
        raise FragmentError("path formula deeper than one", phi.path)
    leaves: list[Formula] = []
    _present_leaves(psi, leaves)
    if not leaves and isinstance(psi, Next):
        return Prob(phi.op, phi.q, psi)
    branches = []
    for bits in product((True, False), repeat=len(leaves)):
        val = dict(zip(leaves, bits))
        body = _strip(psi, val)
        guard = conj(*(leaf if b else neg(leaf) for leaf, b in val.items()))
        if isinstance(body, Const):
            mass = 1 if body.value else 0
            inner = Const(_compare(mass, phi.op, phi.q))
        else:
            inner = Prob(phi.op, phi.q, Next(body))
        branches.append(conj(guard, inner))
    return disj(*branches)


def _normalize_inner(psi):
    """Normalise state formulae nested inside a path formula."""
    if is_state(psi):
        return normalize_depth1(psi)
    if isinstance(psi, Not):
        return Not(_normalize_inner(psi.arg))
    if isinstance(psi, Next):
        return Next(_normalize_inner(psi.arg))
    if isinstance(psi, (And, Or)):
        return type(psi)(_normalize_inner(psi.left), _normalize_inner(psi.right))
    raise FragmentError("until in a depth-one formula", psi)


def _present_leaves(psi, out):
    if is_state(psi):
        if psi not in out and not isinstance(psi, Const):
            out.append(psi)
    elif isinstance(psi, Not):
        _present_leaves(psi.arg, out)
    elif isinstance(psi, (And, Or)):
        _present_leaves(psi.left, out)
        _present_leaves(psi.right, out)


def _strip(psi, val) -> Formula:
    """Substitute present-tense leaves and drop the ``X`` around next-state parts."""
    if isinstance(psi, Const):
        return psi
    if is_state(psi):
        return TRUE if val[psi] else FALSE
    if isinstance(psi, Next):
        return psi.arg
    if isinstance(psi, Not):
        return neg(_strip(psi.arg, val))
    if isinstance(psi, And):
        return conj(_strip(psi.left, val), _strip(psi.right, val))
    if isinstance(psi, Or):
        return disj(_strip(psi.left, val), _strip(psi.right, val))
    raise FragmentError("unexpected node", psi)


def _compare(x, op, q) -> bool:
    return {"<": x < q, "<=": x <= q, ">=": x >= q, ">": x > q}[op]
