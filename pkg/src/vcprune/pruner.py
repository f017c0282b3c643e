"""Pruning a new verification condition against an old UNSAT one.

The old formula is kept as a DNF context: a list of disjuncts, each a list
of conjuncts.  The context is assumed UNSAT, so any part of the new formula
that can only hold where the context holds can be replaced by ``false``.
"""
from __future__ import annotations

from typing import Sequence

from .matcher import DEFAULT_WEIGHTS, SimilarityWeights, build_substitution
from .terms import (
    DEFAULT_REGISTRY, CommutativityRegistry, Substitution, Term,
    apply_substitution, node_count, normalize, simplify,
)

__all__ = [
    "DnfContext", "flatten", "implies", "prune_rec", "prune", "prune_details",
    "prune_simple",
]

DnfContext = list  # list[list[Term]]


def flatten(ctx: Sequence[Sequence[Term]]) -> DnfContext:
    """Inline conjunctions and split singleton disjunctions, to a fixpoint.

    Conjunction is never distributed over disjunction: an ``or`` that sits
    next to other conjuncts stays opaque.
    """
    out: DnfContext = []
    work = [list(d) for d in reversed(ctx)]
    while work:
        conj = work.pop()
        flat: list[Term] = []
        stack = list(reversed(conj))
        while stack:
            t = stack.pop()
            if t.head.text == "and":
                stack.extend(reversed(t.children))
            else:
                flat.append(t)
        if len(flat) == 1 and flat[0].head.text == "or":
            work.extend([c] for c in reversed(flat[0].children))
        else:
            out.append(flat)
    return out


def implies(a: Term, b: Term) -> bool:
    """Structural implication: ``True`` only if ``a`` entails ``b``.

    Sound but incomplete; ``False`` means "could not show it".
    """
    return _Implies()(a, b)


class _Implies:
    def __init__(self):
        self.memo: dict[tuple[int, int], bool] = {}

    def __call__(self, a: Term, b: Term) -> bool:
        key = (a.id, b.id)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._compute(a, b)
        return hit

    def _compute(self, a: Term, b: Term) -> bool:
        if a is b:
            return True
        an, bn = a.head.text, b.head.text
        if an == "false" or bn == "true":
            return True
        if bn == "and" and all(self(a, c) for c in b.children):
            return True
        if an == "or" and all(self(c, b) for c in a.children):
            return True
        if an == "and" and any(self(c, b) for c in a.children):
            return True
        if bn == "or" and any(self(a, c) for c in b.children):
            return True
        return False


def prune_rec(ctx: Sequence[Sequence[Term]], t: Term) -> Term:
    """Prune ``t`` under the assumption that the flattened ``ctx`` is UNSAT.

    Wherever ``ctx`` is false, the result agrees with ``t``.
    """
    return _prune(ctx, t, _Implies())


def _prune(ctx, t: Term, imp: _Implies) -> Term:
    session = t.session
    name = t.head.text
    if name == "and":
        # nested conjunctions are read as one list, as flatten does for ctx
        conjuncts = _conjuncts(t)
        present = {x.id for d in ctx for x in d}
        common = [c for c in conjuncts if c.id in present]
        rest = [c for c in conjuncts if c.id not in present]
        drop = {c.id for c in common}
        ctx = [[x for x in d if x.id not in drop] for d in ctx]
        if any(not d for d in ctx):
            return session.false
        ctx = flatten(ctx)
        return session.intern("and", common + [_prune(ctx, c, imp) for c in rest])
    if name == "or":
        return session.intern("or", [_prune(ctx, c, imp) for c in t.children])
    for d in ctx:
        if imp(t, session.intern("and", d)):
            return session.false
    return t


def _conjuncts(t: Term) -> list[Term]:
    out, stack = [], list(reversed(t.children))
    while stack:
        c = stack.pop()
        if c.head.text == "and":
            stack.extend(reversed(c.children))
        else:
            out.append(c)
    return out


def prune(old: Term, new: Term, *, registry: CommutativityRegistry = DEFAULT_REGISTRY,
          match: bool = True, substitution: Substitution | None = None,
          weights: SimilarityWeights = DEFAULT_WEIGHTS) -> Term:
    """Return a formula equisatisfiable with ``new``, given ``old`` is UNSAT."""
    return prune_details(old, new, registry=registry, match=match,
                         substitution=substitution, weights=weights)[0]


def prune_details(old: Term, new: Term, *, registry: CommutativityRegistry = DEFAULT_REGISTRY,
                  match: bool = True, substitution: Substitution | None = None,
                  weights: SimilarityWeights = DEFAULT_WEIGHTS) -> tuple[Term, Substitution]:
    """Prune and report the renaming of ``old`` that was used.

    Any injective renaming keeps ``old`` UNSAT, so the result is sound for
    every candidate.  Candidates are the given ``substitution`` (or the
    matcher's, unless ``match`` is off) and the identity; the smaller
    residual wins, the non-identity one on a tie.
    """
    if old.session is not new.session:
        raise ValueError("old and new terms come from different sessions")
    old, new = normalize(old, registry), normalize(new, registry)
    if substitution is None and match:
        substitution = build_substitution(old, new, registry, weights)
    candidates = [Substitution()]
    if substitution:
        candidates.insert(0, substitution)
    best = None
    for subst in candidates:
        renamed = normalize(apply_substitution(old, subst), registry)
        residual = normalize(simplify(prune_rec(flatten([[renamed]]), new)), registry)
        if best is None or node_count(residual) < node_count(best[0]):
            best = (residual, subst)
    return best


def _binary(t: Term):
    """View an n-ary and/or as right-nested binary: ``(left, right)``."""
    kids = t.children
    if len(kids) < 2:
        return None
    if len(kids) == 2:
        return kids
    return kids[0], t.session.intern(t.head.text, kids[1:])


def prune_simple(p1: Term, p2: Term) -> Term:
    """The small mechanically-checked pruning function, over binary and/or.

    No flattening, no commutativity, no implication search: only literal
    equality of subterms.  Kept as a differential oracle for :func:`prune`.
    """
    session = p2.session
    n1, n2 = p1.head.text, p2.head.text
    if n1 == "and" and n2 == "and":
        l, r = _binary(p1) or (None, None), _binary(p2) or (None, None)
        if l[0] is not None and r[0] is not None:
            a, b = l
            aa, c = r
            if a is aa:
                return session.intern("and", (a, prune_simple(b, c)))
            return p2
    if n2 == "or":
        parts = _binary(p2)
        if parts is not None:
            a, b = parts
            return session.intern("or", (prune_simple(p1, a), prune_simple(p1, b)))
    return session.false if p1 is p2 else p2
