"""DSA graphs, their behaviors, and the verification condition.

Graph file format, one item per line (``;`` starts a comment)::

    node <id> <assert|assume> <formula>
    edge <from> <to>
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from typing import Mapping

from .pruner import implies
from .terms import (
    DEFAULT_REGISTRY, CommutativityRegistry, ParseError, Session, Substitution,
    Term, apply_substitution, normalize, parse_term, print_term, simplify,
)

__all__ = [
    "GraphError", "Node", "DsaGraph", "Behavior", "parse_graph", "format_graph",
    "topological_order", "behaviors", "vc", "graph_correspondence",
    "demote_shared_assertions", "mk_and", "mk_or",
]

ASSERT, ASSUME = "assert", "assume"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    id: int
    kind: str  # ASSERT (black) or ASSUME (white)
    formula: Term

    @property
    def is_assertion(self) -> bool:
        return self.kind == ASSERT


@dataclass
class DsaGraph:
    nodes: dict = field(default_factory=dict)   # id -> Node
    edges: set = field(default_factory=set)     # (from, to)

    def add_node(self, ident: int, kind: str, formula: Term) -> Node:
        if ident in self.nodes:
            raise GraphError(f"duplicate node id {ident}")
        if kind not in (ASSERT, ASSUME):
            raise GraphError(f"node kind must be 'assert' or 'assume', not {kind!r}")
        if not isinstance(ident, int) or ident <= 0:
            raise GraphError(f"node ids must be positive integers, got {ident!r}")
        node = self.nodes[ident] = Node(ident, kind, formula)
        return node

    def add_edge(self, src: int, dst: int) -> None:
        for n in (src, dst):
            if n not in self.nodes:
                raise GraphError(f"edge {src}->{dst} references unknown node {n}")
        self.edges.add((src, dst))

    def predecessors(self, ident: int) -> list[int]:
        return sorted(a for a, b in self.edges if b == ident)

    def successors(self, ident: int) -> list[int]:
        return sorted(b for a, b in self.edges if a == ident)

    def initial_nodes(self) -> list[int]:
        targets = {b for _, b in self.edges}
        return sorted(n for n in self.nodes if n not in targets)

    def final_nodes(self) -> list[int]:
        sources = {a for a, _ in self.edges}
        return sorted(n for n in self.nodes if n not in sources)

    def copy(self) -> "DsaGraph":
        return DsaGraph(dict(self.nodes), set(self.edges))


def topological_order(g: DsaGraph) -> list[int]:
    """Kahn's algorithm, smallest ready id first; raises on a cycle."""
    indeg = {n: 0 for n in g.nodes}
    succ: dict[int, list[int]] = {n: [] for n in g.nodes}
    for a, b in g.edges:
        indeg[b] += 1
        succ[a].append(b)
    ready = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(ready, m)
    if len(order) != len(g.nodes):
        stuck = sorted(n for n, d in indeg.items() if d > 0)
        raise GraphError(f"graph has a cycle through nodes {stuck}")
    return order


def parse_graph(text: str, session: Session) -> DsaGraph:
    g = DsaGraph()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 3)
        try:
            if parts[0] == "node" and len(parts) == 4:
                try:
                    formula = parse_term(parts[3], session)
                except ParseError as e:
                    raise GraphError(f"bad formula: {e}") from None
                g.add_node(int(parts[1]), parts[2], formula)
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((lineno, int(parts[1]), int(parts[2])))
            else:
                raise GraphError(f"cannot read {line!r}")
        except (GraphError, ValueError) as e:
            raise GraphError(f"line {lineno}: {e}") from None
    for lineno, a, b in edges:
        try:
            g.add_edge(a, b)
        except GraphError as e:
            raise GraphError(f"line {lineno}: {e}") from None
    topological_order(g)
    return g


def format_graph(g: DsaGraph) -> str:
    lines = [f"node {n.id} {n.kind} {print_term(n.formula)}"
             for n in sorted(g.nodes.values(), key=lambda n: n.id)]
    lines += [f"edge {a} {b}" for a, b in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def mk_and(session: Session, *parts: Term) -> Term:
    """Conjunction that splices nested conjunctions and folds constants."""
    return _mk(session, "and", parts)


def mk_or(session: Session, *parts: Term) -> Term:
    return _mk(session, "or", parts)


def _mk(session: Session, op: str, parts) -> Term:
    kids = []
    for p in map(simplify, parts):
        kids.extend(p.children if p.head.text == op else (p,))
    return simplify(session.intern(op, kids))


@dataclass(frozen=True)
class Behavior:
    pre: Term     # alpha
    post: Term    # beta
    wrong: Term   # gamma


def behaviors(g: DsaGraph, reg: CommutativityRegistry = DEFAULT_REGISTRY) -> dict[int, Behavior]:
    if not g.nodes:
        return {}
    session = next(iter(g.nodes.values())).formula.session
    preds: dict[int, list[int]] = {n: [] for n in g.nodes}
    for a, b in sorted(g.edges):
        preds[b].append(a)
    out: dict[int, Behavior] = {}
    for n in topological_order(g):
        node = g.nodes[n]
        if preds[n]:
            alpha = mk_or(session, *(out[p].post for p in preds[n]))
        else:
            alpha = session.true
        beta = mk_and(session, alpha, node.formula)
        if node.is_assertion:
            gamma = mk_and(session, alpha, session.not_(node.formula))
        else:
            gamma = session.false
        out[n] = Behavior(*(normalize(x, reg) for x in (alpha, beta, gamma)))
    return out


def vc(g: DsaGraph, reg: CommutativityRegistry = DEFAULT_REGISTRY) -> Term:
    """Disjunction of every node's wrong behavior."""
    beh = behaviors(g, reg)
    if not beh:
        raise GraphError("empty graph has no verification condition")
    session = next(iter(beh.values())).wrong.session
    return normalize(mk_or(session, *(beh[n].wrong for n in sorted(beh))), reg)


def _formula_key(t: Term, subst, reg):
    if subst:
        t = apply_substitution(t, subst)
    return normalize(t, reg)


def graph_correspondence(old: DsaGraph, new: DsaGraph, subst: Substitution | Mapping | None = None,
                         reg: CommutativityRegistry = DEFAULT_REGISTRY) -> dict[int, int]:
    """Pair assertions of ``new`` with already-checked assertions of ``old``.

    A pair needs handle-equal formulas (after renaming ``old``) and a new
    precondition that structurally implies the old one; the latter keeps
    the old proof valid in the new context.
    """
    old_beh, new_beh = behaviors(old, reg), behaviors(new, reg)
    candidates = [n for n in topological_order(old) if old.nodes[n].is_assertion]
    used: set[int] = set()
    out: dict[int, int] = {}
    for m in topological_order(new):
        node = new.nodes[m]
        if not node.is_assertion:
            continue
        phi = normalize(node.formula, reg)
        for n in candidates:
            if n in used:
                continue
            if _formula_key(old.nodes[n].formula, subst, reg) is not phi:
                continue
            if implies(new_beh[m].pre, _formula_key(old_beh[n].pre, subst, reg)):
                out[n] = m
                used.add(n)
                break
    return out


def demote_shared_assertions(old: DsaGraph, new: DsaGraph, correspondence: Mapping[int, int],
                             subst: Substitution | Mapping | None = None,
                             reg: CommutativityRegistry = DEFAULT_REGISTRY) -> DsaGraph:
    """Copy ``new`` with every corresponded assertion turned into an assumption."""
    old_beh, new_beh = behaviors(old, reg), behaviors(new, reg)
    result = new.copy()
    if len(set(correspondence.values())) != len(correspondence):
        raise GraphError("correspondence maps two old nodes to one new node")
    for n, m in correspondence.items():
        if n not in old.nodes or m not in new.nodes:
            raise GraphError(f"correspondence {n}->{m} names a missing node")
        a, b = old.nodes[n], new.nodes[m]
        if not (a.is_assertion and b.is_assertion):
            raise GraphError(f"correspondence {n}->{m} must pair two assertions")
        if _formula_key(a.formula, subst, reg) is not normalize(b.formula, reg):
            raise GraphError(f"correspondence {n}->{m} pairs different formulas")
        if not implies(new_beh[m].pre, _formula_key(old_beh[n].pre, subst, reg)):
            raise GraphError(
                f"correspondence {n}->{m}: new precondition does not imply the old one")
        result.nodes[m] = replace(b, kind=ASSUME)
    return result
