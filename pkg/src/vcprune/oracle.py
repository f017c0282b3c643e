"""Brute-force semantics for small formulas, plus random formula generators.

Atoms are either opaque propositions (read from a boolean valuation) or
integer comparisons over uninterpreted constants (evaluated under an integer
valuation drawn from a bounded range).  Satisfiability is decided by
enumerating every assignment; truth tables are packed into Python ints so a
whole table is combined with a single ``&`` or ``|``.
"""
from __future__ import annotations

import operator
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Sequence

import numpy as np

from .pruner import flatten, prune, prune_rec, prune_simple
from .terms import (
    DEFAULT_REGISTRY, CommutativityRegistry, Session, SymbolKind, Term,
    is_integer_literal, normalize, print_term,
)
from .vcgen import ASSERT, ASSUME, DsaGraph

__all__ = [
    "OracleError", "UniverseTooLarge", "Universe", "Assignment", "evaluate",
    "classify_atoms", "TruthSpace", "is_unsat", "satisfying_assignment",
    "GeneratorParams", "random_formula", "random_pair", "shuffle_commutative",
    "random_graph", "random_graph_edit",
    "CheckReport", "check_prune_correct", "run_batch", "format_report",
]

COMPARISONS = {">": operator.gt, ">=": operator.ge, "<": operator.lt,
               "<=": operator.le, "=": operator.eq}
ARITHMETIC = frozenset({"+", "-", "*"})


class OracleError(ValueError):
    pass


class UniverseTooLarge(OracleError):
    pass


@dataclass(frozen=True)
class Universe:
    int_range: tuple = (-4, 7)           # inclusive bounds for integer constants
    max_assignments: int = 1 << 16

    @property
    def int_values(self) -> range:
        lo, hi = self.int_range
        return range(lo, hi + 1)


@dataclass
class Assignment:
    booleans: dict = field(default_factory=dict)   # atom Term -> bool
    integers: dict = field(default_factory=dict)   # constant name -> int

    def __str__(self) -> str:
        parts = [f"{print_term(a)}={'true' if v else 'false'}"
                 for a, v in sorted(self.booleans.items(), key=lambda kv: print_term(kv[0]))]
        parts += [f"{k}={v}" for k, v in sorted(self.integers.items())]
        return ",".join(parts)


# ------------------------------------------------------------------ atoms

def _is_arith(t: Term) -> bool:
    if not t.children:
        return t.is_constant() or is_integer_literal(t.head.text)
    return t.head.text in ARITHMETIC and all(_is_arith(c) for c in t.children)


def _is_int_atom(t: Term) -> bool:
    return (t.head.text in COMPARISONS and len(t.children) == 2
            and all(_is_arith(c) for c in t.children))


def classify_atoms(terms: Iterable[Term]) -> tuple[list[Term], list[str]]:
    """Return ``(boolean atoms, integer constants)`` of the given formulas.

    Both lists are sorted, so assignment spaces are reproducible.
    """
    bools: dict[int, Term] = {}
    ints: set[str] = set()
    seen: set[int] = set()
    stack = list(terms)
    while stack:
        t = stack.pop()
        if t.id in seen:
            continue
        seen.add(t.id)
        name = t.head.text
        if name in ("and", "or", "not"):
            stack.extend(t.children)
        elif name in ("true", "false"):
            pass
        elif t.kind is SymbolKind.QUANTIFIER:
            raise OracleError(f"quantified formula not supported by the oracle: {t}")
        elif _is_int_atom(t):
            _collect_int_consts(t, ints)
        else:
            bools[t.id] = t
    return sorted(bools.values(), key=Term.sort_key), sorted(ints)


def _collect_int_consts(t: Term, out: set) -> None:
    stack = [t]
    while stack:
        s = stack.pop()
        if s.is_constant():
            out.add(s.head.text)
        stack.extend(s.children)


# ------------------------------------------------------------------ evaluate

def evaluate(t: Term, x: Assignment) -> bool:
    """Truth value of a quantifier-free formula under one assignment."""
    name = t.head.text
    if name == "and":
        return all(evaluate(c, x) for c in t.children)
    if name == "or":
        return any(evaluate(c, x) for c in t.children)
    if name == "not":
        return not evaluate(t.children[0], x)
    if name == "true":
        return True
    if name == "false":
        return False
    if t.kind is SymbolKind.QUANTIFIER:
        raise OracleError(f"quantified formula not supported by the oracle: {t}")
    if _is_int_atom(t):
        lhs, rhs = t.children
        return COMPARISONS[name](_eval_int(lhs, x), _eval_int(rhs, x))
    try:
        return bool(x.booleans[t])
    except KeyError:
        raise OracleError(f"assignment does not cover atom {t}") from None


def _eval_int(t: Term, x: Assignment):
    name = t.head.text
    if not t.children:
        if is_integer_literal(name):
            return int(name)
        try:
            return x.integers[name]
        except KeyError:
            raise OracleError(f"assignment does not cover constant {name}") from None
    vals = [_eval_int(c, x) for c in t.children]
    if name == "+":
        return sum(vals)
    if name == "*":
        out = 1
        for v in vals:
            out = out * v
        return out
    if len(vals) == 1:
        return -vals[0]
    out = vals[0]
    for v in vals[1:]:
        out = out - v
    return out


# ------------------------------------------------------------------ truth tables

def _bits(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


class TruthSpace:
    """Every assignment to the atoms of some formulas, indexed ``0..size-1``.

    Bit ``i`` of :meth:`mask` is the formula's value under assignment ``i``.
    The low bits of an index select boolean atoms; the high part is a
    mixed-radix number over the integer constants.
    """

    def __init__(self, terms: Sequence[Term], universe: Universe = Universe()):
        self.universe = universe
        self.bool_atoms, self.int_consts = classify_atoms(terms)
        self.radix = len(universe.int_values)
        nb, nk = len(self.bool_atoms), len(self.int_consts)
        self.size = (1 << nb) * self.radix ** nk
        if self.size > universe.max_assignments:
            raise UniverseTooLarge(
                f"{nb} boolean atoms and {nk} integer constants give {self.size} "
                f"assignments (limit {universe.max_assignments})")
        self.full = (1 << self.size) - 1
        self._atom_index = {a.id: i for i, a in enumerate(self.bool_atoms)}
        self._memo: dict[int, int] = {}
        self._int_grid = None

    def _bool_atom_mask(self, i: int) -> int:
        half = 1 << i
        period = half << 1
        block = ((1 << half) - 1) << half
        if period >= self.size:
            return block & self.full
        return block * (self.full // ((1 << period) - 1))

    def _grid(self):
        if self._int_grid is None:
            vals = np.array(self.universe.int_values, dtype=np.int64)
            k = len(self.int_consts)
            idx = np.arange(self.radix ** k, dtype=np.int64)
            self._int_grid = {
                name: vals[(idx // self.radix ** j) % self.radix]
                for j, name in enumerate(self.int_consts)
            }
        return self._int_grid

    def _arith(self, t: Term, grid):
        name = t.head.text
        if not t.children:
            return int(name) if is_integer_literal(name) else grid[name]
        vals = [self._arith(c, grid) for c in t.children]
        if name == "+":
            return sum(vals[1:], vals[0])
        if name == "*":
            out = vals[0]
            for v in vals[1:]:
                out = out * v
            return out
        if len(vals) == 1:
            return -vals[0]
        out = vals[0]
        for v in vals[1:]:
            out = out - v
        return out

    def _int_atom_mask(self, t: Term) -> int:
        grid = self._grid()
        lhs, rhs = t.children
        n_int = self.radix ** len(self.int_consts)
        truth = np.broadcast_to(
            COMPARISONS[t.head.text](self._arith(lhs, grid), self._arith(rhs, grid)), (n_int,))
        # each integer point spans a block of every boolean combination
        truth = np.repeat(truth, 1 << len(self.bool_atoms))
        return _bits(truth)

    def mask(self, t: Term) -> int:
        hit = self._memo.get(t.id)
        if hit is not None:
            return hit
        name = t.head.text
        if name == "and":
            m = self.full
            for c in t.children:
                m &= self.mask(c)
        elif name == "or":
            m = 0
            for c in t.children:
                m |= self.mask(c)
        elif name == "not":
            m = self.full ^ self.mask(t.children[0])
        elif name == "true":
            m = self.full
        elif name == "false":
            m = 0
        elif t.id in self._atom_index:
            m = self._bool_atom_mask(self._atom_index[t.id])
        elif _is_int_atom(t):
            m = self._int_atom_mask(t)
        else:
            raise OracleError(f"{t} is outside this assignment space")
        self._memo[t.id] = m
        return m

    def assignment(self, index: int) -> Assignment:
        nb = len(self.bool_atoms)
        booleans = {a: bool((index >> i) & 1) for i, a in enumerate(self.bool_atoms)}
        q = index >> nb
        lo = self.universe.int_range[0]
        integers = {}
        for name in self.int_consts:
            q, r = divmod(q, self.radix)
            integers[name] = lo + r
        return Assignment(booleans, integers)

    def assignments(self) -> Iterator[Assignment]:
        for i in range(self.size):
            yield self.assignment(i)

    def witness(self, m: int) -> Assignment | None:
        """Lowest-indexed assignment in mask ``m``, if any."""
        if not m:
            return None
        return self.assignment((m & -m).bit_length() - 1)


def satisfying_assignment(t: Term, universe: Universe = Universe()) -> Assignment | None:
    space = TruthSpace([t], universe)
    return space.witness(space.mask(t))


def is_unsat(t: Term, universe: Universe = Universe()) -> bool:
    return satisfying_assignment(t, universe) is None


# ------------------------------------------------------------------ generators

PROP_NAMES = ("p", "q", "r", "s", "t", "u", "v", "w", "a", "b")


@dataclass(frozen=True)
class GeneratorParams:
    max_atoms: int = 4
    max_depth: int = 3
    max_arity: int = 3
    weights: tuple = (("and", 3), ("or", 3), ("not", 1), ("atom", 3))
    seed: int = 0
    mode: str = "propositional"         # or "integer"
    int_constants: tuple = ("x", "y", "z")
    literal_range: tuple = (-2, 5)

    def __post_init__(self):
        if self.mode not in ("propositional", "integer"):
            raise ValueError(f"unknown generator mode {self.mode!r}")
        if not 1 <= self.max_atoms <= len(PROP_NAMES):
            raise ValueError(f"max_atoms must be in 1..{len(PROP_NAMES)}")
        if self.max_arity < 1:
            raise ValueError("max_arity must be positive")


def _atom_pool(session: Session, params: GeneratorParams, rng: random.Random) -> list[Term]:
    if params.mode == "propositional":
        return [session.const(n) for n in PROP_NAMES[: params.max_atoms]]
    lo, hi = params.literal_range
    pool: dict[int, Term] = {}
    consts = list(params.int_constants)
    for _ in range(50 * params.max_atoms):
        if len(pool) == params.max_atoms:
            break
        op = rng.choice(sorted(COMPARISONS))
        lhs = session.const(rng.choice(consts))
        if rng.random() < 0.5:
            rhs = session.const(rng.choice(consts))
        else:
            rhs = session.const(str(rng.randint(lo, hi)))
        if rng.random() < 0.2:
            lhs = session.app("+", lhs, session.const(str(rng.randint(1, 2))))
        atom = session.app(op, lhs, rhs)
        pool[atom.id] = atom
    return list(pool.values())


class _Gen:
    def __init__(self, session: Session, params: GeneratorParams, rng: random.Random,
                 pool: list[Term] | None = None):
        self.s = session
        self.p = params
        self.rng = rng
        self.pool = pool if pool is not None else _atom_pool(session, params, rng)
        self.kinds = [k for k, _ in params.weights]
        self.wts = [w for _, w in params.weights]

    def atom(self) -> Term:
        return self.rng.choice(self.pool)

    def formula(self, depth: int) -> Term:
        if depth <= 0:
            return self.atom()
        kind = self.rng.choices(self.kinds, self.wts)[0]
        if kind == "atom":
            return self.atom()
        if kind == "not":
            return self.s.not_(self.formula(depth - 1))
        n = self.rng.randint(2 if self.p.max_arity >= 2 else 1, self.p.max_arity)
        return self.s.intern(kind, [self.formula(depth - 1) for _ in range(n)])

    def literal(self) -> Term:
        a = self.atom()
        return self.s.not_(a) if self.rng.random() < 0.5 else a


def random_formula(params: GeneratorParams, session: Session | None = None) -> Term:
    """Deterministic function of ``params`` (including its seed)."""
    session = session or Session()
    rng = random.Random(params.seed)
    return _Gen(session, params, rng).formula(params.max_depth)


def shuffle_commutative(t: Term, rng: random.Random,
                        reg: CommutativityRegistry = DEFAULT_REGISTRY) -> Term:
    s = t.session
    memo: dict[int, Term] = {}

    def go(node: Term) -> Term:
        if node.id in memo:
            return memo[node.id]
        kids = [go(c) for c in node.children]
        if reg.is_commutative(node.head.text):
            rng.shuffle(kids)
        out = memo[node.id] = s.intern(node.head.text, kids) if kids else node
        return out

    return go(t)


def _formula_positions(t: Term) -> list[Term]:
    """Subterms in formula position: connectives and the atoms under them."""
    out, stack = [], [t]
    while stack:
        n = stack.pop()
        out.append(n)
        if n.head.text in ("and", "or", "not"):
            stack.extend(n.children)
    return out


def _replace_at(t: Term, target: Term, repl: Term) -> Term:
    if t is target:
        return repl
    if t.head.text not in ("and", "or", "not"):
        return t
    return t.session.intern(t.head.text, [_replace_at(c, target, repl) for c in t.children])


def _contradictory_dnf(g: _Gen) -> Term:
    """A disjunction of conjunctions, each holding some atom and its negation."""
    rng, s = g.rng, g.s
    disjuncts = []
    for _ in range(rng.randint(1, 3)):
        a = g.atom()
        lits = [a, s.not_(a)] + [g.literal() for _ in range(rng.randint(0, 2))]
        if rng.random() < 0.3:
            lits.append(g.formula(1))
        rng.shuffle(lits)
        disjuncts.append(s.and_(*lits))
    return disjuncts[0] if len(disjuncts) == 1 else s.or_(*disjuncts)


def random_pair(params: GeneratorParams, session: Session | None = None) -> tuple[Term, Term]:
    """An (old, new) pair where ``new`` is usually an edit of ``old``."""
    session = session or Session()
    rng = random.Random(params.seed)
    g = _Gen(session, params, rng)
    style = rng.random()
    if style < 0.45:
        old = _contradictory_dnf(g)
    else:
        old = g.formula(params.max_depth)
    if params.max_arity < 2:
        return old, g.formula(params.max_depth)

    edit = rng.random()
    if edit < 0.25:
        target = rng.choice(_formula_positions(old))
        new = _replace_at(old, target, g.formula(rng.randint(0, 2)))
    elif edit < 0.45:
        extra = g.formula(rng.randint(0, 2))
        parts = list(old.children) if old.head.text == "or" else [old]
        parts.insert(rng.randint(0, len(parts)), extra)
        new = session.or_(*parts)
    elif edit < 0.6:
        conjuncts = [c for d in flatten([[old]]) for c in d]
        keep = [c for c in conjuncts if rng.random() < 0.6]
        keep.append(g.formula(rng.randint(0, 2)))
        new = session.and_(*keep)
    elif edit < 0.75:
        # factor a shared conjunct out of every disjunct
        common = [g.literal() for _ in range(rng.randint(1, 2))]
        ds = flatten([[old]])
        new = session.and_(*common, session.or_(*(session.and_(*d) for d in ds)))
    elif edit < 0.85:
        new = old
    else:
        new = g.formula(params.max_depth)
    return old, shuffle_commutative(new, rng)


def random_graph(params: GeneratorParams, session: Session | None = None,
                 max_nodes: int = 6) -> DsaGraph:
    """A small random DSA graph; edges only go from lower to higher ids.

    Assertions often restate something assumed upstream, so a fair share of
    the generated graphs have an UNSAT verification condition.
    """
    session = session or Session()
    rng = random.Random(params.seed)
    g = _Gen(session, replace(params, max_depth=min(params.max_depth, 2)), rng)
    graph = DsaGraph()
    k = rng.randint(1, max_nodes)
    assumed: dict[int, list[Term]] = {}
    for i in range(1, k + 1):
        preds = [j for j in range(1, i) if rng.random() < 0.4]
        upstream = [f for j in preds for f in assumed[j]]
        if rng.random() < 0.5:
            graph.add_node(i, ASSUME, g.formula(rng.randint(0, 1)))
            upstream = upstream + flatten([[graph.nodes[i].formula]])[0]
        elif upstream and rng.random() < 0.7:
            graph.add_node(i, ASSERT, rng.choice(upstream))
        else:
            graph.add_node(i, ASSERT, g.formula(rng.randint(0, 1)))
        assumed[i] = upstream
        for j in preds:
            graph.add_edge(j, i)
    return graph


def random_graph_edit(graph: DsaGraph, params: GeneratorParams,
                      session: Session) -> DsaGraph:
    """A copy of ``graph`` after one random edit, still acyclic."""
    rng = random.Random(params.seed + 7919)
    g = _Gen(session, replace(params, max_depth=1), rng)
    new = graph.copy()
    ids = sorted(new.nodes)
    edit = rng.random()
    if edit < 0.3:
        n = max(ids) + 1
        kind = ASSERT if rng.random() < 0.6 else ASSUME
        new.add_node(n, kind, g.formula(rng.randint(0, 1)))
        for j in ids:
            if rng.random() < 0.4:
                new.add_edge(j, n)
    elif edit < 0.5:
        n = rng.choice(ids)
        new.nodes[n] = replace(new.nodes[n], formula=g.formula(rng.randint(0, 1)))
    elif edit < 0.65:
        n = rng.choice(ids)
        node = new.nodes[n]
        new.nodes[n] = replace(node, kind=ASSUME if node.is_assertion else ASSERT)
    elif edit < 0.75 and new.edges:
        new.edges.discard(rng.choice(sorted(new.edges)))
    elif edit < 0.9 and len(ids) > 1:
        a, b = sorted(rng.sample(ids, 2))
        new.add_edge(a, b)
    return new


# ------------------------------------------------------------------ checking

@dataclass
class CheckReport:
    verdict: str                     # pass, fail or vacuous
    seed: int | None = None
    reason: str = ""
    counterexample: Assignment | None = None
    pruned: Term | None = None

    @property
    def ok(self) -> bool:
        return self.verdict != "fail"


def format_report(r: CheckReport) -> str:
    line = f"seed={r.seed if r.seed is not None else 0} verdict={r.verdict}"
    if r.counterexample is not None:
        line += f" counterexample={r.counterexample}"
    return line


def check_prune_correct(p1: Term, p2: Term, universe: Universe = Universe(), *,
                        seed: int | None = None, match: bool = True,
                        registry: CommutativityRegistry = DEFAULT_REGISTRY) -> CheckReport:
    """Check equisatisfiability of pruning, plus the pointwise invariants.

    ``p1`` must be UNSAT; otherwise the pair is reported as vacuous.
    """
    if not is_unsat(p1, universe):
        return CheckReport("vacuous", seed, "old formula is satisfiable")

    pruned = prune(p1, p2, registry=registry, match=match)
    space = TruthSpace([p1, p2, pruned], universe)
    m1, m2, mp = space.mask(p1), space.mask(p2), space.mask(pruned)
    if (m2 == 0) != (mp == 0):
        which = "pruned" if mp else "new"
        return CheckReport("fail", seed, f"Unsat(new) != Unsat(pruned); {which} is satisfiable",
                           space.witness(m2 | mp), pruned)

    n1, n2 = normalize(p1, registry), normalize(p2, registry)
    rec = prune_rec(flatten([[n1]]), n2)
    simple = prune_simple(p1, p2)
    space = TruthSpace([p1, p2, rec, simple], universe)
    m1, m2 = space.mask(p1), space.mask(p2)
    outside = space.full ^ m1
    mr, ms = space.mask(rec), space.mask(simple)
    checks = [
        ("prune_rec differs from new outside old", outside & (mr ^ m2)),
        ("PruneInvA violated", outside & m2 & ~ms),
        ("PruneInvB violated", outside & ms & ~m2),
    ]
    for reason, bad in checks:
        bad &= space.full
        if bad:
            return CheckReport("fail", seed, reason, space.witness(bad), pruned)
    return CheckReport("pass", seed, pruned=pruned)


def run_batch(seed: int, count: int, params: GeneratorParams = GeneratorParams(),
              universe: Universe = Universe()) -> list[CheckReport]:
    """Check ``count`` generated pairs with seeds ``seed, seed+1, ...``."""
    reports = []
    for k in range(count):
        p = replace(params, seed=seed + k)
        session = Session()
        old, new = random_pair(p, session)
        reports.append(check_prune_correct(old, new, universe, seed=seed + k))
    return reports
