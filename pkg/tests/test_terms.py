import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from vcprune import (
    CommutativityRegistry, ParseError, Session, Substitution, SubstitutionError,
    SymbolKind, apply_substitution, collect_constants, compare_terms, normalize,
    parse_term, print_term, simplify,
)
from vcprune.oracle import GeneratorParams, random_formula, shuffle_commutative
from vcprune.terms import node_count, parse_terms


def truth_table(t, atoms):
    """Reference semantics, written independently of the oracle module."""
    def ev(node, val):
        name = node.name
        if name == "and":
            return all(ev(c, val) for c in node.children)
        if name == "or":
            return any(ev(c, val) for c in node.children)
        if name == "not":
            return not ev(node.children[0], val)
        if name in ("true", "false"):
            return name == "true"
        return val[node]
    return [ev(t, dict(zip(atoms, bits))) for bits in product((False, True), repeat=len(atoms))]


def atoms_of(*terms):
    out = {}
    for t in terms:
        stack = [t]
        while stack:
            n = stack.pop()
            if n.name in ("and", "or", "not"):
                stack.extend(n.children)
            elif n.name not in ("true", "false"):
                out[n.id] = n
    return sorted(out.values(), key=print_term)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def gen(seed, session, **kw):
    kw.setdefault("max_atoms", 5)
    kw.setdefault("max_depth", 4)
    return random_formula(GeneratorParams(seed=seed, **kw), session)


# ---------------------------------------------------------------- intern

def test_intern_idempotent(session):
    assert session.intern("x") is session.intern("x")


def test_intern_is_structural_only(session):
    a, b = session.const("a"), session.const("b")
    assert session.and_(a, b) is not session.and_(b, a)
    assert session.app("f", a) is not session.app("g", a)


def test_intern_rejects_foreign_children():
    a = Session().const("a")
    with pytest.raises(ValueError):
        Session().app("f", a)


def test_symbol_kinds(session):
    t = session.parse("(and (> x 2) (f x) true)")
    gt, fx, tr = t.children
    assert t.kind is SymbolKind.CONNECTIVE
    assert gt.children[0].kind is SymbolKind.UNINTERPRETED
    assert gt.children[1].kind is SymbolKind.INTERPRETED
    assert fx.kind is SymbolKind.FUNCTION
    assert tr.kind is SymbolKind.INTERPRETED
    assert session.parse("(forall v (> v 0))").kind is SymbolKind.QUANTIFIER


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_handle_equality_is_structural_equality(seed):
    s = Session()
    t = gen(seed, s)
    # rebuilding bottom-up through a fresh table hits the same handles
    rebuilt = {}
    for node in _postorder_tree(t):
        rebuilt[node.id] = s.intern(node.name, [rebuilt[c.id] for c in node.children])
    assert rebuilt[t.id] is t
    subterms = {n.id: n for n in _postorder_tree(t)}.values()
    for x in subterms:
        for y in subterms:
            assert (x is y) == (print_term(x) == print_term(y))


def _postorder_tree(t):
    out = []
    def go(n):
        for c in n.children:
            go(c)
        out.append(n)
    go(t)
    return out


# ---------------------------------------------------------------- parse / print

def test_parse_basic(session):
    p, q = session.const("p"), session.const("q")
    assert parse_term("(and p q)", session) is session.and_(p, q)
    gt = parse_term("(> x 2)", session)
    assert gt.name == ">" and gt.children[1].kind is SymbolKind.INTERPRETED
    assert parse_term("(and p)", session) is session.and_(p)


def test_parse_comments_and_whitespace(session):
    t = parse_term("; header\n(or\n  p ; first\n  (not q))\n", session)
    assert print_term(t) == "(or p (not q))"


def test_parse_errors_carry_location(session):
    with pytest.raises(ParseError) as e:
        parse_term("(and p\n  (not p q))", session)
    assert (e.value.line, e.value.column) == (2, 3)
    with pytest.raises(ParseError) as e:
        parse_term("(and p q", session)
    assert e.value.line == 1
    with pytest.raises(ParseError):
        parse_term("(and p q))", session)
    with pytest.raises(ParseError):
        parse_term("(f #bad)", session)
    with pytest.raises(ParseError):
        parse_term("(5 x)", session)
    with pytest.raises(ParseError):
        parse_term("p q", session)
    with pytest.raises(ParseError):
        parse_term("(not)", session)


def test_print_examples(session):
    assert print_term(session.false) == "false"
    assert print_term(session.and_(session.const("p"), session.const("q"))) == "(and p q)"
    assert print_term(session.and_()) == "(and)"
    text = "(or (and (> x 2) (not (f x y))) (= (+ x 1) y))"
    assert print_term(parse_term(text, session)) == text


def test_parse_many_terms(session):
    assert [print_term(t) for t in parse_terms("p (not p) 3", session)] == ["p", "(not p)", "3"]


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_round_trip(seed):
    s = Session()
    for mode in ("propositional", "integer"):
        t = gen(seed, s, mode=mode)
        assert parse_term(print_term(t), s) is t


def test_deep_terms_do_not_recurse(session):
    t = session.const("p")
    for _ in range(5000):
        t = session.and_(session.const("q"), t)
    assert parse_term(print_term(t), session) is t
    assert normalize(t) is not None
    assert node_count(simplify(t)) == 10001


# ---------------------------------------------------------------- compare

def test_compare_examples(session):
    p = session.const("p")
    a = session.const("a")
    assert compare_terms(p, p) == 0
    assert compare_terms(a, session.and_(p)) == -1
    f_a = session.app("f", a)
    f_b = session.app("f", session.const("b"))
    assert compare_terms(f_a, f_b) == -1
    assert compare_terms(f_b, f_a) == 1


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_compare_is_total_order(seed):
    s = Session()
    terms = [gen(seed + k, s, max_depth=2) for k in range(6)]
    for x in terms:
        for y in terms:
            assert compare_terms(x, y) == -compare_terms(y, x)
            assert (compare_terms(x, y) == 0) == (x is y)
            for z in terms:
                if compare_terms(x, y) <= 0 and compare_terms(y, z) <= 0:
                    assert compare_terms(x, z) <= 0


# ---------------------------------------------------------------- normalize

def test_normalize_examples(session):
    P = lambda text: parse_term(text, session)
    assert normalize(P("(and q p)")) is P("(and p q)")
    assert normalize(P("(f b a)")) is P("(f b a)")
    assert normalize(P("(or (and c b) a)")) is P("(or a (and b c))")


def test_normalize_registry_extension(session):
    t = parse_term("(= y x)", session)
    assert normalize(t) is t
    reg = CommutativityRegistry().extended("=")
    assert print_term(normalize(t, reg)) == "(= x y)"


def test_normalize_sorts_deep_children(session):
    # the sort must see already-normalized children, or deep terms stay unsorted
    t = parse_term("(or (and b (or z y)) (and b (or y x)))", session)
    n = normalize(t)
    assert print_term(n) == "(or (and b (or x y)) (and b (or y z)))"
    assert normalize(n) is n


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_normalize_idempotent_and_shuffle_invariant(seed):
    s = Session()
    t = gen(seed, s)
    n = normalize(t)
    assert normalize(n) is n
    shuffled = shuffle_commutative(t, random.Random(seed))
    assert normalize(shuffled) is n


@given(seeds)
@settings(max_examples=300, deadline=None)
def test_normalize_and_simplify_preserve_truth(seed):
    s = Session()
    t = gen(seed, s, max_atoms=8)
    rng = random.Random(seed)
    # sprinkle constants in so simplify has work to do
    if rng.random() < 0.5:
        t = s.or_(s.false, s.and_(t, s.true, s.not_(s.false)))
    atoms = atoms_of(t)
    ref = truth_table(t, atoms)
    assert truth_table(normalize(t), atoms) == ref
    assert truth_table(simplify(t), atoms) == ref


# ---------------------------------------------------------------- substitution

def test_substitution_examples(session):
    t = parse_term("(> x 2)", session)
    assert apply_substitution(t, Substitution()) is t
    assert apply_substitution(t, {"x": "y"}) is parse_term("(> y 2)", session)
    with pytest.raises(SubstitutionError):
        apply_substitution(t, {"x": "1"})
    with pytest.raises(SubstitutionError):
        Substitution({"true": "x"})
    with pytest.raises(SubstitutionError):
        Substitution({"x": "z", "y": "z"})


def test_substitution_is_simultaneous_and_skips_functions(session):
    t = parse_term("(and (f x y) (g f))", session)
    out = apply_substitution(t, {"x": "y", "y": "x", "f": "h"})
    # f the function is untouched; f the constant is renamed
    assert print_term(out) == "(and (f y x) (g h))"


def test_substitution_text_format():
    s = Substitution({"b": "c", "a": "z"})
    assert s.to_text() == "a z\nb c\n"
    assert Substitution.from_text(s.to_text()) == s
    with pytest.raises(SubstitutionError):
        Substitution.from_text("a b c\n")


# ---------------------------------------------------------------- simplify

def test_simplify_examples(session):
    P = lambda text: parse_term(text, session)
    assert simplify(P("(or false x)")) is P("x")
    assert simplify(session.and_()) is session.true
    assert simplify(session.or_()) is session.false
    assert simplify(P("(or false (and f1 f2 (not f3)))")) is P("(and f1 f2 (not f3))")
    assert simplify(P("(and p (or q true))")) is P("p")
    assert simplify(P("(or p (and q false))")) is P("p")
    assert simplify(P("(not (and true true))")) is session.false
    assert simplify(P("(not (or))")) is session.true
    assert simplify(P("(f (and) (or x))")) is P("(f true x)")


def test_simplify_reaches_fixpoint(session):
    t = parse_term("(and (or false (and true)) (or (not (not false)) p))", session)
    out = simplify(t)
    assert simplify(out) is out
    assert out is session.const("p")


# ---------------------------------------------------------------- constants

def test_collect_constants(session):
    P = lambda text: parse_term(text, session)
    assert collect_constants(P("(> x 2)")) == {"x"}
    assert collect_constants(P("(and p (f p q))")) == {"p", "q"}
    assert collect_constants(session.true) == frozenset()
    assert collect_constants(P("(forall v (> v w))")) == {"v", "w"}
