"""Hash-consed first-order terms.

Every term lives in a :class:`Session`.  The session interns terms so that
two structurally equal terms are the same Python object; equality of terms
is therefore ``is``.  Terms from different sessions must never be mixed.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

__all__ = [
    "SymbolKind", "Symbol", "Term", "Session", "CommutativityRegistry",
    "DEFAULT_REGISTRY", "Substitution", "ParseError", "SubstitutionError",
    "intern", "parse_term", "print_term", "compare_terms", "normalize",
    "apply_substitution", "simplify", "collect_constants", "postorder",
    "node_count", "is_integer_literal", "is_interpreted_name",
]

CONNECTIVES = frozenset({"and", "or", "not"})
QUANTIFIERS = frozenset({"forall", "exists"})
BOOLEAN_CONSTANTS = frozenset({"true", "false"})
RESERVED = CONNECTIVES | QUANTIFIERS | BOOLEAN_CONSTANTS

_INTEGER_RE = re.compile(r"-?[0-9]+\Z")
_SYMBOL_RE = re.compile(r"(?:[A-Za-z_][A-Za-z0-9_.$]*|>=|<=|>|<|=|\+|-|\*)\Z")


class SymbolKind(enum.Enum):
    CONNECTIVE = "logical-connective"
    QUANTIFIER = "quantifier"
    INTERPRETED = "interpreted-constant"
    UNINTERPRETED = "uninterpreted-constant"
    FUNCTION = "function"


def is_integer_literal(text: str) -> bool:
    return _INTEGER_RE.match(text) is not None


def is_interpreted_name(text: str) -> bool:
    return text in BOOLEAN_CONSTANTS or is_integer_literal(text)


def _classify(text: str, arity: int) -> SymbolKind:
    if text in CONNECTIVES:
        return SymbolKind.CONNECTIVE
    if text in QUANTIFIERS:
        return SymbolKind.QUANTIFIER
    if is_interpreted_name(text):
        return SymbolKind.INTERPRETED
    return SymbolKind.UNINTERPRETED if arity == 0 else SymbolKind.FUNCTION


@dataclass(frozen=True)
class Symbol:
    text: str
    kind: SymbolKind

    def __str__(self) -> str:
        return self.text


class ParseError(ValueError):
    """Malformed formula text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class SubstitutionError(ValueError):
    pass


class Term:
    """An interned term node.  Build terms through a :class:`Session`."""

    __slots__ = ("head", "children", "id", "session", "_key")

    def __init__(self, head: Symbol, children: tuple, ident: int, session: "Session"):
        self.head = head
        self.children = children
        self.id = ident
        self.session = session
        self._key = None

    @property
    def name(self) -> str:
        return self.head.text

    @property
    def kind(self) -> SymbolKind:
        return self.head.kind

    def is_constant(self) -> bool:
        return self.head.kind is SymbolKind.UNINTERPRETED

    def sort_key(self) -> tuple:
        """Key whose tuple ordering is the :func:`compare_terms` order."""
        if self._key is None:
            stack = [self]
            while stack:
                s = stack[-1]
                pending = [c for c in s.children if c._key is None]
                if pending:
                    stack.extend(pending)
                else:
                    stack.pop()
                    if s._key is None:
                        s._key = (s.head.text, tuple(c._key for c in s.children))
        return self._key

    def __repr__(self) -> str:
        return f"Term({print_term(self)})"

    def __str__(self) -> str:
        return print_term(self)


class Session:
    """Owns the intern table and per-session caches.

    A session is single-threaded; distinct sessions are independent.
    """

    def __init__(self) -> None:
        self._table: dict[tuple, Term] = {}
        self._symbols: dict[tuple[str, int], Symbol] = {}
        self._normalized: dict[tuple[frozenset, int], Term] = {}
        self.true = self.intern("true")
        self.false = self.intern("false")

    def __len__(self) -> int:
        return len(self._table)

    def symbol(self, text: str, arity: int = 0) -> Symbol:
        key = (text, arity > 0)
        sym = self._symbols.get(key)
        if sym is None:
            sym = self._symbols[key] = Symbol(text, _classify(text, arity))
        return sym

    def intern(self, head: "Symbol | str", children: Iterable[Term] = ()) -> Term:
        text = head.text if isinstance(head, Symbol) else head
        children = tuple(children)
        for c in children:
            if c.session is not self:
                raise ValueError(f"child {c!r} belongs to another session")
        key = (text, tuple(c.id for c in children))
        t = self._table.get(key)
        if t is not None:
            return t
        _check_arity(text, children)
        t = Term(self.symbol(text, len(children)), children, len(self._table), self)
        self._table[key] = t
        return t

    # convenience constructors

    def const(self, name: str) -> Term:
        return self.intern(name)

    def app(self, name: str, *args: Term) -> Term:
        return self.intern(name, args)

    def and_(self, *args: Term) -> Term:
        return self.intern("and", args)

    def or_(self, *args: Term) -> Term:
        return self.intern("or", args)

    def not_(self, arg: Term) -> Term:
        return self.intern("not", (arg,))

    def parse(self, text: str) -> Term:
        return parse_term(text, self)


def intern(session: Session, head: "Symbol | str", children: Iterable[Term] = ()) -> Term:
    return session.intern(head, children)


def _check_arity(text: str, children: tuple) -> None:
    n = len(children)
    if text == "not" and n != 1:
        raise ValueError(f"'not' takes exactly 1 argument, got {n}")
    if n and is_interpreted_name(text):
        raise ValueError(f"interpreted constant {text!r} cannot take arguments")
    if text in QUANTIFIERS:
        if n < 2:
            raise ValueError(f"{text!r} needs bound variables and a body")
        for v in children[:-1]:
            if not v.is_constant():
                raise ValueError(f"{text!r} binds non-constant {v}")


def postorder(t: Term) -> Iterator[Term]:
    """Yield each distinct subterm of ``t`` once, children before parents."""
    seen: set[int] = set()
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node.id in seen:
            continue
        if expanded or not node.children:
            seen.add(node.id)
            yield node
        else:
            stack.append((node, True))
            for c in reversed(node.children):
                if c.id not in seen:
                    stack.append((c, False))


def _rebuild(t: Term, fn: Callable[[Term, tuple], Term], memo: dict | None = None) -> Term:
    """Bottom-up rewrite: ``fn(node, new_children)`` gives the replacement."""
    memo = {} if memo is None else memo
    for s in postorder(t):
        if s.id not in memo:
            memo[s.id] = fn(s, tuple(memo[c.id] for c in s.children))
    return memo[t.id]


def node_count(t: Term) -> int:
    """Size of ``t`` as a tree (shared subterms counted per occurrence)."""
    sizes: dict[int, int] = {}
    for s in postorder(t):
        sizes[s.id] = 1 + sum(sizes[c.id] for c in s.children)
    return sizes[t.id]


# ---------------------------------------------------------------- text format

_TOKEN_RE = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _tokens(text: str) -> Iterator[tuple[str, int, int]]:
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        tok = m.group()
        if tok[0].isspace() or tok[0] == ";":
            nl = tok.count("\n")
            if nl:
                line += nl
                line_start = m.start() + tok.rfind("\n") + 1
            continue
        yield tok, line, m.start() - line_start + 1


def parse_terms(text: str, session: Session) -> list[Term]:
    """Parse every top-level term in ``text``."""
    out: list[Term] = []
    # each frame: [head text or None, children, line, col]
    stack: list[list] = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append([None, [], line, col])
            continue
        if tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            head, children, hl, hc = stack.pop()
            if head is None:
                raise ParseError("empty application '()'", hl, hc)
            try:
                t = session.intern(head, children)
            except ValueError as e:
                raise ParseError(str(e), hl, hc) from None
        else:
            if is_integer_literal(tok):
                tok = str(int(tok))
            elif not _SYMBOL_RE.match(tok):
                raise ParseError(f"invalid token {tok!r}", line, col)
            if stack and stack[-1][0] is None:
                if is_integer_literal(tok):
                    raise ParseError(f"integer {tok} used as a function symbol", line, col)
                stack[-1][0] = tok
                continue
            if tok in CONNECTIVES or tok in QUANTIFIERS:
                raise ParseError(f"{tok!r} must be applied inside parentheses", line, col)
            t = session.intern(tok)
        if stack:
            stack[-1][1].append(t)
        else:
            out.append(t)
    if stack:
        _, _, line, col = stack[-1]
        raise ParseError("unclosed '('", line, col)
    return out


def parse_term(text: str, session: Session) -> Term:
    terms = parse_terms(text, session)
    if len(terms) != 1:
        raise ParseError(f"expected exactly one term, found {len(terms)}", 1, 1)
    return terms[0]


def print_term(t: Term) -> str:
    parts: list[str] = []
    stack: list = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif not item.children and item.kind is not SymbolKind.CONNECTIVE:
            parts.append(item.head.text)
        else:
            parts.append("(" + item.head.text)
            stack.append(")")
            for c in reversed(item.children):
                stack.append(c)
                stack.append(" ")
    return "".join(parts)


# ---------------------------------------------------------- order / normalize

def compare_terms(a: Term, b: Term) -> int:
    """Three-way comparison: head text first, then children lexicographically."""
    if a is b:
        return 0
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class CommutativityRegistry:
    commutative: frozenset = field(default_factory=lambda: frozenset({"and", "or"}))

    def is_commutative(self, name: str) -> bool:
        return name in self.commutative

    def extended(self, *names: str) -> "CommutativityRegistry":
        return CommutativityRegistry(self.commutative | frozenset(names))


DEFAULT_REGISTRY = CommutativityRegistry()


def normalize(t: Term, reg: CommutativityRegistry = DEFAULT_REGISTRY) -> Term:
    """Recursively sort the arguments of commutative symbols."""
    session = t.session
    cache = session._normalized
    comm = reg.commutative
    hit = cache.get((comm, t.id))
    if hit is not None:
        return hit

    def step(node: Term, kids: tuple) -> Term:
        hit = cache.get((comm, node.id))
        if hit is not None:
            return hit
        if node.head.text in comm:
            kids = tuple(sorted(kids, key=Term.sort_key))
        out = session.intern(node.head.text, kids)
        cache[(comm, node.id)] = out
        cache[(comm, out.id)] = out
        return out

    return _rebuild(t, step)


# ---------------------------------------------------------------- substitution

@dataclass
class Substitution:
    """Injective renaming of uninterpreted constants, keyed by name."""

    mapping: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        for old, new in self.mapping.items():
            for name in (old, new):
                if name in RESERVED or is_interpreted_name(name):
                    raise SubstitutionError(
                        f"cannot rename interpreted or reserved symbol {name!r}")
        if len(set(self.mapping.values())) != len(self.mapping):
            raise SubstitutionError("substitution is not injective")

    def __bool__(self) -> bool:
        return bool(self.mapping)

    def __len__(self) -> int:
        return len(self.mapping)

    def __getitem__(self, name: str) -> str:
        return self.mapping.get(name, name)

    def items(self):
        return sorted(self.mapping.items())

    def to_text(self) -> str:
        return "".join(f"{o} {n}\n" for o, n in self.items())

    @classmethod
    def from_text(cls, text: str) -> "Substitution":
        mapping = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split(";", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise SubstitutionError(f"line {lineno}: expected 'old new'")
            mapping[parts[0]] = parts[1]
        return cls(mapping)


def apply_substitution(t: Term, s: "Substitution | Mapping[str, str]") -> Term:
    if not isinstance(s, Substitution):
        s = Substitution(dict(s))
    if not s:
        return t
    session = t.session
    m = s.mapping

    def step(node: Term, kids: tuple) -> Term:
        if not kids:
            if node.is_constant() and node.head.text in m:
                return session.intern(m[node.head.text])
            return node
        return session.intern(node.head.text, kids)

    return _rebuild(t, step)


# ---------------------------------------------------------------- simplify

def simplify(t: Term) -> Term:
    """Fold ``true``/``false`` through and/or/not until nothing changes."""
    session = t.session
    true, false = session.true, session.false

    def step(node: Term, kids: tuple) -> Term:
        name = node.head.text
        if name == "and" or name == "or":
            unit, zero = (true, false) if name == "and" else (false, true)
            if any(k is zero for k in kids):
                return zero
            kids = tuple(k for k in kids if k is not unit)
            if not kids:
                return unit
            if len(kids) == 1:
                return kids[0]
        elif name == "not":
            if kids[0] is true:
                return false
            if kids[0] is false:
                return true
        if not kids:
            return node
        return session.intern(name, kids)

    return _rebuild(t, step)


def collect_constants(t: Term) -> frozenset:
    """Names of the uninterpreted constants occurring in ``t``."""
    return frozenset(s.head.text for s in postorder(t) if s.is_constant())
