"""First-order formulas over the two supported signatures, with a parser and
a round-tripping printer.

Concrete syntax (ASCII)::

    atom       :=  TERM '<' TERM  |  TERM '=' TERM
    TERM       :=  variable  |  constant 'c0', 'c1', ...
    formula    :=  'true' | 'false' | atom | '~' formula
                |  formula '&' formula   | formula '|' formula
                |  formula '->' formula  | formula '<->' formula
                |  'exists' v '.' formula | 'forall' v '.' formula
                |  '(' formula ')'

Precedence, tightest first: ~, &, |, ->, <->.  The conjunction and
disjunction operators associate to the left, the arrows to the right, and a
quantifier body extends as far to the right as possible.  Variable names are
identifiers and may carry trailing prime marks (``u'``, ``u''``), which is
also the scheme used when bound variables must be renamed.  Under a dense
linear order signature both relations are available and there are no
constants; under ``FiniteEnum(n)`` only ``=`` is available together with the
constants ``c0 .. c{n-1}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping


class ParseError(ValueError):
    """Raised on bad formula text; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    """Either the dense-linear-order signature or FiniteEnum(n), n >= 2."""

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind == "DLO":
            if self.n is not None:
                raise ValueError("DLO signature takes no size")
        elif self.kind == "FiniteEnum":
            if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
                raise ValueError("FiniteEnum needs an integer size n >= 2")
        else:
            raise ValueError(f"unknown signature kind {self.kind!r}")

    @property
    def is_dlo(self) -> bool:
        return self.kind == "DLO"

    def __str__(self) -> str:
        return "DLO" if self.is_dlo else f"FiniteEnum({self.n})"


DLO = Signature("DLO")


def finite_enum(n: int) -> Signature:
    return Signature("FiniteEnum", n)


# ---------------------------------------------------------------------------
# terms and formula nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    index: int

    def __str__(self) -> str:
        return f"c{self.index}"


Term = Var | Const


class Formula:
    """Base class for all formula nodes (frozen dataclasses below)."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    lhs: Term
    rel: str  # "<" or "="
    rhs: Term

    def __post_init__(self):
        if self.rel not in ("<", "="):
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Truth(Formula):
    pass


@dataclass(frozen=True)
class Falsity(Formula):
    pass


TRUE = Truth()
FALSE = Falsity()

_BINARY = (And, Or, Implies, Iff)
_QUANT = (Exists, Forall)


# ---------------------------------------------------------------------------
# structural helpers
# ---------------------------------------------------------------------------

def free_vars(f: Formula) -> tuple[str, ...]:
    """Free variable names of f, in first-occurrence order."""
    out: list[str] = []
    seen: set[str] = set()

    def walk(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, Atom):
            for t in (g.lhs, g.rhs):
                if isinstance(t, Var) and t.name not in bound and t.name not in seen:
                    seen.add(t.name)
                    out.append(t.name)
        elif isinstance(g, Not):
            walk(g.body, bound)
        elif isinstance(g, _BINARY):
            walk(g.lhs, bound)
            walk(g.rhs, bound)
        elif isinstance(g, _QUANT):
            walk(g.body, bound | {g.var})

    walk(f, frozenset())
    return tuple(out)


def subformulas(f: Formula) -> Iterator[Formula]:
    """All nodes of f, preorder."""
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, _BINARY):
        yield from subformulas(f.lhs)
        yield from subformulas(f.rhs)
    elif isinstance(f, _QUANT):
        yield from subformulas(f.body)


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, _QUANT) for g in subformulas(f))


def check_signature(f: Formula, sig: Signature) -> None:
    """Reject formulas using symbols outside sig (raises ValueError)."""
    for g in subformulas(f):
        if not isinstance(g, Atom):
            continue
        if g.rel == "<" and not sig.is_dlo:
            raise ValueError("'<' not in FiniteEnum signature")
        for t in (g.lhs, g.rhs):
            if isinstance(t, Const):
                if sig.is_dlo:
                    raise ValueError("constant symbols not in DLO signature")
                assert sig.n is not None
                if not 0 <= t.index < sig.n:
                    raise ValueError(
                        f"constant c{t.index} not in signature (n = {sig.n})"
                    )


def _term_vars(t: Term) -> set[str]:
    return {t.name} if isinstance(t, Var) else set()


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneously replace free variables by terms, capture-avoiding.

    Bound variables that would capture a substituted name are renamed with
    the prime-suffix scheme (u, u', u'', ...).
    """
    for k, v in mapping.items():
        if not isinstance(v, (Var, Const)):
            raise TypeError(f"substitution for {k!r} must be a term, got {v!r}")
    return _subst(f, dict(mapping))


def _subst(g: Formula, m: dict[str, Term]) -> Formula:
    if not m:
        return g
    if isinstance(g, Atom):
        lhs = m.get(g.lhs.name, g.lhs) if isinstance(g.lhs, Var) else g.lhs
        rhs = m.get(g.rhs.name, g.rhs) if isinstance(g.rhs, Var) else g.rhs
        if lhs is g.lhs and rhs is g.rhs:
            return g
        return Atom(lhs, g.rel, rhs)
    if isinstance(g, Not):
        return Not(_subst(g.body, m))
    if isinstance(g, _BINARY):
        return type(g)(_subst(g.lhs, m), _subst(g.rhs, m))
    if isinstance(g, _QUANT):
        body_free = set(free_vars(g.body))
        m2 = {k: v for k, v in m.items() if k != g.var and k in body_free}
        if not m2:
            return g
        image: set[str] = set()
        for t in m2.values():
            image |= _term_vars(t)
        if g.var in image:
            avoid = body_free | image | set(m2)
            fresh = g.var
            while fresh in avoid:
                fresh += "'"
            renamed = _subst(g.body, {g.var: Var(fresh)})
            return type(g)(fresh, _subst(renamed, m2))
        return type(g)(g.var, _subst(g.body, m2))
    return g


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

# class -> (operator text, own precedence, precedence required of the left
# and right children); see the module docstring for the grammar.
_BIN_INFO = {
    And: (" & ", 4, 4, 5),
    Or: (" | ", 3, 3, 4),
    Implies: (" -> ", 2, 3, 2),
    Iff: (" <-> ", 1, 2, 1),
}


def to_text(f: Formula) -> str:
    """Render f so that parse(to_text(f)) is structurally equal to f."""
    return _fmt(f, 0, True)


def _fmt(f: Formula, need: int, rightmost: bool) -> str:
    if isinstance(f, Truth):
        return "true"
    if isinstance(f, Falsity):
        return "false"
    if isinstance(f, Atom):
        return f"{f.lhs} {f.rel} {f.rhs}"
    if isinstance(f, _QUANT):
        kw = "exists" if isinstance(f, Exists) else "forall"
        body = _fmt(f.body, 0, True)
        text = f"{kw} {f.var}. {body}"
        # an unparenthesized quantifier swallows everything to its right,
        # so it may stand bare only in rightmost position
        return text if rightmost else f"({text})"
    if isinstance(f, Not):
        return "~" + _fmt(f.body, 5, rightmost)
    op, prec, lneed, rneed = _BIN_INFO[type(f)]
    paren = prec < need
    right_rm = True if paren else rightmost
    text = _fmt(f.lhs, lneed, False) + op + _fmt(f.rhs, rneed, right_rm)
    return f"({text})" if paren else text


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""(?P<lparen>\()
      | (?P<rparen>\))
      | (?P<iff><->)
      | (?P<implies>->)
      | (?P<lt><)
      | (?P<eq>=)
      | (?P<neg>~)
      | (?P<conj>&)
      | (?P<disj>\|)
      | (?P<dot>\.)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"exists", "forall", "true", "false"}
_CONST_RE = re.compile(r"c([0-9]+)\Z")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        assert kind is not None
        word = m.group()
        if kind == "ident" and word in _KEYWORDS:
            kind = word
        tokens.append((kind, word, i))
        i = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], sig: Signature):
        self.tokens = tokens
        self.sig = sig
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        return tok

    # grammar, loosest binding first

    def formula(self) -> Formula:
        left = self.implies()
        if self.peek()[0] == "iff":
            self.next()
            return Iff(left, self.formula())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "implies":
            self.next()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "disj":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "conj":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, word, pos = self.peek()
        if kind == "neg":
            self.next()
            return Not(self.unary())
        if kind == "lparen":
            self.next()
            f = self.formula()
            self.expect("rparen", "')'")
            return f
        if kind == "true":
            self.next()
            return TRUE
        if kind == "false":
            self.next()
            return FALSE
        if kind in ("exists", "forall"):
            self.next()
            vkind, vword, vpos = self.next()
            if vkind != "ident":
                raise ParseError("expected a variable after quantifier", vpos)
            if _CONST_RE.match(vword):
                raise ParseError(f"cannot quantify over constant {vword!r}", vpos)
            self.expect("dot", "'.' after quantified variable")
            body = self.formula()
            return Exists(vword, body) if kind == "exists" else Forall(vword, body)
        if kind == "ident":
            return self.atom()
        raise ParseError("expected a formula", pos)

    def atom(self) -> Formula:
        lhs = self.term()
        kind, _, pos = self.next()
        if kind == "lt":
            if not self.sig.is_dlo:
                raise ParseError("'<' not in FiniteEnum signature", pos)
            rel = "<"
        elif kind == "eq":
            rel = "="
        else:
            raise ParseError("expected '<' or '=' in atom", pos)
        rhs = self.term()
        return Atom(lhs, rel, rhs)

    def term(self) -> Term:
        kind, word, pos = self.next()
        if kind != "ident":
            raise ParseError("expected a term", pos)
        m = _CONST_RE.match(word)
        if m:
            if self.sig.is_dlo:
                raise ParseError("constant symbols not in DLO signature", pos)
            index = int(m.group(1))
            assert self.sig.n is not None
            if index >= self.sig.n:
                raise ParseError(
                    f"constant {word} not in signature (n = {self.sig.n})", pos
                )
            return Const(index)
        return Var(word)


def parse(text: str, sig: Signature = DLO) -> Formula:
    """Parse formula text against sig; raises ParseError with a position."""
    parser = _Parser(_tokenize(text), sig)
    f = parser.formula()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return f
