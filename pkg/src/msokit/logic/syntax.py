"""Text syntax for formulas.

    formula := 'true' | 'false' | term '=' term | term '<=' term | term '<' term
             | 'at' '(' term ')' | 'P_' SYM '(' term ')' | VAR '(' term ')'
             | '!' formula | formula '&' formula | formula '|' formula
             | formula '->' formula | formula '<->' formula
             | 'ex' VAR '.' formula | 'all' VAR '.' formula | '(' formula ')'
    term    := VAR | 'empty'

Binding strength, tightest first: ``!``, ``&``, ``|``, ``->``, ``<->``.
``&``, ``|`` and ``<->`` associate to the left, ``->`` to the right, and a
quantifier body extends as far right as possible. ``X(x)`` is sugar for
``x <= X``.
"""

from __future__ import annotations

import re
from typing import Optional

from ..errors import InputError
from ..words import Alphabet
from .ast import (
    BOTTOM, FALSE, TRUE, And, At, Before, Bottom, Const, Eq, Exists, Forall, Formula, Iff,
    Implies, IsP, Mem, Not, Or, Sub, Var,
)

KEYWORDS = {"true", "false", "ex", "all", "at", "empty"}

_TOKEN = re.compile(r"\s*(?:(<->|->|<=|[()<=.!&|])|([A-Za-z_][A-Za-z0-9_']*))")


class ParseError(InputError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text[:pos]}‸{text[pos:]}")
        self.pos = pos


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Optional[Alphabet]):
        self.text = text
        self.alphabet = alphabet
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0) -> str:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def next(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            raise ParseError(f"expected {tok!r}, found {self.peek()!r}", self.pos(), self.text)
        self.next()

    def error(self, message: str):
        raise ParseError(message, self.pos(), self.text)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() != "<eof>":
            self.error(f"unexpected {self.peek()!r}")
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek() == "<->":
            self.next()
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disjunction()
        if self.peek() == "->":
            self.next()
            return Implies(f, self.implies())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.next()
            return Not(self.unary())
        if tok in ("ex", "all"):
            self.next()
            var = self.variable()
            self.expect(".")
            body = self.iff()
            return Exists(var, body) if tok == "ex" else Forall(var, body)
        if tok == "(":
            self.next()
            f = self.iff()
            self.expect(")")
            return f
        return self.atomic()

    def variable(self) -> Var:
        tok = self.peek()
        if not _is_ident(tok) or tok in KEYWORDS or tok.startswith("P_"):
            self.error(f"expected a variable, found {tok!r}")
        self.next()
        return Var(tok)

    def term(self):
        if self.peek() == "empty":
            self.next()
            return BOTTOM
        return self.variable()

    def atomic(self) -> Formula:
        tok = self.peek()
        if tok == "true":
            self.next()
            return TRUE
        if tok == "false":
            self.next()
            return FALSE
        if tok == "at" and self.peek(1) == "(":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return At(t)
        if _is_ident(tok) and tok.startswith("P_") and self.peek(1) == "(":
            symbol = tok[2:]
            if not symbol:
                self.error("missing symbol after P_")
            if self.alphabet is not None and symbol not in self.alphabet.symbols:
                self.error(f"unknown symbol {symbol!r}")
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return IsP(symbol, t)
        if _is_ident(tok) and tok not in KEYWORDS and self.peek(1) == "(":
            s = self.variable()
            self.expect("(")
            e = self.term()
            self.expect(")")
            return Mem(e, s)
        left = self.term()
        op = self.peek()
        if op not in ("=", "<=", "<"):
            self.error(f"expected '=', '<=' or '<', found {op!r}")
        self.next()
        right = self.term()
        return {"=": Eq, "<=": Sub, "<": Before}[op](left, right)


def _is_ident(tok: str) -> bool:
    return bool(tok) and (tok[0].isalpha() or tok[0] == "_")


def parse(text: str, alphabet: "Alphabet | str | None" = None) -> Formula:
    if alphabet is not None:
        alphabet = Alphabet.of(alphabet)
    return _Parser(text, alphabet).parse()


# ---------------------------------------------------------------------------
# Rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _term(t) -> str:
    return "empty" if isinstance(t, Bottom) else t.name


def render(f: Formula) -> str:
    return _render(f)


def _wrap(f: Formula, parent_prec: int, right: bool, right_assoc: bool) -> str:
    s = _render(f)
    if isinstance(f, (Exists, Forall)):
        return f"({s})"
    prec = _PREC.get(type(f))
    if prec is None:
        return s
    if prec < parent_prec or (prec == parent_prec and right != right_assoc):
        return f"({s})"
    return s


def _render(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Eq):
        return f"{_term(f.left)} = {_term(f.right)}"
    if isinstance(f, Sub):
        return f"{_term(f.left)} <= {_term(f.right)}"
    if isinstance(f, Before):
        return f"{_term(f.left)} < {_term(f.right)}"
    if isinstance(f, At):
        return f"at({_term(f.term)})"
    if isinstance(f, IsP):
        return f"P_{f.symbol}({_term(f.term)})"
    if isinstance(f, Mem):
        return f"{_term(f.set)}({_term(f.element)})"
    if isinstance(f, Not):
        body = _render(f.body)
        if isinstance(f.body, (Exists, Forall)) or type(f.body) in _PREC:
            body = f"({body})"
        return "!" + body
    if type(f) in _PREC:
        prec = _PREC[type(f)]
        ra = isinstance(f, Implies)
        left = _wrap(f.left, prec, False, ra)
        right = _wrap(f.right, prec, True, ra)
        return f"{left} {_OPS[type(f)]} {right}"
    if isinstance(f, (Exists, Forall)):
        q = "ex" if isinstance(f, Exists) else "all"
        return f"{q} {f.var.name}. {_render(f.body)}"
    raise TypeError(f"not a formula: {f!r}")
