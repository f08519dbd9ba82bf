"""Recursive-descent parser for the ASCII formula syntax.

    ~  negation         &  conjunction      |  disjunction
    -> implication (right associative)      =  equality
    forall x. A / exists x. A  (the body extends as far right as possible)

Precedence, tightest first: ``~ & | ->``.  An identifier in term position is a
variable when bound by an enclosing quantifier or listed in ``variables``,
otherwise a constant.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .syntax import (
    And, App, Atom, Const, Eq, Exists, Forall, Formula, Imp, Not, Or, Term, Var,
    canonical,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class ArityError(ValueError):
    def __init__(self, symbol: str, expected: int, got: int, kind: str = "symbol"):
        self.symbol = symbol
        super().__init__(f"{kind} {symbol!r} used with {got} argument(s), expected {expected}")


@dataclass
class Signature:
    """Arity bookkeeping shared by every formula of one problem."""

    functions: dict[str, int] = field(default_factory=dict)  # constants have arity 0
    predicates: dict[str, int] = field(default_factory=dict)

    def note_function(self, name: str, arity: int) -> None:
        if name in self.predicates:
            raise ArityError(name, self.predicates[name], arity, "predicate used as function")
        known = self.functions.setdefault(name, arity)
        if known != arity:
            raise ArityError(name, known, arity, "function")

    def note_predicate(self, name: str, arity: int) -> None:
        if name in self.functions:
            raise ArityError(name, self.functions[name], arity, "function used as predicate")
        known = self.predicates.setdefault(name, arity)
        if known != arity:
            raise ArityError(name, known, arity, "predicate")


_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<neq>!=)|(?P<punct>[~&|().,=])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*))"
)
_KEYWORDS = {"forall", "exists"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "ident" and value in _KEYWORDS:
            kind = value
        elif kind != "ident":
            kind = value
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Iterable[str], sig: Signature | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = set(variables)
        self.sig = sig

    def peek(self) -> str:
        return self.toks[self.i][0]

    def take(self, kind: str | None = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2], self.text)
        self.i += 1
        return tok

    def formula(self, bound: tuple) -> Formula:
        left = self.disj(bound)
        if self.peek() == "->":
            self.take()
            return Imp(left, self.formula(bound))
        return left

    def disj(self, bound: tuple) -> Formula:
        out = self.conj(bound)
        while self.peek() == "|":
            self.take()
            out = Or(out, self.conj(bound))
        return out

    def conj(self, bound: tuple) -> Formula:
        out = self.unary(bound)
        while self.peek() == "&":
            self.take()
            out = And(out, self.unary(bound))
        return out

    def unary(self, bound: tuple) -> Formula:
        kind = self.peek()
        if kind == "~":
            self.take()
            return Not(self.unary(bound))
        if kind in _KEYWORDS:
            self.take()
            names = [self.take("ident")[1]]
            while self.peek() == ",":
                self.take()
                names.append(self.take("ident")[1])
            self.take(".")
            body = self.formula(bound + tuple(names))
            q = Forall if kind == "forall" else Exists
            for name in reversed(names):
                body = q(name, body)
            return body
        if kind == "(":
            self.take()
            inner = self.formula(bound)
            self.take(")")
            return inner
        return self.atomic(bound)

    def atomic(self, bound: tuple) -> Formula:
        tok = self.take("ident")
        name = tok[1]
        args: tuple = ()
        if self.peek() == "(":
            args = self.arguments(bound)
        if self.peek() in ("=", "!="):
            op = self.take()[0]
            lhs = self._as_term(name, args, bound)
            rhs = self.term(bound)
            eq = Eq(lhs, rhs)
            return Not(eq) if op == "!=" else eq
        if name in bound or name in self.variables:
            raise ParseError(f"variable {name!r} used as a formula", tok[2], self.text)
        if self.sig is not None:
            self.sig.note_predicate(name, len(args))
        return Atom(name, args)

    def arguments(self, bound: tuple) -> tuple:
        self.take("(")
        args = [self.term(bound)]
        while self.peek() == ",":
            self.take()
            args.append(self.term(bound))
        self.take(")")
        return tuple(args)

    def term(self, bound: tuple) -> Term:
        tok = self.take("ident")
        args: tuple = ()
        if self.peek() == "(":
            args = self.arguments(bound)
        return self._as_term(tok[1], args, bound)

    def _as_term(self, name: str, args: tuple, bound: tuple) -> Term:
        if args:
            if self.sig is not None:
                self.sig.note_function(name, len(args))
            return App(name, args)
        if name in bound or name in self.variables:
            return Var(name)
        if self.sig is not None:
            self.sig.note_function(name, 0)
        return Const(name)


def parse_formula(text: str, variables: Iterable[str] = (),
                  signature: Signature | None = None) -> Formula:
    """Parse ``text`` into an alpha-canonical formula.

    ``variables`` lists identifiers that are free variables rather than
    constants.  When a ``signature`` is given, arities are checked against
    (and recorded in) it.
    """
    p = _Parser(text, variables, signature)
    out = p.formula(())
    p.take("eof")
    return canonical(out)


def parse_term(text: str, variables: Iterable[str] = ()) -> Term:
    p = _Parser(text, variables, None)
    out = p.term(())
    p.take("eof")
    return out
