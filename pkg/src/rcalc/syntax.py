"""First-order terms and formulas.

All nodes are frozen dataclasses.  Structural equality (``==``) is exact,
including bound-variable names; use :func:`alpha_key` when comparison
should ignore the choice of bound names.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError(f"application of {self.fn!r} needs at least one argument")

    def __str__(self) -> str:
        return f"{self.fn}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, Const, App]


class Formula:
    """Base class for formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    pred: str
    args: tuple = ()

    def __repr__(self) -> str:
        return f"Atom({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    lhs: Term
    rhs: Term

    def __repr__(self) -> str:
        return f"Eq({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula

    def __repr__(self) -> str:
        return f"Not({to_text(self.body)!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"And({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Or({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Imp({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __repr__(self) -> str:
        return f"Forall({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __repr__(self) -> str:
        return f"Exists({to_text(self)!r})"


BINARY = (And, Or, Imp)
QUANTIFIERS = (Forall, Exists)
ATOMIC = (Atom, Eq)


# ---------------------------------------------------------------- terms

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def term_size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


def term_depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def is_ground_term(t: Term) -> bool:
    return not term_vars(t)


def subst_term(t: Term, x: str, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.name == x else t
    if isinstance(t, App):
        return App(t.fn, tuple(subst_term(a, x, s) for a in t.args))
    return t


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


# ---------------------------------------------------------------- formulas

def free_vars(a: Formula) -> set[str]:
    if isinstance(a, Atom):
        out: set[str] = set()
        for t in a.args:
            out |= term_vars(t)
        return out
    if isinstance(a, Eq):
        return term_vars(a.lhs) | term_vars(a.rhs)
    if isinstance(a, Not):
        return free_vars(a.body)
    if isinstance(a, BINARY):
        return free_vars(a.left) | free_vars(a.right)
    if isinstance(a, QUANTIFIERS):
        return free_vars(a.body) - {a.var}
    raise TypeError(f"not a formula: {a!r}")


def bound_vars(a: Formula) -> list[str]:
    if isinstance(a, Not):
        return bound_vars(a.body)
    if isinstance(a, BINARY):
        return bound_vars(a.left) + bound_vars(a.right)
    if isinstance(a, QUANTIFIERS):
        return [a.var] + bound_vars(a.body)
    return []


def is_sentence(a: Formula) -> bool:
    return not free_vars(a)


def is_atomic(a: Formula) -> bool:
    return isinstance(a, ATOMIC)


def is_literal(a: Formula) -> bool:
    return is_atomic(a) or (isinstance(a, Not) and is_atomic(a.body))


def is_quantifier_free(a: Formula) -> bool:
    if isinstance(a, ATOMIC):
        return True
    if isinstance(a, Not):
        return is_quantifier_free(a.body)
    if isinstance(a, BINARY):
        return is_quantifier_free(a.left) and is_quantifier_free(a.right)
    return False


def complement(lit: Formula) -> Formula:
    """The opposite literal: ``P`` <-> ``~P``."""
    if isinstance(lit, Not):
        return lit.body
    return Not(lit)


def strip_double_negation(a: Formula) -> Formula:
    while isinstance(a, Not) and isinstance(a.body, Not):
        a = a.body.body
    return a


def atoms_of(a: Formula) -> Iterator[Formula]:
    if isinstance(a, ATOMIC):
        yield a
    elif isinstance(a, Not):
        yield from atoms_of(a.body)
    elif isinstance(a, BINARY):
        yield from atoms_of(a.left)
        yield from atoms_of(a.right)
    elif isinstance(a, QUANTIFIERS):
        yield from atoms_of(a.body)


def formula_terms(a: Formula) -> Iterator[Term]:
    for at in atoms_of(a):
        if isinstance(at, Atom):
            for t in at.args:
                yield from subterms(t)
        else:
            yield from subterms(at.lhs)
            yield from subterms(at.rhs)


def subformulas(a: Formula) -> Iterator[Formula]:
    """Pre-order traversal, the formula itself first."""
    yield a
    if isinstance(a, Not):
        yield from subformulas(a.body)
    elif isinstance(a, BINARY):
        yield from subformulas(a.left)
        yield from subformulas(a.right)
    elif isinstance(a, QUANTIFIERS):
        yield from subformulas(a.body)


def rank(a: Formula) -> int:
    """Atoms count 1, every connective or quantifier adds 1."""
    if isinstance(a, ATOMIC):
        return 1
    if isinstance(a, Not):
        return 1 + rank(a.body)
    if isinstance(a, BINARY):
        return 1 + rank(a.left) + rank(a.right)
    if isinstance(a, QUANTIFIERS):
        return 1 + rank(a.body)
    raise TypeError(f"not a formula: {a!r}")


def rank_of_laws(laws: Iterable[Formula]) -> int:
    """Rank of the conjunction of ``laws``."""
    laws = list(laws)
    if not laws:
        return 0
    return sum(rank(a) for a in laws) + len(laws) - 1


def conjoin(laws: Iterable[Formula]) -> Formula | None:
    out = None
    for a in laws:
        out = a if out is None else And(out, a)
    return out


# ---------------------------------------------------------------- naming

def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


def rename_bound(a: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of variable ``old`` to ``new`` (no capture check)."""
    return _subst(a, old, Var(new))


def _subst(a: Formula, x: str, t: Term) -> Formula:
    if isinstance(a, Atom):
        if not a.args:
            return a
        return Atom(a.pred, tuple(subst_term(s, x, t) for s in a.args))
    if isinstance(a, Eq):
        return Eq(subst_term(a.lhs, x, t), subst_term(a.rhs, x, t))
    if isinstance(a, Not):
        return Not(_subst(a.body, x, t))
    if isinstance(a, BINARY):
        return type(a)(_subst(a.left, x, t), _subst(a.right, x, t))
    if isinstance(a, QUANTIFIERS):
        if a.var == x or x not in free_vars(a.body):
            return a
        if a.var in term_vars(t):
            new = fresh_name(a.var, term_vars(t) | free_vars(a.body) | {x})
            return type(a)(new, _subst(rename_bound(a.body, a.var, new), x, t))
        return type(a)(a.var, _subst(a.body, x, t))
    raise TypeError(f"not a formula: {a!r}")


def substitute(a: Formula, x: str, t: Term) -> Formula:
    """Capture-avoiding ``a[t/x]``; the result is alpha-canonical."""
    if x not in free_vars(a):
        return canonical(a)
    return canonical(_subst(a, x, t))


def canonical(a: Formula) -> Formula:
    """Rename binders so that they are pairwise distinct and never clash
    with a free variable.  Idempotent; keeps names that are already fine."""
    taken = set(free_vars(a))

    def walk(f: Formula) -> Formula:
        if isinstance(f, ATOMIC):
            return f
        if isinstance(f, Not):
            return Not(walk(f.body))
        if isinstance(f, BINARY):
            left = walk(f.left)
            return type(f)(left, walk(f.right))
        if isinstance(f, QUANTIFIERS):
            name = f.var
            body = f.body
            if name in taken:
                name = fresh_name(name, taken | free_vars(body))
                body = rename_bound(body, f.var, name)
            taken.add(name)
            return type(f)(name, walk(body))
        raise TypeError(f"not a formula: {f!r}")

    return walk(a)


def close_free_vars(a: Formula) -> Formula:
    """Replace each free variable with a constant of the same name."""
    for x in sorted(free_vars(a)):
        a = _subst(a, x, Const(x))
    return a


def alpha_key(a: Formula):
    """Hashable key equal for alpha-equivalent formulas."""

    def tkey(t: Term, env: tuple):
        if isinstance(t, Var):
            for i in range(len(env) - 1, -1, -1):
                if env[i] == t.name:
                    return ("b", len(env) - 1 - i)
            return ("v", t.name)
        if isinstance(t, Const):
            return ("c", t.name)
        return ("f", t.fn, tuple(tkey(s, env) for s in t.args))

    def fkey(f: Formula, env: tuple):
        if isinstance(f, Atom):
            return ("P", f.pred, tuple(tkey(s, env) for s in f.args))
        if isinstance(f, Eq):
            return ("=", tkey(f.lhs, env), tkey(f.rhs, env))
        if isinstance(f, Not):
            return ("~", fkey(f.body, env))
        if isinstance(f, And):
            return ("&", fkey(f.left, env), fkey(f.right, env))
        if isinstance(f, Or):
            return ("|", fkey(f.left, env), fkey(f.right, env))
        if isinstance(f, Imp):
            return (">", fkey(f.left, env), fkey(f.right, env))
        if isinstance(f, Forall):
            return ("A", fkey(f.body, env + (f.var,)))
        if isinstance(f, Exists):
            return ("E", fkey(f.body, env + (f.var,)))
        raise TypeError(f"not a formula: {f!r}")

    return fkey(a, ())


def alpha_equal(a: Formula, b: Formula) -> bool:
    return a == b or alpha_key(a) == alpha_key(b)


def literal_key(lit: Formula):
    """Key for a literal that ignores the orientation of equalities."""
    neg = isinstance(lit, Not)
    body = lit.body if neg else lit
    if isinstance(body, Eq):
        a, b = sorted([str(body.lhs), str(body.rhs)])
        return (neg, "=", a, b)
    return (neg, alpha_key(body))


# ---------------------------------------------------------------- negation table

class NotApplicable(ValueError):
    """The negation-expansion table has no row for this formula."""


def neg_expand(a: Formula) -> Formula:
    """Push one negation one level down, per the six-row expansion table."""
    if not isinstance(a, Not):
        raise NotApplicable(f"not a negation: {a}")
    b = a.body
    if isinstance(b, And):
        return Or(Not(b.left), Not(b.right))
    if isinstance(b, Or):
        return And(Not(b.left), Not(b.right))
    if isinstance(b, Not):
        return b.body
    if isinstance(b, Imp):
        return And(b.left, Not(b.right))
    if isinstance(b, Forall):
        return Exists(b.var, Not(b.body))
    if isinstance(b, Exists):
        return Forall(b.var, Not(b.body))
    raise NotApplicable(f"negated literal has no expansion: {a}")


def neg_expandable(a: Formula) -> bool:
    return isinstance(a, Not) and not is_atomic(a.body)


# ---------------------------------------------------------------- printing

_PREC = {Imp: 1, Or: 2, And: 3, Not: 4, Eq: 4.5, Atom: 5}
_OPS = {And: "&", Or: "|", Imp: "->"}


def _prec(a: Formula) -> float:
    if isinstance(a, QUANTIFIERS):
        return 0
    return _PREC[type(a)]


def to_text(a: Formula) -> str:
    """ASCII concrete syntax accepted by :func:`rcalc.parser.parse_formula`."""
    if isinstance(a, Atom):
        if not a.args:
            return a.pred
        return f"{a.pred}({', '.join(str(t) for t in a.args)})"
    if isinstance(a, Eq):
        return f"{a.lhs} = {a.rhs}"
    if isinstance(a, Not):
        inner = to_text(a.body)
        if _prec(a.body) < _PREC[Not] or isinstance(a.body, Eq):
            inner = f"({inner})"
        return "~" + inner
    if isinstance(a, QUANTIFIERS):
        word = "forall" if isinstance(a, Forall) else "exists"
        return f"{word} {a.var}. {to_text(a.body)}"
    if isinstance(a, BINARY):
        p = _PREC[type(a)]
        left, right = to_text(a.left), to_text(a.right)
        lp, rp = _prec(a.left), _prec(a.right)
        if isinstance(a, Imp):
            if lp <= p:
                left = f"({left})"
            if rp < p or rp == 0:
                right = f"({right})"
        else:
            if lp < p or lp == 0:
                left = f"({left})"
            if rp <= p:
                right = f"({right})"
        return f"{left} {_OPS[type(a)]} {right}"
    raise TypeError(f"not a formula: {a!r}")


def to_unicode(a: Formula) -> str:
    """Rendering with logical symbols, for display only."""
    s = to_text(a)
    for old, new in (("->", "⊃"), ("&", "∧"), ("|", "∨"), ("~", "¬"),
                     ("forall ", "∀"), ("exists ", "∃")):
        s = s.replace(old, new)
    return s
