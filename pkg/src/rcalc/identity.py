"""Sentence identity: two sentences are the same when their biconditional
is a tautology.

Full first-order equivalence is undecidable, so the check works on the
propositional skeleton.  Both sides are put in negation normal form, then
every atom and every quantified subformula becomes a propositional letter.
Quantified subformulas share a letter when they have the same quantifier
and identical bodies (recursively, up to renaming of the bound variable).
"""
from __future__ import annotations

from itertools import product

from .syntax import (
    And, Atom, Eq, Exists, Forall, Formula, Imp, Not, Or, QUANTIFIERS,
    alpha_key, canonical, rename_bound,
)


def nnf(a: Formula, negate: bool = False) -> Formula:
    """Negation normal form with implications eliminated."""
    if isinstance(a, (Atom, Eq)):
        return Not(a) if negate else a
    if isinstance(a, Not):
        return nnf(a.body, not negate)
    if isinstance(a, And):
        l, r = nnf(a.left, negate), nnf(a.right, negate)
        return Or(l, r) if negate else And(l, r)
    if isinstance(a, Or):
        l, r = nnf(a.left, negate), nnf(a.right, negate)
        return And(l, r) if negate else Or(l, r)
    if isinstance(a, Imp):
        l, r = nnf(a.left, not negate), nnf(a.right, negate)
        return And(l, r) if negate else Or(l, r)
    if isinstance(a, Forall):
        body = nnf(a.body, negate)
        return Exists(a.var, body) if negate else Forall(a.var, body)
    if isinstance(a, Exists):
        body = nnf(a.body, negate)
        return Forall(a.var, body) if negate else Exists(a.var, body)
    raise TypeError(f"not a formula: {a!r}")


class _Letters:
    def __init__(self) -> None:
        self.keys: dict = {}
        self.quantified: list[tuple[Formula, int]] = []

    def letter(self, a: Formula) -> int:
        if isinstance(a, Eq):
            sides = sorted([str(a.lhs), str(a.rhs)])
            key = ("=",) + tuple(sides)
        elif isinstance(a, Atom):
            key = alpha_key(a)
        else:
            for rep, idx in self.quantified:
                if _same_quantified(rep, a):
                    return idx
            idx = len(self.keys) + len(self.quantified)
            self.quantified.append((a, idx))
            return idx
        if key not in self.keys:
            self.keys[key] = len(self.keys) + len(self.quantified)
        return self.keys[key]


def _same_quantified(a: Formula, b: Formula) -> bool:
    if type(a) is not type(b):
        return False
    body_b = b.body if a.var == b.var else rename_bound(b.body, b.var, a.var)
    return sentence_equal(a.body, body_b)


def _skeleton(a: Formula, letters: _Letters):
    """Compile an NNF formula into a nested tuple over letter indices."""
    if isinstance(a, (Atom, Eq)) or isinstance(a, QUANTIFIERS):
        return ("v", letters.letter(a))
    if isinstance(a, Not):
        return ("~", _skeleton(a.body, letters))
    if isinstance(a, And):
        return ("&", _skeleton(a.left, letters), _skeleton(a.right, letters))
    if isinstance(a, Or):
        return ("|", _skeleton(a.left, letters), _skeleton(a.right, letters))
    raise TypeError(f"unexpected node in NNF: {a!r}")


def _value(sk, row) -> bool:
    tag = sk[0]
    if tag == "v":
        return row[sk[1]]
    if tag == "~":
        return not _value(sk[1], row)
    if tag == "&":
        return _value(sk[1], row) and _value(sk[2], row)
    return _value(sk[1], row) or _value(sk[2], row)


def sentence_equal(p: Formula, q: Formula) -> bool:
    """True when ``p`` and ``q`` agree on every valuation of their skeleton."""
    if p == q:
        return True
    return _sentence_equal(alpha_key(p), alpha_key(q), p, q)


_memo: dict = {}


def _sentence_equal(kp, kq, p: Formula, q: Formula) -> bool:
    if kp == kq:
        return True
    key = frozenset((kp, kq))
    hit = _memo.get(key)
    if hit is not None:
        return hit
    letters = _Letters()
    sp = _skeleton(nnf(canonical(p)), letters)
    sq = _skeleton(nnf(canonical(q)), letters)
    n = len(letters.keys) + len(letters.quantified)
    result = all(_value(sp, row) == _value(sq, row)
                 for row in product((False, True), repeat=n))
    if len(_memo) > 200_000:
        _memo.clear()
    _memo[key] = result
    return result


def dedupe(formulas) -> list[Formula]:
    """Drop later formulas that are sentence-equal to an earlier one."""
    out: list[Formula] = []
    for a in formulas:
        if not any(sentence_equal(a, b) for b in out):
            out.append(a)
    return out


def same_law_set(xs, ys) -> bool:
    """Setwise comparison under sentence identity."""
    xs, ys = list(xs), list(ys)
    return (all(any(sentence_equal(x, y) for y in ys) for x in xs)
            and all(any(sentence_equal(x, y) for x in xs) for y in ys))

