"""Ground congruence closure over equality literals.

Variables occurring in the input are treated as rigid unknowns (the
prover's eigenvariables); the public :func:`congruence_consistent` insists
on ground input.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .syntax import App, Atom, Eq, Formula, Not, Term, is_ground_term, subterms


class NonGroundError(ValueError):
    pass


class CongruenceClosure:
    def __init__(self) -> None:
        self.parent: dict[Term, Term] = {}
        self.apps: list[App] = []

    def add(self, t: Term) -> None:
        fresh = []
        for s in subterms(t):
            if s not in self.parent:
                self.parent[s] = s
                if isinstance(s, App):
                    self.apps.append(s)
                    fresh.append(s)
        # a late term joins the class of any congruent term already present
        for s in reversed(fresh):
            sig = (s.fn, tuple(self.find(x) for x in s.args))
            for other in self.apps:
                if other is not s and other.fn == s.fn and \
                        tuple(self.find(x) for x in other.args) == sig[1]:
                    self.merge(s, other)
                    break

    def find(self, t: Term) -> Term:
        self.add(t)
        root = t
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[t] != root:
            self.parent[t], t = root, self.parent[t]
        return root

    def merge(self, s: Term, t: Term) -> None:
        self.add(s)
        self.add(t)
        pending = [(s, t)]
        while pending:
            a, b = pending.pop()
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                continue
            self.parent[ra] = rb
            seen: dict[tuple, App] = {}
            for app in self.apps:
                sig = (app.fn, tuple(self.find(x) for x in app.args))
                other = seen.setdefault(sig, app)
                if other is not app and self.find(other) != self.find(app):
                    pending.append((other, app))

    def equal(self, s: Term, t: Term) -> bool:
        # register both first: adding a term may merge classes
        self.add(s)
        self.add(t)
        return self.find(s) == self.find(t)

    def classes(self) -> dict[Term, list[Term]]:
        out: dict[Term, list[Term]] = {}
        for t in list(self.parent):
            out.setdefault(self.find(t), []).append(t)
        return out


def _split(literals: Iterable[Formula]):
    eqs, neqs, pos, neg = [], [], [], []
    for lit in literals:
        if isinstance(lit, Eq):
            eqs.append(lit)
        elif isinstance(lit, Not) and isinstance(lit.body, Eq):
            neqs.append(lit.body)
        elif isinstance(lit, Atom):
            pos.append(lit)
        elif isinstance(lit, Not) and isinstance(lit.body, Atom):
            neg.append(lit.body)
        else:
            raise ValueError(f"not a literal: {lit}")
    return eqs, neqs, pos, neg


def closure_of(literals: Iterable[Formula], terms: Iterable[Term] = ()) -> CongruenceClosure:
    """Closure of the equalities in ``literals``; ``terms`` are registered
    before merging so congruences among them are found too."""
    literals = list(literals)
    cc = CongruenceClosure()
    for t in terms:
        cc.add(t)
    eqs, neqs, pos, neg = _split(literals)
    for e in neqs:
        cc.add(e.lhs)
        cc.add(e.rhs)
    for a in pos + neg:
        for t in a.args:
            cc.add(t)
    for e in eqs:
        cc.merge(e.lhs, e.rhs)
    return cc


def _atoms_clash(cc: CongruenceClosure, p: Atom, q: Atom) -> bool:
    return (p.pred == q.pred and len(p.args) == len(q.args)
            and all(cc.equal(a, b) for a, b in zip(p.args, q.args)))


def ground_consistent(literals: Iterable[Formula]) -> bool:
    """Satisfiability of a set of literals in the theory of equality with
    uninterpreted functions and predicates."""
    literals = list(literals)
    eqs, neqs, pos, neg = _split(literals)
    cc = closure_of(literals)
    if any(cc.equal(e.lhs, e.rhs) for e in neqs):
        return False
    return not any(_atoms_clash(cc, p, q) for p in pos for q in neg)


def congruence_consistent(literals: Iterable[Formula]) -> bool:
    """True iff the congruence closure of the equalities refutes no
    disequality (and no negated atom).  Input must be ground."""
    literals = list(literals)
    for lit in literals:
        body = lit.body if isinstance(lit, Not) else lit
        terms = (body.lhs, body.rhs) if isinstance(body, Eq) else getattr(body, "args", ())
        if not all(is_ground_term(t) for t in terms):
            raise NonGroundError(f"literal is not ground: {lit}")
    return ground_consistent(literals)


def entails(literals: Sequence[Formula], goal: Formula) -> bool:
    """Does the positive congruence closure of ``literals`` yield ``goal``?

    ``goal`` is an equality or a predicate atom.  Inconsistency of the
    literals is not exploited.
    """
    eqs = [l for l in literals if isinstance(l, Eq)]
    atoms = [l for l in literals if isinstance(l, Atom)]
    if isinstance(goal, Eq):
        return closure_of(eqs, (goal.lhs, goal.rhs)).equal(goal.lhs, goal.rhs)
    if isinstance(goal, Atom):
        cc = closure_of(eqs + atoms, goal.args)
        return any(_atoms_clash(cc, a, goal) for a in atoms)
    return False


def explain(literals: Sequence[Formula], goal: Formula) -> tuple[int, ...] | None:
    """Indices of a subset-minimal support of ``goal`` within ``literals``
    (only equalities and atoms are considered), or None."""
    idx = [i for i, l in enumerate(literals) if isinstance(l, (Eq, Atom))]
    if not entails([literals[i] for i in idx], goal):
        return None
    keep = list(idx)
    for i in idx:
        trial = [j for j in keep if j != i]
        if entails([literals[j] for j in trial], goal):
            keep = trial
    return tuple(keep)
