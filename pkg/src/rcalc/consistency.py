"""Tri-valued consistency and atomic-consequence oracles."""
from __future__ import annotations

from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Iterable

from .models import find_model, signature_of, term_universe
from .prover import DEFAULT_BUDGET, Budget, Status, prove, qf_satisfiable, sequent
from .syntax import (
    Atom, Eq, Formula, Not, Term, atoms_of, bound_vars, free_vars, is_atomic,
    is_quantifier_free, subformulas,
)


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def consistent(laws: Iterable[Formula], budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """``yes`` with a finite model, ``no`` with proofs of some P and ~P,
    otherwise ``unknown``."""
    return _consistent(tuple(laws), budget)


@lru_cache(maxsize=50_000)
def _consistent(laws: tuple, budget: Budget) -> Verdict:
    if not laws:
        return Verdict.YES
    if all(is_quantifier_free(a) for a in laws):
        if qf_satisfiable(laws):
            return Verdict.YES
        # unsatisfiable: the contradiction is derived explicitly
        for p in _contradiction_targets(laws, budget, limit=1):
            if _refutes(laws, p, budget):
                return Verdict.NO
        return Verdict.UNKNOWN
    if find_model(laws, budget.model_size_cap) is not None:
        return Verdict.YES
    for p in _contradiction_targets(laws, budget, limit=60):
        if _refutes(laws, p, budget):
            return Verdict.NO
    return Verdict.UNKNOWN


def _refutes(laws: tuple, p: Formula, budget: Budget) -> bool:
    return (prove(sequent(laws, p), budget).status is Status.PROVED
            and prove(sequent(laws, Not(p)), budget).status is Status.PROVED)


def _contradiction_targets(laws: tuple, budget: Budget, limit: int) -> list[Formula]:
    out: list[Formula] = []
    seen = set()
    for a in laws:
        for s in subformulas(a):
            if is_atomic(s) and s not in seen and not _has_bound_vars(s, a):
                seen.add(s)
                out.append(s)
    for at in ground_atoms(laws, budget.term_depth):
        if at not in seen:
            seen.add(at)
            out.append(at)
    return out[:limit]


def _has_bound_vars(s: Formula, whole: Formula) -> bool:
    return bool(free_vars(s) & set(bound_vars(whole)))


def ground_atoms(laws: Iterable[Formula], term_depth: int,
                 with_equalities: bool = False, extra: Iterable[Term] = ()) -> list[Formula]:
    """Predicate atoms (and optionally equalities) over the term universe;
    ``extra`` adds base terms such as declared constants."""
    laws = list(laws)
    sig = signature_of(laws)
    pool = term_universe(laws, term_depth, extra)
    out: list[Formula] = []
    for name, k in sig.predicates:
        for args in product(pool, repeat=k):
            out.append(Atom(name, tuple(args)))
    if with_equalities:
        for i, s in enumerate(pool):
            for t in pool[i + 1:]:
                out.append(Eq(s, t))
    return out


def atomic_consequences(laws: Iterable[Formula], budget: Budget = DEFAULT_BUDGET,
                        max_atoms: int = 200, extra: Iterable[Term] = ()) -> list[Formula]:
    """Literals over the term universe proved from ``laws``, in a fixed order."""
    laws = tuple(laws)
    if not laws:
        return []
    uses_eq = any(isinstance(at, Eq) for a in laws for at in atoms_of(a))
    atoms = ground_atoms(laws, budget.term_depth, uses_eq, extra)[:max_atoms]
    out = []
    for at in atoms:
        for lit in (at, Not(at)):
            if prove(sequent(laws, lit), budget).status is Status.PROVED:
                out.append(lit)
    return out

