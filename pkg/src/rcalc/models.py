"""Finite models, Tarskian evaluation and ground term pools."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping

from .syntax import (
    And, App, Atom, Const, Eq, Exists, Forall, Formula, Imp, Not, Or, Term, Var,
    atoms_of, close_free_vars, formula_terms, free_vars, subterms, term_size,
)

INJECTED_CONSTANT = "c0"


class EvaluationError(KeyError):
    """A symbol or variable has no interpretation."""

    def __str__(self) -> str:
        return str(self.args[0])


@dataclass
class FiniteModel:
    """Domain ``{0, ..., size-1}`` plus an interpretation.

    Function tables must be total; predicates are sets of argument tuples
    (a 0-ary predicate is true iff it contains ``()``).
    """

    size: int
    constants: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, Mapping[tuple, int]] = field(default_factory=dict)
    predicates: Mapping[str, frozenset] = field(default_factory=dict)

    @property
    def domain(self) -> range:
        return range(self.size)

    def describe(self) -> str:
        parts = [f"domain size {self.size}"]
        for c in sorted(self.constants):
            parts.append(f"{c}={self.constants[c]}")
        for f in sorted(self.functions):
            table = self.functions[f]
            parts.append(f + "{" + ", ".join(
                f"{','.join(map(str, k))}->{v}" for k, v in sorted(table.items())) + "}")
        for p in sorted(self.predicates):
            rel = self.predicates[p]
            if rel == frozenset({()}):
                parts.append(f"{p}=T")
            else:
                parts.append(p + "{" + " ".join(
                    "(" + ",".join(map(str, t)) + ")" for t in sorted(rel)) + "}")
        return "; ".join(parts)


def eval_term(m: FiniteModel, t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        if t.name not in env:
            raise EvaluationError(f"unassigned variable {t.name!r}")
        return env[t.name]
    if isinstance(t, Const):
        if t.name not in m.constants:
            raise EvaluationError(f"uninterpreted constant {t.name!r}")
        return m.constants[t.name]
    table = m.functions.get(t.fn)
    if table is None:
        raise EvaluationError(f"uninterpreted function {t.fn!r}")
    key = tuple(eval_term(m, a, env) for a in t.args)
    if key not in table:
        raise EvaluationError(f"function {t.fn!r} undefined on {key}")
    return table[key]


def evaluate(m: FiniteModel, a: Formula, env: Mapping[str, int] | None = None) -> bool:
    """``m |= a`` under the assignment ``env``."""
    env = dict(env or {})
    return _eval(m, a, env)


def _eval(m: FiniteModel, a: Formula, env: dict) -> bool:
    if isinstance(a, Atom):
        rel = m.predicates.get(a.pred)
        if rel is None:
            raise EvaluationError(f"uninterpreted predicate {a.pred!r}")
        return tuple(eval_term(m, t, env) for t in a.args) in rel
    if isinstance(a, Eq):
        return eval_term(m, a.lhs, env) == eval_term(m, a.rhs, env)
    if isinstance(a, Not):
        return not _eval(m, a.body, env)
    if isinstance(a, And):
        return _eval(m, a.left, env) and _eval(m, a.right, env)
    if isinstance(a, Or):
        return _eval(m, a.left, env) or _eval(m, a.right, env)
    if isinstance(a, Imp):
        return (not _eval(m, a.left, env)) or _eval(m, a.right, env)
    if isinstance(a, (Forall, Exists)):
        saved = env.get(a.var, _MISSING)
        try:
            for d in m.domain:
                env[a.var] = d
                v = _eval(m, a.body, env)
                if isinstance(a, Forall) and not v:
                    return False
                if isinstance(a, Exists) and v:
                    return True
        finally:
            if saved is _MISSING:
                env.pop(a.var, None)
            else:
                env[a.var] = saved
        return isinstance(a, Forall)
    raise TypeError(f"not a formula: {a!r}")


_MISSING = object()


# ---------------------------------------------------------------- signatures

@dataclass(frozen=True)
class ModelSignature:
    constants: tuple[str, ...]
    functions: tuple[tuple[str, int], ...]
    predicates: tuple[tuple[str, int], ...]

    def interpretation_count(self, size: int) -> int:
        n = size ** len(self.constants)
        for _, k in self.functions:
            n *= size ** (size ** k)
        for _, k in self.predicates:
            n *= 2 ** (size ** k)
        return n


def signature_of(formulas: Iterable[Formula]) -> ModelSignature:
    """Symbols of ``formulas``; free variables are treated as constants."""
    consts: set[str] = set()
    funcs: dict[str, int] = {}
    preds: dict[str, int] = {}
    for a in formulas:
        consts |= free_vars(a)
        for t in formula_terms(a):
            if isinstance(t, Const):
                consts.add(t.name)
            elif isinstance(t, App):
                funcs[t.fn] = len(t.args)
        for sub in _atoms(a):
            preds[sub.pred] = len(sub.args)
    return ModelSignature(tuple(sorted(consts)), tuple(sorted(funcs.items())),
                          tuple(sorted(preds.items())))


def _atoms(a: Formula) -> Iterator[Atom]:
    for at in atoms_of(a):
        if isinstance(at, Atom):
            yield at


def enumerate_models(sig: ModelSignature, size: int) -> Iterator[FiniteModel]:
    """Every interpretation of ``sig`` over a domain of ``size`` elements,
    in a fixed order."""
    dom = range(size)
    const_choices = product(dom, repeat=len(sig.constants))
    func_spaces = [(name, list(product(dom, repeat=k))) for name, k in sig.functions]
    pred_spaces = []
    for name, k in sig.predicates:
        args = list(product(dom, repeat=k))
        pred_spaces.append((name, args))

    func_tables = [
        [dict(zip(args, vals)) for vals in product(dom, repeat=len(args))]
        for _, args in func_spaces
    ]
    pred_tables = [
        [frozenset(t for t, bit in zip(args, bits) if bit)
         for bits in product((False, True), repeat=len(args))]
        for _, args in pred_spaces
    ]
    for consts in const_choices:
        cmap = dict(zip(sig.constants, consts))
        for ftabs in product(*func_tables):
            fmap = {name: tab for (name, _), tab in zip(func_spaces, ftabs)}
            for ptabs in product(*pred_tables):
                pmap = {name: tab for (name, _), tab in zip(pred_spaces, ptabs)}
                yield FiniteModel(size, cmap, fmap, pmap)


def find_model(formulas: Iterable[Formula], size_cap: int,
               falsify: Formula | None = None,
               max_interpretations: int = 200_000) -> FiniteModel | None:
    """First model (smallest domain first) satisfying ``formulas`` and, if
    given, falsifying ``falsify``.  Domains whose interpretation space is
    larger than ``max_interpretations`` are skipped."""
    formulas = [close_for_models(a) for a in formulas]
    target = close_for_models(falsify) if falsify is not None else None
    sig = signature_of(formulas + ([target] if target is not None else []))
    for size in range(1, size_cap + 1):
        if sig.interpretation_count(size) > max_interpretations:
            continue
        for m in enumerate_models(sig, size):
            if all(evaluate(m, a) for a in formulas) and (
                    target is None or not evaluate(m, target)):
                return m
        if _is_propositional(sig):
            break
    return None


def _is_propositional(sig: ModelSignature) -> bool:
    return not sig.constants and not sig.functions and all(k == 0 for _, k in sig.predicates)


def close_for_models(a: Formula) -> Formula:
    return close_free_vars(a)


# ---------------------------------------------------------------- term pools

def term_sort_key(t: Term):
    return (term_size(t), str(t))


def term_universe(formulas: Iterable[Formula], depth: int,
                  extra: Iterable[Term] = ()) -> list[Term]:
    """Ground terms built from the constants and functions of ``formulas``,
    nested at most ``depth`` deep, ordered by size then text.

    ``extra`` adds further base terms (e.g. eigenvariables).  When no base
    term exists a fresh constant ``c0`` is injected.
    """
    formulas = list(formulas)
    base: set[Term] = set(extra)
    funcs: dict[str, int] = {}
    for a in formulas:
        for t in formula_terms(a):
            if isinstance(t, Const):
                base.add(t)
            elif isinstance(t, App):
                funcs[t.fn] = len(t.args)
    if not base:
        base.add(Const(INJECTED_CONSTANT))
    levels = set(base)
    for _ in range(depth):
        new = set(levels)
        ordered = sorted(levels, key=term_sort_key)
        for f, k in sorted(funcs.items()):
            for args in product(ordered, repeat=k):
                new.add(App(f, args))
        levels = new
    return sorted(levels, key=term_sort_key)


def ground_subterms(formulas: Iterable[Formula]) -> list[Term]:
    out: set[Term] = set()
    for a in formulas:
        for t in formula_terms(a):
            for s in subterms(t):
                out.add(s)
    return sorted(out, key=term_sort_key)
