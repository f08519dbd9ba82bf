"""R-configurations ``Delta | Gamma`` and the revision transitions.

``Delta`` is a set of literals that override the laws ``Gamma``.  A
transition either deletes one law (R-axiom, R-cut and the connective and
quantifier rules) or rewrites a negated compound law one level down
(R-neg).  Exchange and contraction are realized by keeping ``Gamma`` as a
duplicate-free sequence sorted by printed form, so positions always refer
to that canonical order.

A connective or quantifier rule deletes ``X`` when its numerator, the
deletion of the components of ``X`` from ``Delta | X', Gamma'``, is
derivable.  Those sub-derivations are searched without using ``Gamma'``
(axiom, connective, quantifier and R-neg steps only), which keeps them
small and means each one proves ``Delta |- ~X`` on its own.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .consistency import Verdict, ground_atoms
from .congruence import ground_consistent
from .identity import dedupe, sentence_equal
from .models import term_universe
from .premise import is_necessary_premise
from .prover import (
    DEFAULT_BUDGET, Budget, ProofResult, ProofTree, Sequent, Status, check_proof_tree,
    prove, qf_valid,
)
from .syntax import (
    And, Const, Exists, Forall, Formula, Imp, Not, Or, Term, Var, alpha_key, complement,
    formula_terms, free_vars, fresh_name, is_literal, is_quantifier_free,
    is_sentence, literal_key, neg_expand, neg_expandable, strip_double_negation,
    subformulas, substitute, to_text,
)


class RuleTag(str, Enum):
    CONTRACTION_L = "contraction_l"
    CONTRACTION_R = "contraction_r"
    EXCHANGE_L = "exchange_l"
    EXCHANGE_R = "exchange_r"
    R_AXIOM = "r_axiom"
    R_AND_LEFT = "r_and_left_branch"
    R_AND_RIGHT = "r_and_right_branch"
    R_OR = "r_or"
    R_IMP = "r_imp"
    R_FORALL = "r_forall"
    R_EXISTS = "r_exists"
    R_CUT = "r_cut"
    R_NEG = "r_neg"


STRUCTURAL = {RuleTag.CONTRACTION_L, RuleTag.CONTRACTION_R, RuleTag.EXCHANGE_L,
              RuleTag.EXCHANGE_R}
# step order; the general R-cut comes after the direct rules so that traces
# show the most specific derivation
_ORDER = {tag: i for i, tag in enumerate(RuleTag)}


class InvalidConditionError(ValueError):
    """Delta is not an R-condition of Gamma."""


class WrongShapeError(ValueError):
    pass


# ---------------------------------------------------------------- configurations

def _law_order(a: Formula):
    return (to_text(a), repr(a))


@dataclass(frozen=True)
class Configuration:
    delta: tuple
    gamma: tuple
    validation: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def of(cls, delta: Iterable[Formula], gamma: Iterable[Formula]) -> "Configuration":
        """Canonical configuration: laws and literals sorted by printed form,
        then duplicates (by sentence identity) removed keeping the first."""
        lits: dict = {}
        for d in delta:
            if not is_literal(d):
                raise InvalidConditionError(f"not a literal: {to_text(d)}")
            lits.setdefault(literal_key(d), d)
        return cls(tuple(sorted(lits.values(), key=_law_order)),
                   tuple(dedupe(sorted(gamma, key=_law_order))))

    @property
    def key(self) -> tuple:
        return (tuple(to_text(d) for d in self.delta), tuple(to_text(g) for g in self.gamma))

    def without(self, position: int) -> "Configuration":
        return Configuration(self.delta, self.gamma[:position] + self.gamma[position + 1:])

    def __str__(self) -> str:
        d = ", ".join(to_text(x) for x in self.delta)
        g = ", ".join(to_text(x) for x in self.gamma) or "{}"
        return f"{d} | {g}"


def normalization_steps(gamma: Sequence[Formula]) -> list[tuple[RuleTag, int, str]]:
    """Structural bookkeeping that turns a raw law list into canonical order:
    contractions for duplicates, then exchanges for reordering."""
    steps = []
    kept: list[Formula] = []
    for i, a in enumerate(gamma):
        if any(sentence_equal(a, b) for b in kept):
            steps.append((RuleTag.CONTRACTION_L, i, to_text(a)))
        else:
            kept.append(a)
    if [to_text(a) for a in kept] != [to_text(a) for a in sorted(kept, key=_law_order)]:
        steps.append((RuleTag.EXCHANGE_L, 0, "sorted into canonical order"))
    return steps


@dataclass(frozen=True)
class MemberCheck:
    literal: Formula
    status: Verdict
    result: ProofResult


def validate_configuration(c: Configuration, budget: Budget = DEFAULT_BUDGET) -> list[MemberCheck]:
    """For every ``L`` in Delta, does Gamma prove the complement of ``L``?"""
    out = []
    for lit in c.delta:
        res = prove(Sequent(c.gamma, complement(lit)), budget)
        status = {Status.PROVED: Verdict.YES, Status.DISPROVED: Verdict.NO}.get(
            res.status, Verdict.UNKNOWN)
        out.append(MemberCheck(lit, status, res))
    return out


def make_configuration(delta: Iterable[Formula], gamma: Iterable[Formula],
                       budget: Budget = DEFAULT_BUDGET, strict: bool = True) -> Configuration:
    """Canonical configuration with its validation attached.  In strict mode
    a member of Delta that Gamma demonstrably does not refute is rejected,
    as is a Delta that contradicts itself."""
    c = Configuration.of(delta, gamma)
    if strict and c.delta and not _literals_consistent(c.delta):
        raise InvalidConditionError("the rejected literals contradict each other")
    checks = tuple(validate_configuration(c, budget))
    if strict:
        bad = [m for m in checks if m.status is Verdict.NO]
        if bad:
            raise InvalidConditionError(
                "laws do not refute " + ", ".join(to_text(m.literal) for m in bad))
    return Configuration(c.delta, c.gamma, checks)


def _literals_consistent(lits: Sequence[Formula]) -> bool:
    if all(is_quantifier_free(l) for l in lits):
        return ground_consistent(lits)
    keys = {literal_key(l) for l in lits}
    return not any(literal_key(complement(l)) in keys for l in lits)


def matches_rejection(law: Formula, lit: Formula) -> bool:
    """``law`` is the opposite of the Delta member ``lit``; double
    negations on the law are ignored."""
    target = strip_double_negation(complement(lit))
    return is_literal(strip_double_negation(law)) and \
        literal_key(strip_double_negation(law)) == literal_key(target)


# ---------------------------------------------------------------- transitions

@dataclass(frozen=True, eq=False)
class Deletion:
    """Derivation of ``Delta | X, G ==> Delta | G`` for the law ``X``."""

    rule: RuleTag
    law: Formula
    literal: Formula | None = None          # r_axiom: the Delta member
    term: Term | None = None                # r_forall
    eigenvariable: Var | None = None        # r_exists
    expanded: Formula | None = None         # r_neg: the rewritten law
    subs: tuple = ()

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        head = f"{pad}{self.rule.value} deletes {to_text(self.law)}"
        if self.literal is not None:
            head += f" against {to_text(self.literal)}"
        if self.term is not None:
            head += f" with t = {self.term}"
        if self.eigenvariable is not None:
            head += f" with eigenvariable {self.eigenvariable}"
        if self.expanded is not None:
            head += f" via {to_text(self.expanded)}"
        out = [head]
        for s in self.subs:
            out.extend(s.lines(indent + 1))
        return out

    def to_record(self) -> dict:
        rec = {"rule": self.rule.value, "law": to_text(self.law)}
        if self.literal is not None:
            rec["literal"] = to_text(self.literal)
        if self.term is not None:
            rec["term"] = str(self.term)
        if self.eigenvariable is not None:
            rec["eigenvariable"] = str(self.eigenvariable)
        if self.expanded is not None:
            rec["expanded"] = to_text(self.expanded)
        if self.subs:
            rec["subderivations"] = [s.to_record() for s in self.subs]
        return rec


@dataclass(frozen=True, eq=False)
class CutWitness:
    gamma1: tuple
    gamma2: tuple
    lemma: Formula
    target: Formula          # C, whose complement is in Delta
    literal: Formula         # the Delta member closing Delta | C, Gamma2
    left: ProofTree          # Gamma1, X |- lemma
    right: ProofTree         # lemma, Gamma2 |- C

    def to_record(self) -> dict:
        return {
            "gamma1": [to_text(a) for a in self.gamma1],
            "gamma2": [to_text(a) for a in self.gamma2],
            "lemma": to_text(self.lemma),
            "target": to_text(self.target),
            "literal": to_text(self.literal),
            "left_proof": self.left.to_records(),
            "right_proof": self.right.to_records(),
        }


@dataclass(frozen=True, eq=False)
class Transition:
    rule: RuleTag
    position: int
    law: Formula
    cut: CutWitness | None = None
    deletion: Deletion | None = None
    expanded: Formula | None = None      # r_neg

    @property
    def deletes(self) -> bool:
        return self.rule is not RuleTag.R_NEG

    def describe(self) -> list[str]:
        head = f"{self.rule.value} at {self.position} on {to_text(self.law)}"
        out = [head]
        if self.cut is not None:
            w = self.cut
            out.append(f"  gamma1 = {{{', '.join(to_text(a) for a in w.gamma1)}}}; "
                       f"gamma2 = {{{', '.join(to_text(a) for a in w.gamma2)}}}")
            out.append(f"  lemma {to_text(w.lemma)}; target {to_text(w.target)} "
                       f"(rejected by {to_text(w.literal)})")
            out.append(f"  proof of {w.left.root}: {len(w.left.nodes())} node(s)")
            out.append(f"  proof of {w.right.root}: {len(w.right.nodes())} node(s)")
        if self.deletion is not None:
            out.extend(self.deletion.lines(1))
        if self.expanded is not None:
            out.append(f"  rewritten to {to_text(self.expanded)}")
        return out

    def to_record(self) -> dict:
        rec: dict = {"rule": self.rule.value, "position": self.position,
                     "law": to_text(self.law)}
        if self.cut is not None:
            rec["cut"] = self.cut.to_record()
        if self.deletion is not None:
            rec["derivation"] = self.deletion.to_record()
        if self.expanded is not None:
            rec["expanded"] = to_text(self.expanded)
        return rec


Step = tuple  # (Transition, Configuration)


def _shape(c: Configuration, position: int, kind) -> Formula:
    if not 0 <= position < len(c.gamma):
        raise WrongShapeError(f"no law at position {position}")
    a = c.gamma[position]
    if not isinstance(a, kind):
        raise WrongShapeError(f"law {to_text(a)} is not a {kind.__name__}")
    return a


# ---------------------------------------------------------------- numerator search

def _pool(c: Configuration, budget: Budget) -> list[Term]:
    return _pool_cached(c.delta + c.gamma, budget.term_depth)


@lru_cache(maxsize=10_000)
def _pool_cached(formulas: tuple, depth: int) -> list[Term]:
    return term_universe(formulas, depth)


def _taken_names(formulas: Iterable[Formula]) -> set[str]:
    taken: set[str] = set()
    for a in formulas:
        taken |= free_vars(a)
        taken |= {t.name for t in formula_terms(a) if isinstance(t, Const)}
    return taken


def deletion_of(delta: tuple, law: Formula, pool: tuple, context: tuple = ()) -> Deletion | None:
    """Context-free derivation deleting ``law`` under ``delta``, or None.

    ``pool`` supplies instances for r_forall; ``context`` lists the other
    formulas of the configuration, which eigenvariables must avoid.
    """
    return _deletion(delta, law, pool, context)


@lru_cache(maxsize=100_000)
def _deletion(delta: tuple, law: Formula, pool: tuple, context: tuple) -> Deletion | None:
    for lit in delta:
        if matches_rejection(law, lit):
            return Deletion(RuleTag.R_AXIOM, law, literal=lit)
    if isinstance(law, And):
        sub = _deletion(delta, law.left, pool, context)
        if sub is not None:
            return Deletion(RuleTag.R_AND_LEFT, law, subs=(sub,))
        sub = _deletion(delta, law.right, pool, context)
        if sub is not None:
            return Deletion(RuleTag.R_AND_RIGHT, law, subs=(sub,))
        return None
    if isinstance(law, Or):
        a = _deletion(delta, law.left, pool, context)
        b = _deletion(delta, law.right, pool, context) if a is not None else None
        return Deletion(RuleTag.R_OR, law, subs=(a, b)) if b is not None else None
    if isinstance(law, Imp):
        a = _deletion(delta, Not(law.left), pool, context)
        b = _deletion(delta, law.right, pool, context) if a is not None else None
        return Deletion(RuleTag.R_IMP, law, subs=(a, b)) if b is not None else None
    if isinstance(law, Forall):
        for t in pool:
            sub = _deletion(delta, substitute(law.body, law.var, t), pool, context)
            if sub is not None:
                return Deletion(RuleTag.R_FORALL, law, term=t, subs=(sub,))
        return None
    if isinstance(law, Exists):
        y = Var(fresh_name(law.var, _taken_names(delta + context + (law,))))
        sub = _deletion(delta, substitute(law.body, law.var, y), pool, context + (law,))
        if sub is not None:
            return Deletion(RuleTag.R_EXISTS, law, eigenvariable=y, subs=(sub,))
        return None
    if neg_expandable(law):
        expanded = neg_expand(law)
        sub = _deletion(delta, expanded, pool, context)
        if sub is not None:
            return Deletion(RuleTag.R_NEG, law, expanded=expanded, subs=(sub,))
    return None


def check_deletion(delta: tuple, d: Deletion, context: tuple = ()) -> bool:
    """Re-verify a deletion derivation rule by rule."""
    law = d.law
    if d.rule is RuleTag.R_AXIOM:
        return d.literal in delta and matches_rejection(law, d.literal) and not d.subs
    if d.rule in (RuleTag.R_AND_LEFT, RuleTag.R_AND_RIGHT):
        part = law.left if d.rule is RuleTag.R_AND_LEFT else law.right
        return (isinstance(law, And) and len(d.subs) == 1
                and alpha_key(d.subs[0].law) == alpha_key(part)
                and check_deletion(delta, d.subs[0], context))
    if d.rule is RuleTag.R_OR:
        return (isinstance(law, Or) and len(d.subs) == 2
                and alpha_key(d.subs[0].law) == alpha_key(law.left)
                and alpha_key(d.subs[1].law) == alpha_key(law.right)
                and all(check_deletion(delta, s, context) for s in d.subs))
    if d.rule is RuleTag.R_IMP:
        return (isinstance(law, Imp) and len(d.subs) == 2
                and alpha_key(d.subs[0].law) == alpha_key(Not(law.left))
                and alpha_key(d.subs[1].law) == alpha_key(law.right)
                and all(check_deletion(delta, s, context) for s in d.subs))
    if d.rule is RuleTag.R_FORALL:
        return (isinstance(law, Forall) and d.term is not None and len(d.subs) == 1
                and alpha_key(d.subs[0].law) == alpha_key(substitute(law.body, law.var, d.term))
                and check_deletion(delta, d.subs[0], context))
    if d.rule is RuleTag.R_EXISTS:
        y = d.eigenvariable
        if not (isinstance(law, Exists) and isinstance(y, Var) and len(d.subs) == 1):
            return False
        if y.name in _taken_names(delta + context + (law,)):
            return False
        return (alpha_key(d.subs[0].law) == alpha_key(substitute(law.body, law.var, y))
                and check_deletion(delta, d.subs[0], context + (law,)))
    if d.rule is RuleTag.R_NEG:
        return (neg_expandable(law) and d.expanded is not None
                and alpha_key(d.expanded) == alpha_key(neg_expand(law))
                and len(d.subs) == 1 and alpha_key(d.subs[0].law) == alpha_key(d.expanded)
                and check_deletion(delta, d.subs[0], context))
    return False


# ---------------------------------------------------------------- rule emitters

def step_axiom(c: Configuration) -> list[Step]:
    out = []
    for i, law in enumerate(c.gamma):
        for lit in c.delta:
            if matches_rejection(law, lit):
                d = Deletion(RuleTag.R_AXIOM, law, literal=lit)
                out.append((Transition(RuleTag.R_AXIOM, i, law, deletion=d), c.without(i)))
                break
    return out


def _numerator(c: Configuration, law: Formula, budget: Budget) -> Deletion | None:
    context = tuple(g for g in c.gamma if g is not law)
    return deletion_of(c.delta, law, tuple(_pool(c, budget)), context)


def step_and(c: Configuration, position: int, branch: str,
             budget: Budget = DEFAULT_BUDGET) -> list[Step]:
    law = _shape(c, position, And)
    part = law.left if branch == "left" else law.right
    tag = RuleTag.R_AND_LEFT if branch == "left" else RuleTag.R_AND_RIGHT
    sub = _numerator(c, part, budget)
    if sub is None:
        return []
    d = Deletion(tag, law, subs=(sub,))
    return [(Transition(tag, position, law, deletion=d), c.without(position))]


def _whole_law_step(c: Configuration, position: int, kind, tag: RuleTag,
                    budget: Budget) -> list[Step]:
    law = _shape(c, position, kind)
    d = _numerator(c, law, budget)
    if d is None:
        return []
    return [(Transition(tag, position, law, deletion=d), c.without(position))]


def step_or(c: Configuration, position: int, budget: Budget = DEFAULT_BUDGET) -> list[Step]:
    return _whole_law_step(c, position, Or, RuleTag.R_OR, budget)


def step_imp(c: Configuration, position: int, budget: Budget = DEFAULT_BUDGET) -> list[Step]:
    return _whole_law_step(c, position, Imp, RuleTag.R_IMP, budget)


def step_forall(c: Configuration, position: int, t: Term | None = None,
                budget: Budget = DEFAULT_BUDGET) -> list[Step]:
    """R-forall with instance ``t`` (or the first working term of the pool)."""
    law = _shape(c, position, Forall)
    if t is None:
        return _whole_law_step(c, position, Forall, RuleTag.R_FORALL, budget)
    context = tuple(g for g in c.gamma if g is not law)
    sub = deletion_of(c.delta, substitute(law.body, law.var, t),
                      tuple(_pool(c, budget)), context)
    if sub is None:
        return []
    d = Deletion(RuleTag.R_FORALL, law, term=t, subs=(sub,))
    return [(Transition(RuleTag.R_FORALL, position, law, deletion=d), c.without(position))]


def step_exists(c: Configuration, position: int, budget: Budget = DEFAULT_BUDGET) -> list[Step]:
    return _whole_law_step(c, position, Exists, RuleTag.R_EXISTS, budget)


def step_neg(c: Configuration, position: int) -> list[Step]:
    law = c.gamma[position] if 0 <= position < len(c.gamma) else None
    if law is None or not neg_expandable(law):
        raise WrongShapeError("R-neg needs a negated compound law")
    new = neg_expand(law)
    gamma = c.gamma[:position] + (new,) + c.gamma[position + 1:]
    return [(Transition(RuleTag.R_NEG, position, law, expanded=new),
             Configuration.of(c.delta, gamma))]


# ---------------------------------------------------------------- R-cut

def _lemma_candidates(c: Configuration, law: Formula, target: Formula,
                      budget: Budget) -> list[Formula]:
    out: list[Formula] = []
    seen = set()

    def add(b: Formula) -> None:
        k = alpha_key(b)
        if k not in seen and is_sentence(b):
            seen.add(k)
            out.append(b)

    add(target)
    add(law)
    for g in c.gamma:
        for s in subformulas(g):
            add(s)
    for at in ground_atoms(c.gamma, budget.term_depth)[:100]:
        add(at)
        add(Not(at))
    return out


def _partitions(others: tuple, position: int):
    """Gamma1 choices: the laws before the position first, then every
    subset by descending size (index order within a size)."""
    n = len(others)
    first = tuple(range(position))
    yield first
    for size in range(n, -1, -1):
        for idx in combinations(range(n), size):
            if idx != first:
                yield idx


def cut_witness(c: Configuration, position: int, budget: Budget = DEFAULT_BUDGET,
                notes: list | None = None) -> CutWitness | None:
    law = c.gamma[position]
    others = c.gamma[:position] + c.gamma[position + 1:]
    qf = all(is_quantifier_free(a) for a in c.gamma)
    for lit in c.delta:
        target = complement(lit)
        if qf and is_quantifier_free(target) and not qf_valid(c.gamma, target):
            continue
        lemmas = _lemma_candidates(c, law, target, budget)
        for idx in _partitions(others, position):
            g1 = tuple(others[i] for i in idx)
            g2 = tuple(a for i, a in enumerate(others) if i not in idx)
            for b in lemmas:
                w = _try_cut(c, law, lit, target, g1, g2, b, qf, budget, notes)
                if w is not None:
                    return w
    return None


def _try_cut(c, law, lit, target, g1, g2, lemma, qf, budget, notes):
    if qf and is_quantifier_free(lemma):
        if not qf_valid(g1 + (law,), lemma) or not qf_valid((lemma,) + g2, target):
            return None
    left = prove(Sequent(g1 + (law,), lemma), budget)
    if left.status is Status.UNKNOWN and notes is not None:
        notes.append(f"r_cut on {to_text(law)} with lemma {to_text(lemma)}: {left.note}")
    if left.status is not Status.PROVED:
        return None
    if not is_necessary_premise(law, left.tree, [law], lemma):
        return None
    right = prove(Sequent((lemma,) + g2, target), budget)
    if right.status is Status.UNKNOWN and notes is not None:
        notes.append(f"r_cut on {to_text(law)} from lemma {to_text(lemma)}: {right.note}")
    if right.status is not Status.PROVED:
        return None
    if not is_necessary_premise(lemma, right.tree, [lemma], target):
        return None
    if not matches_rejection(target, lit):
        return None
    return CutWitness(g1, g2, lemma, target, lit, left.tree, right.tree)


def step_cut(c: Configuration, budget: Budget = DEFAULT_BUDGET,
             notes: list | None = None) -> list[Step]:
    out = []
    for i, law in enumerate(c.gamma):
        w = cut_witness(c, i, budget, notes)
        if w is not None:
            out.append((Transition(RuleTag.R_CUT, i, law, cut=w), c.without(i)))
    return out


# ---------------------------------------------------------------- union

def _eliminations_at(c: Configuration, i: int, budget: Budget, notes: list | None) -> list[Step]:
    law = c.gamma[i]
    out: list[Step] = []
    for lit in c.delta:
        if matches_rejection(law, lit):
            d = Deletion(RuleTag.R_AXIOM, law, literal=lit)
            out.append((Transition(RuleTag.R_AXIOM, i, law, deletion=d), c.without(i)))
            break
    w = cut_witness(c, i, budget, notes)
    if w is not None:
        out.append((Transition(RuleTag.R_CUT, i, law, cut=w), c.without(i)))
    if isinstance(law, And):
        out += step_and(c, i, "left", budget) + step_and(c, i, "right", budget)
    elif isinstance(law, Or):
        out += step_or(c, i, budget)
    elif isinstance(law, Imp):
        out += step_imp(c, i, budget)
    elif isinstance(law, Forall):
        out += step_forall(c, i, None, budget)
    elif isinstance(law, Exists):
        out += step_exists(c, i, budget)
    return out


def enumerate_steps(c: Configuration, budget: Budget = DEFAULT_BUDGET,
                    notes: list | None = None) -> list[Step]:
    """Every applicable non-structural step, ordered by (rule, position) and
    deduplicated on (rule, position, result)."""
    steps: list[Step] = []
    for i in range(len(c.gamma)):
        steps += _eliminations_at(c, i, budget, notes)
        if neg_expandable(c.gamma[i]):
            steps += step_neg(c, i)
    seen = set()
    out = []
    for t, nc in sorted(steps, key=lambda s: (_ORDER[s[0].rule], s[0].position)):
        k = (t.rule, t.position, nc.key)
        if k not in seen:
            seen.add(k)
            out.append((t, nc))
    return out


def is_termination(c: Configuration, budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """``yes`` when no law can be eliminated.  R-neg rewrites a law without
    removing anything and is not counted."""
    notes: list = []
    for i in range(len(c.gamma)):
        if _eliminations_at(c, i, budget, notes):
            return Verdict.NO
    return Verdict.UNKNOWN if notes else Verdict.YES


# ---------------------------------------------------------------- traces

@dataclass(frozen=True)
class DerivationTrace:
    start: Configuration
    steps: tuple = ()   # of (Transition, Configuration)

    @property
    def end(self) -> Configuration:
        return self.steps[-1][1] if self.steps else self.start

    def render(self) -> str:
        lines = [f"start: {self.start}"]
        for n, (t, nc) in enumerate(self.steps, start=1):
            desc = t.describe()
            lines.append(f"{n}. {desc[0]}")
            lines.extend("   " + d for d in desc[1:])
            lines.append(f"   => {nc}")
        return "\n".join(lines)

    def to_record(self) -> dict:
        return {
            "start": configuration_record(self.start),
            "steps": [dict(t.to_record(), result=configuration_record(nc))
                      for t, nc in self.steps],
        }


def configuration_record(c: Configuration) -> dict:
    return {"delta": [to_text(d) for d in c.delta], "gamma": [to_text(g) for g in c.gamma]}


def check_transition(c: Configuration, t: Transition, result: Configuration,
                     budget: Budget = DEFAULT_BUDGET) -> bool:
    """Re-verify one recorded step, witnesses included."""
    if not 0 <= t.position < len(c.gamma) or c.gamma[t.position] != t.law:
        return False
    if t.rule is RuleTag.R_NEG:
        if not neg_expandable(t.law) or t.expanded != neg_expand(t.law):
            return False
        gamma = c.gamma[:t.position] + (t.expanded,) + c.gamma[t.position + 1:]
        return Configuration.of(c.delta, gamma).key == result.key
    if result.key != c.without(t.position).key:
        return False
    if t.rule is RuleTag.R_CUT:
        w = t.cut
        if w is None or w.literal not in c.delta or not matches_rejection(w.target, w.literal):
            return False
        others = c.gamma[:t.position] + c.gamma[t.position + 1:]
        if sorted(map(to_text, w.gamma1 + w.gamma2)) != sorted(map(to_text, others)):
            return False
        for tree, ante, goal in ((w.left, w.gamma1 + (t.law,), w.lemma),
                                 (w.right, (w.lemma,) + w.gamma2, w.target)):
            if not check_proof_tree(tree):
                return False
            if tree.root.antecedent != ante or alpha_key(tree.root.succedent) != alpha_key(goal):
                return False
        return (is_necessary_premise(t.law, w.left, [t.law], w.lemma)
                and is_necessary_premise(w.lemma, w.right, [w.lemma], w.target))
    d = t.deletion
    if d is None or d.rule is not t.rule or d.law != t.law:
        return False
    context = tuple(g for g in c.gamma if g is not t.law)
    return check_deletion(c.delta, d, context)


def replay(trace: DerivationTrace, budget: Budget = DEFAULT_BUDGET) -> bool:
    cur = trace.start
    for t, nc in trace.steps:
        if not check_transition(cur, t, nc, budget):
            return False
        cur = nc
    return True


# ---------------------------------------------------------------- exploration

@dataclass
class Exploration:
    start: Configuration
    terminations: list          # (Configuration, DerivationTrace)
    exhausted: bool
    visited: int
    unknown_notes: list

    def termination_sets(self) -> list[tuple]:
        return [c.gamma for c, _ in self.terminations]


def explore_terminations(c: Configuration, budget: Budget = DEFAULT_BUDGET,
                         limit: int = 2000) -> Exploration:
    """Breadth-first search of the transition graph from ``c`` over at most
    ``limit`` distinct configurations."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    parent: dict = {c.key: None}
    configs = {c.key: c}
    queue = deque([c])
    terminations = []
    notes_all: list = []
    exhausted = True
    while queue:
        cur = queue.popleft()
        notes: list = []
        steps = enumerate_steps(cur, budget, notes)
        if notes:
            notes_all.extend(f"{cur}: {n}" for n in notes)
        if not any(t.deletes for t, _ in steps):
            if not notes:
                terminations.append((cur, _trace(c, cur.key, parent, configs)))
        for t, nc in steps:
            if nc.key in parent:
                continue
            if len(parent) >= limit:
                exhausted = False
                continue
            parent[nc.key] = (cur.key, t)
            configs[nc.key] = nc
            queue.append(nc)
    return Exploration(c, terminations, exhausted, len(parent), notes_all)


def _trace(start: Configuration, key, parent: dict, configs: dict) -> DerivationTrace:
    steps = []
    while parent[key] is not None:
        prev, t = parent[key]
        steps.append((t, configs[key]))
        key = prev
    steps.reverse()
    return DerivationTrace(start, tuple(steps))
