"""Budgeted proof search in a cut-free, single-succedent Gentzen system.

Rules (conclusion <- premises; ``G`` is the antecedent, ``C`` the goal):

    axiom      G, P |- P
    refl       G |- t = t
    cong       G |- P      P atomic and ground-entailed by the equalities
                           and atoms of G under congruence closure
    and-right  G |- A & B       <- G |- A ;  G |- B
    or-right-1 G |- A | B       <- G |- A
    or-right-2 G |- A | B       <- G |- B
    imp-right  G |- A -> B      <- G, A |- B
    not-right  G |- ~A          <- G, A |- ~A
    all-right  G |- forall x.A  <- G |- A[y/x]          y eigenvariable
    ex-right   G |- exists x.A  <- G |- A[t/x]
    and-left   G, A & B |- C    <- G, A, B |- C
    or-left    G, A | B |- C    <- G, A |- C ;  G, B |- C
    imp-left   G, A -> B |- C   <- G, A -> B |- A ;  G, B |- C
    not-left   G, ~A |- C       <- G, ~A |- A
    all-left   G, forall x.A |- C  <- G, forall x.A, A[t/x] |- C
    ex-left    G, exists x.A |- C  <- G, A[y/x] |- C     y eigenvariable
    classical  G |- C           <- G, ~C |- C

Antecedents are sets: a formula already present (up to renaming of bound
variables) is not added twice.  The ``classical`` rule makes the system
complete for classical logic despite the single succedent.

Quantifier-free sequents are decided semantically first (truth tables
plus congruence closure), and the search only enters premises that are
valid, so it never returns ``unknown`` there.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Sequence

from . import congruence
from .models import FiniteModel, evaluate, find_model, term_universe
from .syntax import (
    And, App, Atom, Const, Eq, Exists, Forall, Formula, Imp, Not, Or, Term, Var,
    alpha_key, close_free_vars, formula_terms, free_vars, fresh_name, is_atomic,
    is_quantifier_free, literal_key, substitute, subterms, to_text,
)


class Rule(str, Enum):
    AXIOM = "axiom"
    REFL = "refl"
    CONG = "cong"
    AND_R = "and-right"
    OR_R1 = "or-right-1"
    OR_R2 = "or-right-2"
    IMP_R = "imp-right"
    NOT_R = "not-right"
    FORALL_R = "forall-right"
    EXISTS_R = "exists-right"
    AND_L = "and-left"
    OR_L = "or-left"
    IMP_L = "imp-left"
    NOT_L = "not-left"
    FORALL_L = "forall-left"
    EXISTS_L = "exists-left"
    CLASSICAL = "classical"


LEAF_RULES = {Rule.AXIOM, Rule.REFL, Rule.CONG}
LEFT_RULES = {Rule.AND_L, Rule.OR_L, Rule.IMP_L, Rule.NOT_L, Rule.FORALL_L, Rule.EXISTS_L}
RIGHT_RULES = {Rule.AND_R, Rule.OR_R1, Rule.OR_R2, Rule.IMP_R, Rule.NOT_R,
               Rule.FORALL_R, Rule.EXISTS_R, Rule.CLASSICAL}
EIGEN_RULES = {Rule.FORALL_R, Rule.EXISTS_L}

# premises whose succedent is the conclusion's succedent carried unchanged
CONTEXT_GOAL_CHILDREN = {
    Rule.AND_L: (0,), Rule.OR_L: (0, 1), Rule.IMP_L: (1,),
    Rule.FORALL_L: (0,), Rule.EXISTS_L: (0,),
}


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple
    succedent: Formula

    def __str__(self) -> str:
        left = ", ".join(to_text(a) for a in self.antecedent)
        return f"{left} |- {to_text(self.succedent)}" if left else f"|- {to_text(self.succedent)}"

    def formulas(self) -> list[Formula]:
        return list(self.antecedent) + [self.succedent]


@dataclass(frozen=True)
class Budget:
    max_depth: int = 40
    max_instantiations_per_quantifier: int = 4
    term_depth: int = 2
    model_size_cap: int = 3
    max_nodes: int = 20_000

    def __post_init__(self) -> None:
        for name in ("max_depth", "max_instantiations_per_quantifier",
                     "model_size_cap", "max_nodes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget field {name} must be positive")
        if self.term_depth < 0:
            raise ValueError("budget field term_depth must be non-negative")


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True, eq=False)
class ProofTree:
    """One node of a derivation.

    ``principal`` is the antecedent index of the principal formula for left
    rules.  ``side`` lists ``(child, "L" | "R", index)`` positions of the
    side formulas in the premises.  ``support`` lists the antecedent indices
    that close a leaf.  ``witness`` is the instantiating term for
    forall-left / exists-right or the eigenvariable for forall-right /
    exists-left.
    """

    root: Sequent
    rule: Rule
    principal: int | None = None
    side: tuple = ()
    children: tuple = ()
    witness: Term | None = None
    support: tuple = ()

    def nodes(self) -> list["ProofTree"]:
        """Pre-order; node ids used elsewhere are 1-based positions here."""
        out = [self]
        for c in self.children:
            out.extend(c.nodes())
        return out

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def render(self) -> str:
        lines: list[str] = []
        counter = [0]

        def walk(t: ProofTree, indent: int) -> None:
            counter[0] += 1
            extra = ""
            if t.witness is not None:
                extra = f"  [{'y' if t.rule in EIGEN_RULES else 't'} = {t.witness}]"
            if t.principal is not None:
                extra += f"  principal #{t.principal}"
            lines.append(f"{'  ' * indent}({counter[0]}) {t.rule.value}: {t.root}{extra}")
            for c in t.children:
                walk(c, indent + 1)

        walk(self, 0)
        return "\n".join(lines)

    def to_records(self) -> list[dict]:
        records: list[dict] = []

        def walk(t: ProofTree) -> int:
            node_id = len(records) + 1
            rec = {
                "id": node_id,
                "rule": t.rule.value,
                "antecedent": [to_text(a) for a in t.root.antecedent],
                "succedent": to_text(t.root.succedent),
                "principal": t.principal,
                "side": [list(s) for s in t.side],
                "support": list(t.support),
                "witness": None if t.witness is None else str(t.witness),
                "children": [],
            }
            records.append(rec)
            rec["children"] = [walk(c) for c in t.children]
            return node_id

        walk(self)
        return records


class Status(str, Enum):
    PROVED = "proved"
    DISPROVED = "disproved"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ProofResult:
    status: Status
    tree: ProofTree | None = None
    model: FiniteModel | None = field(default=None, compare=False)
    note: str = ""

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED


# ---------------------------------------------------------------- schema

def _index_of(gamma: Sequence[Formula], a: Formula) -> int | None:
    k = alpha_key(a)
    for i, g in enumerate(gamma):
        if g == a or alpha_key(g) == k:
            return i
    return None


def _extend(gamma: tuple, new: Sequence[Formula], drop: int | None = None) -> tuple:
    out = [g for i, g in enumerate(gamma) if i != drop]
    for a in new:
        if _index_of(out, a) is None:
            out.append(a)
    return tuple(out)


def premises_of(rule: Rule, seq: Sequent, principal: int | None,
                witness: Term | None) -> list[tuple[tuple, Formula, list]]:
    """Premises demanded by ``rule`` applied to ``seq``.

    Returns ``(antecedent, succedent, sides)`` per premise where ``sides``
    lists ``("L" | "R", formula)``.  Raises ValueError when the rule does not
    fit the sequent.
    """
    g, c = seq.antecedent, seq.succedent
    if rule in LEAF_RULES:
        return []
    if rule is Rule.CLASSICAL:
        return [(_extend(g, [Not(c)]), c, [("L", Not(c)), ("R", c)])]
    if rule in RIGHT_RULES:
        if rule is Rule.AND_R and isinstance(c, And):
            return [(g, c.left, [("R", c.left)]), (g, c.right, [("R", c.right)])]
        if rule is Rule.OR_R1 and isinstance(c, Or):
            return [(g, c.left, [("R", c.left)])]
        if rule is Rule.OR_R2 and isinstance(c, Or):
            return [(g, c.right, [("R", c.right)])]
        if rule is Rule.IMP_R and isinstance(c, Imp):
            return [(_extend(g, [c.left]), c.right, [("L", c.left), ("R", c.right)])]
        if rule is Rule.NOT_R and isinstance(c, Not):
            return [(_extend(g, [c.body]), c, [("L", c.body), ("R", c)])]
        if rule is Rule.FORALL_R and isinstance(c, Forall) and isinstance(witness, Var):
            body = substitute(c.body, c.var, witness)
            return [(g, body, [("R", body)])]
        if rule is Rule.EXISTS_R and isinstance(c, Exists) and witness is not None:
            body = substitute(c.body, c.var, witness)
            return [(g, body, [("R", body)])]
        raise ValueError(f"{rule.value} does not apply to succedent {c}")
    if principal is None or not 0 <= principal < len(g):
        raise ValueError(f"{rule.value} needs a principal antecedent position")
    p = g[principal]
    if rule is Rule.AND_L and isinstance(p, And):
        return [(_extend(g, [p.left, p.right], drop=principal), c,
                 [("L", p.left), ("L", p.right)])]
    if rule is Rule.OR_L and isinstance(p, Or):
        return [(_extend(g, [p.left], drop=principal), c, [("L", p.left)]),
                (_extend(g, [p.right], drop=principal), c, [("L", p.right)])]
    if rule is Rule.IMP_L and isinstance(p, Imp):
        return [(g, p.left, [("R", p.left)]),
                (_extend(g, [p.right], drop=principal), c, [("L", p.right)])]
    if rule is Rule.NOT_L and isinstance(p, Not):
        return [(g, p.body, [("R", p.body)])]
    if rule is Rule.FORALL_L and isinstance(p, Forall) and witness is not None:
        inst = substitute(p.body, p.var, witness)
        return [(_extend(g, [inst]), c, [("L", inst)])]
    if rule is Rule.EXISTS_L and isinstance(p, Exists) and isinstance(witness, Var):
        inst = substitute(p.body, p.var, witness)
        return [(_extend(g, [inst], drop=principal), c, [("L", inst)])]
    raise ValueError(f"{rule.value} does not apply to antecedent formula {p}")


def _resolve_sides(children: Sequence[Sequent], spec: list[list]) -> tuple:
    out = []
    for k, (child, sides) in enumerate(zip(children, spec)):
        for where, formula in sides:
            if where == "R":
                out.append((k, "R", 0))
            else:
                out.append((k, "L", _index_of(child.antecedent, formula)))
    return tuple(out)


# ---------------------------------------------------------------- checking

@dataclass(frozen=True)
class TreeCheck:
    ok: bool
    node: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _same_set(xs: Sequence[Formula], ys: Sequence[Formula]) -> bool:
    return {alpha_key(a) for a in xs} == {alpha_key(b) for b in ys}


def _check_node(t: ProofTree) -> str | None:
    seq = t.root
    g, c = seq.antecedent, seq.succedent
    if t.rule is Rule.AXIOM:
        if t.children:
            return "axiom node has premises"
        if len(t.support) != 1 or not 0 <= t.support[0] < len(g):
            return "axiom must name the matching antecedent formula"
        if alpha_key(g[t.support[0]]) != alpha_key(c):
            return "axiom succedent does not occur in the antecedent"
        return None
    if t.rule is Rule.REFL:
        if t.children or not (isinstance(c, Eq) and c.lhs == c.rhs):
            return "refl leaf must conclude t = t"
        return None
    if t.rule is Rule.CONG:
        if t.children or not is_atomic(c):
            return "cong leaf must conclude an atomic formula"
        if not all(0 <= i < len(g) for i in t.support):
            return "cong support out of range"
        if not congruence.entails([g[i] for i in t.support], c):
            return "cong support does not entail the succedent"
        return None
    if t.rule in EIGEN_RULES:
        if not isinstance(t.witness, Var):
            return "eigenvariable missing"
        occurring = set()
        for a in seq.formulas():
            occurring |= free_vars(a)
        if t.witness.name in occurring:
            return f"eigenvariable {t.witness} occurs in the conclusion"
    try:
        expected = premises_of(t.rule, seq, t.principal, t.witness)
    except ValueError as exc:
        return str(exc)
    if len(expected) != len(t.children):
        return f"{t.rule.value} expects {len(expected)} premise(s), found {len(t.children)}"
    for k, ((eg, ec, sides), child) in enumerate(zip(expected, t.children)):
        if not _same_set(eg, child.root.antecedent):
            return f"premise {k + 1} antecedent does not match the rule"
        if alpha_key(ec) != alpha_key(child.root.succedent):
            return f"premise {k + 1} succedent does not match the rule"
    resolved = _resolve_sides([ch.root for ch in t.children], [s for _, _, s in expected])
    if tuple(resolved) != tuple(t.side):
        return "side formula positions do not match the rule"
    return None


def check_proof_tree(t: ProofTree) -> TreeCheck:
    """Validate every node against the rule schemas; leaves must be axioms."""
    for node_id, node in enumerate(t.nodes(), start=1):
        problem = _check_node(node)
        if problem is not None:
            return TreeCheck(False, node_id, problem)
    return TreeCheck(True)


# ---------------------------------------------------------------- semantics of QF sequents

def _letter_key(a: Formula):
    return literal_key(a)


def _compile(a: Formula, index: dict):
    if is_atomic(a):
        k = _letter_key(a)
        if k not in index:
            index[k] = (len(index), a)
        i = index[k][0]
        return lambda row: row[i]
    if isinstance(a, Not):
        f = _compile(a.body, index)
        return lambda row: not f(row)
    l, r = _compile(a.left, index), _compile(a.right, index)
    if isinstance(a, And):
        return lambda row: l(row) and r(row)
    if isinstance(a, Or):
        return lambda row: l(row) or r(row)
    return lambda row: (not l(row)) or r(row)


def _needs_theory(atoms: list[Formula]) -> bool:
    return any(isinstance(a, Eq) for a in atoms)


def _falsifying_assignment(antecedent: Sequence[Formula], goal: Formula | None):
    """A theory-consistent assignment making every antecedent formula true
    and ``goal`` false, as ``(true literals)``; None when there is none."""
    index: dict = {}
    fs = [_compile(a, index) for a in antecedent]
    fg = _compile(goal, index) if goal is not None else (lambda row: False)
    atoms = [a for _, a in sorted(index.values(), key=lambda v: v[0])]
    theory = _needs_theory(atoms)
    for row in product((True, False), repeat=len(atoms)):
        if fg(row) or not all(f(row) for f in fs):
            continue
        lits = [a if v else Not(a) for a, v in zip(atoms, row)]
        if not theory or congruence.ground_consistent(lits):
            return lits
    return None


@lru_cache(maxsize=200_000)
def _qf_valid(antecedent: tuple, goal: Formula) -> bool:
    return _falsifying_assignment(antecedent, goal) is None


def qf_valid(antecedent: Sequence[Formula], goal: Formula) -> bool:
    return _qf_valid(tuple(antecedent), goal)


def qf_satisfiable(formulas: Sequence[Formula]) -> bool:
    return _falsifying_assignment(list(formulas), None) is not None


def model_from_literals(lits: Sequence[Formula]) -> FiniteModel:
    """A finite model of a congruence-consistent set of ground literals.
    Free variables are interpreted as constants of the same name."""
    lits = [close_free_vars(l) for l in lits]
    eqs = [l for l in lits if isinstance(l, Eq)]
    terms: list[Term] = []
    for l in lits:
        for t in formula_terms(l):
            for s in subterms(t):
                if s not in terms:
                    terms.append(s)
    cc = congruence.closure_of(eqs, terms)
    reps: list[Term] = []
    for t in terms:
        r = cc.find(t)
        if r not in reps:
            reps.append(r)
    elem = {r: i for i, r in enumerate(reps)}
    size = max(1, len(reps))

    def value(t: Term) -> int:
        return elem[cc.find(t)]

    constants = {t.name: value(t) for t in terms if isinstance(t, Const)}
    arities: dict[str, int] = {}
    for t in terms:
        if isinstance(t, App):
            arities[t.fn] = len(t.args)
    functions = {}
    for fn, k in arities.items():
        table = {args: 0 for args in product(range(size), repeat=k)}
        for t in terms:
            if isinstance(t, App) and t.fn == fn:
                table[tuple(value(a) for a in t.args)] = value(t)
        functions[fn] = table
    predicates: dict[str, set] = {}
    for l in lits:
        body = l.body if isinstance(l, Not) else l
        if isinstance(body, Atom):
            predicates.setdefault(body.pred, set())
            if not isinstance(l, Not):
                predicates[body.pred].add(tuple(value(a) for a in body.args))
    return FiniteModel(size, constants, functions,
                       {p: frozenset(v) for p, v in predicates.items()})


# ---------------------------------------------------------------- search

@dataclass
class _Candidate:
    rule: Rule
    principal: int | None
    witness: Term | None
    premises: list  # (antecedent, succedent, sides)


class _Search:
    def __init__(self, budget: Budget) -> None:
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        self.depth_cut = False
        self.memo: dict = {}

    def run(self, seq: Sequent) -> ProofTree | None:
        if all(is_quantifier_free(a) for a in seq.formulas()):
            # semantic pruning keeps every explored premise valid, so the
            # shallow passes of iterative deepening would only add cutoffs
            return self.prove(seq.antecedent, seq.succedent, self.budget.max_depth,
                              frozenset(), {})
        for limit in range(1, self.budget.max_depth + 1):
            self.depth_cut = False
            tree = self.prove(seq.antecedent, seq.succedent, limit, frozenset(), {})
            if tree is not None or self.exhausted or not self.depth_cut:
                return tree
        return None

    def prove(self, gamma: tuple, goal: Formula, depth: int,
              path: frozenset, inst: dict) -> ProofTree | None:
        hit = self.memo.get((gamma, goal))
        if hit is not None and hit.height() <= depth:
            return hit
        key = (frozenset(alpha_key(a) for a in gamma), alpha_key(goal))
        if key in path:
            return None
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            self.exhausted = True
            return None
        seq = Sequent(gamma, goal)
        qf = all(is_quantifier_free(a) for a in gamma) and is_quantifier_free(goal)

        i = _index_of(gamma, goal)
        if i is not None:
            return self._store(ProofTree(seq, Rule.AXIOM, support=(i,)))
        if isinstance(goal, Eq) and goal.lhs == goal.rhs:
            return self._store(ProofTree(seq, Rule.REFL))
        if is_atomic(goal) and any(isinstance(a, Eq) for a in gamma):
            support = congruence.explain(gamma, goal)
            if support is not None:
                return self._store(ProofTree(seq, Rule.CONG, support=support))
        if depth <= 1:
            self.depth_cut = True
            return None

        inner = path | {key}
        for cand in self.candidates(gamma, goal, inst):
            if qf and not all(qf_valid(pg, pc) for pg, pc, _ in cand.premises):
                continue
            subtrees = []
            for pg, pc, _ in cand.premises:
                child_inst = inst
                if cand.rule is Rule.FORALL_L:
                    k = alpha_key(gamma[cand.principal])
                    child_inst = dict(inst)
                    child_inst[k] = child_inst.get(k, 0) + 1
                t = self.prove(pg, pc, depth - 1, inner, child_inst)
                if t is None:
                    break
                subtrees.append(t)
            else:
                children = tuple(subtrees)
                side = _resolve_sides([c.root for c in children],
                                      [s for _, _, s in cand.premises])
                return self._store(ProofTree(seq, cand.rule, cand.principal, side,
                                             children, cand.witness))
            if self.exhausted:
                return None
        return None

    def _store(self, t: ProofTree) -> ProofTree:
        key = (t.root.antecedent, t.root.succedent)
        old = self.memo.get(key)
        if old is None or old.height() > t.height():
            self.memo[key] = t
        return t

    def candidates(self, gamma: tuple, goal: Formula, inst: dict):
        seq = Sequent(gamma, goal)

        def make(rule, principal=None, witness=None):
            return _Candidate(rule, principal, witness,
                              premises_of(rule, seq, principal, witness))

        # invertible right rules
        if isinstance(goal, And):
            yield make(Rule.AND_R)
        elif isinstance(goal, Imp):
            yield make(Rule.IMP_R)
        elif isinstance(goal, Not) and _index_of(gamma, goal.body) is None:
            yield make(Rule.NOT_R)
        elif isinstance(goal, Forall):
            yield make(Rule.FORALL_R, witness=self.eigenvariable(seq, goal.var))
        # invertible left rules
        for i, a in enumerate(gamma):
            if isinstance(a, And):
                yield make(Rule.AND_L, i)
            elif isinstance(a, Exists):
                yield make(Rule.EXISTS_L, i, self.eigenvariable(seq, a.var))
        for i, a in enumerate(gamma):
            if isinstance(a, Or):
                yield make(Rule.OR_L, i)
        # right rules with a choice
        if isinstance(goal, Or):
            yield make(Rule.OR_R1)
            yield make(Rule.OR_R2)
        elif isinstance(goal, Exists):
            pool = self.pool(seq)[: self.budget.max_instantiations_per_quantifier]
            for t in pool:
                yield make(Rule.EXISTS_R, witness=t)
        # left rules with a choice
        for i, a in enumerate(gamma):
            if isinstance(a, Imp):
                yield make(Rule.IMP_L, i)
            elif isinstance(a, Not) and alpha_key(a.body) != alpha_key(goal):
                yield make(Rule.NOT_L, i)
            elif isinstance(a, Forall):
                used = inst.get(alpha_key(a), 0)
                if used >= self.budget.max_instantiations_per_quantifier:
                    continue
                for t in self.pool(seq):
                    if _index_of(gamma, substitute(a.body, a.var, t)) is None:
                        yield make(Rule.FORALL_L, i, t)
        if _index_of(gamma, Not(goal)) is None:
            yield make(Rule.CLASSICAL)

    def pool(self, seq: Sequent) -> list[Term]:
        return _pool(tuple(seq.formulas()), self.budget.term_depth)

    @staticmethod
    def eigenvariable(seq: Sequent, base: str) -> Var:
        taken: set[str] = set()
        for a in seq.formulas():
            taken |= free_vars(a)
            for t in formula_terms(a):
                if isinstance(t, Const):
                    taken.add(t.name)
        return Var(fresh_name(base, taken))


@lru_cache(maxsize=50_000)
def _pool(formulas: tuple, depth: int) -> list[Term]:
    eigen = sorted({v for a in formulas for v in free_vars(a)})
    return term_universe(formulas, depth, extra=[Var(v) for v in eigen])


# ---------------------------------------------------------------- entry points

def prove(seq: Sequent, budget: Budget = DEFAULT_BUDGET) -> ProofResult:
    """Search for a proof of ``seq``; otherwise look for a countermodel."""
    return _prove(seq, budget)


@lru_cache(maxsize=100_000)
def _prove(seq: Sequent, budget: Budget) -> ProofResult:
    qf = all(is_quantifier_free(a) for a in seq.formulas())
    if qf:
        lits = _falsifying_assignment(seq.antecedent, seq.succedent)
        if lits is not None:
            return ProofResult(Status.DISPROVED, model=model_from_literals(lits))
    else:
        m = find_model(seq.antecedent, budget.model_size_cap, falsify=seq.succedent)
        if m is not None:
            return ProofResult(Status.DISPROVED, model=m)
    search = _Search(budget)
    tree = search.run(seq)
    if tree is not None:
        return ProofResult(Status.PROVED, tree=tree)
    if search.exhausted:
        note = f"node budget of {budget.max_nodes} exhausted"
    elif search.depth_cut:
        note = f"depth budget of {budget.max_depth} exhausted"
    else:
        note = "search space exhausted within the instantiation budget"
    return ProofResult(Status.UNKNOWN, note=note)


def sequent(antecedent: Sequence[Formula], succedent: Formula) -> Sequent:
    return Sequent(tuple(antecedent), succedent)


def countermodel_ok(seq: Sequent, m: FiniteModel) -> bool:
    closed = [close_free_vars(a) for a in seq.formulas()]
    return all(evaluate(m, a) for a in closed[:-1]) and not evaluate(m, closed[-1])
