"""Occurrence-level premise relation over proof trees.

Nodes are numbered 1, 2, ... in pre-order; an occurrence is a formula
position ``(node, "L" | "R", index)`` with index 0 for the succedent.

Base edges, each labelled with the clause that produced it:

``axiom``           leaf: the matching antecedent occurrence -> succedent
                    (for congruence leaves, every supporting literal)
``right``           right rule: side formulas in the premises -> conclusion succedent
``left-principal``  left rule: principal -> side formulas in the premises
``left-side``       left rule: side formulas -> conclusion succedent
``context``         an occurrence carried unchanged from conclusion to premise
                    is the same formula occurrence: conclusion antecedent ->
                    premise antecedent, and premise succedent -> conclusion
                    succedent when a left rule leaves the succedent alone

The premise relation is the reflexive-transitive closure of these edges.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .identity import sentence_equal
from .prover import (
    CONTEXT_GOAL_CHILDREN, LEFT_RULES, RIGHT_RULES, ProofTree, Rule, check_proof_tree,
)
from .syntax import Formula, alpha_key, to_text


class InvalidTreeError(ValueError):
    pass


class FormulaNotInRootError(ValueError):
    pass


class Occurrence(NamedTuple):
    node: int
    side: str
    index: int

    def __str__(self) -> str:
        return f"node#{self.node} [{self.side},{self.index}]"


class PremiseEdge(NamedTuple):
    source: Occurrence
    target: Occurrence
    clause: str


@dataclass(frozen=True)
class PremiseMarking:
    tree: ProofTree
    nodes: tuple            # pre-order node list; node id k is nodes[k - 1]
    edges: tuple            # sorted PremiseEdge tuple, base relation only

    def formula_at(self, occ: Occurrence) -> Formula:
        node = self.nodes[occ.node - 1]
        if occ.side == "R":
            return node.root.succedent
        return node.root.antecedent[occ.index]

    def premises_of(self, target: Occurrence) -> set[Occurrence]:
        """Every occurrence that is a premise of ``target`` (reflexive)."""
        back: dict[Occurrence, list[Occurrence]] = defaultdict(list)
        for e in self.edges:
            back[e.target].append(e.source)
        seen = {target}
        queue = deque([target])
        while queue:
            cur = queue.popleft()
            for src in back[cur]:
                if src not in seen:
                    seen.add(src)
                    queue.append(src)
        return seen

    def closure(self) -> set[tuple[Occurrence, Occurrence]]:
        """All pairs (p, q) with p a premise of q, excluding p == q."""
        occs = {e.source for e in self.edges} | {e.target for e in self.edges}
        pairs = set()
        for q in occs:
            for p in self.premises_of(q):
                if p != q:
                    pairs.add((p, q))
        return pairs

    def dump(self) -> str:
        lines = []
        for e in self.edges:
            lines.append(f"{e.source} {to_text(self.formula_at(e.source))}  ->  "
                         f"{e.target} {to_text(self.formula_at(e.target))}")
        return "\n".join(lines)


def _index_in(antecedent: Sequence[Formula], a: Formula) -> int | None:
    k = alpha_key(a)
    for i, g in enumerate(antecedent):
        if alpha_key(g) == k:
            return i
    return None


def _drops_principal(rule: Rule, child: int) -> bool:
    if rule in (Rule.AND_L, Rule.OR_L, Rule.EXISTS_L):
        return True
    return rule is Rule.IMP_L and child == 1


def premise_closure(t: ProofTree, check: bool = True) -> PremiseMarking:
    """Mark the base premise edges of ``t`` (see module docstring)."""
    if check:
        verdict = check_proof_tree(t)
        if not verdict:
            raise InvalidTreeError(f"node {verdict.node}: {verdict.message}")
    nodes = t.nodes()
    ids = {id(n): k for k, n in enumerate(nodes, start=1)}
    edges: set[PremiseEdge] = set()
    for k, node in enumerate(nodes, start=1):
        goal = Occurrence(k, "R", 0)
        kids = [ids[id(c)] for c in node.children]
        sides = [Occurrence(kids[c], s, i) for c, s, i in node.side]
        if node.rule in (Rule.AXIOM, Rule.CONG):
            for i in node.support:
                edges.add(PremiseEdge(Occurrence(k, "L", i), goal, "axiom"))
        elif node.rule in RIGHT_RULES:
            for s in sides:
                edges.add(PremiseEdge(s, goal, "right"))
        elif node.rule in LEFT_RULES:
            principal = Occurrence(k, "L", node.principal)
            for s in sides:
                edges.add(PremiseEdge(principal, s, "left-principal"))
                edges.add(PremiseEdge(s, goal, "left-side"))
            for c in CONTEXT_GOAL_CHILDREN.get(node.rule, ()):
                edges.add(PremiseEdge(Occurrence(kids[c], "R", 0), goal, "context"))
        for c, child in enumerate(node.children):
            for i, a in enumerate(node.root.antecedent):
                if i == node.principal and _drops_principal(node.rule, c):
                    continue
                j = _index_in(child.root.antecedent, a)
                if j is not None:
                    edges.add(PremiseEdge(Occurrence(k, "L", i),
                                          Occurrence(kids[c], "L", j), "context"))
    return PremiseMarking(t, tuple(nodes), tuple(sorted(edges)))


def necessary_premises(t: ProofTree, laws: Iterable[Formula], goal: Formula,
                       marking: PremiseMarking | None = None) -> list[Formula]:
    """Laws (in the given order) having a root occurrence that is a premise
    of the root succedent ``goal``.  Laws are matched by sentence identity."""
    if not sentence_equal(t.root.succedent, goal):
        raise FormulaNotInRootError(f"{to_text(goal)} is not the succedent of the tree")
    marking = marking or premise_closure(t)
    reach = marking.premises_of(Occurrence(1, "R", 0))
    used = [a for i, a in enumerate(t.root.antecedent) if Occurrence(1, "L", i) in reach]
    return [law for law in laws if any(sentence_equal(law, a) for a in used)]


def is_necessary_premise(p: Formula, t: ProofTree, laws: Iterable[Formula],
                         goal: Formula) -> bool:
    return any(sentence_equal(p, q) for q in necessary_premises(t, laws, goal))
