import pytest
from hypothesis import given, settings

from oracles import entails
from strategies import prop_formulas
from rcalc.parser import parse_formula as P
from rcalc.premise import (
    FormulaNotInRootError, InvalidTreeError, Occurrence, is_necessary_premise,
    necessary_premises, premise_closure,
)
from rcalc.prover import prove, sequent
from rcalc.syntax import Const
from trees import replace_node

LAWS = [P("C"), P("A"), P("forall x. (A -> B(x))")]
GOAL = P("exists x. B(x)")


def _tree():
    return prove(sequent(LAWS, GOAL)).tree


def test_unused_law_is_not_a_premise():
    assert necessary_premises(_tree(), LAWS, GOAL) == [P("A"), P("forall x. (A -> B(x))")]
    assert not is_necessary_premise(P("C"), _tree(), LAWS, GOAL)
    assert is_necessary_premise(P("A"), _tree(), LAWS, GOAL)


def test_marking_edges_of_the_example_tree():
    m = premise_closure(_tree())
    edges = {(str(e.source), str(e.target), e.clause) for e in m.edges}
    assert ("node#4 [L,1]", "node#4 [R,0]", "axiom") in edges
    assert ("node#3 [L,3]", "node#4 [R,0]", "left-principal") in edges
    assert ("node#2 [L,2]", "node#3 [L,3]", "left-principal") in edges
    assert ("node#2 [R,0]", "node#1 [R,0]", "right") in edges
    assert ("node#1 [L,1]", "node#2 [L,1]", "context") in edges
    reach = m.premises_of(Occurrence(1, "R", 0))
    assert Occurrence(1, "L", 0) not in reach


def test_dump_shows_formulas():
    text = premise_closure(_tree()).dump()
    assert "node#5 [L,3] B(c0)  ->  node#5 [R,0] B(c0)" in text


def _naive_closure(edges):
    pairs = {(e.source, e.target) for e in edges if e.source != e.target}
    changed = True
    while changed:
        changed = False
        for a, b in list(pairs):
            for c, d in list(pairs):
                if b == c and a != d and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    return pairs


def test_closure_matches_naive_transitive_closure():
    m = premise_closure(_tree())
    assert m.closure() == _naive_closure(m.edges)


@settings(max_examples=150, deadline=None)
@given(prop_formulas(max_leaves=4), prop_formulas(max_leaves=4), prop_formulas(max_leaves=4),
       prop_formulas(max_leaves=4))
def test_necessary_premises_alone_still_entail_the_goal(a, b, c, goal):
    laws = [a, b, c]
    res = prove(sequent(laws, goal))
    if not res.proved:
        return
    m = premise_closure(res.tree)
    assert m.closure() == _naive_closure(m.edges)
    used = necessary_premises(res.tree, laws, goal, m)
    assert entails(used, goal)


def test_invalid_tree_is_refused():
    bad = replace_node(_tree(), 2, witness=Const("d"))
    with pytest.raises(InvalidTreeError):
        premise_closure(bad)


def test_goal_must_be_the_root_succedent():
    with pytest.raises(FormulaNotInRootError):
        necessary_premises(_tree(), LAWS, P("A"))
