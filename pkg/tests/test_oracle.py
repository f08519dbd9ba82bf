import pytest
from hypothesis import given, settings, strategies as st

from oracles import maximal_consistent
from strategies import literals, prop_formulas
from rcalc.models import FiniteModel
from rcalc.oracle import (
    ModelError, SizeGuardError, completeness_check, law_indices, maximal_contractions,
    reachability_report, user_rejection_models,
)
from rcalc.parser import parse_formula as P
from rcalc.syntax import Atom


@settings(max_examples=150, deadline=None)
@given(st.lists(prop_formulas(["A", "B", "C"], max_leaves=3), min_size=1, max_size=4),
       literals(["A", "B", "C"]))
def test_maximal_contractions_match_brute_force(laws, lit):
    assert set(maximal_contractions(laws, [lit])) == maximal_consistent(laws, [lit])


def test_size_guard():
    with pytest.raises(SizeGuardError):
        maximal_contractions([Atom(f"P{i}") for i in range(21)], [P("~P0")])


def test_ideal_rejection_models_of_a_chain():
    gamma = [P("A"), P("A -> B"), P("B -> C")]
    models = user_rejection_models(gamma, P("C"))
    ideal = {m.satisfied for m in models if m.ideal}
    assert ideal == {frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})}


def test_report_on_a_chain():
    gamma = [P("A"), P("A -> B"), P("B -> C"), P("E -> F")]
    rep = reachability_report(gamma, [P("~C")])
    assert rep.reachable and not rep.non_maximal_reached and not rep.budget_notes
    assert len(rep.matched) == 3
    assert "MAXIMAL" in rep.render()
    assert rep.to_record()["unreached_maximal"] == []


def test_report_flags_non_maximal_termination():
    gamma = [P("A"), P("A -> B"), P("B -> C"), P("A -> E"), P("E -> C")]
    rep = reachability_report(gamma, [P("~C")])
    non_max = [set(map(str, rep.laws(s))) for s in rep.non_maximal_reached]
    assert {str(P("A -> E")), str(P("B -> C")), str(P("E -> C"))} in non_max
    assert rep.reachable


def test_completeness_check_uses_the_model():
    gamma = [P("A"), P("A -> B"), P("B -> C")]
    m = FiniteModel(1, predicates={"A": frozenset({()}), "B": frozenset({()}),
                                   "C": frozenset()})
    assert completeness_check(gamma, [P("~C")], m)
    with pytest.raises(ModelError):
        completeness_check(gamma, [P("C")], m)


def test_law_indices_by_sentence_identity():
    assert law_indices([P("A -> B"), P("C")], [P("~A | B")]) == frozenset({0})
    assert law_indices([P("C")], [P("D")]) is None
