from hypothesis import given, settings

from oracles import all_models, as_tuple_model, fo_truth
from strategies import fo_formulas
from rcalc.models import (
    FiniteModel, evaluate, enumerate_models, find_model, signature_of, term_universe,
)
from rcalc.parser import parse_formula as P
from rcalc.syntax import App, Const, close_free_vars


def test_evaluate_simple_model():
    m = FiniteModel(2, {"a": 0}, {"f": {(0,): 1, (1,): 0}}, {"P": frozenset({(1,)})})
    assert evaluate(m, P("P(f(a))"))
    assert not evaluate(m, P("P(a)"))
    assert evaluate(m, P("forall x. P(x) | P(f(x))"))
    assert evaluate(m, P("exists x. ~(f(x) = x)"))


@settings(max_examples=80, deadline=None)
@given(fo_formulas())
def test_evaluation_agrees_with_reference_interpreter(a):
    a = close_free_vars(a)
    sig = signature_of([a])
    for size in (1, 2):
        if sig.interpretation_count(size) > 3000:
            continue
        for m in enumerate_models(sig, size):
            assert evaluate(m, a) == fo_truth(as_tuple_model(m), a)


def test_enumeration_count_matches_reference():
    sig = signature_of([P("P(f(a)) & Q")])
    ours = list(enumerate_models(sig, 2))
    ref = list(all_models(["a"], [("f", 1)], [("P", 1), ("Q", 0)], 2))
    assert len(ours) == len(ref) == sig.interpretation_count(2) == 2 * 4 * 4 * 2


def test_find_model_smallest_first():
    m = find_model([P("exists x. P(x)"), P("exists x. ~P(x)")], 3)
    assert m is not None and m.size == 2
    assert find_model([P("A"), P("~A")], 3) is None


def test_find_model_with_falsified_goal():
    m = find_model([P("A -> B")], 3, falsify=P("B"))
    assert m is not None
    assert not evaluate(m, P("A")) and not evaluate(m, P("B"))


def test_term_universe_levels():
    pool = term_universe([P("P(f(a))")], 1)
    assert pool == [Const("a"), App("f", (Const("a"),))]
    deeper = term_universe([P("P(f(a))")], 2)
    assert App("f", (App("f", (Const("a"),)),)) in deeper
    assert term_universe([P("forall x. P(x)")], 0) == [Const("c0")]
