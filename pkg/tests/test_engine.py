import pytest
from hypothesis import given, settings, strategies as st

from oracles import entails, satisfiable
from strategies import literals, prop_formulas
from rcalc.consistency import Verdict
from rcalc.engine import (
    Configuration, DerivationTrace, InvalidConditionError, RuleTag, WrongShapeError,
    check_transition, enumerate_steps, explore_terminations, is_termination,
    make_configuration, matches_rejection, replay, step_and, step_axiom, step_cut,
    step_exists, step_forall, step_imp, step_neg, step_or,
)
from rcalc.parser import parse_formula as P
from rcalc.syntax import Const, Not, free_vars


def cfg(delta, gamma):
    return Configuration.of([P(d) for d in delta], [P(g) for g in gamma])


def test_axiom_deletes_the_rejected_literal():
    c = cfg(["~A"], ["A", "B"])
    [(t, nc)] = step_axiom(c)
    assert t.rule is RuleTag.R_AXIOM and nc.gamma == (P("B"),)


def test_double_negation_matches_rejection():
    assert matches_rejection(P("~~A"), P("~A"))
    assert matches_rejection(P("~A"), P("A"))
    assert not matches_rejection(P("A"), P("A"))


def test_disjunction_needs_both_sides_refuted():
    [(t, nc)] = step_or(cfg(["~A", "~B"], ["A | B"]), 0)
    assert t.rule is RuleTag.R_OR and nc.gamma == ()
    assert step_or(cfg(["~A"], ["A | B"]), 0) == []


def test_implication_with_true_antecedent_and_false_consequent():
    [(t, nc)] = step_imp(cfg(["A", "~B"], ["A -> B"]), 0)
    assert t.rule is RuleTag.R_IMP and nc.gamma == ()
    assert step_imp(cfg(["~B"], ["A -> B"]), 0) == []


def test_conjunction_branches():
    c = cfg(["~B"], ["A & B"])
    assert step_and(c, 0, "left") == []
    [(t, _)] = step_and(c, 0, "right")
    assert t.rule is RuleTag.R_AND_RIGHT


def test_universal_instance_feeds_the_axiom():
    c = Configuration.of([P("~A(c)")], [P("forall x. A(x)"), P("B")])
    i = c.gamma.index(P("forall x. A(x)"))
    [(t, nc)] = step_forall(c, i)
    assert t.deletion.term == Const("c")
    assert t.deletion.subs[0].rule is RuleTag.R_AXIOM
    assert nc.gamma == (P("B"),)
    assert step_forall(c, i, Const("d")) == []


def test_existential_eigenvariable_must_be_fresh():
    # ~A(x) with x rigid cannot refute exists x. A(x): the eigenvariable differs
    c = Configuration.of([Not(P("A(x)", "x"))], [P("exists x. A(x)")])
    assert step_exists(c, 0) == []
    rigid = Not(P("A(x)", "x"))
    c = Configuration.of([rigid, P("B")], [P("exists x. (A(x) & ~B)")])
    [(t, _)] = step_exists(c, 0)
    y = t.deletion.eigenvariable
    assert y.name not in free_vars(rigid)


def test_negation_expansion_rewrites_in_place():
    c = cfg(["~B"], ["~(A & B)", "C"])
    i = c.gamma.index(P("~(A & B)"))
    [(t, nc)] = step_neg(c, i)
    assert P("~A | ~B") in nc.gamma and not t.deletes
    with pytest.raises(WrongShapeError):
        step_neg(c, c.gamma.index(P("C")))


def test_wrong_shape_is_reported():
    with pytest.raises(WrongShapeError):
        step_or(cfg(["~A"], ["A"]), 0)


def test_cut_through_a_chain():
    c = cfg(["~C"], ["A", "A -> B", "B -> C", "E -> F"])
    steps = step_cut(c)
    deleted = {t.law for t, _ in steps}
    assert deleted == {P("A"), P("A -> B"), P("B -> C")}
    for t, nc in steps:
        assert check_transition(c, t, nc)


def test_configuration_is_canonical():
    a = cfg(["~C", "~C"], ["B -> C", "A", "~A | B", "A -> B"])
    b = cfg(["~C"], ["A -> B", "A", "B -> C"])
    assert a.key == b.key


def test_inconsistent_rejections_are_refused():
    with pytest.raises(InvalidConditionError):
        make_configuration([P("A"), P("~A")], [P("B")])


def test_three_maximal_revisions_of_a_chain():
    ex = explore_terminations(cfg(["~C"], ["A", "A -> B", "B -> C"]))
    assert sorted(map(sorted, ([str(g) for g in s] for s in ex.termination_sets()))) == sorted(
        map(sorted, ([str(P(x)) for x in s] for s in
                     (["A -> B", "B -> C"], ["A", "B -> C"], ["A", "A -> B"]))))
    for _, trace in ex.terminations:
        assert replay(trace)
    assert ex.exhausted


def test_tampered_trace_fails_replay():
    ex = explore_terminations(cfg(["~C"], ["A", "A -> B", "B -> C"]))
    _, trace = ex.terminations[0]
    t, nc = trace.steps[0]
    wrong = Configuration.of(nc.delta, nc.gamma[1:])
    assert not replay(DerivationTrace(trace.start, ((t, wrong),) + trace.steps[1:]))


def test_termination_verdicts():
    assert is_termination(cfg(["~C"], ["A", "A -> B"])) is Verdict.YES
    assert is_termination(cfg(["~C"], ["A", "A -> B", "B -> C"])) is Verdict.NO


def _sound(c, t):
    """Axiom and logical deletions: Delta alone refutes the law.  Cut:
    Delta with the two side sets refutes it."""
    law = t.law
    if t.rule is RuleTag.R_CUT:
        return entails(list(c.delta) + list(t.cut.gamma1 + t.cut.gamma2), Not(law))
    return entails(list(c.delta), Not(law))


@settings(max_examples=150, deadline=None)
@given(st.lists(literals(["A", "B", "C", "D"]), min_size=1, max_size=2),
       st.lists(prop_formulas(["A", "B", "C", "D"], max_leaves=3), min_size=1, max_size=3))
def test_every_step_is_sound(delta, gamma):
    if not satisfiable(delta):
        return
    c = Configuration.of(delta, gamma)
    for t, nc in enumerate_steps(c):
        assert check_transition(c, t, nc)
        if t.deletes:
            assert _sound(c, t)
        else:
            assert entails([t.law], t.expanded) and entails([t.expanded], t.law)
