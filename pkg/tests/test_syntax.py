import pytest
from hypothesis import given, settings

from oracles import all_models, fo_truth
from strategies import fo_formulas, prop_formulas
from rcalc.identity import sentence_equal
from rcalc.parser import ArityError, ParseError, Signature, parse_formula, parse_term
from rcalc.syntax import (
    And, App, Atom, Const, Eq, Exists, Forall, Imp, Not, NotApplicable, Or, Var,
    alpha_equal, alpha_key, bound_vars, canonical, close_free_vars, complement,
    free_vars, neg_expand, rank, rank_of_laws, substitute, term_vars, to_text,
    to_unicode,
)

P = parse_formula


def test_parse_universal_implication():
    assert P("forall x. (A -> B(x))") == Forall("x", Imp(Atom("A"), Atom("B", (Var("x"),))))


def test_parse_atom():
    assert P("A") == Atom("A")


def test_parse_negated_equation():
    assert P("~(f(x)=z)") == Not(Eq(App("f", (Const("x"),)), Const("z")))
    assert P("~(f(x)=z)", variables="xz") == Not(Eq(App("f", (Var("x"),)), Var("z")))


def test_precedence_and_associativity():
    assert P("A | B & C -> D -> E") == Imp(Or(Atom("A"), And(Atom("B"), Atom("C"))),
                                          Imp(Atom("D"), Atom("E")))
    assert P("~A & B") == And(Not(Atom("A")), Atom("B"))
    assert P("forall x. P(x) -> Q(x)") == Forall("x", Imp(Atom("P", (Var("x"),)),
                                                          Atom("Q", (Var("x"),))))


def test_multi_variable_quantifier_and_inequality():
    a = P("forall x, y. x != y")
    assert a == Forall("x", Forall("y", Not(Eq(Var("x"), Var("y")))))


@pytest.mark.parametrize("text, pos", [("A &", 3), ("(A", 2), ("A $ B", 2), ("forall . A", 7)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        P(text)
    assert err.value.position == pos


def test_arity_errors_name_the_symbol():
    sig = Signature()
    P("P(a) & f(a) = b", signature=sig)
    with pytest.raises(ArityError, match="'P'"):
        P("P(a, b)", signature=sig)
    with pytest.raises(ArityError, match="'f'"):
        P("f(a, a) = b", signature=sig)
    with pytest.raises(ArityError):
        P("f", signature=sig)


def test_variable_cannot_be_formula():
    with pytest.raises(ParseError):
        P("forall x. x")


def test_empty_application_rejected():
    with pytest.raises(ValueError):
        App("f", ())


def test_substitute_examples():
    x, c = Var("x"), Const("c")
    assert substitute(Atom("B", (x,)), "x", Const("t")) == Atom("B", (Const("t"),))
    bound = Forall("x", Atom("B", (x,)))
    assert substitute(bound, "x", c) == bound
    a = Exists("y", Atom("P", (x, Var("y"))))
    out = substitute(a, "x", App("f", (Var("y"),)))
    assert out == Exists("y'", Atom("P", (App("f", (Var("y"),)), Var("y'"))))


@settings(max_examples=200, deadline=None)
@given(fo_formulas(), fo_formulas())
def test_substitution_never_captures(a, b):
    for t in (Var("x"), Var("y"), App("f", (Var("y"),))):
        out = substitute(a, "x", t)
        expected = (free_vars(a) - {"x"}) | (term_vars(t) if "x" in free_vars(a) else set())
        assert free_vars(out) == expected


@settings(max_examples=200, deadline=None)
@given(fo_formulas())
def test_print_parse_roundtrip(a):
    c = canonical(a)
    text = to_text(c)
    again = parse_formula(text, variables=sorted(free_vars(a)))
    assert again == c
    assert parse_formula(to_text(again), variables=sorted(free_vars(a))) == again


@settings(max_examples=200, deadline=None)
@given(fo_formulas())
def test_canonical_is_idempotent_with_distinct_binders(a):
    c = canonical(a)
    assert canonical(c) == c
    names = bound_vars(c)
    assert len(names) == len(set(names))
    assert not set(names) & free_vars(c)
    assert alpha_equal(a, c)


def test_alpha_key_ignores_bound_names():
    assert alpha_key(P("forall x. P(x)")) == alpha_key(P("forall y. P(y)"))
    assert alpha_key(P("forall x. P(x)")) != alpha_key(P("exists x. P(x)"))


def test_close_free_vars():
    a = P("f(x) = y", variables="xy")
    assert close_free_vars(a) == Eq(App("f", (Const("x"),)), Const("y"))
    assert not free_vars(close_free_vars(a))


def test_complement():
    assert complement(Atom("A")) == Not(Atom("A"))
    assert complement(Not(Atom("A"))) == Atom("A")


def test_rank_examples():
    assert rank(P("A")) == 1
    assert rank(P("A & B")) == 3
    assert rank(P("forall x. (A -> B(x))")) == 4


def _node_count(a):
    if isinstance(a, (Atom, Eq)):
        return 1
    if isinstance(a, Not):
        return 1 + _node_count(a.body)
    if isinstance(a, (And, Or, Imp)):
        return 1 + _node_count(a.left) + _node_count(a.right)
    return 1 + _node_count(a.body)


@settings(max_examples=100, deadline=None)
@given(fo_formulas())
def test_rank_is_node_count(a):
    assert rank(a) == _node_count(a)


def test_rank_of_laws_is_rank_of_conjunction():
    laws = [P("A"), P("A -> B"), P("B -> C")]
    assert rank_of_laws(laws) == rank(And(And(laws[0], laws[1]), laws[2]))


B, C = Atom("B"), Atom("C")
BX = Atom("B", (Var("x"),))


@pytest.mark.parametrize("before, after", [
    (Not(And(B, C)), Or(Not(B), Not(C))),
    (Not(Or(B, C)), And(Not(B), Not(C))),
    (Not(Not(B)), B),
    (Not(Imp(B, C)), And(B, Not(C))),
    (Not(Forall("x", BX)), Exists("x", Not(BX))),
    (Not(Exists("x", BX)), Forall("x", Not(BX))),
])
def test_neg_expand_table(before, after):
    assert neg_expand(before) == after


@pytest.mark.parametrize("a", [Atom("A"), Not(Atom("A")), Not(Eq(Const("a"), Const("b"))),
                               And(B, C)])
def test_neg_expand_not_applicable(a):
    with pytest.raises(NotApplicable):
        neg_expand(a)


ROWS = [
    Not(And(Atom("P", (Const("a"),)), Atom("Q"))),
    Not(Or(Atom("P", (Const("a"),)), Atom("Q"))),
    Not(Not(Atom("P", (Const("a"),)))),
    Not(Imp(Atom("P", (Const("a"),)), Atom("Q"))),
    Not(Forall("x", Atom("P", (Var("x"),)))),
    Not(Exists("x", Atom("P", (Var("x"),)))),
    Not(Forall("x", Imp(Atom("P", (Var("x"),)), Eq(Var("x"), Const("a"))))),
]


@pytest.mark.parametrize("a", ROWS)
def test_neg_expand_preserves_truth_in_small_models(a):
    b = neg_expand(a)
    for size in (1, 2, 3):
        for m in all_models(["a"], [], [("P", 1), ("Q", 0)], size):
            assert fo_truth(m, a) == fo_truth(m, b)


def test_neg_expand_rank_changes():
    """Node-count rank: the and/or rows grow by one, the implication and
    quantifier rows keep the rank, double negation drops by two."""
    changes = [rank(neg_expand(a)) - rank(a) for a in ROWS[:6]]
    assert changes == [1, 1, -2, 0, 0, 0]


@settings(max_examples=200, deadline=None)
@given(prop_formulas())
def test_neg_expand_rank_bound(a):
    n = Not(a)
    if isinstance(a, (And, Or, Imp, Not)):
        assert rank(neg_expand(n)) <= rank(n) + 1
        assert sentence_equal(neg_expand(n), n)


def test_unicode_rendering():
    assert to_unicode(P("forall x. (A -> B(x))")) == "∀x. A ⊃ B(x)"


def test_parse_term():
    assert parse_term("f(a, x)", variables="x") == App("f", (Const("a"), Var("x")))
