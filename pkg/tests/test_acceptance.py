"""Acceptance criteria; ``pytest`` prints one PASS/FAIL line per criterion."""
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from oracles import (
    all_models, entails, fo_truth, ground_entails, maximal_consistent,
)
from strategies import random_ground_formula, random_prop_formula
from rcalc.consistency import Verdict
from rcalc.engine import (
    Configuration, RuleTag, enumerate_steps, explore_terminations, is_termination,
    make_configuration, replay,
)
from rcalc.identity import same_law_set
from rcalc.oracle import law_indices, reachability_report
from rcalc.parser import parse_formula as P
from rcalc.premise import necessary_premises
from rcalc.prover import Status, check_proof_tree, prove, sequent
from rcalc.specfile import load
from rcalc.syntax import (
    And, App, Atom, Const, Eq, Exists, Forall, Imp, Not, Or, Var, complement, neg_expand,
    neg_expandable,
)

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
criterion = pytest.mark.criterion


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


@criterion(1, "chain revision yields exactly the three maximal revisions")
def test_chain_revision_has_three_terminations():
    spec = load(SPECS / "chain.rc")

    def run():
        start = make_configuration(spec.rejection_formulas(), spec.law_formulas())
        return explore_terminations(start)
    ex, secs = timed(run)
    expected = [[P("A"), P("A -> B"), P("E -> F")],
                [P("A"), P("B -> C"), P("E -> F")],
                [P("A -> B"), P("B -> C"), P("E -> F")]]
    got = [list(c.gamma) for c, _ in ex.terminations]
    assert len(got) == 3 and ex.exhausted and not ex.unknown_notes
    for want in expected:
        assert sum(same_law_set(want, g) for g in got) == 1
    for _, trace in ex.terminations:
        assert trace.steps and all(t.rule is RuleTag.R_CUT for t, _ in trace.steps)
        assert replay(trace)
    assert secs < 5


@criterion(2, "necessary premises of an existential goal exclude the idle law")
def test_necessary_premises_exclude_idle_law():
    laws = [P("C"), P("A"), P("forall x. (A -> B(x))")]
    goal = P("exists x. B(x)")

    def run():
        res = prove(sequent(laws, goal))
        return necessary_premises(res.tree, laws, goal)
    used, secs = timed(run)
    assert same_law_set(used, [P("A"), P("forall x. (A -> B(x))")])
    assert not any(u == P("C") for u in used)
    assert secs < 1


@criterion(3, "a universal law falls by instantiation feeding the axiom rule")
def test_universal_instance_elimination():
    def run():
        start = Configuration.of([P("~A(c)")], [P("forall x. A(x)")])
        return explore_terminations(start)
    ex, secs = timed(run)
    [(end, trace)] = ex.terminations
    assert end.gamma == ()
    [(t, _)] = trace.steps
    assert t.rule is RuleTag.R_FORALL
    assert t.deletion.term == Const("c")
    assert t.deletion.subs[0].rule is RuleTag.R_AXIOM
    assert "with t = c" in trace.render()
    assert replay(trace)
    assert secs < 1


@criterion(4, "inconsistent equations: a reached revision is certified maximal")
def test_equation_revision_is_maximal():
    spec = load(SPECS / "equality.rc")
    rep, secs = timed(lambda: reachability_report(spec.law_formulas(), spec.rejection_formulas()))
    want = [P("f(x) = y"), P("~(f(f(x)) = z)")]
    reached = [rep.laws(s) for s in rep.reached_terminations]
    maximal = [rep.laws(s) for s in rep.oracle_maximal]
    assert any(same_law_set(want, r) for r in reached)
    assert any(same_law_set(want, m) for m in maximal)
    assert not rep.budget_notes
    assert secs < 5


@criterion(5, "two derivation paths: maximal and non-maximal terminations classified")
def test_two_paths_classification():
    spec = load(SPECS / "two_paths.rc")
    rep, secs = timed(lambda: reachability_report(spec.law_formulas(), spec.rejection_formulas()))
    non_max = [P("B -> C"), P("A -> E"), P("E -> C")]
    full = [P("A -> B"), P("B -> C"), P("A -> E"), P("E -> C")]
    assert any(same_law_set(non_max, rep.laws(s)) for s in rep.non_maximal_reached)
    assert any(same_law_set(full, rep.laws(s)) for s in rep.matched)
    assert "NON-MAXIMAL" in rep.render()
    assert rep.reachable and not rep.budget_notes
    assert secs < 5


ATOMS4 = ["A", "B", "C", "D"]


def _refuting_instance(rng):
    while True:
        laws = [random_prop_formula(rng, ATOMS4, 2) for _ in range(rng.randint(1, 5))]
        lits = [l for a in ATOMS4 for l in (Atom(a), Not(Atom(a))) if entails(laws, l)]
        if lits:
            return laws, rng.choice(lits)


@criterion(6, "every maximal contraction is reached on random instances")
def test_reachability_on_random_instances():
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    checked, failures = 0, []
    while checked < 120:
        laws, lit = _refuting_instance(rng)
        start = Configuration.of([complement(lit)], laws)
        ex = explore_terminations(start)
        if not ex.exhausted or ex.unknown_notes:
            continue
        checked += 1
        reached = {law_indices(start.gamma, c.gamma) for c, _ in ex.terminations}
        missing = maximal_consistent(list(start.gamma), [complement(lit)]) - reached
        if missing:
            failures.append((start, missing))
    assert not failures
    assert time.perf_counter() - t0 < 120


@criterion(7, "a configuration consistent with its literal is terminal")
def test_consistent_configurations_are_terminal():
    rng = random.Random(7)
    t0 = time.perf_counter()
    checked, failures = 0, []
    while checked < 150:
        laws = [random_prop_formula(rng, ATOMS4, 2) for _ in range(rng.randint(1, 5))]
        a = Atom(rng.choice(ATOMS4))
        lit = a if rng.random() < 0.5 else Not(a)
        if entails(laws, complement(lit)):
            continue
        checked += 1
        if is_termination(Configuration.of([lit], laws)) is not Verdict.YES:
            failures.append((laws, lit))
    assert not failures
    assert time.perf_counter() - t0 < 60


def _deletion_sound(c, t, oracle):
    if t.rule is RuleTag.R_CUT:
        return oracle(list(c.delta) + list(t.cut.gamma1 + t.cut.gamma2), Not(t.law))
    return oracle(list(c.delta), Not(t.law))


NEG_ROWS_BODIES = [
    lambda: And(Atom("P", (Const("a"),)), Atom("Q")),
    lambda: Or(Atom("P", (App("f", (Const("a"),)),)), Not(Atom("Q"))),
    lambda: Not(Atom("P", (Const("a"),))),
    lambda: Imp(Atom("Q"), Eq(App("f", (Const("a"),)), Const("a"))),
    lambda: Forall("x", Imp(Atom("P", (Var("x"),)), Atom("P", (App("f", (Var("x"),)),)))),
    lambda: Exists("x", And(Atom("P", (Var("x"),)), Not(Eq(Var("x"), Const("a"))))),
]


@criterion(8, "deletions are semantically sound and negation rows preserve truth")
def test_rule_soundness():
    rng = random.Random(8)
    emitted = 0
    for _ in range(150):
        laws = [random_prop_formula(rng, ATOMS4, 2) for _ in range(rng.randint(1, 4))]
        delta = list({str(l): l for l in (
            (lambda a: a if rng.random() < 0.5 else Not(a))(Atom(rng.choice(ATOMS4)))
            for _ in range(rng.randint(1, 2)))}.values())
        if entails([], Not(And(delta[0], delta[-1]))):
            continue
        c = Configuration.of(delta, laws)
        for t, _ in enumerate_steps(c):
            if t.deletes:
                emitted += 1
                assert _deletion_sound(c, t, entails), (str(c), t.describe())
    for _ in range(80):
        laws = [random_ground_formula(rng, 2) for _ in range(rng.randint(1, 3))]
        delta = [random_ground_formula(rng, 0) for _ in range(rng.randint(1, 2))]
        delta = [d for d in delta if not isinstance(d, Not) or not isinstance(d.body, Not)]
        if not delta or ground_entails([], Not(_conj(delta))):
            continue
        c = Configuration.of(delta, laws)
        for t, _ in enumerate_steps(c):
            if t.deletes:
                emitted += 1
                assert _deletion_sound(c, t, ground_entails), (str(c), t.describe())
    assert emitted >= 100
    for body in NEG_ROWS_BODIES:
        law = Not(body())
        assert neg_expandable(law)
        new = neg_expand(law)
        for size in (1, 2, 3):
            for m in all_models(["a"], [("f", 1)], [("P", 1), ("Q", 0)], size):
                assert fo_truth(m, law) == fo_truth(m, new)


def _conj(fs):
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


ATOMS6 = ["A", "B", "C", "D", "E", "F"]

FO_CORPUS = [
    ([P("C"), P("A"), P("forall x. (A -> B(x))")], P("exists x. B(x)")),
    ([P("forall x. P(x)")], P("P(a)")),
    ([P("forall x. (P(x) -> Q(x))"), P("forall x. P(x)")], P("forall x. Q(x)")),
    ([P("exists x. forall y. R(x, y)")], P("forall y. exists x. R(x, y)")),
    ([P("a = b"), P("P(a)")], P("P(b)")),
    ([P("f(x) = y", "xyz"), P("f(y) = z", "xyz")], P("f(f(x)) = z", "xyz")),
    ([], P("exists x. (P(x) -> forall y. P(y))")),
    ([P("~exists x. P(x)")], P("forall x. ~P(x)")),
]


@criterion(9, "prover agrees with truth tables and every proof tree checks")
def test_prover_validity():
    rng = random.Random(9)
    corpus = []
    while len(corpus) < 600:
        ante = [random_prop_formula(rng, ATOMS6, 3) for _ in range(rng.randint(0, 3))]
        corpus.append((ante, random_prop_formula(rng, ATOMS6, 3)))
    disagreements, bad_trees, proved = 0, 0, 0
    for ante, goal in corpus:
        res = prove(sequent(ante, goal))
        if res.status is Status.UNKNOWN or res.proved != entails(ante, goal):
            disagreements += 1
        if res.proved:
            proved += 1
            bad_trees += not check_proof_tree(res.tree)
    for ante, goal in FO_CORPUS:
        res = prove(sequent(ante, goal))
        assert res.proved
        bad_trees += not check_proof_tree(res.tree)
    assert disagreements == 0 and bad_trees == 0
    assert proved > 50


REPL_SCRIPT = """\
show
why C
assert gh: G -> H
revisions
choose 2
show
undo
consequences
quit
"""


def _cli(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "rcalc", *args], input=stdin,
                          capture_output=True, cwd=ROOT, check=False).stdout


@criterion(10, "traces and scripted sessions are byte-identical across runs")
def test_determinism():
    for name in ("chain.rc", "two_paths.rc", "equality.rc", "universal.rc"):
        runs = [_cli("revise", str(SPECS / name), "--trace", "--check") for _ in range(3)]
        assert runs[0] and runs[0] == runs[1] == runs[2]
    sessions = [_cli("repl", str(SPECS / "chain.rc"), stdin=REPL_SCRIPT.encode())
                for _ in range(3)]
    assert b"laws now" in sessions[0]
    assert sessions[0] == sessions[1] == sessions[2]
