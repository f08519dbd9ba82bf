"""Brute-force ground truth for revisions: maximal contractions, rejection
models and reachability reports."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .consistency import Verdict, consistent
from .engine import Configuration, explore_terminations
from .identity import sentence_equal
from .models import FiniteModel, enumerate_models, evaluate, signature_of
from .prover import DEFAULT_BUDGET, Budget
from .syntax import Formula, Not, close_free_vars, to_text

MAX_LAWS = 20


class SizeGuardError(ValueError):
    pass


class ModelError(ValueError):
    pass


def maximal_contractions(gamma: Sequence[Formula], delta: Sequence[Formula],
                         budget: Budget = DEFAULT_BUDGET,
                         notes: list | None = None) -> list[frozenset]:
    """Index sets of the subset-maximal ``L`` within ``gamma`` such that
    ``L + delta`` is consistent.  Subsets with an ``unknown`` verdict are
    skipped and reported in ``notes``."""
    gamma, delta = list(gamma), list(delta)
    if len(gamma) > MAX_LAWS:
        raise SizeGuardError(f"{len(gamma)} laws exceed the oracle limit of {MAX_LAWS}")
    found: list[frozenset] = []
    for size in range(len(gamma), -1, -1):
        for idx in combinations(range(len(gamma)), size):
            s = frozenset(idx)
            if any(s <= f for f in found):
                continue
            verdict = consistent([gamma[i] for i in idx] + delta, budget)
            if verdict is Verdict.YES:
                found.append(s)
            elif verdict is Verdict.UNKNOWN and notes is not None:
                notes.append("consistency unknown for {"
                             + ", ".join(to_text(gamma[i]) for i in idx) + "}")
    return found


@dataclass(frozen=True)
class RejectionModel:
    model: FiniteModel
    satisfied: frozenset    # indices of the laws true in the model
    ideal: bool


def user_rejection_models(gamma: Sequence[Formula], rejected: Formula,
                          size_cap: int = 3, max_models: int = 20_000) -> list[RejectionModel]:
    """Models (up to ``size_cap`` elements) of ``~rejected``, each with the
    laws it satisfies.  A model is ideal when no other returned model
    satisfies a strictly larger set of laws."""
    laws = [close_free_vars(a) for a in gamma]
    target = close_free_vars(rejected)
    sig = signature_of(laws + [target])
    found: list[tuple[FiniteModel, frozenset]] = []
    propositional = not sig.constants and not sig.functions and \
        all(k == 0 for _, k in sig.predicates)
    for size in range(1, size_cap + 1):
        for m in enumerate_models(sig, size):
            if len(found) >= max_models:
                break
            if evaluate(m, Not(target)):
                found.append((m, frozenset(i for i, a in enumerate(laws) if evaluate(m, a))))
        if propositional:
            break
    sets = [s for _, s in found]
    return [RejectionModel(m, s, not any(s < t for t in sets)) for m, s in found]


def satisfied_subset(gamma: Sequence[Formula], m: FiniteModel) -> frozenset:
    return frozenset(i for i, a in enumerate(gamma) if evaluate(m, close_free_vars(a)))


@dataclass
class ContractionReport:
    gamma: tuple
    delta: tuple
    oracle_maximal: list
    reached_terminations: list
    matched: list = field(default_factory=list)
    non_maximal_reached: list = field(default_factory=list)
    unreached_maximal: list = field(default_factory=list)
    budget_notes: list = field(default_factory=list)
    exhausted: bool = True

    def laws(self, subset: Iterable[int]) -> list[Formula]:
        return [self.gamma[i] for i in sorted(subset)]

    def show(self, subset: Iterable[int]) -> str:
        return "{" + ", ".join(to_text(a) for a in self.laws(subset)) + "}"

    @property
    def reachable(self) -> bool:
        return not self.unreached_maximal

    def render(self) -> str:
        lines = [
            "delta: " + ", ".join(to_text(d) for d in self.delta),
            "gamma: " + ", ".join(to_text(g) for g in self.gamma),
            f"exploration exhausted: {'yes' if self.exhausted else 'no'}",
            "",
            f"{'subset':<60} {'oracle':<12} {'reached':<8}",
        ]
        rows = sorted(set(self.oracle_maximal) | set(self.reached_terminations),
                      key=lambda s: (-len(s), sorted(s)))
        for s in rows:
            lines.append(f"{self.show(s):<60} "
                         f"{'MAXIMAL' if s in self.oracle_maximal else 'NON-MAXIMAL':<12} "
                         f"{'yes' if s in self.reached_terminations else 'no':<8}")
        lines.append("")
        lines.append(f"matched {len(self.matched)}, non-maximal reached "
                     f"{len(self.non_maximal_reached)}, unreached maximal "
                     f"{len(self.unreached_maximal)}")
        for n in self.budget_notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)

    def to_record(self) -> dict:
        def enc(sets):
            return [[to_text(a) for a in self.laws(s)] for s in sets]
        return {
            "delta": [to_text(d) for d in self.delta],
            "gamma": [to_text(g) for g in self.gamma],
            "exhausted": self.exhausted,
            "oracle_maximal": enc(self.oracle_maximal),
            "reached_terminations": enc(self.reached_terminations),
            "matched": enc(self.matched),
            "non_maximal_reached": enc(self.non_maximal_reached),
            "unreached_maximal": enc(self.unreached_maximal),
            "budget_notes": list(self.budget_notes),
        }


def law_indices(gamma: Sequence[Formula], laws: Iterable[Formula]) -> frozenset | None:
    """Map ``laws`` onto positions of ``gamma`` by sentence identity."""
    out = set()
    for a in laws:
        hit = next((i for i, g in enumerate(gamma) if sentence_equal(a, g)), None)
        if hit is None:
            return None
        out.add(hit)
    return frozenset(out)


def _sort_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    return sorted(set(sets), key=lambda s: (-len(s), sorted(s)))


def reachability_report(gamma: Sequence[Formula], delta: Sequence[Formula],
                        budget: Budget = DEFAULT_BUDGET, limit: int = 2000) -> ContractionReport:
    start = Configuration.of(delta, gamma)
    notes: list = []
    maximal = maximal_contractions(start.gamma, start.delta, budget, notes)
    ex = explore_terminations(start, budget, limit)
    notes.extend(ex.unknown_notes)
    if not ex.exhausted:
        notes.append(f"exploration stopped at the limit of {limit} configurations")
    reached = []
    for c, _ in ex.terminations:
        idx = law_indices(start.gamma, c.gamma)
        if idx is None:
            notes.append(f"termination not expressible over the original laws: {c}")
        else:
            reached.append(idx)
    maximal, reached = _sort_sets(maximal), _sort_sets(reached)
    return ContractionReport(
        gamma=start.gamma, delta=start.delta,
        oracle_maximal=maximal, reached_terminations=reached,
        matched=[s for s in reached if s in maximal],
        non_maximal_reached=[s for s in reached if s not in maximal],
        unreached_maximal=[s for s in maximal if s not in reached],
        budget_notes=notes, exhausted=ex.exhausted,
    )


def completeness_check(gamma: Sequence[Formula], delta: Sequence[Formula], m: FiniteModel,
                       budget: Budget = DEFAULT_BUDGET, limit: int = 2000) -> bool:
    """Is the set of laws true in ``m`` a reached termination?"""
    if not all(evaluate(m, close_free_vars(d)) for d in delta):
        raise ModelError("the model does not satisfy the rejected literals")
    start = Configuration.of(delta, gamma)
    wanted = satisfied_subset(start.gamma, m)
    ex = explore_terminations(start, budget, limit)
    return any(law_indices(start.gamma, c.gamma) == wanted for c, _ in ex.terminations)
