"""Interactive specification development.

Every state change pushes a snapshot so ``undo`` can step back; output
depends only on the commands given, so scripted sessions are reproducible.
"""
from __future__ import annotations

import cmd
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .consistency import Verdict, atomic_consequences, consistent
from .engine import DerivationTrace, explore_terminations, make_configuration
from .parser import ArityError, ParseError
from .premise import necessary_premises
from .prover import Status, prove, sequent
from .specfile import SpecError, SpecFile, load
from .syntax import Const, complement, is_literal, literal_key, to_text


@dataclass
class SessionState:
    spec: SpecFile
    history: list = field(default_factory=list)       # (command, DerivationTrace | None)
    options: list = field(default_factory=list)       # (gamma, trace) from the last `revisions`
    chosen: list = field(default_factory=list)
    undo_stack: list = field(default_factory=list)


def _snapshot(spec: SpecFile):
    return (spec, list(spec.laws), list(spec.rejections))


class Session(cmd.Cmd):
    intro = "rcalc session; type help for commands"
    prompt = "rcalc> "

    def __init__(self, spec: SpecFile | None = None, stdin=None, stdout=None):
        super().__init__(stdin=stdin, stdout=stdout)
        self.state = SessionState(spec or SpecFile())
        scripted = not (stdin or sys.stdin).isatty()
        if scripted:
            # echo commands so transcripts read like an interactive session
            self.use_rawinput = False
            self.prompt = ""
            self.echo = True
        else:
            self.echo = False

    # -- helpers
    @property
    def spec(self) -> SpecFile:
        return self.state.spec

    def say(self, text: str = "") -> None:
        self.stdout.write(text + "\n")

    def budget(self):
        return self.spec.budget()

    def parse(self, text: str):
        try:
            return self.spec.parse(text)
        except (ParseError, ArityError) as exc:
            self.say(f"error: {exc}")
            return None

    def push(self, label: str, trace: DerivationTrace | None = None) -> None:
        self.state.history.append((label, trace))

    def precmd(self, line: str) -> str:
        if self.echo and line.strip() and line != "EOF":
            self.say(f"rcalc> {line.rstrip()}")
        return line

    def emptyline(self) -> bool:
        return False

    def default(self, line: str) -> None:
        self.say(f"unknown command: {line.split()[0]}")

    # -- commands
    def do_assert(self, arg: str) -> None:
        """assert [name:] FORMULA -- add a law"""
        name, sep, body = arg.partition(":")
        if not sep:
            name, body = self.spec.fresh_name("L"), arg
        name = name.strip()
        if any(n == name for n, _ in self.spec.laws):
            self.say(f"error: a law named {name} exists")
            return
        a = self.parse(body.strip())
        if a is None:
            return
        self.state.undo_stack.append(_snapshot(self.spec))
        self.spec.laws.append((name, a))
        self.push(f"assert {name}")
        self.say(f"{name}: {to_text(a)}")

    def do_show(self, arg: str) -> None:
        """show -- list laws and active rejections"""
        if not self.spec.laws:
            self.say("no laws")
        for n, a in self.spec.laws:
            self.say(f"  {n}: {to_text(a)}")
        for n, a in self.spec.rejections:
            self.say(f"  rejected {n}: {to_text(a)}")

    def do_consequences(self, arg: str) -> None:
        """consequences -- literals proved by the laws"""
        consts = [Const(n) for n, k in sorted(self.spec.signature.functions.items()) if k == 0]
        lits = atomic_consequences(self.spec.law_formulas(), self.budget(), extra=consts)
        self.say(", ".join(to_text(l) for l in lits) if lits else "none")

    def do_reject(self, arg: str) -> None:
        """reject LITERAL -- the laws prove the opposite of LITERAL; LITERAL wins"""
        lit = self.parse(arg.strip())
        if lit is None:
            return
        if not is_literal(lit):
            self.say("error: only literals can be rejected")
            return
        if any(literal_key(lit) == literal_key(r) for r in self.spec.rejection_formulas()):
            self.say(f"already rejected: {to_text(lit)}")
            return
        res = prove(sequent(self.spec.law_formulas(), complement(lit)), self.budget())
        if res.status is not Status.PROVED:
            self.say(f"refused: the laws do not prove {to_text(complement(lit))} "
                     f"({res.status.value})")
            return
        self.state.undo_stack.append(_snapshot(self.spec))
        name = self.spec.fresh_name("R")
        self.spec.rejections.append((name, lit))
        self.state.options = []
        self.push(f"reject {name}")
        self.say(f"{name}: {to_text(lit)}")

    def do_revisions(self, arg: str) -> None:
        """revisions -- enumerate revised law sets"""
        if not self.spec.rejections:
            self.say("nothing rejected")
            return
        start = make_configuration(self.spec.rejection_formulas(),
                                   self.spec.law_formulas(), self.budget(), strict=False)
        ex = explore_terminations(start, self.budget(), self.spec.limit)
        self.state.options = [(c.gamma, trace) for c, trace in ex.terminations]
        for k, (gamma, _) in enumerate(self.state.options, start=1):
            self.say(f"[{k}] {{{', '.join(to_text(g) for g in gamma)}}}")
        if not ex.exhausted:
            self.say("note: exploration stopped at the limit")
        for note in ex.unknown_notes:
            self.say(f"note: {note}")

    def do_choose(self, arg: str) -> None:
        """choose N -- adopt option N of the last revisions listing"""
        try:
            k = int(arg)
            if k < 1:
                raise IndexError
            gamma, trace = self.state.options[k - 1]
        except (ValueError, IndexError):
            self.say("error: choose needs an option number from revisions")
            return
        rejected = self.spec.rejection_formulas()
        verdict = consistent(list(gamma) + rejected, self.budget())
        if verdict is not Verdict.YES:
            self.say(f"refused: option {k} is not consistent with the rejections ({verdict.value})")
            return
        self.state.undo_stack.append(_snapshot(self.spec))
        old = self.spec.laws
        self.spec.laws = [(n, a) for n, a in old if any(a == g for g in gamma)]
        for g in gamma:
            if not any(a == g for _, a in old):
                # a law rewritten by R-neg gets a new name
                self.spec.laws.append((self.spec.fresh_name("L"), g))
        still = []
        for n, lit in self.spec.rejections:
            if prove(sequent(self.spec.law_formulas(), complement(lit)),
                     self.budget()).status is Status.PROVED:
                still.append((n, lit))
        self.spec.rejections = still
        self.state.chosen.append(gamma)
        self.state.options = []
        self.push(f"choose {k}", trace)
        self.say("laws now: " + ", ".join(n for n, _ in self.spec.laws))

    def do_why(self, arg: str) -> None:
        """why FORMULA -- necessary premises of a consequence"""
        goal = self.parse(arg.strip())
        if goal is None:
            return
        laws = self.spec.law_formulas()
        res = prove(sequent(laws, goal), self.budget())
        if res.status is not Status.PROVED:
            self.say(f"{to_text(goal)} is not proved ({res.status.value})")
            return
        used = necessary_premises(res.tree, laws, goal)
        self.say(f"{to_text(goal)} needs: " + ", ".join(
            f"{self.spec.name_of(a)}: {to_text(a)}" for a in used))

    def do_undo(self, arg: str) -> None:
        """undo -- revert the last change"""
        if not self.state.undo_stack:
            self.say("nothing to undo")
            return
        spec, laws, rejections = self.state.undo_stack.pop()
        spec.laws, spec.rejections = laws, rejections
        self.state.spec = spec
        self.state.options = []
        self.push("undo")
        self.say("undone")

    def do_save(self, arg: str) -> None:
        """save PATH -- write the laws and rejections as a spec file"""
        if not arg.strip():
            self.say("error: save needs a path")
            return
        Path(arg.strip()).write_text(self.spec.dump())
        self.say(f"saved {arg.strip()}")

    def do_load(self, arg: str) -> None:
        """load PATH -- replace the session with a spec file"""
        try:
            spec = load(arg.strip())
        except (OSError, SpecError) as exc:
            self.say(f"error: {exc}")
            return
        self.state.undo_stack.append(_snapshot(self.spec))
        self.state.spec = spec
        self.push(f"load {arg.strip()}")
        self.say(f"{len(spec.laws)} laws, {len(spec.rejections)} rejections")

    def do_quit(self, arg: str) -> bool:
        """quit -- leave the session"""
        return True

    def do_EOF(self, arg: str) -> bool:
        return True
