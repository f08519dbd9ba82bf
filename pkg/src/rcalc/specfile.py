"""Line-oriented specification files.

    # comment
    decls:
      var x y z
      const c
      func f/1
      pred P/1
    laws:
      a1: A
      A -> B
    reject:
      ~C
    budget:
      depth = 40
      terms = 2

Declared variables that occur free in a law or rejection denote fixed but
unknown individuals and are read as constants of the same name.  Symbols
that are not declared are accepted with the arity of their first use.
"""
from __future__ import annotations

import dataclasses
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .parser import ArityError, ParseError, Signature, parse_formula
from .prover import DEFAULT_BUDGET, Budget
from .syntax import Formula, close_free_vars, to_text

SECTIONS = ("decls", "laws", "reject", "budget")
DEFAULT_LIMIT = 2000

# compact keys -> Budget fields ("limit" is the exploration limit)
BUDGET_KEYS = {
    "depth": "max_depth",
    "terms": "term_depth",
    "inst": "max_instantiations_per_quantifier",
    "models": "model_size_cap",
    "nodes": "max_nodes",
}

_NAMED = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(.+)$")


class SpecError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class SpecFile:
    variables: list[str] = field(default_factory=list)
    signature: Signature = field(default_factory=Signature)
    laws: list[tuple[str, Formula]] = field(default_factory=list)
    rejections: list[tuple[str, Formula]] = field(default_factory=list)
    budget_overrides: dict[str, int] = field(default_factory=dict)

    def parse(self, text: str) -> Formula:
        """Parse a formula against this file's declarations."""
        return close_free_vars(parse_formula(text, self.variables, self.signature))

    def law_formulas(self) -> list[Formula]:
        return [a for _, a in self.laws]

    def rejection_formulas(self) -> list[Formula]:
        return [a for _, a in self.rejections]

    def budget(self, base: Budget = DEFAULT_BUDGET) -> Budget:
        fields = {BUDGET_KEYS[k]: v for k, v in self.budget_overrides.items() if k in BUDGET_KEYS}
        return dataclasses.replace(base, **fields)

    @property
    def limit(self) -> int:
        return self.budget_overrides.get("limit", DEFAULT_LIMIT)

    def name_of(self, a: Formula) -> str | None:
        return next((n for n, b in self.laws if b == a), None)

    def fresh_name(self, prefix: str) -> str:
        used = {n for n, _ in self.laws} | {n for n, _ in self.rejections}
        k = 1
        while f"{prefix}{k}" in used:
            k += 1
        return f"{prefix}{k}"

    def dump(self) -> str:
        lines = []
        decls = []
        if self.variables:
            decls.append("  var " + " ".join(self.variables))
        for name, k in sorted(self.signature.functions.items()):
            decls.append(f"  const {name}" if k == 0 else f"  func {name}/{k}")
        for name, k in sorted(self.signature.predicates.items()):
            decls.append(f"  pred {name}/{k}")
        if decls:
            lines += ["decls:"] + decls
        lines.append("laws:")
        lines += [f"  {n}: {to_text(a)}" for n, a in self.laws]
        if self.rejections:
            lines.append("reject:")
            lines += [f"  {n}: {to_text(a)}" for n, a in self.rejections]
        if self.budget_overrides:
            lines.append("budget:")
            lines += [f"  {k} = {v}" for k, v in self.budget_overrides.items()]
        return "\n".join(lines) + "\n"


def parse_budget_string(text: str) -> dict[str, int]:
    """``depth=40,terms=2,...`` as used by the RCALC_BUDGET variable."""
    out: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or (key not in BUDGET_KEYS and key != "limit"):
            raise SpecError(f"bad budget entry {part!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise SpecError(f"budget value for {key} must be an integer") from None
        if out[key] <= 0 and key != "terms":
            raise SpecError(f"budget value for {key} must be positive")
    return out


def env_budget_overrides() -> dict[str, int]:
    text = os.environ.get("RCALC_BUDGET", "")
    return parse_budget_string(text) if text else {}


def _declare(spec: SpecFile, line: str, lineno: int) -> None:
    kind, _, rest = line.partition(" ")
    names = [n for n in re.split(r"[\s,]+", rest.strip()) if n]
    if not names:
        raise SpecError(f"empty declaration {line!r}", lineno)
    try:
        for n in names:
            if kind == "var":
                spec.variables.append(n)
            elif kind == "const":
                spec.signature.note_function(n, 0)
            elif kind in ("func", "pred"):
                sym, _, arity = n.partition("/")
                if not arity.isdigit():
                    raise SpecError(f"{kind} {n!r} needs an arity like f/1", lineno)
                if kind == "func":
                    spec.signature.note_function(sym, int(arity))
                else:
                    spec.signature.note_predicate(sym, int(arity))
            else:
                raise SpecError(f"unknown declaration kind {kind!r}", lineno)
    except ArityError as exc:
        raise SpecError(str(exc), lineno) from None


def loads(text: str) -> SpecFile:
    spec = SpecFile()
    section = None
    names: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line[:-1].strip() if line.endswith(":") else None
        if head in SECTIONS:
            section = head
            continue
        if section is None:
            raise SpecError("content outside a section", lineno)
        if section == "decls":
            _declare(spec, line.rstrip(";").strip(), lineno)
        elif section == "budget":
            try:
                spec.budget_overrides.update(parse_budget_string(line.replace(" ", "")))
            except SpecError as exc:
                raise SpecError(str(exc), lineno) from None
        else:
            m = _NAMED.match(line)
            name, body = (m.group(1), m.group(2)) if m else (None, line)
            target = spec.laws if section == "laws" else spec.rejections
            if name is None:
                name = spec.fresh_name("L" if section == "laws" else "R")
            if name in names:
                raise SpecError(f"duplicate name {name!r}", lineno)
            names.add(name)
            try:
                formula = spec.parse(body)
            except (ParseError, ArityError) as exc:
                raise SpecError(str(exc), lineno) from None
            target.append((name, formula))
    return spec


def load(path: str | Path) -> SpecFile:
    return loads(Path(path).read_text())
