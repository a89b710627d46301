"""Axiom schemas and rules of the Hilbert-style calculi BL and CBL, and a step checker."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable

from .syntax import (
    Atom, Bin, Confl, FMeta, FSequent, Formula, Neg, TruthConst, parse_fsequent,
    uses_conflation,
)
from .verdict import Verdict, accepted, rejected

METAS = ("A", "B", "C")


class UnknownSchema(KeyError):
    pass


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Schema:
    id: str
    pattern: FSequent
    system: str  # "BL" | "CBL"


@dataclass(frozen=True)
class RuleSchema:
    id: str
    premises: tuple[FSequent, ...]
    conclusion: FSequent


def _s(text: str) -> FSequent:
    return parse_fsequent(text, METAS)


_BL_AXIOMS = [
    ("ax-id", "A |- A"),
    ("ax-dneg-l", "!!A |- A"),
    ("ax-dneg-r", "A |- !!A"),
    ("ax-f-bot", "f |- A"),
    ("ax-t-top", "A |- t"),
    ("ax-bot-bot", "bot |- A"),
    ("ax-top-top", "A |- top"),
    ("ax-negf-top", "A |- !f"),
    ("ax-negt-bot", "!t |- A"),
    ("ax-negbot-bot", "!bot |- A"),
    ("ax-negtop-top", "A |- !top"),
    ("ax-and-l1", "A & B |- A"),
    ("ax-and-l2", "A & B |- B"),
    ("ax-or-r1", "A |- A | B"),
    ("ax-or-r2", "B |- A | B"),
    ("ax-tens-l1", "A * B |- A"),
    ("ax-tens-l2", "A * B |- B"),
    ("ax-plus-r1", "A |- A + B"),
    ("ax-plus-r2", "B |- A + B"),
    ("ax-dist-and-or", "A & (B | C) |- (A & B) | (A & C)"),
    ("ax-dist-tens-plus", "A * (B + C) |- (A * B) + (A * C)"),
    ("ax-neg-and-l", "!(A & B) |- !A | !B"),
    ("ax-neg-and-r", "!A | !B |- !(A & B)"),
    ("ax-neg-or-l", "!(A | B) |- !A & !B"),
    ("ax-neg-or-r", "!A & !B |- !(A | B)"),
    ("ax-neg-tens-l", "!(A * B) |- !A * !B"),
    ("ax-neg-tens-r", "!A * !B |- !(A * B)"),
    ("ax-neg-plus-l", "!(A + B) |- !A + !B"),
    ("ax-neg-plus-r", "!A + !B |- !(A + B)"),
]

# a weaker tensor/plus distributivity variant, offered as an alternative table entry
PRINTED_DIST = ("ax-dist-tens-plus-printed", "A * (B + C) |- (A * B) | (A + C)")

_CBL_AXIOMS = [
    ("ax-dconf-l", "--A |- A"),
    ("ax-dconf-r", "A |- --A"),
    ("ax-conf-neg-l", "-!A |- !-A"),
    ("ax-conf-neg-r", "!-A |- -!A"),
    ("ax-conff-bot", "-f |- A"),
    ("ax-conft-top", "A |- -t"),
    ("ax-conftop-bot", "-top |- A"),
    ("ax-confbot-top", "A |- -bot"),
    ("ax-conf-and-l", "-(A & B) |- -A & -B"),
    ("ax-conf-and-r", "-A & -B |- -(A & B)"),
    ("ax-conf-or-l", "-(A | B) |- -A | -B"),
    ("ax-conf-or-r", "-A | -B |- -(A | B)"),
    ("ax-conf-tens-l", "-(A * B) |- -A + -B"),
    ("ax-conf-tens-r", "-A + -B |- -(A * B)"),
    ("ax-conf-plus-l", "-(A + B) |- -A * -B"),
    ("ax-conf-plus-r", "-A * -B |- -(A + B)"),
]

RULES = {
    r.id: r
    for r in (
        RuleSchema("trans", (_s("A |- B"), _s("B |- C")), _s("A |- C")),
        RuleSchema("and-r", (_s("A |- B"), _s("A |- C")), _s("A |- B & C")),
        RuleSchema("or-l", (_s("A |- B"), _s("C |- B")), _s("A | C |- B")),
        RuleSchema("tens-r", (_s("A |- B"), _s("A |- C")), _s("A |- B * C")),
        RuleSchema("plus-l", (_s("A |- B"), _s("C |- B")), _s("A + C |- B")),
    )
}


def schema_table(system: str = "CBL", printed: bool = False) -> list[Schema]:
    """The axiom schemas of ``system``; ``printed`` swaps in the weaker distributivity variant."""
    out = []
    for sid, text in _BL_AXIOMS:
        if printed and sid == "ax-dist-tens-plus":
            sid, text = PRINTED_DIST
        out.append(Schema(sid, _s(text), "BL"))
    if system.upper() == "CBL":
        out.extend(Schema(sid, _s(text), "CBL") for sid, text in _CBL_AXIOMS)
    return out


ALL_SCHEMA_IDS = frozenset(
    [sid for sid, _ in _BL_AXIOMS] + [PRINTED_DIST[0]] + [sid for sid, _ in _CBL_AXIOMS]
)


def match_formula(pat: Formula, f: Formula, subst: dict) -> dict | None:
    if isinstance(pat, FMeta):
        bound = subst.get(pat.name)
        if bound is None:
            return {**subst, pat.name: f}
        return subst if bound == f else None
    if type(pat) is not type(f):
        return None
    if isinstance(pat, (Atom, TruthConst)):
        return subst if pat == f else None
    if isinstance(pat, (Neg, Confl)):
        return match_formula(pat.arg, f.arg, subst)
    if isinstance(pat, Bin):
        if pat.op != f.op:
            return None
        s = match_formula(pat.left, f.left, subst)
        return None if s is None else match_formula(pat.right, f.right, s)
    return None


def match_sequent(pat: FSequent, s: FSequent, subst: dict | None = None) -> dict | None:
    m = match_formula(pat.lhs, s.lhs, subst or {})
    return None if m is None else match_formula(pat.rhs, s.rhs, m)


def substitute(pat: Formula, subst: dict) -> Formula:
    if isinstance(pat, FMeta):
        return subst[pat.name]
    if isinstance(pat, (Neg, Confl)):
        return type(pat)(substitute(pat.arg, subst))
    if isinstance(pat, Bin):
        return Bin(pat.op, substitute(pat.left, subst), substitute(pat.right, subst))
    return pat


def match_axiom(s: FSequent, system: str = "CBL", printed: bool = False) -> list[tuple[str, dict]]:
    """All schema instantiations that yield ``s``."""
    out = []
    for sch in schema_table(system, printed):
        m = match_sequent(sch.pattern, s)
        if m is not None:
            out.append((sch.id, m))
    return out


@dataclass
class HilbertStep:
    seq: FSequent
    axiom: str | None = None
    rule: str | None = None
    premises: tuple[int, ...] = ()

    def to_json(self) -> dict:
        by = {"axiom": self.axiom} if self.axiom else {"rule": self.rule, "from": list(self.premises)}
        return {"seq": str(self.seq), "by": by}


@dataclass
class HilbertProof:
    steps: list[HilbertStep] = field(default_factory=list)

    @property
    def conclusion(self) -> FSequent:
        return self.steps[-1].seq

    def to_jsonl(self) -> str:
        return "".join(json.dumps(s.to_json()) + "\n" for s in self.steps)


def parse_hilbert(text: str) -> HilbertProof:
    steps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        obj = json.loads(line)
        by = obj["by"]
        seq = parse_fsequent(obj["seq"])
        if "axiom" in by:
            steps.append(HilbertStep(seq, axiom=by["axiom"]))
        else:
            steps.append(HilbertStep(seq, rule=by["rule"], premises=tuple(by.get("from", ()))))
    return HilbertProof(steps)


def load_hilbert(path) -> HilbertProof:
    with open(path, encoding="utf-8") as fh:
        return parse_hilbert(fh.read())


def check_hilbert(proof: HilbertProof, system: str = "BL", printed: bool = False) -> Verdict:
    """Check each step locally; steps are numbered from 1 and may only cite earlier steps."""
    system = system.upper()
    table = {s.id: s for s in schema_table("CBL", printed)}
    if not proof.steps:
        return rejected(0, "EmptyProof", "proof has no steps")
    for k, step in enumerate(proof.steps, 1):
        if system == "BL" and (uses_conflation(step.seq.lhs) or uses_conflation(step.seq.rhs)):
            return rejected(k, "ConflInBLMode", f"step {k} uses conflation in a BL proof")
        if step.axiom is not None:
            if step.axiom not in ALL_SCHEMA_IDS:
                raise UnknownSchema(step.axiom)
            sch = table.get(step.axiom)
            if sch is None:
                return rejected(k, "SchemaNotInTable", f"{step.axiom} is not in this table", rule=step.axiom)
            if sch.system == "CBL" and system == "BL":
                return rejected(k, "SystemViolation", f"{step.axiom} is a CBL axiom", rule=step.axiom)
            if match_sequent(sch.pattern, step.seq) is None:
                return rejected(k, "PatternMismatch", f"{step.seq} is not an instance of {step.axiom}",
                                rule=step.axiom)
            continue
        rule = RULES.get(step.rule)
        if rule is None:
            raise UnknownSchema(step.rule)
        if len(step.premises) != len(rule.premises):
            raise ArityMismatch(f"step {k}: {step.rule} takes {len(rule.premises)} premises, "
                                f"got {len(step.premises)}")
        for j in step.premises:
            if not isinstance(j, int) or j < 1 or j >= k:
                return rejected(k, "BadReference", f"step {k} cites step {j}", rule=step.rule)
        m = match_sequent(rule.conclusion, step.seq)
        for pat, j in zip(rule.premises, step.premises):
            if m is None:
                break
            m = match_sequent(pat, proof.steps[j - 1].seq, m)
        if m is None:
            return rejected(k, "PatternMismatch", f"{step.rule} does not yield {step.seq}", rule=step.rule)
    return accepted(message=f"{len(proof.steps)} steps", details={"conclusion": str(proof.conclusion)})


def schema_soundness(bilattices: Iterable, system: str = "BL", printed: bool = False,
                     atoms: tuple[str, ...] = ("p", "q", "r")) -> list[dict]:
    """Instantiate every schema over ``atoms`` and test it on every model; return the failures."""
    from .algebra import consequence

    failures = []
    models = list(bilattices)
    for sch in schema_table(system, printed):
        if system.upper() == "BL" and sch.system == "CBL":
            continue
        names = sorted({*_metas(sch.pattern.lhs), *_metas(sch.pattern.rhs)})
        for choice in itertools.product(atoms, repeat=len(names)):
            subst = {m: Atom(a) for m, a in zip(names, choice)}
            lhs, rhs = substitute(sch.pattern.lhs, subst), substitute(sch.pattern.rhs, subst)
            for B in models:
                if sch.system == "CBL" and B.confl is None:
                    continue
                v = consequence(B, lhs, rhs)
                if not v.ok:
                    failures.append({"schema": sch.id, "instance": str(FSequent(lhs, rhs)),
                                     "model": B.name, "valuation": v.valuation})
    return failures


def _metas(f: Formula) -> list[str]:
    if isinstance(f, FMeta):
        return [f.name]
    if isinstance(f, (Neg, Confl)):
        return _metas(f.arg)
    if isinstance(f, Bin):
        return _metas(f.left) + _metas(f.right)
    return []
