"""Rule tables for the display calculi D.BL and D.CBL, a proof checker and backward rule application.

Rules are written as S-expression patterns.  ``?X{i}``-style tokens are
structure variables, ``?A{i}``/``?B{i}`` range over formulas and ``?p{i}`` over
atoms; ``{i}`` is filled with each sort for rules stated per sort.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .syntax import (
    MAtom, MBin, MConst, MN, MP, MRes, MSim, Meta, ProofTree, SBin, SConst, SN, SP, SStar,
    Sequent, is_formula, parse_mt, uses_star,
)
from .verdict import Verdict, accepted, rejected

SYSTEMS = ("D.BL", "D.CBL")


class UnknownRule(KeyError):
    pass


@dataclass(frozen=True)
class RuleSpec:
    id: str
    family: str
    premises: tuple[Sequent, ...]
    conclusion: Sequent
    sort: int | None
    system: str
    bidirectional: bool = False
    inverse: str | None = None
    convenience: bool = False

    @property
    def arity(self) -> int:
        return len(self.premises)


# id, family, premises, conclusion, per-sort, system, mode
# mode: "" one direction, "bi" both directions primitive, "conv" stored converse flagged as convenience
_RAW = [
    ("res.meet", "res", ["(seq (Scap{i} ?X{i} ?Y{i}) ?Z{i})"], "(seq ?X{i} (SrresR{i} ?Y{i} ?Z{i}))", True, "D.BL", "bi"),
    ("res.join", "res", ["(seq ?X{i} (Scup{i} ?Y{i} ?Z{i}))"], "(seq (SrresL{i} ?X{i} ?Y{i}) ?Z{i})", True, "D.BL", "bi"),
    ("adj.P", "adj", ["(seq (SP ?X2) ?Y1)"], "(seq ?X2 (SN ?Y1))", False, "D.BL", "bi"),
    ("adj.N", "adj", ["(seq (SN ?X1) ?Y2)"], "(seq ?X1 (SP ?Y2))", False, "D.BL", "bi"),
    ("id", "id", [], "(seq ?p{i} ?p{i})", True, "D.BL", ""),
    ("cut", "cut", ["(seq ?X{i} ?A{i})", "(seq ?A{i} ?Y{i})"], "(seq ?X{i} ?Y{i})", True, "D.BL", ""),
    ("one-hat", "one-hat", ["(seq (Scap{i} ?X{i} Sone{i}) ?Y{i})"], "(seq ?X{i} ?Y{i})", True, "D.BL", ""),
    ("zero-check", "zero-check", ["(seq ?X{i} (Scup{i} ?Y{i} Szero{i}))"], "(seq ?X{i} ?Y{i})", True, "D.BL", ""),
    ("E.l", "E", ["(seq (Scap{i} ?X{i} ?Y{i}) ?Z{i})"], "(seq (Scap{i} ?Y{i} ?X{i}) ?Z{i})", True, "D.BL", ""),
    ("E.r", "E", ["(seq ?X{i} (Scup{i} ?Y{i} ?Z{i}))"], "(seq ?X{i} (Scup{i} ?Z{i} ?Y{i}))", True, "D.BL", ""),
    ("A.l", "A", ["(seq (Scap{i} (Scap{i} ?X{i} ?Y{i}) ?Z{i}) ?W{i})"],
     "(seq (Scap{i} ?X{i} (Scap{i} ?Y{i} ?Z{i})) ?W{i})", True, "D.BL", "conv"),
    ("A.r", "A", ["(seq ?X{i} (Scup{i} (Scup{i} ?Y{i} ?Z{i}) ?W{i}))"],
     "(seq ?X{i} (Scup{i} ?Y{i} (Scup{i} ?Z{i} ?W{i})))", True, "D.BL", "conv"),
    ("W.l", "W", ["(seq ?X{i} ?Z{i})"], "(seq (Scap{i} ?X{i} ?Y{i}) ?Z{i})", True, "D.BL", ""),
    ("W.r", "W", ["(seq ?X{i} ?Y{i})"], "(seq ?X{i} (Scup{i} ?Y{i} ?Z{i}))", True, "D.BL", ""),
    ("C.l", "C", ["(seq (Scap{i} ?X{i} ?X{i}) ?Z{i})"], "(seq ?X{i} ?Z{i})", True, "D.BL", ""),
    ("C.r", "C", ["(seq ?X{i} (Scup{i} ?Y{i} ?Y{i}))"], "(seq ?X{i} ?Y{i})", True, "D.BL", ""),
    ("one.l", "one", ["(seq Sone{i} ?X{i})"], "(seq one{i} ?X{i})", True, "D.BL", ""),
    ("one.r", "one", [], "(seq Sone{i} one{i})", True, "D.BL", ""),
    ("zero.l", "zero", [], "(seq zero{i} Szero{i})", True, "D.BL", ""),
    ("zero.r", "zero", ["(seq ?X{i} Szero{i})"], "(seq ?X{i} zero{i})", True, "D.BL", ""),
    ("meet.l", "meet", ["(seq (Scap{i} ?A{i} ?B{i}) ?X{i})"], "(seq (meet{i} ?A{i} ?B{i}) ?X{i})", True, "D.BL", ""),
    ("meet.r", "meet", ["(seq ?X{i} ?A{i})", "(seq ?Y{i} ?B{i})"],
     "(seq (Scap{i} ?X{i} ?Y{i}) (meet{i} ?A{i} ?B{i}))", True, "D.BL", ""),
    ("join.l", "join", ["(seq ?A{i} ?X{i})", "(seq ?B{i} ?Y{i})"],
     "(seq (join{i} ?A{i} ?B{i}) (Scup{i} ?X{i} ?Y{i}))", True, "D.BL", ""),
    ("join.r", "join", ["(seq ?X{i} (Scup{i} ?A{i} ?B{i}))"], "(seq ?X{i} (join{i} ?A{i} ?B{i}))", True, "D.BL", ""),
    ("N", "N", ["(seq ?X1 ?Y1)"], "(seq (SN ?X1) (SN ?Y1))", False, "D.BL", "bi"),
    ("P", "P", ["(seq ?X2 ?Y2)"], "(seq (SP ?X2) (SP ?Y2))", False, "D.BL", "bi"),
    ("Pzero2", "Pzero2", ["(seq Szero1 ?X1)"], "(seq (SP Szero2) ?X1)", False, "D.BL", ""),
    ("Pone2", "Pone2", ["(seq ?X1 Sone1)"], "(seq ?X1 (SP Sone2))", False, "D.BL", ""),
    ("n.l", "n", ["(seq (SN ?A1) ?X2)"], "(seq (n ?A1) ?X2)", False, "D.BL", ""),
    ("n.r", "n", ["(seq ?X2 (SN ?A1))"], "(seq ?X2 (n ?A1))", False, "D.BL", ""),
    ("p.l", "p", ["(seq (SP ?A2) ?X1)"], "(seq (p ?A2) ?X1)", False, "D.BL", ""),
    ("p.r", "p", ["(seq ?X1 (SP ?A2))"], "(seq ?X1 (p ?A2))", False, "D.BL", ""),
    ("adj*.l", "adj*", ["(seq (Sstar{i} ?X{i}) ?Y{i})"], "(seq (Sstar{i} ?Y{i}) ?X{i})", True, "D.CBL", "bi"),
    ("adj*.r", "adj*", ["(seq ?X{i} (Sstar{i} ?Y{i}))"], "(seq ?Y{i} (Sstar{i} ?X{i}))", True, "D.CBL", "bi"),
    ("cont", "cont", ["(seq ?X{i} ?Y{i})"], "(seq (Sstar{i} ?Y{i}) (Sstar{i} ?X{i}))", True, "D.CBL", "bi"),
    ("star2N.l", "star2N", ["(seq (SN (Sstar1 ?X1)) ?Y2)"], "(seq (Sstar2 (SN ?X1)) ?Y2)", False, "D.CBL", ""),
    ("star2N.r", "star2N", ["(seq ?X2 (SN (Sstar1 ?Y1)))"], "(seq ?X2 (Sstar2 (SN ?Y1)))", False, "D.CBL", ""),
    ("sim.l", "sim", ["(seq (Sstar{i} ?A{i}) ?Y{i})"], "(seq (sim{i} ?A{i}) ?Y{i})", True, "D.CBL", ""),
    ("sim.r", "sim", ["(seq ?X{i} (Sstar{i} ?A{i}))"], "(seq ?X{i} (sim{i} ?A{i}))", True, "D.CBL", ""),
]

ALIASES = {"Id": "id", "Cut": "cut", "*": "adj*", "*2N": "star2N", "res*": "adj*"}


def _build() -> tuple[RuleSpec, ...]:
    out = []
    for rid, fam, prem, concl, per_sort, system, mode in _RAW:
        for i in ((1, 2) if per_sort else (None,)):
            def pat(text):
                return parse_mt(text.replace("{i}", str(i)), patterns=True)

            ps = tuple(pat(t) for t in prem)
            c = pat(concl)
            if mode == "":
                out.append(RuleSpec(rid, fam, ps, c, i, system))
                continue
            bi = mode == "bi"
            out.append(RuleSpec(rid, fam, ps, c, i, system, bi, f"{rid}.inv"))
            out.append(RuleSpec(f"{rid}.inv", fam, (c,), ps[0], i, system, bi, rid, convenience=not bi))
    return tuple(out)


RULES: tuple[RuleSpec, ...] = _build()


def rule_table(system: str = "D.CBL") -> list[RuleSpec]:
    system = normalize_system(system)
    if system == "D.CBL":
        return list(RULES)
    return [r for r in RULES if r.system == "D.BL"]


def normalize_system(system: str) -> str:
    key = system.upper().replace(".", "").replace("-", "")
    if key in ("DBL", "BL"):
        return "D.BL"
    if key in ("DCBL", "CBL"):
        return "D.CBL"
    raise ValueError(f"unknown system {system!r}")


@lru_cache(maxsize=None)
def lookup(rule_id: str) -> tuple[RuleSpec, ...]:
    """Rules cited by ``rule_id``: an exact id, or every member of a family."""
    rule_id = ALIASES.get(rule_id, rule_id)
    exact = tuple(r for r in RULES if r.id == rule_id)
    if exact:
        return exact
    return tuple(r for r in RULES if r.family == rule_id)


# ---------------------------------------------------------------------------
# matching

def match(pat, term, binds: dict) -> dict | None:
    if isinstance(pat, Meta):
        if term.sort != pat.sort:
            return None
        if pat.kind == "formula" and not is_formula(term):
            return None
        if pat.kind == "atom" and not isinstance(term, MAtom):
            return None
        key = (pat.name, pat.sort)
        if key in binds:
            return binds if binds[key] == term else None
        out = dict(binds)
        out[key] = term
        return out
    if type(pat) is not type(term):
        return None
    if isinstance(pat, Sequent):
        b = match(pat.lhs, term.lhs, binds)
        return None if b is None else match(pat.rhs, term.rhs, b)
    if isinstance(pat, (MAtom, MConst, SConst)):
        return binds if pat == term else None
    if isinstance(pat, (MBin, SBin, MRes)):
        if pat.op != term.op or pat.sort != term.sort:
            return None
        b = match(pat.left, term.left, binds)
        return None if b is None else match(pat.right, term.right, b)
    if isinstance(pat, (MSim, SStar)):
        if pat.sort != term.sort:
            return None
        return match(pat.arg, term.arg, binds)
    if isinstance(pat, (MP, MN, SN, SP)):
        return match(pat.arg, term.arg, binds)
    return None


def instantiate(pat, binds: dict):
    if isinstance(pat, Meta):
        return binds[(pat.name, pat.sort)]
    if isinstance(pat, Sequent):
        return Sequent(instantiate(pat.lhs, binds), instantiate(pat.rhs, binds))
    if isinstance(pat, (MBin, SBin, MRes)):
        return type(pat)(pat.op, pat.sort, instantiate(pat.left, binds), instantiate(pat.right, binds))
    if isinstance(pat, (MSim, SStar)):
        return type(pat)(pat.sort, instantiate(pat.arg, binds))
    if isinstance(pat, (MP, MN, SN, SP)):
        return type(pat)(instantiate(pat.arg, binds))
    return pat


def metas_of(pat) -> set:
    if isinstance(pat, Meta):
        return {(pat.name, pat.sort)}
    if isinstance(pat, Sequent):
        return metas_of(pat.lhs) | metas_of(pat.rhs)
    if isinstance(pat, (MBin, SBin, MRes)):
        return metas_of(pat.left) | metas_of(pat.right)
    if isinstance(pat, (MSim, SStar, MP, MN, SN, SP)):
        return metas_of(pat.arg)
    return set()


def instance_of(spec: RuleSpec, conclusion: Sequent, premises: list[Sequent]) -> dict | None:
    if spec.arity != len(premises):
        return None
    b = match(spec.conclusion, conclusion, {})
    for pp, s in zip(spec.premises, premises):
        if b is None:
            return None
        b = match(pp, s, b)
    return b


# ---------------------------------------------------------------------------
# checking

def check_step(rule_id: str, conclusion: Sequent, premises: list[Sequent], system: str = "D.CBL",
               locus=()) -> Verdict:
    """Check a single inference."""
    system = normalize_system(system)
    specs = lookup(rule_id)
    if not specs:
        return rejected(locus, "UnknownRule", f"no rule named {rule_id!r}", rule=rule_id)
    if system == "D.BL":
        if any(uses_star(s) for s in [conclusion, *premises]):
            return rejected(locus, "SystemViolation", "D.CBL-only symbol in a D.BL proof", rule=rule_id)
        allowed = [r for r in specs if r.system == "D.BL"]
        if not allowed:
            return rejected(locus, "SystemViolation", f"{rule_id} is a D.CBL rule", rule=rule_id)
        specs = tuple(allowed)
    if not any(r.arity == len(premises) for r in specs):
        return rejected(locus, "ArityMismatch",
                        f"{rule_id} takes {sorted({r.arity for r in specs})} premises, got {len(premises)}",
                        rule=rule_id)
    for r in specs:
        if instance_of(r, conclusion, premises) is not None:
            return accepted(rule=r.id)
    return rejected(locus, "PatternMismatch", f"{conclusion} does not follow by {rule_id}", rule=rule_id)


def check_proof(tree: ProofTree, system: str = "D.CBL") -> Verdict:
    """Accept iff every node is an instance of the rule it cites; rejection names the node's path."""
    rules_used: dict[str, int] = {}
    for path, node in tree.nodes():
        v = check_step(node.rule, node.conclusion, [p.conclusion for p in node.premises], system, path)
        if not v.ok:
            return v
        rules_used[v.rule] = rules_used.get(v.rule, 0) + 1
    return accepted(message=f"{tree.size()} nodes", details={"conclusion": str(tree.conclusion),
                                                             "rules": rules_used})


def apply_backward(rule_id: str, goal: Sequent, system: str = "D.CBL") -> list[list[Sequent]]:
    """Every premise list from which ``rule_id`` yields ``goal``.

    Rules whose premises mention variables absent from the conclusion (cut)
    cannot be inverted and contribute nothing.
    """
    system = normalize_system(system)
    out: list[list[Sequent]] = []
    for r in lookup(rule_id):
        if system == "D.BL" and r.system != "D.BL":
            continue
        b = match(r.conclusion, goal, {})
        if b is None:
            continue
        if any(not metas_of(p) <= b.keys() for p in r.premises):
            continue
        prem = [instantiate(p, b) for p in r.premises]
        if prem not in out:
            out.append(prem)
    return out


def backward_steps(goal: Sequent, rules, out: list | None = None) -> list[tuple[RuleSpec, list[Sequent]]]:
    """All ``(rule, premises)`` pairs from ``rules`` that conclude ``goal``."""
    out = [] if out is None else out
    for r in rules:
        b = match(r.conclusion, goal, {})
        if b is None:
            continue
        if any(not metas_of(p) <= b.keys() for p in r.premises):
            continue
        out.append((r, [instantiate(p, b) for p in r.premises]))
    return out
