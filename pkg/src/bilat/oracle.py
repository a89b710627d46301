"""Brute-force semantics for the two-sorted calculi.

Structures are read as terms according to their position in a sequent, rules
become quasi-inequalities, and both are checked by sweeping every assignment
into the finite heterogeneous bilattices of a catalog.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .algebra import FiniteHBL, consequence, evaluate_mt
from .syntax import (
    FSequent, MAtom, MBin, MConst, MN, MP, MRes, MSim, Meta, PolarityError, SBin, SConst, SN, SP,
    SStar, Sequent, SortError, mt_atoms, pretty_print, uses_conflation, uses_star,
)
from .verdict import Verdict, countermodel, valid

PRECEDENT = "precedent"
SUCCEDENT = "succedent"

_FLIP = {PRECEDENT: SUCCEDENT, SUCCEDENT: PRECEDENT}


def _position(pos: str) -> str:
    key = pos.lower()
    if key in ("precedent", "antecedent", "l", "left"):
        return PRECEDENT
    if key in ("succedent", "consequent", "r", "right"):
        return SUCCEDENT
    raise ValueError(f"unknown position {pos!r}")


def meta_variable(m: Meta) -> MAtom:
    return MAtom(f"{m.name.lower()}{m.sort}")


def structure_to_term(S, position: str = PRECEDENT):
    """Read a structure as a two-sorted term.

    Hat connectives are only meaningful in precedent position and check
    connectives in succedent position; ``*`` and the first argument of a
    residual flip the position.
    """
    pos = _position(position)
    if isinstance(S, Meta):
        return meta_variable(S)
    if isinstance(S, MAtom | MConst):
        return S
    if isinstance(S, MBin | MRes):
        return type(S)(S.op, S.sort, structure_to_term(S.left, pos), structure_to_term(S.right, pos))
    if isinstance(S, MP):
        return MP(structure_to_term(S.arg, pos))
    if isinstance(S, MN):
        return MN(structure_to_term(S.arg, pos))
    if isinstance(S, MSim):
        return MSim(S.sort, structure_to_term(S.arg, pos))
    if isinstance(S, SConst):
        return MConst(S.kind, S.sort)
    if isinstance(S, SN):
        return MN(structure_to_term(S.arg, pos))
    if isinstance(S, SP):
        return MP(structure_to_term(S.arg, pos))
    if isinstance(S, SStar):
        return MSim(S.sort, structure_to_term(S.arg, _FLIP[pos]))
    if isinstance(S, SBin):
        need = PRECEDENT if S.op in ("cap", "rresL") else SUCCEDENT
        if pos != need:
            raise PolarityError(S, need, pos, f"S{S.op}{S.sort} cannot occur in {pos} position")
        if S.op == "cap":
            return MBin("meet", S.sort, structure_to_term(S.left, pos), structure_to_term(S.right, pos))
        if S.op == "cup":
            return MBin("join", S.sort, structure_to_term(S.left, pos), structure_to_term(S.right, pos))
        if S.op == "rresR":
            return MRes("imp", S.sort, structure_to_term(S.left, PRECEDENT),
                        structure_to_term(S.right, SUCCEDENT))
        return MRes("sub", S.sort, structure_to_term(S.left, PRECEDENT),
                    structure_to_term(S.right, SUCCEDENT))
    raise SortError(S, "structure", type(S).__name__)


# ---------------------------------------------------------------------------
# quasi-inequalities

@dataclass(frozen=True)
class Ineq:
    lhs: object
    rhs: object
    sort: int

    def holds(self, H: FiniteHBL, v: dict) -> bool:
        L = H.lattice(self.sort)
        return L.leq[evaluate_mt(H, v, self.lhs)][evaluate_mt(H, v, self.rhs)]

    def __str__(self) -> str:
        return f"{pretty_print(self.lhs)} <={self.sort} {pretty_print(self.rhs)}"


def sequent_to_ineq(s: Sequent) -> Ineq:
    return Ineq(structure_to_term(s.lhs, PRECEDENT), structure_to_term(s.rhs, SUCCEDENT), s.sort)


@dataclass(frozen=True)
class QuasiInequality:
    rule: str
    variables: tuple[MAtom, ...]
    premises: tuple[Ineq, ...]
    conclusion: Ineq
    bidirectional: bool = False

    @property
    def uses_sim(self) -> bool:
        return any(uses_star(i.lhs) or uses_star(i.rhs) for i in (*self.premises, self.conclusion))

    def __str__(self) -> str:
        quant = "".join(f"forall {v.name} " for v in self.variables)
        prem = " & ".join(str(p) for p in self.premises) or "true"
        arrow = "<=>" if self.bidirectional else "=>"
        return f"{quant}[{prem} {arrow} {self.conclusion}]"


def _variables(*terms) -> tuple[MAtom, ...]:
    names: dict[str, None] = {}
    for t in terms:
        for a in mt_atoms(t):
            names.setdefault(a)
    return tuple(MAtom(n) for n in names)


def rule_to_qi(rule) -> QuasiInequality:
    prem = tuple(sequent_to_ineq(p) for p in rule.premises)
    concl = sequent_to_ineq(rule.conclusion)
    terms = [x for i in (*prem, concl) for x in (i.lhs, i.rhs)]
    return QuasiInequality(rule.id, _variables(*terms), prem, concl, rule.bidirectional)


def _assignments(H: FiniteHBL, variables):
    ranges = [range(H.lattice(v.sort).size) for v in variables]
    names = [v.name for v in variables]
    for vals in itertools.product(*ranges):
        yield dict(zip(names, vals))


def _shown(H: FiniteHBL, v: dict) -> dict:
    return {k: H.lattice(int(k[-1])).carrier[x] for k, x in v.items()}


def check_qi(qi: QuasiInequality, H: FiniteHBL) -> Verdict:
    """Sweep every assignment; a bidirectional quasi-inequality is checked both ways."""
    if qi.uses_sim and not H.cbl:
        return Verdict(True, "skipped", model=H.name, rule=qi.rule, message="model has no conflation")
    count = 0
    for v in _assignments(H, qi.variables):
        count += 1
        lhs = all(p.holds(H, v) for p in qi.premises)
        rhs = qi.conclusion.holds(H, v)
        if lhs and not rhs:
            return countermodel(H.name, _shown(H, v), f"premises hold but {qi.conclusion} fails", rule=qi.rule)
        if qi.bidirectional and rhs and not lhs:
            return countermodel(H.name, _shown(H, v), f"{qi.conclusion} holds but a premise fails",
                                rule=qi.rule)
    return valid(model=H.name, rule=qi.rule, details={"assignments": count})


def check_rule_soundness(rule, H: FiniteHBL) -> Verdict:
    return check_qi(rule_to_qi(rule), H)


def soundness_sweep(rules: Iterable, models: Iterable[FiniteHBL]) -> list[dict]:
    """One row per rule: the models it was checked on and the first countermodel, if any."""
    models = list(models)
    rows = []
    for r in rules:
        qi = rule_to_qi(r)
        checked, failure = [], None
        for H in models:
            v = check_qi(qi, H)
            if v.kind == "skipped":
                continue
            checked.append(H.name)
            if not v.ok:
                failure = v.to_json()
                break
        rows.append({"rule": r.id, "sort": r.sort, "qi": str(qi), "models": checked,
                     "sound": failure is None, "countermodel": failure})
    return rows


# ---------------------------------------------------------------------------
# validity

def _models(catalog) -> list[FiniteHBL]:
    if catalog is None:
        from .catalog import bundled
        catalog = bundled()
    if hasattr(catalog, "hbls"):
        return list(catalog.hbls.values())
    if isinstance(catalog, FiniteHBL):
        return [catalog]
    return list(catalog)


def mt_valid(s: Sequent, catalog=None) -> Verdict:
    """``lhs <= rhs`` under every valuation into every model of the catalog.

    Sequents mentioning ``sim`` are only checked on models with conflation.
    """
    ineq = sequent_to_ineq(s)
    needs_sim = uses_star(ineq.lhs) or uses_star(ineq.rhs)
    variables = _variables(ineq.lhs, ineq.rhs)
    checked = []
    for H in _models(catalog):
        if needs_sim and not H.cbl:
            continue
        checked.append(H.name)
        for v in _assignments(H, variables):
            if not ineq.holds(H, v):
                L = H.lattice(ineq.sort)
                return countermodel(H.name, _shown(H, v),
                                    f"{L.carrier[evaluate_mt(H, v, ineq.lhs)]} is not below "
                                    f"{L.carrier[evaluate_mt(H, v, ineq.rhs)]}")
    return valid(details={"models": checked})


def st_valid(s: FSequent, catalog=None) -> Verdict:
    """Single-type consequence on every catalog bilattice (with conflation if ``s`` uses it)."""
    if catalog is None:
        from .catalog import bundled
        catalog = bundled()
    bils = catalog.bilattices.values() if hasattr(catalog, "bilattices") else catalog
    needs = uses_conflation(s.lhs) or uses_conflation(s.rhs)
    checked = []
    for B in bils:
        if needs and B.confl is None:
            continue
        checked.append(B.name)
        v = consequence(B, s.lhs, s.rhs)
        if not v.ok:
            return v
    return valid(details={"models": checked})


# ---------------------------------------------------------------------------
# conservativity

@dataclass
class ConservativityRow:
    sequent: str
    system: str
    hilbert: str  # "yes" or "unknown"
    search: str  # "proved" or "exhausted"
    single: bool  # designation-preserving on FOUR
    multi: bool  # translation valid on every catalog model
    single_catalog: bool = True  # designation-preserving on every catalog bilattice
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"sequent": self.sequent, "system": self.system, "hilbert": self.hilbert,
                "search": self.search, "single_valid_four": self.single, "multi_valid": self.multi,
                "single_valid_catalog": self.single_catalog, "violations": self.violations}


def hilbert_derivable(s: FSequent, system: str, scripts: Iterable = ()) -> bool:
    """True if ``s`` is an axiom instance or the checked conclusion of one of ``scripts``."""
    from .hilbert import check_hilbert, match_axiom

    if match_axiom(s, system):
        return True
    for proof in scripts:
        if proof.steps and proof.conclusion == s and check_hilbert(proof, system).ok:
            return True
    return False


def conservativity_report(corpus: Iterable[FSequent], catalog=None, scripts: Iterable = (),
                          depth: int = 12, max_nodes: int = 20000) -> list[ConservativityRow]:
    """Compare Hilbert derivability, display search and both semantics on each sequent.

    Flags a proved sequent that fails on FOUR, a Hilbert-derivable sequent
    whose translation is not valid, and a FOUR countervaluation whose
    translation is nevertheless valid.  Designation on bigger bilattices is
    weaker than the order, so the catalog-wide single-type verdict is
    reported but not compared.
    """
    from .catalog import bundled, four
    from .search import Exhausted, prove
    from .translate import translate_sequent

    catalog = catalog or bundled()
    FOUR = catalog.bilattices.get("four") or four()
    scripts = list(scripts)
    rows = []
    for s in corpus:
        cbl = uses_conflation(s.lhs) or uses_conflation(s.rhs)
        system = "CBL" if cbl else "BL"
        mt = translate_sequent(s)
        hil = hilbert_derivable(s, system, scripts)
        proved = not isinstance(prove(mt, "D.CBL" if cbl else "D.BL", max_depth=depth, max_nodes=max_nodes),
                                Exhausted)
        single = consequence(FOUR, s.lhs, s.rhs).ok
        multi = mt_valid(mt, catalog).ok
        row = ConservativityRow(str(s), system, "yes" if hil else "unknown",
                                "proved" if proved else "exhausted", single, multi,
                                st_valid(s, catalog).ok)
        if proved and not single:
            row.violations.append("provable but invalid on FOUR")
        if hil and not multi:
            row.violations.append("Hilbert-derivable but two-sorted invalid")
        if multi and not single:
            row.violations.append("FOUR countervaluation with a valid translation")
        rows.append(row)
    return rows
