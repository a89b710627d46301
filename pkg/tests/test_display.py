import itertools
import random

import pytest

from bilat import bundle
from bilat.display import (
    RULES, apply_backward, check_proof, check_step, normalize_system, rule_table,
)
from bilat.syntax import ProofTree, Sequent, parse_mt, pretty_print
from bilat.translate import translate_sequent


def tree(text):
    return parse_mt(text)


DNEG = """
(by p.l (seq (p (n a1)) a1)
  (by adj.P.inv (seq (SP (n a1)) a1)
    (by n.l (seq (n a1) (SN a1))
      (by N (seq (SN a1) (SN a1))
        (by id (seq a1 a1))))))
"""


def test_dneg_tree_accepted():
    v = check_proof(tree(DNEG), "D.BL")
    assert v.ok, v
    assert v.details["rules"]["id"] == 1


def test_dconf_needs_cbl():
    e = bundle.load_mts(bundle.CORPUS_DIR / "paper" / "dconf.mts")
    assert check_proof(e.tree, "D.CBL").ok
    v = check_proof(e.tree, "D.BL")
    assert not v.ok and v.code == "SystemViolation"


def test_id_is_atomic_only():
    v = check_proof(tree("(by id (seq (meet1 a1 b1) (meet1 a1 b1)))"), "D.BL")
    assert not v.ok and v.locus == ()


def test_unknown_rule():
    v = check_proof(tree("(by frobnicate (seq a1 a1))"), "D.BL")
    assert not v.ok and v.code == "UnknownRule"


def test_arity_checked():
    v = check_proof(tree("(by id (seq a1 a1) (by id (seq a1 a1)))"), "D.BL")
    assert not v.ok and v.code == "ArityMismatch"


def test_mutation_reports_locus():
    t = tree(DNEG)
    # relabel the n.l step
    bad = t.replace((0, 0), ProofTree("p.l", t.at((0, 0)).conclusion, t.at((0, 0)).premises))
    v = check_proof(bad, "D.BL")
    assert not v.ok and v.locus == (0, 0) and v.rule == "p.l"
    # swap an atom deep in the tree
    leaf = parse_mt("(by id (seq b1 b1))")
    v = check_proof(t.replace((0, 0, 0, 0), leaf), "D.BL")
    assert not v.ok and v.locus == (0, 0, 0)


def test_repeated_metavariable_needs_equal_bindings():
    step = check_step("C.l", parse_mt("(seq a1 b1)"), [parse_mt("(seq (Scap1 a1 a1) b1)")], "D.BL")
    assert step.ok
    step = check_step("C.l", parse_mt("(seq a1 b1)"), [parse_mt("(seq (Scap1 a1 c1) b1)")], "D.BL")
    assert not step.ok


def test_backward_examples():
    assert apply_backward("res", parse_mt("(seq (Scap1 a1 b1) c1)")) == [[parse_mt("(seq a1 (SrresR1 b1 c1))")]]
    assert apply_backward("adj", parse_mt("(seq (SP a2) b1)")) == [[parse_mt("(seq a2 (SN b1))")]]
    assert apply_backward("meet.r", parse_mt("(seq a1 (meet1 a1 b1))")) == []


def test_cut_is_not_invertible():
    assert apply_backward("cut", parse_mt("(seq a1 b1)")) == []


def test_rule_tables():
    bl, cbl = rule_table("dbl"), rule_table("dcbl")
    assert not any("star" in pretty_print(r.conclusion) or "sim" in pretty_print(r.conclusion) for r in bl)
    assert set(r.id + str(r.sort) for r in bl) <= set(r.id + str(r.sort) for r in cbl)
    assert {r.family for r in cbl} - {r.family for r in bl} == {"adj*", "cont", "star2N", "sim"}
    for r in RULES:
        if r.bidirectional:
            pair = [x for x in RULES if x.id in (r.id, r.inverse) and x.sort == r.sort]
            assert len(pair) == 2


def test_associativity_flagged_as_convenience():
    conv = {r.id for r in RULES if r.convenience}
    assert conv == {"A.l.inv", "A.r.inv"}


def test_system_names():
    assert normalize_system("dbl") == "D.BL"
    assert normalize_system("D.CBL") == "D.CBL"
    with pytest.raises(ValueError):
        normalize_system("K4")


def test_derivation_corpus():
    entries = bundle.derivation_trees()
    idexp = [e for e in entries if e.name.startswith("idexp_")]
    assert len(idexp) == 6
    assert len(entries) - len(idexp) == 14
    for e in entries:
        system = normalize_system(e.system)
        for t in e.trees:
            v = check_proof(t, system)
            assert v.ok, (e.name, v)
            assert "cut" not in v.details["rules"]
        for g in e.goals:
            assert translate_sequent(g) == e.tree.conclusion, e.name


def _structures(sort, depth):
    atoms = [parse_mt(f"a{sort}"), parse_mt(f"b{sort}")]
    if depth == 0:
        return atoms
    smaller = _structures(sort, depth - 1)
    other = _structures(3 - sort, depth - 1)
    out = list(atoms)
    for x, y in itertools.product(smaller[:4], repeat=2):
        out.append(parse_mt(f"(Scap{sort} {pretty_print(x)} {pretty_print(y)})"))
        out.append(parse_mt(f"(Scup{sort} {pretty_print(x)} {pretty_print(y)})"))
    head = "SP" if sort == 1 else "SN"
    out += [parse_mt(f"({head} {pretty_print(x)})") for x in other[:4]]
    out += [parse_mt(f"(Sstar{sort} {pretty_print(x)})") for x in smaller[:3]]
    return out


def test_backward_forward_coherence():
    rng = random.Random(3)
    goals = []
    for sort in (1, 2):
        S = _structures(sort, 2)
        goals += [Sequent(rng.choice(S), rng.choice(S)) for _ in range(60)]
    checked = 0
    for g in goals:
        for r in rule_table("dcbl"):
            for prem in apply_backward(r.id, g):
                assert check_step(r.id, g, prem, "D.CBL").ok
                checked += 1
    assert checked > 100
