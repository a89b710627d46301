import json

import pytest

from bilat import bundle
from bilat.catalog import bundled
from bilat.hilbert import (
    ArityMismatch, HilbertProof, HilbertStep, UnknownSchema, check_hilbert, match_axiom, parse_hilbert,
    schema_soundness, schema_table,
)
from bilat.syntax import Atom, parse_fsequent


def script(*steps):
    return parse_hilbert("\n".join(json.dumps(s) for s in steps))


def ax(seq, name):
    return {"seq": seq, "by": {"axiom": name}}


def rule(seq, name, *prem):
    return {"seq": seq, "by": {"rule": name, "from": list(prem)}}


def test_match_axiom_examples():
    assert match_axiom(parse_fsequent("f |- p")) == [("ax-f-bot", {"A": Atom("p")})]
    assert [m[0] for m in match_axiom(parse_fsequent("!!p |- p"))] == ["ax-dneg-l"]
    assert match_axiom(parse_fsequent("p |- q")) == []


def test_identity_matches_several():
    ids = {sid for sid, _ in match_axiom(parse_fsequent("t |- t"))}
    assert {"ax-id", "ax-t-top"} <= ids


def test_table_sizes():
    bl = schema_table("BL")
    cbl = schema_table("CBL")
    assert len(cbl) - len(bl) == 16
    assert all(s.system == "BL" for s in bl)


def test_two_axioms_and_transitivity():
    p = script(ax("f |- p", "ax-f-bot"), ax("p |- p | q", "ax-or-r1"), rule("f |- p | q", "trans", 1, 2))
    assert check_hilbert(p, "BL").ok


def test_cbl_axiom_in_bl_rejected():
    p = script(ax("p |- p", "ax-id"), ax("-f |- p", "ax-conff-bot"))
    v = check_hilbert(p, "BL")
    assert not v.ok and v.locus == 2
    assert check_hilbert(p, "CBL").ok


def test_forward_reference_rejected():
    p = script(rule("f |- p | q", "trans", 2, 3), ax("f |- p", "ax-f-bot"), ax("p |- p | q", "ax-or-r1"))
    v = check_hilbert(p, "BL")
    assert not v.ok and v.locus == 1 and v.code == "BadReference"


def test_pattern_mismatch_located():
    p = script(ax("p |- p", "ax-id"), ax("p & q |- q", "ax-and-l1"))
    v = check_hilbert(p, "BL")
    assert not v.ok and v.locus == 2 and v.code == "PatternMismatch"


def test_wrong_middle_formula():
    p = script(ax("f |- p", "ax-f-bot"), ax("q |- q | r", "ax-or-r1"), rule("f |- q | r", "trans", 1, 2))
    assert check_hilbert(p, "BL").locus == 3


def test_unknown_schema_and_arity():
    with pytest.raises(UnknownSchema):
        check_hilbert(script(ax("p |- p", "ax-nonsense")), "BL")
    with pytest.raises(UnknownSchema):
        check_hilbert(script(ax("p |- p", "ax-id"), rule("p |- p", "modus", 1)), "BL")
    with pytest.raises(ArityMismatch):
        check_hilbert(script(ax("p |- p", "ax-id"), rule("p |- p", "trans", 1)), "BL")


def test_printed_axiom_is_opt_in():
    s = "p * (q + r) |- (p * q) | (p + r)"
    p = script(ax(s, "ax-dist-tens-plus-printed"))
    assert check_hilbert(p, "BL", printed=True).ok
    assert not check_hilbert(p, "BL").ok


def test_jsonl_round_trip():
    proof = HilbertProof([HilbertStep(parse_fsequent("p |- p"), axiom="ax-id"),
                          HilbertStep(parse_fsequent("p + p |- p"), rule="plus-l", premises=(1, 1))])
    again = parse_hilbert(proof.to_jsonl())
    assert again.steps == proof.steps


def test_bundled_scripts_accepted():
    scripts = bundle.hilbert_scripts()
    assert len(scripts) >= 8
    for name, system, proof in scripts:
        assert check_hilbert(proof, system).ok, name


def test_schema_soundness():
    cat = bundled()
    assert schema_soundness(cat.bilattices.values(), "BL") == []
    assert schema_soundness(cat.conflation_bilattices().values(), "CBL") == []


def test_printed_axiom_also_sound():
    # the printed variant is weaker than distributivity but still valid
    assert schema_soundness(bundled().bilattices.values(), "BL", printed=True) == []


def test_broken_schema_caught():
    from bilat.algebra import consequence
    from bilat.syntax import parse_formula

    # the converse of ax-and-l1 would not be sound
    v = consequence(bundled().bilattices["four"], parse_formula("p"), parse_formula("p & q"))
    assert not v.ok
