import pytest
from hypothesis import given, settings, strategies as st

from bilat import translate as tr
from bilat.catalog import bundled
from bilat.syntax import Atom, Bin, Confl, Neg, TruthConst, complexity, parse_formula, parse_fsequent, parse_mt
from bilat.translate import ConflInBLMode, commutation_check, t1, t2, translate_sequent


def mt(text):
    return parse_mt(text)


def test_negation_clauses():
    assert t1(parse_formula("!p")) == mt("(p p2)")
    assert t2(parse_formula("!p")) == mt("(n p1)")


def test_conjunction_clauses():
    A = parse_formula("p & q")
    assert t1(A) == mt("(meet1 p1 q1)")
    assert t2(A) == mt("(join2 p2 q2)")


def test_constants():
    assert t1(TruthConst("t")) == mt("one1")
    assert t2(TruthConst("t")) == mt("zero2")
    assert t1(TruthConst("bot")) == mt("zero1")
    assert t2(TruthConst("top")) == mt("one2")


def test_conflation_clauses():
    assert t1(parse_formula("-p")) == mt("(p (sim2 p2))")
    assert t2(parse_formula("-p")) == mt("(n (sim1 p1))")
    with pytest.raises(ConflInBLMode):
        t1(parse_formula("-p"), conflation=False)


def test_sequent_examples():
    assert translate_sequent(parse_fsequent("f |- p")) == mt("(seq zero1 p1)")
    assert translate_sequent(parse_fsequent("!!p |- p")) == mt("(seq (p (n p1)) p1)")
    assert translate_sequent(parse_fsequent("p |- p")) == mt("(seq p1 p1)")


def test_side_two_reverses():
    assert translate_sequent(parse_fsequent("p & q |- p"), side=2) == mt("(seq p2 (join2 p2 q2))")


formulas = st.recursive(
    st.sampled_from([Atom("p"), Atom("q"), TruthConst("t"), TruthConst("f"), TruthConst("top"), TruthConst("bot")]),
    lambda sub: st.one_of(
        sub.map(Neg), sub.map(Confl),
        st.tuples(st.sampled_from(["and", "or", "tens", "plus"]), sub, sub).map(lambda t: Bin(*t)),
    ),
    max_leaves=10,
)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_sorts_and_size(A):
    a, b = t1(A), t2(A)
    assert a.sort == 1 and b.sort == 2
    assert complexity(a) <= 2 * complexity(A) + 1
    assert complexity(b) <= 2 * complexity(A) + 1


def test_commutation_on_four():
    v = commutation_check(bundled().bilattices["four"])
    assert v.ok, v
    assert v.details["classes"] == 266


def test_commutation_catches_wrong_clause(monkeypatch):
    broken = dict(tr._BIN)
    broken["tens"] = ("meet", "join")
    monkeypatch.setattr(tr, "_BIN", broken)
    v = commutation_check(bundled().bilattices["four"])
    assert not v.ok and "does not commute" in v.message
