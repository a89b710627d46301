import pytest
from hypothesis import given, settings, strategies as st

from bilat import bundle
from bilat.syntax import (
    And, Atom, Bin, Confl, FSequent, MAtom, MBin, MixedTierError, MN, MP, MSim, Neg, ParseError, ProofTree,
    SN, SortError, Sequent, Tens, TruthConst, complexity, parse_formula, parse_fsequent, parse_mt,
    parse_mt_many, pretty_print,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_neg_of_and():
    assert parse_formula("!(p & q)") == Neg(And(p, q))
    assert pretty_print(Neg(And(p, q))) == "!(p & q)"


def test_tens_of_constants():
    assert parse_formula("t * f") == Tens(TruthConst("t"), TruthConst("f"))


def test_mixed_tier_rejected():
    with pytest.raises(MixedTierError) as e:
        parse_formula("p & q * r")
    assert e.value.position == 6


def test_mixed_tier_ok_with_parens():
    assert parse_formula("p & (q * r)") == And(p, Tens(q, r))


def test_chains_are_left_associative():
    assert parse_formula("p | q | r") == Bin("or", Bin("or", p, q), r)
    assert pretty_print(Bin("or", p, Bin("or", q, r))) == "p | (q | r)"


def test_tiers_bind_differently():
    # & binds tighter than +, so this is not a mixed chain
    assert parse_formula("p & q + r") == Bin("plus", And(p, q), r)


def test_unary_stack():
    assert parse_formula("-!-p") == Confl(Neg(Confl(p)))


@pytest.mark.parametrize("bad", ["p &", "(p", "p q", "& p", "p |- ", "1p"])
def test_syntax_errors(bad):
    with pytest.raises(ParseError):
        parse_fsequent(bad) if "|-" in bad else parse_formula(bad)


def test_parse_error_has_expected_set():
    with pytest.raises(ParseError) as e:
        parse_formula("(p & q")
    assert ")" in e.value.expected


def test_mt_examples():
    t = parse_mt("(p (meet2 a2 b2))")
    assert t == MP(MBin("meet", 2, MAtom("a2"), MAtom("b2")))
    assert t.sort == 1
    s = parse_mt("(seq (SN a1) b2)")
    assert s == Sequent(SN(MAtom("a1")), MAtom("b2")) and s.sort == 2


@pytest.mark.parametrize("bad", ["(meet1 a1 b2)", "(n a2)", "(p a1)", "(seq a1 a2)", "(SN b2)", "(sim1 a2)"])
def test_sort_errors(bad):
    with pytest.raises(SortError):
        parse_mt(bad)


def test_sort_error_at_construction():
    with pytest.raises(SortError):
        MN(MAtom("a2"))


def test_mt_printing():
    assert pretty_print(MP(MN(MAtom("a1")))) == "(p (n a1))"
    assert pretty_print(Sequent(MAtom("a1"), MAtom("a1"))) == "(seq a1 a1)"


def test_complexity():
    assert complexity(p) == 0
    assert complexity(Neg(And(p, q))) == 2
    assert complexity(MP(MSim(2, MN(MAtom("a1"))))) == 3


def test_corpus_round_trip():
    seen = 0
    for entry in bundle.derivation_trees() + bundle.cut_inputs():
        for t in entry.trees:
            assert parse_mt(pretty_print(t)) == t
            for _, node in t.nodes():
                assert parse_mt(pretty_print(node.conclusion)) == node.conclusion
            seen += 1
    assert seen >= 40
    for s in bundle.sequent_corpus():
        assert parse_fsequent(str(s)) == s


def test_many_skips_comments():
    items = parse_mt_many("; a comment\n(seq a1 a1) ; trailing\n(by id (seq a1 a1))")
    assert isinstance(items[0], Sequent) and isinstance(items[1], ProofTree)


# property-based round trips

atoms = st.sampled_from([Atom("p"), Atom("q"), Atom("x1y"), TruthConst("t"), TruthConst("bot")])
formulas = st.recursive(
    atoms,
    lambda sub: st.one_of(
        sub.map(Neg), sub.map(Confl),
        st.tuples(st.sampled_from(["and", "or", "tens", "plus"]), sub, sub).map(lambda t: Bin(*t)),
    ),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_formula_round_trip(a):
    text = pretty_print(a)
    assert parse_formula(text) == a


@settings(max_examples=200, deadline=None)
@given(formulas, formulas)
def test_fsequent_round_trip(a, b):
    s = FSequent(a, b)
    assert parse_fsequent(str(s)) == s


mt1 = st.deferred(lambda: st.one_of(
    st.sampled_from(["a1", "b1", "one1", "zero1"]),
    st.tuples(st.sampled_from(["meet1", "join1"]), mt1, mt1).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
    mt2.map(lambda x: f"(p {x})"),
    mt1.map(lambda x: f"(sim1 {x})"),
))
mt2 = st.deferred(lambda: st.one_of(
    st.sampled_from(["a2", "b2", "one2", "zero2"]),
    st.tuples(st.sampled_from(["meet2", "join2"]), mt2, mt2).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
    mt1.map(lambda x: f"(n {x})"),
))


@settings(max_examples=200, deadline=None)
@given(mt1)
def test_mt_round_trip(text):
    t = parse_mt(text)
    assert pretty_print(t) == text
    assert t.sort == 1
