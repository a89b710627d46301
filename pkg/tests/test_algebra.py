import copy
import itertools

import pytest

from bilat.algebra import (
    AlgebraError, FiniteDeMorgan, FiniteHBL, FiniteLattice, NotDistributive, NotRegular,
    UnboundAtom, b_plus, chain, consequence, evaluate, evaluate_mt, f_inv, h_plus, pi, product_bilattice,
    product_cbilattice, reg, regular_elements, roundtrip_checks,
)
from bilat.catalog import Catalog, bundled, default_catalog, four, two_chain
from bilat.syntax import parse_formula, parse_mt


@pytest.fixture(scope="module")
def F():
    return four()


def test_four_from_two_chain():
    P = product_bilattice(chain(["0", "1"]))
    assert P.carrier[P.t] == "<1,0>"
    assert P.carrier[P.f] == "<0,1>"
    assert P.carrier[P.bot] == "<0,0>"
    assert P.carrier[P.top] == "<1,1>"


def test_four_facts(F):
    t, f, top, bot = F.t, F.f, F.top, F.bot
    assert F.tens[t][f] == bot
    assert F.plus[t][f] == top
    assert F.and_[top][bot] == f
    assert F.or_[top][bot] == t
    assert F.neg[t] == f and F.neg[top] == top
    assert F.confl[top] == bot and F.confl[bot] == top and F.confl[t] == t


def test_product_clauses_by_hand():
    P = product_cbilattice(two_chain())
    # <1,0> and <0,1> = <1 meet 0, 0 join 1>
    assert P.carrier[P.and_[P.index("<1,0>")][P.index("<0,1>")]] == "<0,1>"
    # -<1,0> = <~0, ~1>
    assert P.carrier[P.confl[P.index("<1,0>")]] == "<1,0>"


def test_not_distributive_rejected():
    # M3: three pairwise incomparable atoms
    names = ["0", "a", "b", "c", "1"]
    leq = [[x == y or x == 0 or y == 4 for y in range(5)] for x in range(5)]
    M3 = FiniteLattice(names, leq, "M3")
    assert not M3.distributive
    with pytest.raises(NotDistributive):
        product_bilattice(M3)


def test_non_involutive_sim_rejected():
    with pytest.raises(AlgebraError):
        FiniteDeMorgan.from_lattice(chain(["0", "m", "1"]), [2, 2, 0])


def test_catalog_validates():
    cat = bundled()
    assert set(cat.bilattices) >= {"four", "nine", "sixteen_chain", "sixteen_dm4"}
    for B in cat.bilattices.values():
        assert B.violations() == []
        assert 4 <= B.size <= 16
    for H in cat.hbls.values():
        assert H.violations() == []


def test_bundled_file_matches_builders():
    assert bundled().to_json() == default_catalog().to_json()


def test_catalog_json_round_trip():
    cat = bundled()
    again = Catalog.from_json(copy.deepcopy(cat.to_json()))
    for k, B in cat.bilattices.items():
        C = again.bilattices[k]
        assert C.carrier == B.carrier and C.and_ == B.and_ and C.confl == B.confl


def test_tampered_catalog_rejected():
    obj = bundled().to_json()
    obj["bilattices"]["four"]["neg"] = [0, 0, 2, 3]
    with pytest.raises(AlgebraError):
        Catalog.from_json(obj)


def test_regular_elements(F):
    assert sorted(F.carrier[a] for a in regular_elements(F)) == ["bot", "top"]
    for B in bundled().bilattices.values():
        assert B.t not in regular_elements(B)
        assert B.bot in regular_elements(B)


def test_reg_and_pi(F):
    assert reg(F, F.top) == F.top
    assert reg(F, F.t) == F.top
    assert reg(F, F.f) == F.bot
    assert pi(F, F.t) == (F.top, F.bot)
    assert pi(F, F.bot) == (F.bot, F.bot)
    assert f_inv(F, (F.top, F.bot)) == F.t


def test_f_inv_needs_regulars(F):
    with pytest.raises(NotRegular):
        f_inv(F, (F.t, F.bot))


def test_pi_f_inverse_everywhere():
    for B in bundled().bilattices.values():
        regs = regular_elements(B)
        for a in range(B.size):
            assert f_inv(B, pi(B, a)) == a
        for x, y in itertools.product(regs, repeat=2):
            assert pi(B, f_inv(B, (x, y))) == (x, y)


def test_b_plus_of_four(F):
    H = b_plus(F)
    assert H.L1.carrier == ["bot", "top"]
    assert all(H.n[H.p[b]] == b for b in range(H.L2.size))
    assert H.cbl
    assert H.L1.carrier[H.L1.sim[H.L1.index("bot")]] == "top"


def test_h_plus_of_two_chains_is_four():
    L = chain(["0", "1"])
    H = FiniteHBL(L, L, [0, 1], [0, 1], "2x2").validate()
    C = h_plus(H)
    P = product_bilattice(L)
    idx = [C.index(n) for n in P.carrier]
    for a, b in itertools.product(range(4), repeat=2):
        for op in ("and", "or", "tens", "plus"):
            assert C.op(op)[idx[a]][idx[b]] == idx[P.op(op)[a][b]]
    assert [idx[P.neg[a]] for a in range(4)] == [C.neg[idx[a]] for a in range(4)]


def test_h_plus_neg_and_confl_laws():
    for H in bundled().hbls.values():
        C = h_plus(H)
        for x in range(C.size):
            assert C.neg[C.neg[x]] == x
            if C.confl is not None:
                assert C.confl[C.neg[x]] == C.neg[C.confl[x]]


def test_roundtrips():
    for B in bundled().bilattices.values():
        v = roundtrip_checks(B)
        assert v.ok, v
    for H in bundled().hbls.values():
        assert roundtrip_checks(H).ok


def test_corrupted_n_table_caught():
    H = bundled().hbls["dm4_swap"]
    bad = FiniteHBL(H.L1, H.L2, [0, 1, 1, 3], H.p, "broken")
    v = roundtrip_checks(bad)
    assert not v.ok and v.locus is not None


def test_evaluate(F):
    v = {"p": "t", "q": "top"}
    assert F.carrier[evaluate(F, v, parse_formula("p & q"))] == "top"
    assert F.carrier[evaluate(F, {}, parse_formula("!top"))] == "top"
    H = b_plus(F)
    assert H.L1.carrier[evaluate_mt(H, {"a1": "top"}, parse_mt("(p (n a1))"))] == "top"


def test_unbound_atom(F):
    with pytest.raises(UnboundAtom):
        evaluate(F, {"p": "t"}, parse_formula("p & q"))


def test_consequence(F):
    assert consequence(F, parse_formula("p"), parse_formula("p | q")).ok
    v = consequence(F, parse_formula("p & !p"), parse_formula("q"))
    assert not v.ok and v.valuation == {"p": "top", "q": "f"}
    for B in bundled().bilattices.values():
        assert consequence(B, parse_formula("t"), parse_formula("t")).ok


def test_designation_weaker_than_order_on_nine():
    # designation only asks the first component to be top, so it ignores
    # strict inequalities below top that the truth order would see
    nine = bundled().bilattices["nine"]
    assert consequence(nine, parse_formula("!p & -p"), parse_formula("p")).ok
