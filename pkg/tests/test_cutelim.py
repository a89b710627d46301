import pytest

from bilat import bundle
from bilat.cutelim import (
    FuelExhausted, NotPrincipal, Stuck, cut_formula, cut_ranks, eliminate, is_principal, multiset_less,
    rank_trace_decreasing, reduce_principal,
)
from bilat.display import check_proof
from bilat.syntax import ProofTree, Sequent, complexity, parse_mt, pretty_print


@pytest.fixture(scope="module")
def cuts():
    return {e.name: e for e in bundle.cut_inputs()}


@pytest.fixture(scope="module")
def derivs():
    return {e.name: e for e in bundle.derivation_trees()}


def cut(left, right):
    return ProofTree("cut", Sequent(left.conclusion.lhs, right.conclusion.rhs), (left, right))


def rules(t):
    return {n.rule for _, n in t.nodes()}


def new_cuts(t):
    return [pretty_print(cut_formula(n)) for _, n in t.nodes() if n.rule == "cut"]


def test_sim_reduction(cuts):
    t = cuts["09_sim1"].tree
    r = reduce_principal(t)
    assert {"adj*.l", "adj*.r"} & rules(r) and {"cont", "cont.inv"} & rules(r)
    assert new_cuts(r) == ["b1"]
    assert r.conclusion == t.conclusion and check_proof(r, "D.CBL").ok


def test_n_reduction(cuts):
    r = reduce_principal(cuts["11_n"].tree)
    assert {"adj.N", "adj.P.inv"} <= rules(r)
    assert {"P.inv"} <= rules(r)
    assert new_cuts(r) == ["b1"]


def test_meet_reduction(cuts):
    r = reduce_principal(cuts["05_meet1"].tree)
    assert sorted(new_cuts(r)) == ["a1", "b1"]
    assert check_proof(r, "D.BL").ok


def test_rank_drops_for_every_input(cuts):
    for e in cuts.values():
        t = e.tree
        r = reduce_principal(t)
        assert multiset_less(cut_ranks(r), cut_ranks(t)), e.name
        assert all(complexity(parse_mt(c)) < complexity(cut_formula(t)) for c in new_cuts(r))


def test_not_principal():
    left = parse_mt("(by W.l (seq (Scap1 a1 b1) a1) (by id (seq a1 a1)))")
    right = parse_mt("(by id (seq a1 a1))")
    t = cut(left, right)
    assert check_proof(t, "D.BL").ok
    assert not is_principal(left, "r")
    with pytest.raises(NotPrincipal):
        reduce_principal(t)


def test_atomic_cut_eliminated():
    left = parse_mt("(by W.l (seq (Scap1 a1 b1) a1) (by id (seq a1 a1)))")
    right = parse_mt("(by W.r (seq a1 (Scup1 a1 c1)) (by id (seq a1 a1)))")
    t = cut(left, right)
    r = eliminate(t)
    assert isinstance(r, ProofTree) and "cut" not in rules(r)
    assert r.conclusion == t.conclusion and check_proof(r, "D.BL").ok


def test_cut_free_unchanged(derivs):
    t = derivs["dneg"].tree
    assert eliminate(t) is t


def test_spliced_corpus_cut(derivs):
    # identity expansion for meet, cut against itself
    a = derivs["idexp_meet"].tree
    t = cut(a, a)
    assert check_proof(t, "D.BL").ok
    stuck = eliminate(t)
    assert isinstance(stuck, Stuck) and stuck.locus is not None
    r = eliminate(t, parametric=True)
    assert "cut" not in rules(r) and r.conclusion == t.conclusion and check_proof(r, "D.BL").ok


def test_parametric_cut_reports_locus(derivs):
    t = cut(derivs["dconf_r"].tree, derivs["dconf"].tree)
    r = eliminate(t)
    assert isinstance(r, Stuck)
    assert r.locus == (0, 0) and pretty_print(r.formula) == "(n (sim1 a1))"
    assert "star2N" in r.reason
    done = eliminate(t, parametric=True)
    assert isinstance(done, ProofTree) and "cut" not in rules(done) and check_proof(done, "D.CBL").ok


def test_fuel(cuts):
    with pytest.raises(FuelExhausted):
        eliminate(cuts["05_meet1"].tree, fuel=0)


def test_trace_and_multiset_order(cuts):
    trace = []
    eliminate(cuts["15_meet1_context"].tree, trace=trace)
    assert trace[0]["kind"] == "start" and trace[-1]["ranks"] == []
    assert rank_trace_decreasing(trace)
    assert multiset_less([1, 1, 1], [2])
    assert not multiset_less([2], [2])
    assert not multiset_less([3], [2, 2])
    assert multiset_less([], [0])
