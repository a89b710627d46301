from bilat import bundle
from bilat.display import check_proof
from bilat.oracle import mt_valid
from bilat.search import Exhausted, progress_steps, prove
from bilat.syntax import parse_fsequent, parse_mt
from bilat.translate import translate_sequent


def rules_of(t):
    return [n.rule for _, n in t.nodes()]


def test_zero_left():
    t = prove(parse_mt("(seq zero1 p1)"), "dbl")
    assert not isinstance(t, Exhausted)
    assert t.height() <= 4
    assert check_proof(t, "D.BL").ok
    assert "zero.l" in rules_of(t) and "cut" not in rules_of(t)


def test_double_negation_matches_corpus():
    t = prove(parse_mt("(seq (p (n a1)) a1)"), "dbl", max_depth=6)
    assert t == bundle.load_mts(bundle.CORPUS_DIR / "paper" / "dneg.mts").tree


def test_distinct_atoms_exhausted():
    goal = parse_mt("(seq p1 q1)")
    r = prove(goal, "dbl")
    assert isinstance(r, Exhausted) and not r and r.reason == "depth"
    assert not mt_valid(goal).ok


def test_node_budget():
    r = prove(translate_sequent(parse_fsequent("-!p |- !-p")), "dcbl", max_nodes=50)
    assert isinstance(r, Exhausted) and r.reason == "nodes" and r.nodes > 50


def test_deterministic():
    goal = translate_sequent(parse_fsequent("!(p & q) |- !q | !p"))
    assert prove(goal, "dbl") == prove(goal, "dbl")


def test_progress_steps_offer_axioms_first():
    steps = progress_steps(parse_mt("(seq a1 a1)"), cbl=False)
    assert steps[0] == ("id", [], None)


def test_conflation_rules_only_in_cbl():
    s = parse_mt("(seq (sim1 a1) b1)")
    assert not any(r == "sim.l" for r, _, _ in progress_steps(s, cbl=False))
    assert any(r == "sim.l" for r, _, _ in progress_steps(s, cbl=True))


def test_conflation_goal():
    goal = translate_sequent(parse_fsequent("--p |- p"))
    assert isinstance(prove(goal, "dbl"), Exhausted)
    t = prove(goal, "dcbl")
    assert check_proof(t, "D.CBL").ok


def test_some_corpus_goals():
    for text in ["p & q |- q & p", "p |- !!p", "!((q | p) + p) |- !(q | p) + !p", "q |- t"]:
        goal = translate_sequent(parse_fsequent(text))
        t = prove(goal, "dbl")
        assert not isinstance(t, Exhausted), text
        assert t.conclusion == goal and mt_valid(goal).ok
