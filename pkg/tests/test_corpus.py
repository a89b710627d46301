from bilat import bundle
from bilat.cli import run_corpus
from bilat.display import check_proof, normalize_system
from bilat.hilbert import check_hilbert
from bilat.syntax import ProofTree


def test_sequent_file_is_reproducible():
    assert bundle.sequent_corpus() == bundle.generate_sequents(60, seed=7)
    assert len(set(bundle.sequent_corpus())) == 60


def test_generator_is_deterministic():
    assert bundle.generate_sequents(30, seed=1) == bundle.generate_sequents(30, seed=1)
    assert bundle.generate_sequents(30, seed=1) != bundle.generate_sequents(30, seed=2)


def test_read_header():
    head = bundle.read_header("; double negation\n; system: dbl\n; goal: !!p |- p\n(by id (seq a1 a1))")
    assert head == {"title": "double negation", "system": "dbl", "goal": ["!!p |- p"]}


def test_cut_inputs_are_well_formed():
    entries = bundle.cut_inputs()
    assert len(entries) == 20
    for e in entries:
        t = e.tree
        assert t.rule == "cut", e.name
        assert check_proof(t, normalize_system(e.system)).ok, e.name
        # the cut is the only one
        assert sum(n.rule == "cut" for _, n in t.nodes()) == 1


def test_hilbert_scripts():
    scripts = bundle.hilbert_scripts()
    assert {s for _, s, _ in scripts} == {"BL", "CBL"}
    for name, system, proof in scripts:
        assert check_hilbert(proof, system).ok, name


def test_derivations_are_cut_free():
    for e in bundle.derivation_trees():
        for t in e.trees:
            assert isinstance(t, ProofTree)
            assert all(n.rule != "cut" for _, n in t.nodes()), e.name


def test_corpus_runner_is_deterministic():
    first, second = [], []
    s1 = run_corpus(depth=6, max_nodes=2000, emit=lambda text, obj: first.append(text))
    run_corpus(depth=6, max_nodes=2000, emit=lambda text, obj: second.append(text))
    assert first == second
    assert set(s1) == {"derivations", "hilbert", "cuts", "search", "square"}
    assert all(v["failed"] == 0 for v in s1.values())
