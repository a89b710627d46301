"""Access to the bundled corpus of derivations, cut inputs, Hilbert scripts and search sequents."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .hilbert import HilbertProof, parse_hilbert
from .syntax import Atom, Bin, Confl, FSequent, Neg, ProofTree, TruthConst, parse_fsequent, parse_mt_many

CORPUS_DIR = Path(__file__).parent / "corpus"
SEQUENTS_FILE = CORPUS_DIR / "sequents.blf"


@dataclass
class Entry:
    name: str
    system: str
    trees: list[ProofTree]
    goals: list[FSequent] = field(default_factory=list)
    title: str = ""

    @property
    def tree(self) -> ProofTree:
        return self.trees[0]


def read_header(text: str) -> dict:
    """Collect ``; key: value`` comment lines; ``goal`` may repeat."""
    out: dict = {"goal": [], "title": ""}
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith(";"):
            if line:
                break
            continue
        body = line.lstrip(";").strip()
        key, sep, val = body.partition(":")
        if sep and key.strip() in ("system", "goal"):
            if key.strip() == "goal":
                out["goal"].append(val.strip())
            else:
                out["system"] = val.strip()
        elif not out["title"]:
            out["title"] = body
    return out


def load_mts(path) -> Entry:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    head = read_header(text)
    trees = [t for t in parse_mt_many(text) if isinstance(t, ProofTree)]
    goals = [parse_fsequent(g) for g in head["goal"]]
    return Entry(path.stem, head.get("system", "dcbl"), trees, goals, head["title"])


def derivation_trees() -> list[Entry]:
    return [load_mts(p) for p in sorted((CORPUS_DIR / "paper").glob("*.mts"))]


def cut_inputs() -> list[Entry]:
    return [load_mts(p) for p in sorted((CORPUS_DIR / "cuts").glob("*.mts"))]


def hilbert_scripts() -> list[tuple[str, str, HilbertProof]]:
    """``(name, system, proof)``; the system comes from a leading ``# system:`` line."""
    out = []
    for p in sorted((CORPUS_DIR / "hilbert").glob("*.jsonl")):
        text = p.read_text(encoding="utf-8")
        system = "BL"
        for line in text.splitlines():
            if line.startswith("# system:"):
                system = line.split(":", 1)[1].strip().upper()
        out.append((p.stem, system, parse_hilbert(text)))
    return out


def read_sequents(text: str) -> list[FSequent]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_fsequent(line))
    return out


def sequent_corpus() -> list[FSequent]:
    return read_sequents(SEQUENTS_FILE.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# generation

_BIN = ("and", "or", "tens", "plus")

_FIXED = ["f |- p", "p & !p |- q", "!!p |- p", "p & q |- q & p", "!(p & q) |- !q | !p"]

_TEMPLATES = [
    "A |- A", "A & B |- A", "A & B |- B", "A |- A | B", "B |- A | B",
    "A * B |- A", "A |- A + B", "!!A |- A", "A |- !!A", "f |- A", "A |- t",
    "A & B |- B & A", "A | B |- B | A", "!(A & B) |- !A | !B", "!A & !B |- !(A | B)",
    "A & (B | A) |- A", "A * B |- B * A", "!(A + B) |- !A + !B",
]
_CBL_TEMPLATES = [
    "--A |- A", "A |- --A", "-!A |- !-A", "!-A |- -!A", "-(A & B) |- -A & -B",
    "-(A * B) |- -A + -B", "-A | -B |- -(A | B)", "-f |- A", "A |- -t", "--(A & B) |- A",
]


def _random_formula(rng: random.Random, depth: int, cbl: bool):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.85:
            return Atom(rng.choice("pq"))
        return TruthConst(rng.choice(["t", "f", "top", "bot"]))
    k = rng.random()
    if k < 0.2:
        return Neg(_random_formula(rng, depth - 1, cbl))
    if cbl and k < 0.35:
        return Confl(_random_formula(rng, depth - 1, cbl))
    return Bin(rng.choice(_BIN), _random_formula(rng, depth - 1, cbl), _random_formula(rng, depth - 1, cbl))


def generate_sequents(n: int = 60, seed: int = 7) -> list[FSequent]:
    """A reproducible mix of templates instantiated over ``p``/``q`` and random sequents.

    A few fixed rows come first, then
    roughly a third are template instances likely to be provable, a sixth use
    conflation templates, and the rest are random pairs of depth at most 2.
    """
    from .hilbert import substitute

    rng = random.Random(seed)
    atoms = [Atom("p"), Atom("q")]
    small = atoms + [Neg(Atom("p")), Bin("and", Atom("p"), Atom("q")), Bin("or", Atom("q"), Atom("p"))]
    seen: dict[FSequent, None] = {}

    def add(s: FSequent) -> None:
        if len(seen) < n:
            seen.setdefault(s)

    for text in _FIXED:
        add(parse_fsequent(text))
    for text in _TEMPLATES:
        pat = parse_fsequent(text, ("A", "B"))
        sub = {"A": rng.choice(small), "B": rng.choice(atoms)}
        add(FSequent(substitute(pat.lhs, sub), substitute(pat.rhs, sub)))
    for text in _CBL_TEMPLATES:
        pat = parse_fsequent(text, ("A", "B"))
        sub = {"A": rng.choice(atoms), "B": rng.choice(atoms)}
        add(FSequent(substitute(pat.lhs, sub), substitute(pat.rhs, sub)))
    while len(seen) < n:
        cbl = rng.random() < 0.3
        add(FSequent(_random_formula(rng, 2, cbl), _random_formula(rng, 2, cbl)))
    return list(seen)
