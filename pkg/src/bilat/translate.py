"""Translation of single-type formulas into the two-sorted language.

Each atom ``p`` becomes ``p1`` on side 1 and ``p2`` on side 2.  Negation swaps
sides through ``p``/``n``; conflation does the same with ``sim`` inserted.
"""

from __future__ import annotations

from .syntax import (
    Atom, Bin, Confl, FSequent, Formula, MAtom, MBin, MConst, MN, MP, MSim, Neg, Sequent,
    TruthConst,
)


class ConflInBLMode(ValueError):
    pass


# (side-1 connective, side-2 connective) for each binary operator
_BIN = {
    "and": ("meet", "join"),
    "or": ("join", "meet"),
    "tens": ("meet", "meet"),
    "plus": ("join", "join"),
}

# (side-1 constant, side-2 constant)
_CONST = {
    "t": ("one", "zero"),
    "f": ("zero", "one"),
    "top": ("one", "one"),
    "bot": ("zero", "zero"),
}


def translate(A: Formula, side: int, conflation: bool = True):
    if isinstance(A, Atom):
        return MAtom(f"{A.name}{side}")
    if isinstance(A, TruthConst):
        return MConst(_CONST[A.name][side - 1], side)
    if isinstance(A, Bin):
        return MBin(_BIN[A.op][side - 1], side, translate(A.left, side, conflation),
                    translate(A.right, side, conflation))
    if isinstance(A, Neg):
        if side == 1:
            return MP(translate(A.arg, 2, conflation))
        return MN(translate(A.arg, 1, conflation))
    if isinstance(A, Confl):
        if not conflation:
            raise ConflInBLMode("conflation is not part of BL")
        if side == 1:
            return MP(MSim(2, translate(A.arg, 2, conflation)))
        return MN(MSim(1, translate(A.arg, 1, conflation)))
    raise TypeError(f"not a formula: {A!r}")


def t1(A: Formula, conflation: bool = True):
    return translate(A, 1, conflation)


def t2(A: Formula, conflation: bool = True):
    return translate(A, 2, conflation)


def translate_sequent(s: FSequent, conflation: bool = True, side: int = 1) -> Sequent:
    """``t1(A) |- t1(B)``, or on side 2 the reversed ``t2(B) |- t2(A)``.

    Consequence only concerns the first component, so side 1 is the faithful
    reading; side 2 states the falsity-component half of ``A <=t B``.
    """
    if side == 2:
        return Sequent(t2(s.rhs, conflation), t2(s.lhs, conflation))
    return Sequent(t1(s.lhs, conflation), t1(s.rhs, conflation))


def _mt_valuation(B, pos, v: dict) -> dict:
    from .algebra import reg

    out = {}
    for name, a in v.items():
        out[f"{name}1"] = pos[reg(B, a)]
        out[f"{name}2"] = pos[reg(B, B.neg[a])]
    return out


def _agrees(B, H, pos, v: dict, A: Formula) -> bool:
    """``t1(A)`` lands on ``reg`` of the value of ``A`` and ``t2(A)`` on ``reg`` of its negation."""
    from .algebra import evaluate, evaluate_mt, reg

    a = evaluate(B, v, A)
    w = _mt_valuation(B, pos, v)
    return (evaluate_mt(H, w, t1(A)) == pos[reg(B, a)]
            and evaluate_mt(H, w, t2(A)) == pos[reg(B, B.neg[a])])


def commutation_check(B, depth: int = 3, atoms: tuple[str, ...] = ("p", "q")):
    """Check ``eval(B+, t1 A) = reg(eval(B, A))`` and the ``t2`` analogue.

    Atoms and constants are checked directly, and each connective is checked
    on every element (pair) of ``B`` with its arguments standing in for
    subformulas.  By induction on formulas that covers every depth; as a
    cross-check, one representative of each semantic class of formulas up to
    ``depth - 1`` is also evaluated as a whole under every valuation.
    """
    import itertools

    from .algebra import b_plus, regular_elements
    from .verdict import countermodel, valid

    H = b_plus(B)
    pos = {a: i for i, a in enumerate(regular_elements(B))}
    conflation = B.confl is not None and H.cbl
    x, y = Atom("x"), Atom("y")

    def fail(A, v):
        shown = {k: B.carrier[e] for k, e in v.items()}
        return countermodel(B.name, shown, f"translation of {A} does not commute")

    leaves = [TruthConst(c) for c in ("t", "f", "top", "bot")]
    for A in leaves:
        if not _agrees(B, H, pos, {}, A):
            return fail(A, {})
    unary = [Neg(x)] + ([Confl(x)] if conflation else [])
    binary = [Bin(op, x, y) for op in _BIN]
    steps = 0
    for A in unary:
        for a in range(B.size):
            steps += 1
            if not _agrees(B, H, pos, {"x": a}, A):
                return fail(A, {"x": a})
    for A in binary:
        for a, b in itertools.product(range(B.size), repeat=2):
            steps += 1
            if not _agrees(B, H, pos, {"x": a, "y": b}, A):
                return fail(A, {"x": a, "y": b})

    # semantic classes up to depth - 1, one representative each
    from .algebra import evaluate

    vals = [dict(zip(atoms, c)) for c in itertools.product(range(B.size), repeat=len(atoms))]

    def table(A):
        return tuple(evaluate(B, v, A) for v in vals)

    reps = {}
    for A in [Atom(n) for n in atoms] + leaves:
        reps.setdefault(table(A), A)
    for _ in range(depth - 1):
        current = list(reps.values())
        fresh = []
        for A in current:
            fresh.append(Neg(A))
            if conflation:
                fresh.append(Confl(A))
        for A, C in itertools.product(current, repeat=2):
            fresh.extend(Bin(op, A, C) for op in _BIN)
        for A in fresh:
            reps.setdefault(table(A), A)
    for A in reps.values():
        for v in vals:
            if not _agrees(B, H, pos, v, A):
                return fail(A, v)
    return valid(model=B.name, details={"connective_cases": steps, "classes": len(reps),
                                        "valuations": len(vals)})
