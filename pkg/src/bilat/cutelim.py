"""Cut reduction for D.BL and D.CBL proofs.

``reduce_principal`` rewrites a cut whose formula is introduced on both sides
by the last rule into cuts on the immediate subformulas.  ``eliminate`` drives
it leftmost-innermost.  Cuts on atoms are removed by following the cut atom up
the right premise to the axioms that introduced it and putting the left
premise in their place.  Other non-principal cuts stop the driver unless
``parametric=True``, in which case the cut formula is traced the same way and
a fresh cut is placed at each point where it is introduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .display import check_proof, instance_of, lookup
from .syntax import (
    MAtom, MBin, MConst, MN, MP, MSim, Meta, ProofTree, SBin, SConst, SN, SP, SStar, Sequent,
    complexity, pretty_print, uses_star,
)


class NotPrincipal(ValueError):
    pass


class UnknownShape(ValueError):
    pass


class FuelExhausted(RuntimeError):
    pass


class _Blocked(Exception):
    pass


@dataclass
class Stuck:
    locus: tuple
    formula: object
    tree: ProofTree
    reason: str
    trace: list = field(default_factory=list)
    ok: bool = field(default=False, init=False)

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"result": "stuck", "locus": list(self.locus), "formula": pretty_print(self.formula),
                "reason": self.reason}


RIGHT_INTRO = {"id", "one.r", "zero.r", "meet.r", "join.r", "n.r", "p.r", "sim.r"}
LEFT_INTRO = {"id", "one.l", "zero.l", "meet.l", "join.l", "n.l", "p.l", "sim.l"}


def _system_of(tree: ProofTree) -> str:
    return "D.CBL" if any(uses_star(n.conclusion) for _, n in tree.nodes()) else "D.BL"


def _cut(left: ProofTree, right: ProofTree) -> ProofTree:
    return ProofTree("cut", Sequent(left.conclusion.lhs, right.conclusion.rhs), (left, right))


def _step(rule: str, conclusion: Sequent, *premises: ProofTree) -> ProofTree:
    return ProofTree(rule, conclusion, tuple(premises))


def cut_formula(node: ProofTree):
    return node.premises[0].conclusion.rhs


def cut_ranks(tree: ProofTree) -> list[int]:
    """Complexities of all cut formulas, largest first."""
    return sorted((complexity(cut_formula(n)) for _, n in tree.nodes() if n.rule == "cut"), reverse=True)


def multiset_less(a: list[int], b: list[int]) -> bool:
    """Multiset ordering: ``a < b`` iff they differ and every surplus of ``a`` is dominated in ``b``."""
    ra, rb = list(a), list(b)
    for x in list(ra):
        if x in rb:
            ra.remove(x)
            rb.remove(x)
    if not ra and not rb:
        return False
    return all(any(y > x for y in rb) for x in ra)


def is_principal(node: ProofTree, side: str) -> bool:
    """Does the last rule of ``node`` introduce the formula on ``side`` ("l" or "r")?"""
    s = node.conclusion
    if side == "r":
        return node.rule in RIGHT_INTRO and (node.rule != "id" or isinstance(s.rhs, MAtom))
    return node.rule in LEFT_INTRO and (node.rule != "id" or isinstance(s.lhs, MAtom))


def _cancel_detours(t: ProofTree) -> ProofTree:
    """Drop chains of one-premise steps that lead back to the sequent they started from."""
    t = ProofTree(t.rule, t.conclusion, tuple(_cancel_detours(p) for p in t.premises))
    cur = t
    while len(cur.premises) == 1 and cur.rule != "cut":
        cur = cur.premises[0]
        if cur.conclusion == t.conclusion:
            return cur
    return t


# ---------------------------------------------------------------------------
# principal reductions

def _reduce(L: ProofTree, R: ProofTree) -> ProofTree:
    A = L.conclusion.rhs
    X, Y = L.conclusion.lhs, R.conclusion.rhs
    goal = Sequent(X, Y)
    if L.rule == "id":
        return R
    if R.rule == "id":
        return L
    if isinstance(A, MConst) and A.kind == "one":
        return R.premises[0]
    if isinstance(A, MConst) and A.kind == "zero":
        return L.premises[0]
    if isinstance(A, MBin) and A.op == "meet":
        i = A.sort
        L1, L2 = L.premises
        X1, X2 = L1.conclusion.lhs, L2.conclusion.lhs
        B1, B2 = A.left, A.right
        R0 = R.premises[0]
        s1 = _step("res.meet", Sequent(B1, SBin("rresR", i, B2, Y)), R0)
        c1 = _cut(L1, s1)
        s2 = _step("res.meet.inv", Sequent(SBin("cap", i, X1, B2), Y), c1)
        s3 = _step("E.l", Sequent(SBin("cap", i, B2, X1), Y), s2)
        s4 = _step("res.meet", Sequent(B2, SBin("rresR", i, X1, Y)), s3)
        c2 = _cut(L2, s4)
        s5 = _step("res.meet.inv", Sequent(SBin("cap", i, X2, X1), Y), c2)
        return _step("E.l", goal, s5)
    if isinstance(A, MBin) and A.op == "join":
        i = A.sort
        R1, R2 = R.premises
        Y1, Y2 = R1.conclusion.rhs, R2.conclusion.rhs
        B1, B2 = A.left, A.right
        L0 = L.premises[0]
        s1 = _step("res.join", Sequent(SBin("rresL", i, X, B1), B2), L0)
        c1 = _cut(s1, R2)
        s2 = _step("res.join.inv", Sequent(X, SBin("cup", i, B1, Y2)), c1)
        s3 = _step("E.r", Sequent(X, SBin("cup", i, Y2, B1)), s2)
        s4 = _step("res.join", Sequent(SBin("rresL", i, X, Y2), B1), s3)
        c2 = _cut(s4, R1)
        s5 = _step("res.join.inv", Sequent(X, SBin("cup", i, Y2, Y1)), c2)
        return _step("E.r", goal, s5)
    if isinstance(A, MN):
        a = _step("adj.P.inv", Sequent(SP(X), A.arg), L.premises[0])
        b = _step("adj.N", Sequent(A.arg, SP(Y)), R.premises[0])
        return _step("P.inv", goal, _cut(a, b))
    if isinstance(A, MP):
        a = _step("adj.N.inv", Sequent(SN(X), A.arg), L.premises[0])
        b = _step("adj.P", Sequent(A.arg, SN(Y)), R.premises[0])
        return _step("N.inv", goal, _cut(a, b))
    if isinstance(A, MSim):
        i = A.sort
        a = _step("adj*.l", Sequent(SStar(i, Y), A.arg), R.premises[0])
        b = _step("adj*.r", Sequent(A.arg, SStar(i, X)), L.premises[0])
        return _step("cont.inv", goal, _cut(a, b))
    raise UnknownShape(f"no reduction for a cut on {pretty_print(A)}")


def reduce_principal(tree: ProofTree, locus=(), system: str | None = None) -> ProofTree:
    """Replace the principal cut at ``locus`` by cuts on smaller formulas."""
    locus = tuple(locus)
    node = tree.at(locus)
    if node.rule != "cut":
        raise NotPrincipal(f"node at {locus} is {node.rule}, not a cut")
    L, R = node.premises
    if not (is_principal(L, "r") and is_principal(R, "l")):
        raise NotPrincipal(f"cut at {locus} on {pretty_print(cut_formula(node))} is not principal "
                           f"(premises end with {L.rule} and {R.rule})")
    new = _cancel_detours(_reduce(L, R))
    if new.conclusion != node.conclusion:
        raise AssertionError("reduction changed the cut's conclusion")
    if not multiset_less(cut_ranks(new), cut_ranks(node)):
        raise AssertionError("reduction did not lower the cut ranks")
    out = tree.replace(locus, new)
    v = check_proof(out, system or _system_of(out))
    if not v.ok:
        raise AssertionError(f"reduction produced a rejected tree: {v.message} at {v.locus}")
    return out


# ---------------------------------------------------------------------------
# tracing a cut formula through a premise

def _sub(x, path: tuple):
    for k in path:
        if isinstance(x, Sequent):
            x = (x.lhs, x.rhs)[k]
        elif isinstance(x, (MBin, SBin)):
            x = (x.left, x.right)[k]
        else:
            x = x.arg
    return x


def _put(x, path: tuple, new):
    if not path:
        return new
    k, rest = path[0], path[1:]
    if isinstance(x, Sequent):
        return Sequent(_put(x.lhs, rest, new), x.rhs) if k == 0 else Sequent(x.lhs, _put(x.rhs, rest, new))
    if isinstance(x, (MBin, SBin)):
        if k == 0:
            return type(x)(x.op, x.sort, _put(x.left, rest, new), x.right)
        return type(x)(x.op, x.sort, x.left, _put(x.right, rest, new))
    if isinstance(x, (MSim, SStar)):
        return type(x)(x.sort, _put(x.arg, rest, new))
    return type(x)(_put(x.arg, rest, new))


def _meta_positions(pat, here: tuple = (), out: dict | None = None) -> dict:
    out = {} if out is None else out
    if isinstance(pat, Meta):
        out.setdefault((pat.name, pat.sort), []).append(here)
    elif isinstance(pat, Sequent):
        _meta_positions(pat.lhs, here + (0,), out)
        _meta_positions(pat.rhs, here + (1,), out)
    elif isinstance(pat, (MBin, SBin)):
        _meta_positions(pat.left, here + (0,), out)
        _meta_positions(pat.right, here + (1,), out)
    elif isinstance(pat, (MP, MN, MSim, SN, SP, SStar)):
        _meta_positions(pat.arg, here + (0,), out)
    return out


def _spec_of(node: ProofTree):
    prem = [p.conclusion for p in node.premises]
    for spec in lookup(node.rule):
        if instance_of(spec, node.conclusion, prem) is not None:
            return spec
    raise AssertionError(f"{node.rule} does not match its node")


def _trace(node: ProofTree, positions: set, replacement, at_intro, parametric: bool) -> ProofTree:
    """Substitute ``replacement`` for the traced occurrences in ``node`` and everything above it.

    ``at_intro(inner, new_conclusion)`` builds the tree used where an
    occurrence is introduced by the node's own rule.
    """
    if not positions:
        return node
    spec = _spec_of(node)
    concl_metas = _meta_positions(spec.conclusion)
    prem_metas = [_meta_positions(p) for p in spec.premises]
    above = [set() for _ in node.premises]
    intro = []
    for P in positions:
        hit = None
        if spec.family != "id":
            for key, qs in concl_metas.items():
                for Q in qs:
                    if P[:len(Q)] == Q:
                        hit = (key, P[len(Q):])
                        break
                if hit:
                    break
        if hit is None:
            intro.append(P)
            continue
        key, rest = hit
        for k, pm in enumerate(prem_metas):
            for Q in pm.get(key, ()):
                above[k].add(Q + rest)
    premises = tuple(_trace(p, ps, replacement, at_intro, parametric) for p, ps in zip(node.premises, above))
    concl = node.conclusion
    for P in positions:
        if P not in intro:
            concl = _put(concl, P, replacement)
    if not intro:
        return ProofTree(node.rule, concl, premises)
    if spec.family != "id" and not parametric:
        raise _Blocked
    inner = ProofTree(node.rule, concl, premises)
    for P in intro:
        concl = _put(concl, P, replacement)
    return at_intro(inner, concl)


def eliminate_atomic(tree: ProofTree, locus=(), system: str | None = None) -> ProofTree:
    """Remove a cut on an atom by replacing its right premise's Id leaves with the left premise."""
    locus = tuple(locus)
    node = tree.at(locus)
    L, R = node.premises
    if not isinstance(cut_formula(node), MAtom):
        raise NotPrincipal("not an atomic cut")
    new = _trace(R, {(0,)}, L.conclusion.lhs, lambda inner, c: L, parametric=False)
    out = tree.replace(locus, new)
    v = check_proof(out, system or _system_of(out))
    if not v.ok:
        raise AssertionError(f"atomic elimination produced a rejected tree: {v.message} at {v.locus}")
    return out


def permute_parametric(tree: ProofTree, locus=(), system: str | None = None) -> ProofTree:
    """Move a cut up to the points where its formula is introduced.

    The right premise is traced first; if it already ends with an
    introduction, the left premise is traced instead.
    """
    locus = tuple(locus)
    node = tree.at(locus)
    L, R = node.premises
    if not is_principal(R, "l"):
        new = _trace(R, {(0,)}, L.conclusion.lhs,
                     lambda inner, c: ProofTree("cut", c, (L, inner)), parametric=True)
    elif not is_principal(L, "r"):
        new = _trace(L, {(1,)}, R.conclusion.rhs,
                     lambda inner, c: ProofTree("cut", c, (inner, R)), parametric=True)
    else:
        raise ValueError("cut is already principal")
    out = tree.replace(locus, new)
    v = check_proof(out, system or _system_of(out))
    if not v.ok:
        raise AssertionError(f"permutation produced a rejected tree: {v.message} at {v.locus}")
    return out


# ---------------------------------------------------------------------------
# driver

def next_cut(tree: ProofTree):
    """Path of the leftmost cut whose premises are cut-free, or None."""
    for path, n in tree.nodes():
        if n.rule == "cut" and not any(m.rule == "cut" for p in n.premises for _, m in p.nodes()):
            return path
    return None


def eliminate(tree: ProofTree, fuel: int = 1000, system: str | None = None, parametric: bool = False,
              trace: list | None = None):
    """Rewrite until no cut is left.

    Returns the cut-free tree, or ``Stuck`` naming the first cut outside the
    handled fragment.  ``trace`` receives one entry per rewrite with the cut
    ranks after it.  Raises ``FuelExhausted`` after ``fuel`` rewrites.
    """
    system = system or _system_of(tree)
    log = trace if trace is not None else []
    log.append({"step": 0, "kind": "start", "ranks": cut_ranks(tree)})
    steps = 0
    while True:
        locus = next_cut(tree)
        if locus is None:
            return tree
        steps += 1
        if steps > fuel:
            raise FuelExhausted(f"no cut-free proof after {fuel} rewrites")
        node = tree.at(locus)
        L, R = node.premises
        A = cut_formula(node)
        try:
            if is_principal(L, "r") and is_principal(R, "l"):
                tree, kind = reduce_principal(tree, locus, system), "principal"
            elif isinstance(A, MAtom):
                tree, kind = eliminate_atomic(tree, locus, system), "atomic"
            elif parametric:
                tree, kind = permute_parametric(tree, locus, system), "parametric"
            else:
                return Stuck(locus, A, tree, f"cut on {pretty_print(A)} is not principal "
                                             f"(premises end with {L.rule} and {R.rule})", log)
        except _Blocked:
            return Stuck(locus, A, tree, "cut formula is introduced inside a premise", log)
        log.append({"step": steps, "kind": kind, "locus": list(locus), "formula": pretty_print(A),
                    "ranks": cut_ranks(tree)})


def rank_trace_decreasing(trace: list) -> bool:
    """Each principal or atomic step strictly lowers the multiset of cut ranks."""
    for prev, cur in zip(trace, trace[1:]):
        if cur["kind"] in ("principal", "atomic") and not multiset_less(cur["ranks"], prev["ranks"]):
            return False
    return True
