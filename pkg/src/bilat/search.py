"""Bounded, cut-free backward proof search for D.BL and D.CBL.

Display rules (res, adj, adj*) and exchange only rearrange a sequent, so each
goal is first closed under them; every member of that class is then tried
against the rules that make progress: axioms, operational rules, the shrinking
structural rules, weakening, and contraction, which is only used directly
below a two-premise operational rule.  Iterative deepening bounds the height
of the returned tree and a branch-local set of visited classes cuts loops.
Every proof found is re-checked by the display checker before it is returned.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .display import backward_steps, check_proof, normalize_system, rule_table
from .syntax import (
    MAtom, MBin, MConst, MN, MP, MSim, ProofTree, SBin, SConst, SN, SP, SStar, Sequent,
)

DISPLAY_FAMILIES = ("res", "adj", "adj*", "E")
CLOSURE_LIMIT = 400


@dataclass
class Exhausted:
    goal: Sequent
    max_depth: int
    nodes: int
    reason: str = "depth"  # "depth" | "nodes"
    ok: bool = field(default=False, init=False)

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"result": "exhausted", "goal": str(self.goal), "max_depth": self.max_depth,
                "nodes": self.nodes, "reason": self.reason}


class _OutOfNodes(Exception):
    pass


def _contains(x, kind: str, sort: int) -> bool:
    if isinstance(x, (MConst, SConst)):
        return x.kind == kind and x.sort == sort
    if isinstance(x, Sequent):
        return _contains(x.lhs, kind, sort) or _contains(x.rhs, kind, sort)
    if isinstance(x, (MBin, SBin)):
        return _contains(x.left, kind, sort) or _contains(x.right, kind, sort)
    if isinstance(x, (MP, MN, MSim, SN, SP, SStar)):
        return _contains(x.arg, kind, sort)
    return False


def _has_structural(x, kind: str, sort: int) -> bool:
    if isinstance(x, SConst):
        return x.kind == kind and x.sort == sort
    if isinstance(x, Sequent):
        return _has_structural(x.lhs, kind, sort) or _has_structural(x.rhs, kind, sort)
    if isinstance(x, SBin):
        return _has_structural(x.left, kind, sort) or _has_structural(x.right, kind, sort)
    if isinstance(x, (SN, SP, SStar)):
        return _has_structural(x.arg, kind, sort)
    return False


def _unary(rule, concl, prem) -> list:
    return [(rule, [prem], None)]


def progress_steps(s: Sequent, cbl: bool) -> list:
    """Candidate last inferences for ``s`` other than display moves.

    Each entry is ``(rule, premises, wrap)``; ``wrap`` names a contraction
    rule placed below the inference when the premises were duplicated.
    """
    X, Y, i = s.lhs, s.rhs, s.sort
    out: list = []
    # axioms
    if isinstance(X, MAtom) and X == Y:
        out.append(("id", [], None))
    if X == SConst("one", i) and Y == MConst("one", i):
        out.append(("one.r", [], None))
    if X == MConst("zero", i) and Y == SConst("zero", i):
        out.append(("zero.l", [], None))
    # invertible operational rules
    if isinstance(X, MBin) and X.op == "meet":
        out.append(("meet.l", [Sequent(SBin("cap", i, X.left, X.right), Y)], None))
    if X == MConst("one", i):
        out.append(("one.l", [Sequent(SConst("one", i), Y)], None))
    if isinstance(X, MN):
        out.append(("n.l", [Sequent(SN(X.arg), Y)], None))
    if isinstance(X, MP):
        out.append(("p.l", [Sequent(SP(X.arg), Y)], None))
    if cbl and isinstance(X, MSim):
        out.append(("sim.l", [Sequent(SStar(i, X.arg), Y)], None))
    if isinstance(Y, MBin) and Y.op == "join":
        out.append(("join.r", [Sequent(X, SBin("cup", i, Y.left, Y.right))], None))
    if Y == MConst("zero", i):
        out.append(("zero.r", [Sequent(X, SConst("zero", i))], None))
    if isinstance(Y, MN):
        out.append(("n.r", [Sequent(X, SN(Y.arg))], None))
    if isinstance(Y, MP):
        out.append(("p.r", [Sequent(X, SP(Y.arg))], None))
    if cbl and isinstance(Y, MSim):
        out.append(("sim.r", [Sequent(X, SStar(i, Y.arg))], None))
    # shrinking structural rules
    if isinstance(X, SN) and isinstance(Y, SN):
        out.append(("N", [Sequent(X.arg, Y.arg)], None))
    if isinstance(X, SP) and isinstance(Y, SP):
        out.append(("P", [Sequent(X.arg, Y.arg)], None))
    if cbl and isinstance(X, SStar) and isinstance(Y, SStar):
        out.append(("cont", [Sequent(Y.arg, X.arg)], None))
    if cbl and i == 2 and isinstance(X, SStar) and isinstance(X.arg, SN):
        out.append(("star2N.l", [Sequent(SN(SStar(1, X.arg.arg)), Y)], None))
    if cbl and i == 2 and isinstance(Y, SStar) and isinstance(Y.arg, SN):
        out.append(("star2N.r", [Sequent(X, SN(SStar(1, Y.arg.arg)))], None))
    if X == SP(SConst("zero", 2)):
        out.append(("Pzero2", [Sequent(SConst("zero", 1), Y)], None))
    if Y == SP(SConst("one", 2)):
        out.append(("Pone2", [Sequent(X, SConst("one", 1))], None))
    # two-premise operational rules, directly or below a contraction
    if isinstance(Y, MBin) and Y.op == "meet":
        if isinstance(X, SBin) and X.op == "cap":
            out.append(("meet.r", [Sequent(X.left, Y.left), Sequent(X.right, Y.right)], None))
        out.append(("meet.r", [Sequent(X, Y.left), Sequent(X, Y.right)], "C.l"))
    if isinstance(X, MBin) and X.op == "join":
        if isinstance(Y, SBin) and Y.op == "cup":
            out.append(("join.l", [Sequent(X.left, Y.left), Sequent(X.right, Y.right)], None))
        out.append(("join.l", [Sequent(X.left, Y), Sequent(X.right, Y)], "C.r"))
    # weakening (the other component is reached through exchange)
    if isinstance(X, SBin) and X.op == "cap":
        out.append(("W.l", [Sequent(X.left, Y)], None))
    if isinstance(Y, SBin) and Y.op == "cup":
        out.append(("W.r", [Sequent(X, Y.left)], None))
    # unit introduction, only when a matching constant is around to use it
    if _contains(s, "one", i) and not _has_structural(s, "one", i):
        out.append(("one-hat", [Sequent(SBin("cap", i, X, SConst("one", i)), Y)], None))
    if _contains(s, "zero", i) and not _has_structural(s, "zero", i):
        out.append(("zero-check", [Sequent(X, SBin("cup", i, Y, SConst("zero", i)))], None))
    return out


class _Searcher:
    def __init__(self, system: str, max_nodes: int):
        self.system = normalize_system(system)
        self.cbl = self.system == "D.CBL"
        self.display = [r for r in rule_table(self.system) if r.family in DISPLAY_FAMILIES]
        self.max_nodes = max_nodes
        self.nodes = 0
        self.failed: dict[Sequent, int] = {}
        self._closures: dict[Sequent, tuple] = {}
        self.on_branch: dict[Sequent, int] = {}

    def closure(self, goal: Sequent):
        """Display-equivalent sequents in breadth-first order with their parent links."""
        hit = self._closures.get(goal)
        if hit is not None:
            return hit
        parent = {goal: None}
        dist = {goal: 0}
        order = [goal]
        queue = deque([goal])
        while queue and len(order) < CLOSURE_LIMIT:
            cur = queue.popleft()
            for spec, prem in backward_steps(cur, self.display):
                nxt = prem[0]
                if nxt not in parent:
                    parent[nxt] = (cur, spec.id)
                    dist[nxt] = dist[cur] + 1
                    order.append(nxt)
                    queue.append(nxt)
        out = (order, dist, parent)
        self._closures[goal] = out
        return out

    def solve(self, goal: Sequent, depth: int):
        """Return ``(tree or None, pruned)``; ``pruned`` marks failures caused by the loop check."""
        if depth <= 0:
            return None, False
        if self.failed.get(goal, 0) >= depth:
            return None, False
        if goal in self.on_branch:
            return None, True
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _OutOfNodes
        order, dist, parent = self.closure(goal)
        for m in order:
            self.on_branch[m] = self.on_branch.get(m, 0) + 1
        pruned = False
        try:
            for m in order:
                d = dist[m]
                if d >= depth:
                    break
                for rule, prems, wrap in progress_steps(m, self.cbl):
                    budget = depth - d - (2 if wrap else 1)
                    if prems and budget <= 0:
                        continue
                    subs = []
                    for p in prems:
                        t, pr = self.solve(p, budget)
                        pruned = pruned or pr
                        if t is None:
                            break
                        subs.append(t)
                    else:
                        return self._assemble(goal, m, parent, rule, prems, subs, wrap), False
        finally:
            for m in order:
                c = self.on_branch[m] - 1
                if c:
                    self.on_branch[m] = c
                else:
                    del self.on_branch[m]
        if not pruned:
            self.failed[goal] = max(self.failed.get(goal, 0), depth)
        return None, pruned

    def _assemble(self, goal, m, parent, rule, prems, subs, wrap) -> ProofTree:
        if wrap:
            i = m.sort
            if wrap == "C.l":
                inner = Sequent(SBin("cap", i, m.lhs, m.lhs), m.rhs)
            else:
                inner = Sequent(m.lhs, SBin("cup", i, m.rhs, m.rhs))
            tree = ProofTree(wrap, m, (ProofTree(rule, inner, tuple(subs)),))
        else:
            tree = ProofTree(rule, m, tuple(subs))
        cur = m
        while parent[cur] is not None:
            above, rid = parent[cur]
            tree = ProofTree(rid, above, (tree,))
            cur = above
        return tree


def prove(goal: Sequent, system: str = "D.BL", max_depth: int = 12, max_nodes: int = 20000,
          stats: dict | None = None):
    """Search for a cut-free proof of ``goal`` of height at most ``max_depth``.

    Returns a checker-accepted ``ProofTree`` or an ``Exhausted`` record.
    """
    s = _Searcher(system, max_nodes)
    result = None
    reason = "depth"
    try:
        for d in range(1, max_depth + 1):
            tree, _ = s.solve(goal, d)
            if tree is not None:
                result = tree
                break
    except _OutOfNodes:
        reason = "nodes"
    if stats is not None:
        stats.update(nodes=s.nodes, closures=len(s._closures))
    if result is None:
        return Exhausted(goal, max_depth, s.nodes, reason)
    verdict = check_proof(result, s.system)
    if not verdict.ok:
        raise AssertionError(f"search produced a rejected tree: {verdict.message} at {verdict.locus}")
    return result
