"""Finite lattices, bilattices and heterogeneous bilattices given by explicit tables.

Elements are integer indices into ``carrier``; names are only for display.
Every validator is an exhaustive loop over the carrier.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .syntax import (
    Atom, Bin, Confl, FMeta, Formula, MAtom, MBin, MConst, MN, MP, MRes, MSim, Neg,
    TruthConst, formula_atoms,
)
from .verdict import Verdict, countermodel, rejected, valid


class AlgebraError(Exception):
    def __init__(self, identity: str, witness: object = None, message: str = ""):
        self.identity = identity
        self.witness = witness
        super().__init__(message or f"{identity} fails at {witness}")


class NotDistributive(AlgebraError):
    pass


class NotRegular(AlgebraError):
    pass


class UnboundAtom(KeyError):
    pass


def _table(n: int, fn) -> list[list[int]]:
    return [[fn(a, b) for b in range(n)] for a in range(n)]


class FiniteLattice:
    """A bounded lattice presented by its order relation."""

    def __init__(self, carrier: Sequence[str], leq: Sequence[Sequence[bool]], name: str = ""):
        self.carrier = list(carrier)
        self.name = name
        n = len(self.carrier)
        self.leq = [[bool(x) for x in row] for row in leq]
        if n == 0 or len(self.leq) != n or any(len(r) != n for r in self.leq):
            raise AlgebraError("shape", n, "order table does not match carrier")
        for a in range(n):
            if not self.leq[a][a]:
                raise AlgebraError("reflexivity", self.carrier[a])
            for b in range(n):
                if a != b and self.leq[a][b] and self.leq[b][a]:
                    raise AlgebraError("antisymmetry", (self.carrier[a], self.carrier[b]))
                for c in range(n):
                    if self.leq[a][b] and self.leq[b][c] and not self.leq[a][c]:
                        raise AlgebraError("transitivity", (self.carrier[a], self.carrier[b], self.carrier[c]))
        self.meet = _table(n, lambda a, b: self._bound(a, b, upper=False))
        self.join = _table(n, lambda a, b: self._bound(a, b, upper=True))
        self.bottom = self._extreme(upper=False)
        self.top = self._extreme(upper=True)
        self._imp: list[list[int]] | None = None
        self._sub: list[list[int]] | None = None
        self._distributive: bool | None = None

    def _bound(self, a: int, b: int, upper: bool) -> int:
        n = len(self.carrier)
        if upper:
            cands = [c for c in range(n) if self.leq[a][c] and self.leq[b][c]]
            best = [c for c in cands if all(self.leq[c][d] for d in cands)]
        else:
            cands = [c for c in range(n) if self.leq[c][a] and self.leq[c][b]]
            best = [c for c in cands if all(self.leq[d][c] for d in cands)]
        if len(best) != 1:
            kind = "join" if upper else "meet"
            raise AlgebraError(f"{kind} exists", (self.carrier[a], self.carrier[b]))
        return best[0]

    def _extreme(self, upper: bool) -> int:
        n = len(self.carrier)
        for c in range(n):
            if all(self.leq[d][c] if upper else self.leq[c][d] for d in range(n)):
                return c
        raise AlgebraError("bounded", "top" if upper else "bottom")

    def __len__(self) -> int:
        return len(self.carrier)

    def index(self, name: str) -> int:
        return self.carrier.index(name)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def distributivity_failure(self):
        n = self.size
        for x, y, z in itertools.product(range(n), repeat=3):
            if self.meet[x][self.join[y][z]] != self.join[self.meet[x][y]][self.meet[x][z]]:
                return (self.carrier[x], self.carrier[y], self.carrier[z])
        return None

    @property
    def distributive(self) -> bool:
        if self._distributive is None:
            self._distributive = self.distributivity_failure() is None
        return self._distributive

    @property
    def imp(self) -> list[list[int]]:
        """Heyting implication: the largest ``w`` with ``y meet w <= z``."""
        if self._imp is None:
            self._imp = _table(self.size, lambda y, z: self._residual(y, z, upper=True))
        return self._imp

    @property
    def sub(self) -> list[list[int]]:
        """Co-implication: the least ``w`` with ``x <= y join w``."""
        if self._sub is None:
            self._sub = _table(self.size, lambda x, y: self._residual(x, y, upper=False))
        return self._sub

    def _residual(self, a: int, b: int, upper: bool) -> int:
        n = self.size
        if upper:
            cands = [w for w in range(n) if self.leq[self.meet[a][w]][b]]
            best = self.bottom
            for w in cands:
                best = self.join[best][w]
        else:
            cands = [w for w in range(n) if self.leq[a][self.join[b][w]]]
            best = self.top
            for w in cands:
                best = self.meet[best][w]
        if best not in cands:
            raise NotDistributive("residual exists", (self.carrier[a], self.carrier[b]))
        return best

    def to_json(self) -> dict:
        return {"carrier": self.carrier, "leq": self.leq, "sim": None}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name or ''} {self.carrier}>"


class FiniteDeMorgan(FiniteLattice):
    """A bounded distributive lattice with an order-reversing involution ``sim``."""

    def __init__(self, carrier, leq, sim: Sequence[int], name: str = "", check: bool = True):
        super().__init__(carrier, leq, name)
        self.sim = list(sim)
        if check:
            bad = self.demorgan_failures()
            if bad:
                raise AlgebraError(*bad[0])

    @classmethod
    def from_lattice(cls, lat: FiniteLattice, sim: Sequence[int], name: str = "") -> "FiniteDeMorgan":
        return cls(lat.carrier, lat.leq, sim, name or lat.name)

    def demorgan_failures(self) -> list[tuple[str, object]]:
        out = []
        n = self.size
        c = self.carrier
        if len(self.sim) != n or any(not 0 <= s < n for s in self.sim):
            return [("sim table shape", self.sim)]
        if not self.distributive:
            out.append(("distributive", self.distributivity_failure()))
        for a in range(n):
            if self.sim[self.sim[a]] != a:
                out.append(("sim involutive", c[a]))
            for b in range(n):
                if self.leq[a][b] and not self.leq[self.sim[b]][self.sim[a]]:
                    out.append(("sim order-reversing", (c[a], c[b])))
        return out

    def to_json(self) -> dict:
        return {"carrier": self.carrier, "leq": self.leq, "sim": self.sim}


def chain(names: Sequence[str], name: str = "") -> FiniteLattice:
    n = len(names)
    return FiniteLattice(names, [[a <= b for b in range(n)] for a in range(n)], name)


def lattice_from_json(obj: dict, name: str = "") -> FiniteLattice:
    if obj.get("sim") is None:
        return FiniteLattice(obj["carrier"], obj["leq"], name)
    return FiniteDeMorgan(obj["carrier"], obj["leq"], obj["sim"], name)


# ---------------------------------------------------------------------------
# bilattices

CONST_NAMES = ("t", "f", "top", "bot")
_OPS = ("and", "or", "tens", "plus")


class FiniteBilattice:
    """A bilattice given by its truth and knowledge orders plus negation (and optional conflation)."""

    def __init__(self, carrier, leq_t, leq_k, neg: Sequence[int], confl: Sequence[int] | None = None,
                 consts: dict | None = None, name: str = ""):
        self.carrier = list(carrier)
        self.name = name
        self.truth = FiniteLattice(self.carrier, leq_t, f"{name}/t")
        self.know = FiniteLattice(self.carrier, leq_k, f"{name}/k")
        self.leq_t = self.truth.leq
        self.leq_k = self.know.leq
        self.and_ = self.truth.meet
        self.or_ = self.truth.join
        self.tens = self.know.meet
        self.plus = self.know.join
        self.neg = list(neg)
        self.confl = None if confl is None else list(confl)
        n = len(self.carrier)
        for label, tab in (("neg", self.neg), ("confl", self.confl)):
            if tab is not None and (len(tab) != n or any(not 0 <= x < n for x in tab)):
                raise AlgebraError(f"{label} table shape", tab)
        self.t = self.truth.top
        self.f = self.truth.bottom
        self.top = self.know.top
        self.bot = self.know.bottom
        if consts:
            for key in CONST_NAMES:
                given = consts[key]
                given = self.index(given) if isinstance(given, str) else given
                if given != getattr(self, key):
                    raise AlgebraError(f"constant {key}", given, f"constant {key} disagrees with the order bounds")

    @property
    def size(self) -> int:
        return len(self.carrier)

    def __len__(self) -> int:
        return len(self.carrier)

    def index(self, name: str) -> int:
        return self.carrier.index(name)

    def op(self, name: str) -> list[list[int]]:
        return {"and": self.and_, "or": self.or_, "tens": self.tens, "plus": self.plus}[name]

    def const(self, name: str) -> int:
        return getattr(self, name)

    def designated(self, a: int) -> bool:
        return self.leq_k[self.t][a]

    def violations(self) -> list[dict]:
        """Every failing instance of the bilattice identities (empty when valid)."""
        out: list[dict] = []
        n = self.size
        c = self.carrier
        ng, cf = self.neg, self.confl

        def fail(identity, *elems):
            out.append({"identity": identity, "witness": [c[e] for e in elems]})

        for a in range(n):
            if ng[ng[a]] != a:
                fail("neg involutive", a)
            for b in range(n):
                if self.leq_t[a][b] and not self.leq_t[ng[b]][ng[a]]:
                    fail("neg antitone in <=t", a, b)
                if self.leq_k[a][b] and not self.leq_k[ng[a]][ng[b]]:
                    fail("neg monotone in <=k", a, b)
                if ng[self.and_[a][b]] != self.or_[ng[a]][ng[b]]:
                    fail("neg De Morgan and", a, b)
                if ng[self.or_[a][b]] != self.and_[ng[a]][ng[b]]:
                    fail("neg De Morgan or", a, b)
                if ng[self.tens[a][b]] != self.tens[ng[a]][ng[b]]:
                    fail("neg De Morgan tens", a, b)
                if ng[self.plus[a][b]] != self.plus[ng[a]][ng[b]]:
                    fail("neg De Morgan plus", a, b)
        if cf is not None:
            for a in range(n):
                if cf[cf[a]] != a:
                    fail("confl involutive", a)
                if ng[cf[a]] != cf[ng[a]]:
                    fail("confl commutes with neg", a)
                for b in range(n):
                    if self.leq_t[a][b] and not self.leq_t[cf[a]][cf[b]]:
                        fail("confl monotone in <=t", a, b)
                    if self.leq_k[a][b] and not self.leq_k[cf[b]][cf[a]]:
                        fail("confl antitone in <=k", a, b)
                    if cf[self.and_[a][b]] != self.and_[cf[a]][cf[b]]:
                        fail("confl De Morgan and", a, b)
                    if cf[self.or_[a][b]] != self.or_[cf[a]][cf[b]]:
                        fail("confl De Morgan or", a, b)
                    if cf[self.tens[a][b]] != self.plus[cf[a]][cf[b]]:
                        fail("confl De Morgan tens", a, b)
                    if cf[self.plus[a][b]] != self.tens[cf[a]][cf[b]]:
                        fail("confl De Morgan plus", a, b)
        for o1, o2 in itertools.permutations(_OPS, 2):
            t1, t2 = self.op(o1), self.op(o2)
            for x, y, z in itertools.product(range(n), repeat=3):
                if t1[x][t2[y][z]] != t2[t1[x][y]][t1[x][z]]:
                    fail(f"distributive {o1} over {o2}", x, y, z)
        t, f, top, bot = self.t, self.f, self.top, self.bot
        for label, lhs, rhs in (
            ("t tens f = bot", self.tens[t][f], bot),
            ("t plus f = top", self.plus[t][f], top),
            ("top and bot = f", self.and_[top][bot], f),
            ("top or bot = t", self.or_[top][bot], t),
            ("neg t = f", ng[t], f),
            ("neg f = t", ng[f], t),
            ("neg top = top", ng[top], top),
            ("neg bot = bot", ng[bot], bot),
        ):
            if lhs != rhs:
                fail(label, lhs, rhs)
        if cf is not None:
            for label, lhs, rhs in (
                ("confl t = t", cf[t], t),
                ("confl f = f", cf[f], f),
                ("confl top = bot", cf[top], bot),
                ("confl bot = top", cf[bot], top),
            ):
                if lhs != rhs:
                    fail(label, lhs, rhs)
        return out

    def validate(self) -> "FiniteBilattice":
        bad = self.violations()
        if bad:
            raise AlgebraError(bad[0]["identity"], bad[0]["witness"])
        return self

    def relabel(self, order: Sequence[int], names: Sequence[str] | None = None, name: str | None = None) -> "FiniteBilattice":
        """The same bilattice with carrier listed as ``order`` (old indices), optionally renamed."""
        pos = {old: new for new, old in enumerate(order)}
        names = list(names) if names else [self.carrier[o] for o in order]

        def perm_rel(rel):
            return [[rel[a][b] for b in order] for a in order]

        def perm_un(tab):
            return None if tab is None else [pos[tab[a]] for a in order]

        return FiniteBilattice(names, perm_rel(self.leq_t), perm_rel(self.leq_k), perm_un(self.neg),
                               perm_un(self.confl), None, self.name if name is None else name)

    def to_json(self) -> dict:
        return {
            "carrier": self.carrier,
            "leq_t": self.leq_t,
            "leq_k": self.leq_k,
            "neg": self.neg,
            "confl": self.confl,
            "consts": {k: self.carrier[getattr(self, k)] for k in CONST_NAMES},
        }

    @classmethod
    def from_json(cls, obj: dict, name: str = "") -> "FiniteBilattice":
        return cls(obj["carrier"], obj["leq_t"], obj["leq_k"], obj["neg"], obj.get("confl"),
                   obj.get("consts"), name)

    def __repr__(self) -> str:
        return f"<FiniteBilattice {self.name} |{self.size}|>"


def _product(L: FiniteLattice, sim: Sequence[int] | None, name: str) -> FiniteBilattice:
    if not L.distributive:
        raise NotDistributive("distributive", L.distributivity_failure())
    pairs = list(itertools.product(range(L.size), repeat=2))
    names = [f"<{L.carrier[a]},{L.carrier[b]}>" for a, b in pairs]
    at = {p: i for i, p in enumerate(pairs)}
    le = L.leq
    leq_t = [[le[a1][b1] and le[b2][a2] for (b1, b2) in pairs] for (a1, a2) in pairs]
    leq_k = [[le[a1][b1] and le[a2][b2] for (b1, b2) in pairs] for (a1, a2) in pairs]
    neg = [at[(a2, a1)] for (a1, a2) in pairs]
    confl = None if sim is None else [at[(sim[a2], sim[a1])] for (a1, a2) in pairs]
    B = FiniteBilattice(names, leq_t, leq_k, neg, confl, None, name)
    # the order-derived tables must agree with the componentwise clauses
    m, j = L.meet, L.join
    for (a1, a2), (b1, b2) in itertools.product(pairs, repeat=2):
        x, y = at[(a1, a2)], at[(b1, b2)]
        for label, got, want in (
            ("and clause", B.and_[x][y], at[(m[a1][b1], j[a2][b2])]),
            ("or clause", B.or_[x][y], at[(j[a1][b1], m[a2][b2])]),
            ("tens clause", B.tens[x][y], at[(m[a1][b1], m[a2][b2])]),
            ("plus clause", B.plus[x][y], at[(j[a1][b1], j[a2][b2])]),
        ):
            if got != want:
                raise AlgebraError(label, (names[x], names[y]))
    bt, tp = L.bottom, L.top
    assert (B.t, B.f, B.top, B.bot) == (at[(tp, bt)], at[(bt, tp)], at[(tp, tp)], at[(bt, bt)])
    return B


def product_bilattice(L: FiniteLattice, name: str = "") -> FiniteBilattice:
    """The product bilattice on ``L x L``."""
    return _product(L, None, name or f"{L.name}^2")


def product_cbilattice(D: FiniteDeMorgan, name: str = "") -> FiniteBilattice:
    """The product bilattice with conflation ``-(a, b) = (~b, ~a)``."""
    return _product(D, D.sim, name or f"{D.name}^2")


# ---------------------------------------------------------------------------
# regular elements and the decomposition

def regular_elements(B: FiniteBilattice) -> list[int]:
    return [a for a in range(B.size) if B.neg[a] == a]


def reg(B: FiniteBilattice, a: int) -> int:
    x = B.or_[a][B.tens[a][B.neg[a]]]
    return B.plus[x][B.neg[x]]


def pi(B: FiniteBilattice, a: int) -> tuple[int, int]:
    return reg(B, a), reg(B, B.neg[a])


def f_inv(B: FiniteBilattice, pair: tuple[int, int]) -> int:
    a, b = pair
    for x in (a, b):
        if B.neg[x] != x:
            raise NotRegular("regular component", B.carrier[x])
    return B.plus[B.tens[a][B.or_[a][b]]][B.tens[b][B.and_[a][b]]]


# ---------------------------------------------------------------------------
# heterogeneous bilattices

class FiniteHBL:
    """Two lattices with mutually inverse isomorphisms ``n: L1 -> L2`` and ``p: L2 -> L1``.

    When both lattices carry ``sim`` the structure is read as an HCBL, which
    additionally requires ``n`` and ``p`` to commute with ``sim``.
    """

    def __init__(self, L1: FiniteLattice, L2: FiniteLattice, n: Sequence[int], p: Sequence[int], name: str = ""):
        self.L1 = L1
        self.L2 = L2
        self.n = list(n)
        self.p = list(p)
        self.name = name

    @property
    def cbl(self) -> bool:
        return isinstance(self.L1, FiniteDeMorgan) and isinstance(self.L2, FiniteDeMorgan)

    def lattice(self, sort: int) -> FiniteLattice:
        return self.L1 if sort == 1 else self.L2

    def violations(self) -> list[dict]:
        out: list[dict] = []
        L1, L2, n, p = self.L1, self.L2, self.n, self.p

        def fail(identity, witness):
            out.append({"identity": identity, "witness": witness})

        if len(n) != L1.size or any(not 0 <= x < L2.size for x in n):
            fail("n table shape", n)
            return out
        if len(p) != L2.size or any(not 0 <= x < L1.size for x in p):
            fail("p table shape", p)
            return out
        for i, L in ((1, L1), (2, L2)):
            if not L.distributive:
                fail(f"L{i} distributive", L.distributivity_failure())
            if isinstance(L, FiniteDeMorgan):
                for identity, w in L.demorgan_failures():
                    fail(f"L{i} {identity}", w)
        if isinstance(L1, FiniteDeMorgan) != isinstance(L2, FiniteDeMorgan):
            fail("both or neither lattice carries sim", None)
        for a in range(L1.size):
            if p[n[a]] != a:
                fail("pn = Id", L1.carrier[a])
        for b in range(L2.size):
            if n[p[b]] != b:
                fail("np = Id", L2.carrier[b])
        for label, f, S, T in (("n", n, L1, L2), ("p", p, L2, L1)):
            if f[S.bottom] != T.bottom:
                fail(f"{label} preserves bottom", S.carrier[S.bottom])
            if f[S.top] != T.top:
                fail(f"{label} preserves top", S.carrier[S.top])
            for a, b in itertools.product(range(S.size), repeat=2):
                if f[S.meet[a][b]] != T.meet[f[a]][f[b]]:
                    fail(f"{label} preserves meet", (S.carrier[a], S.carrier[b]))
                if f[S.join[a][b]] != T.join[f[a]][f[b]]:
                    fail(f"{label} preserves join", (S.carrier[a], S.carrier[b]))
            if self.cbl:
                for a in range(S.size):
                    if f[S.sim[a]] != T.sim[f[a]]:
                        fail(f"{label} commutes with sim", S.carrier[a])
        return out

    def validate(self) -> "FiniteHBL":
        bad = self.violations()
        if bad:
            raise AlgebraError(bad[0]["identity"], bad[0]["witness"])
        return self

    def to_json(self) -> dict:
        return {"L1": self.L1.to_json(), "L2": self.L2.to_json(), "n": self.n, "p": self.p}

    @classmethod
    def from_json(cls, obj: dict, name: str = "") -> "FiniteHBL":
        return cls(lattice_from_json(obj["L1"], f"{name}/L1"), lattice_from_json(obj["L2"], f"{name}/L2"),
                   obj["n"], obj["p"], name)

    def __repr__(self) -> str:
        kind = "HCBL" if self.cbl else "HBL"
        return f"<Finite{kind} {self.name} |L1|={self.L1.size} |L2|={self.L2.size}>"


def b_plus(B: FiniteBilattice, with_conflation: bool = True, name: str = "") -> FiniteHBL:
    """Both sorts are the regular elements ordered by knowledge; ``n`` and ``p`` are identities."""
    regs = regular_elements(B)
    names = [B.carrier[a] for a in regs]
    leq = [[B.leq_k[a][b] for b in regs] for a in regs]
    pos = {a: i for i, a in enumerate(regs)}
    if with_conflation and B.confl is not None:
        sim = [pos[B.confl[a]] for a in regs]
        L = FiniteDeMorgan(names, leq, sim, f"Reg({B.name})", check=False)
    else:
        L = FiniteLattice(names, leq, f"Reg({B.name})")
    for a, b in itertools.product(regs, repeat=2):
        if regs[L.meet[pos[a]][pos[b]]] != B.tens[a][b]:
            raise AlgebraError("Reg closed under tens", (B.carrier[a], B.carrier[b]))
        if regs[L.join[pos[a]][pos[b]]] != B.plus[a][b]:
            raise AlgebraError("Reg closed under plus", (B.carrier[a], B.carrier[b]))
    if regs[L.top] != B.top or regs[L.bottom] != B.bot:
        raise AlgebraError("Reg bounds are top and bot", names)
    ident = list(range(len(regs)))
    H = FiniteHBL(L, L, ident, ident, name or f"{B.name}+")
    return H.validate()


def h_plus(H: FiniteHBL, name: str = "") -> FiniteBilattice:
    """The product algebra on ``L1 x L2`` with negation ``<p a2, n a1>``."""
    H.validate()
    L1, L2, n, p = H.L1, H.L2, H.n, H.p
    pairs = list(itertools.product(range(L1.size), range(L2.size)))
    at = {q: i for i, q in enumerate(pairs)}
    names = [f"<{L1.carrier[a]},{L2.carrier[b]}>" for a, b in pairs]
    leq_t = [[L1.leq[a1][b1] and L2.leq[b2][a2] for (b1, b2) in pairs] for (a1, a2) in pairs]
    leq_k = [[L1.leq[a1][b1] and L2.leq[a2][b2] for (b1, b2) in pairs] for (a1, a2) in pairs]
    neg = [at[(p[a2], n[a1])] for (a1, a2) in pairs]
    confl = None
    if H.cbl:
        confl = [at[(p[L2.sim[a2]], n[L1.sim[a1]])] for (a1, a2) in pairs]
    B = FiniteBilattice(names, leq_t, leq_k, neg, confl, None, name or f"({H.name})+")
    for (a1, a2), (b1, b2) in itertools.product(pairs, repeat=2):
        x, y = at[(a1, a2)], at[(b1, b2)]
        for label, got, want in (
            ("and clause", B.and_[x][y], at[(L1.meet[a1][b1], L2.join[a2][b2])]),
            ("or clause", B.or_[x][y], at[(L1.join[a1][b1], L2.meet[a2][b2])]),
            ("tens clause", B.tens[x][y], at[(L1.meet[a1][b1], L2.meet[a2][b2])]),
            ("plus clause", B.plus[x][y], at[(L1.join[a1][b1], L2.join[a2][b2])]),
        ):
            if got != want:
                raise AlgebraError(label, (names[x], names[y]))
    return B.validate()


def _iso_failure(src_size: int, dst_size: int, m: Sequence[int]):
    if len(set(m)) != len(m) or src_size != dst_size:
        return "map is not a bijection"
    return None


def _roundtrip_bilattice(B: FiniteBilattice) -> Verdict:
    try:
        H = b_plus(B)
        C = h_plus(H)
    except AlgebraError as exc:
        return rejected(exc.witness, "AlgebraError", str(exc))
    regs = regular_elements(B)
    pos = {a: i for i, a in enumerate(regs)}
    at = {}
    for i in range(C.size):
        at[(i // H.L2.size, i % H.L2.size)] = i
    m = []
    for a in range(B.size):
        r1, r2 = pi(B, a)
        if r1 not in pos or r2 not in pos:
            return rejected(B.carrier[a], "NotRegular", "pi lands outside Reg(B)")
        m.append(at[(pos[r1], pos[r2])])
    bad = _iso_failure(B.size, C.size, m)
    if bad:
        return rejected(None, "NotIsomorphic", bad)
    for a in range(B.size):
        if f_inv(B, pi(B, a)) != a:
            return rejected(B.carrier[a], "NotIsomorphic", "f_inv(pi(a)) != a")
        if m[B.neg[a]] != C.neg[m[a]]:
            return rejected(B.carrier[a], "NotIsomorphic", "pi does not preserve neg")
        if B.confl is not None and m[B.confl[a]] != C.confl[m[a]]:
            return rejected(B.carrier[a], "NotIsomorphic", "pi does not preserve confl")
        for b in range(B.size):
            for o in _OPS:
                if m[B.op(o)[a][b]] != C.op(o)[m[a]][m[b]]:
                    return rejected((B.carrier[a], B.carrier[b]), "NotIsomorphic", f"pi does not preserve {o}")
    for x, y in itertools.product(regs, repeat=2):
        if pi(B, f_inv(B, (x, y))) != (x, y):
            return rejected((B.carrier[x], B.carrier[y]), "NotIsomorphic", "pi(f_inv(x)) != x")
    for k in CONST_NAMES:
        if m[B.const(k)] != C.const(k):
            return rejected(k, "NotIsomorphic", f"pi does not preserve {k}")
    return valid(message=f"{B.name} isomorphic to (B+)+ via pi", model=B.name)


def _roundtrip_hbl(H: FiniteHBL) -> Verdict:
    bad = H.violations()
    if bad:
        return rejected(bad[0]["witness"], "AlgebraError", bad[0]["identity"], model=H.name)
    C = h_plus(H)
    K = b_plus(C)
    regs = regular_elements(C)
    pos = {a: i for i, a in enumerate(regs)}
    n2 = H.L2.size

    def pair(a1, a2):
        return a1 * n2 + a2

    phi1 = [pos.get(pair(a1, H.n[a1]), -1) for a1 in range(H.L1.size)]
    phi2 = [pos.get(pair(H.p[a2], a2), -1) for a2 in range(H.L2.size)]
    for label, phi, L, K_L in (("phi1", phi1, H.L1, K.L1), ("phi2", phi2, H.L2, K.L2)):
        if -1 in phi:
            return rejected(L.carrier[phi.index(-1)], "NotRegular", f"{label} lands outside Reg")
        bad = _iso_failure(L.size, K_L.size, phi)
        if bad:
            return rejected(None, "NotIsomorphic", f"{label}: {bad}")
        for a, b in itertools.product(range(L.size), repeat=2):
            if L.leq[a][b] != K_L.leq[phi[a]][phi[b]]:
                return rejected((L.carrier[a], L.carrier[b]), "NotIsomorphic", f"{label} does not reflect order")
            if phi[L.meet[a][b]] != K_L.meet[phi[a]][phi[b]] or phi[L.join[a][b]] != K_L.join[phi[a]][phi[b]]:
                return rejected((L.carrier[a], L.carrier[b]), "NotIsomorphic", f"{label} does not preserve lattice ops")
        if H.cbl:
            for a in range(L.size):
                if phi[L.sim[a]] != K_L.sim[phi[a]]:
                    return rejected(L.carrier[a], "NotIsomorphic", f"{label} does not preserve sim")
    for a1 in range(H.L1.size):
        if phi2[H.n[a1]] != K.n[phi1[a1]]:
            return rejected(H.L1.carrier[a1], "NotIsomorphic", "n not carried to n")
    for a2 in range(H.L2.size):
        if phi1[H.p[a2]] != K.p[phi2[a2]]:
            return rejected(H.L2.carrier[a2], "NotIsomorphic", "p not carried to p")
    return valid(message=f"{H.name} isomorphic to (H+)+", model=H.name)


def roundtrip_checks(X) -> Verdict:
    """Confirm ``B = (B+)+`` (via ``pi``) or ``H = (H+)+`` (via the pairing maps)."""
    if isinstance(X, FiniteBilattice):
        return _roundtrip_bilattice(X)
    if isinstance(X, FiniteHBL):
        return _roundtrip_hbl(X)
    raise TypeError(f"expected a bilattice or heterogeneous bilattice, got {X!r}")


# ---------------------------------------------------------------------------
# evaluation

def _lookup(v: dict, name: str, L) -> int:
    if name not in v:
        raise UnboundAtom(name)
    val = v[name]
    return L.index(val) if isinstance(val, str) else val


def evaluate(B: FiniteBilattice, v: dict, A: Formula) -> int:
    """Value of ``A`` in ``B`` under ``v`` (atom name -> element index or name)."""
    if isinstance(A, Atom):
        return _lookup(v, A.name, B)
    if isinstance(A, FMeta):
        return _lookup(v, A.name, B)
    if isinstance(A, TruthConst):
        return B.const(A.name)
    if isinstance(A, Neg):
        return B.neg[evaluate(B, v, A.arg)]
    if isinstance(A, Confl):
        if B.confl is None:
            raise AlgebraError("conflation present", B.name, f"{B.name} has no conflation")
        return B.confl[evaluate(B, v, A.arg)]
    if isinstance(A, Bin):
        return B.op(A.op)[evaluate(B, v, A.left)][evaluate(B, v, A.right)]
    raise TypeError(f"not a formula: {A!r}")


def evaluate_mt(H: FiniteHBL, v: dict, t) -> int:
    """Value of a two-sorted formula; sort-1 terms land in ``L1``, sort-2 in ``L2``."""
    if isinstance(t, MAtom):
        return _lookup(v, t.name, H.lattice(t.sort))
    L = H.lattice(t.sort)
    if isinstance(t, MConst):
        return L.top if t.kind == "one" else L.bottom
    if isinstance(t, MBin):
        tab = L.meet if t.op == "meet" else L.join
        return tab[evaluate_mt(H, v, t.left)][evaluate_mt(H, v, t.right)]
    if isinstance(t, MRes):
        tab = L.imp if t.op == "imp" else L.sub
        return tab[evaluate_mt(H, v, t.left)][evaluate_mt(H, v, t.right)]
    if isinstance(t, MP):
        return H.p[evaluate_mt(H, v, t.arg)]
    if isinstance(t, MN):
        return H.n[evaluate_mt(H, v, t.arg)]
    if isinstance(t, MSim):
        if not isinstance(L, FiniteDeMorgan):
            raise AlgebraError("sim present", H.name, f"{H.name} has no sim")
        return L.sim[evaluate_mt(H, v, t.arg)]
    raise TypeError(f"not a two-sorted formula: {t!r}")


def valuations(names: Sequence[str], size: int):
    for vals in itertools.product(range(size), repeat=len(names)):
        yield dict(zip(names, vals))


def consequence(B: FiniteBilattice, A: Formula, C: Formula) -> Verdict:
    """``A |= C`` in ``B``: every valuation sending ``A`` into F_t sends ``C`` there too."""
    atoms = list(dict.fromkeys(formula_atoms(A) + formula_atoms(C)))
    for v in valuations(atoms, B.size):
        if B.designated(evaluate(B, v, A)) and not B.designated(evaluate(B, v, C)):
            shown = {k: B.carrier[x] for k, x in v.items()}
            return countermodel(B.name, shown, f"premise designated, conclusion {B.carrier[evaluate(B, v, C)]}")
    return valid(model=B.name)
