"""Terms of the single-type and two-sorted languages, with parsers and printers.

Single-type formulas use an infix surface::

    !  negation      -  conflation
    &  and           *  tensor (knowledge meet)
    |  or            +  plus (knowledge join)

``&`` and ``*`` bind tighter than ``|`` and ``+``.  Two different operators of
the same tier may not be chained without parentheses.

Two-sorted material uses S-expressions.  Atoms end in the digit of their sort
(``a1``, ``q2``), and every head carries its sort where it is ambiguous
(``meet1``, ``Scup2``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union


class ParseError(Exception):
    def __init__(self, message: str, position: int = 0, expected: Iterable[str] = ()):
        self.position = position
        self.expected = tuple(expected)
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class MixedTierError(ParseError):
    """Raised for chains like ``p & q * r`` whose grouping would be a guess."""


class SortError(Exception):
    def __init__(self, node: object, expected: object, found: object, message: str = ""):
        self.node = node
        self.expected = expected
        self.found = found
        super().__init__(message or f"sort error in {node!r}: expected {expected}, found {found}")


class PolarityError(SortError):
    """A structural connective sits on the side of the turnstile where it has no reading."""


# ---------------------------------------------------------------------------
# single-type formulas

IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")
CONSTANTS = ("t", "f", "top", "bot")
BIN_OPS = ("and", "or", "tens", "plus")
_OP_SYMBOL = {"and": "&", "or": "|", "tens": "*", "plus": "+"}
_SYMBOL_OP = {v: k for k, v in _OP_SYMBOL.items()}
_TIER = {"and": 1, "tens": 1, "or": 2, "plus": 2}


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not IDENT.fullmatch(self.name) or self.name in CONSTANTS:
            raise ValueError(f"bad atom name {self.name!r}")


@dataclass(frozen=True)
class TruthConst:
    name: str

    def __post_init__(self):
        if self.name not in CONSTANTS:
            raise ValueError(f"unknown truth constant {self.name!r}")


@dataclass(frozen=True)
class Neg:
    arg: "Formula"


@dataclass(frozen=True)
class Confl:
    arg: "Formula"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if self.op not in BIN_OPS:
            raise ValueError(f"unknown binary connective {self.op!r}")


@dataclass(frozen=True)
class FMeta:
    """Schema metavariable standing for an arbitrary formula."""

    name: str


Formula = Union[Atom, TruthConst, Neg, Confl, Bin, FMeta]

T, F, TOP, BOT = (TruthConst(c) for c in CONSTANTS)


def And(a: Formula, b: Formula) -> Bin:
    return Bin("and", a, b)


def Or(a: Formula, b: Formula) -> Bin:
    return Bin("or", a, b)


def Tens(a: Formula, b: Formula) -> Bin:
    return Bin("tens", a, b)


def Plus(a: Formula, b: Formula) -> Bin:
    return Bin("plus", a, b)


@dataclass(frozen=True)
class FSequent:
    """A single-type sequent ``A |- B``."""

    lhs: Formula
    rhs: Formula

    def __str__(self) -> str:
        return f"{print_formula(self.lhs)} |- {print_formula(self.rhs)}"


_FTOKEN = re.compile(r"\s*(?:(\|-)|([!\-&|*+()])|([a-zA-Z][a-zA-Z0-9_]*))")


def _tokenize_formula(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _FTOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", pos + stripped)
        tokens.append((m.group(1) or m.group(2) or m.group(3), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _FormulaParser:
    def __init__(self, text: str, metas: frozenset[str]):
        self.tokens = _tokenize_formula(text)
        self.i = 0
        self.metas = metas

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise ParseError(f"unexpected {self.peek()!r}", self.pos(), [tok])
        self.take()

    def tier(self, level: int) -> Formula:
        sub = self.unary if level == 1 else (lambda: self.tier(1))
        symbols = ("&", "*") if level == 1 else ("|", "+")
        left = sub()
        chain_op = None
        while self.peek() in symbols:
            sym_pos = self.pos()
            op = _SYMBOL_OP[self.take()]
            if chain_op is not None and op != chain_op:
                raise MixedTierError(
                    f"{_OP_SYMBOL[chain_op]!r} and {_OP_SYMBOL[op]!r} mixed without parentheses",
                    sym_pos,
                    ["(", _OP_SYMBOL[chain_op]],
                )
            chain_op = op
            left = Bin(op, left, sub())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Neg(self.unary())
        if tok == "-":
            self.take()
            return Confl(self.unary())
        if tok == "(":
            self.take()
            inner = self.tier(2)
            self.expect(")")
            return inner
        if IDENT.fullmatch(tok):
            self.take()
            if tok in CONSTANTS:
                return TruthConst(tok)
            if tok in self.metas:
                return FMeta(tok)
            return Atom(tok)
        raise ParseError(f"unexpected {tok!r}", self.pos(), ["!", "-", "(", "identifier", "constant"])


def parse_formula(text: str, metas: Iterable[str] = ()) -> Formula:
    """Parse an infix formula.  Identifiers listed in ``metas`` become schema variables."""
    p = _FormulaParser(text, frozenset(metas))
    result = p.tier(2)
    if p.peek() != "<end>":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos(), ["<end>"])
    return result


def parse_fsequent(text: str, metas: Iterable[str] = ()) -> FSequent:
    p = _FormulaParser(text, frozenset(metas))
    lhs = p.tier(2)
    p.expect("|-")
    rhs = p.tier(2)
    if p.peek() != "<end>":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos(), ["<end>"])
    return FSequent(lhs, rhs)


def print_formula(a: Formula) -> str:
    if isinstance(a, (Atom, FMeta)):
        return a.name
    if isinstance(a, TruthConst):
        return a.name
    if isinstance(a, (Neg, Confl)):
        sym = "!" if isinstance(a, Neg) else "-"
        inner = print_formula(a.arg)
        if isinstance(a.arg, Bin):
            inner = f"({inner})"
        return sym + inner
    if isinstance(a, Bin):
        left = print_formula(a.left)
        right = print_formula(a.right)
        # left-associative chains of one operator print flat; anything else is bracketed
        if isinstance(a.left, Bin) and not (a.left.op == a.op or _TIER[a.left.op] < _TIER[a.op]):
            left = f"({left})"
        if isinstance(a.right, Bin) and _TIER[a.right.op] >= _TIER[a.op]:
            right = f"({right})"
        return f"{left} {_OP_SYMBOL[a.op]} {right}"
    raise TypeError(f"not a formula: {a!r}")


def formula_atoms(a: Formula) -> list[str]:
    """Atom names in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(x):
        if isinstance(x, Atom):
            seen.setdefault(x.name)
        elif isinstance(x, (Neg, Confl)):
            walk(x.arg)
        elif isinstance(x, Bin):
            walk(x.left)
            walk(x.right)

    walk(a)
    return list(seen)


def uses_conflation(a: Formula) -> bool:
    if isinstance(a, Confl):
        return True
    if isinstance(a, Neg):
        return uses_conflation(a.arg)
    if isinstance(a, Bin):
        return uses_conflation(a.left) or uses_conflation(a.right)
    return False


def depth(a: Formula) -> int:
    if isinstance(a, (Neg, Confl)):
        return 1 + depth(a.arg)
    if isinstance(a, Bin):
        return 1 + max(depth(a.left), depth(a.right))
    return 0


# ---------------------------------------------------------------------------
# two-sorted formulas and structures

MT_ATOM = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*[12]")


def _need(node, arg, sort: int) -> None:
    if arg.sort != sort:
        raise SortError(node, sort, arg.sort)


def _check_sort(sort: int) -> None:
    if sort not in (1, 2):
        raise ValueError(f"sort must be 1 or 2, not {sort!r}")


@dataclass(frozen=True)
class MAtom:
    name: str

    def __post_init__(self):
        if not MT_ATOM.fullmatch(self.name) or self.name in RESERVED:
            raise ValueError(f"bad sorted atom name {self.name!r}")

    @property
    def sort(self) -> int:
        return int(self.name[-1])


@dataclass(frozen=True)
class MConst:
    kind: str  # "one" | "zero"
    sort: int

    def __post_init__(self):
        _check_sort(self.sort)
        if self.kind not in ("one", "zero"):
            raise ValueError(self.kind)


@dataclass(frozen=True)
class MBin:
    op: str  # "meet" | "join"
    sort: int
    left: "MTFormula"
    right: "MTFormula"

    def __post_init__(self):
        _check_sort(self.sort)
        if self.op not in ("meet", "join"):
            raise ValueError(self.op)
        _need(self, self.left, self.sort)
        _need(self, self.right, self.sort)


@dataclass(frozen=True)
class MP:
    arg: "MTFormula"

    def __post_init__(self):
        _need(self, self.arg, 2)

    @property
    def sort(self) -> int:
        return 1


@dataclass(frozen=True)
class MN:
    arg: "MTFormula"

    def __post_init__(self):
        _need(self, self.arg, 1)

    @property
    def sort(self) -> int:
        return 2


@dataclass(frozen=True)
class MSim:
    sort: int
    arg: "MTFormula"

    def __post_init__(self):
        _check_sort(self.sort)
        _need(self, self.arg, self.sort)


@dataclass(frozen=True)
class MRes:
    """Residual of meet (``imp``) or join (``sub``); only produced by the semantic reading."""

    op: str  # "imp" | "sub"
    sort: int
    left: "MTFormula"
    right: "MTFormula"

    def __post_init__(self):
        _check_sort(self.sort)
        if self.op not in ("imp", "sub"):
            raise ValueError(self.op)
        _need(self, self.left, self.sort)
        _need(self, self.right, self.sort)


MTFormula = Union[MAtom, MConst, MBin, MP, MN, MSim, MRes]
MT_FORMULA_TYPES = (MAtom, MConst, MBin, MP, MN, MSim, MRes)


@dataclass(frozen=True)
class SConst:
    kind: str  # "one" (hat) | "zero" (check)
    sort: int

    def __post_init__(self):
        _check_sort(self.sort)
        if self.kind not in ("one", "zero"):
            raise ValueError(self.kind)


@dataclass(frozen=True)
class SBin:
    op: str  # "cap" | "cup" | "rresR" (check residual) | "rresL" (hat residual)
    sort: int
    left: "Structure"
    right: "Structure"

    def __post_init__(self):
        _check_sort(self.sort)
        if self.op not in ("cap", "cup", "rresR", "rresL"):
            raise ValueError(self.op)
        _need(self, self.left, self.sort)
        _need(self, self.right, self.sort)


@dataclass(frozen=True)
class SN:
    arg: "Structure"

    def __post_init__(self):
        _need(self, self.arg, 1)

    @property
    def sort(self) -> int:
        return 2


@dataclass(frozen=True)
class SP:
    arg: "Structure"

    def __post_init__(self):
        _need(self, self.arg, 2)

    @property
    def sort(self) -> int:
        return 1


@dataclass(frozen=True)
class SStar:
    sort: int
    arg: "Structure"

    def __post_init__(self):
        _check_sort(self.sort)
        _need(self, self.arg, self.sort)


@dataclass(frozen=True)
class Meta:
    """Rule-pattern variable.  ``kind`` is "structure", "formula" or "atom"."""

    name: str
    sort: int
    kind: str = "structure"


Structure = Union[MTFormula, SConst, SBin, SN, SP, SStar, Meta]
STRUCTURE_TYPES = MT_FORMULA_TYPES + (SConst, SBin, SN, SP, SStar, Meta)


def is_formula(x: object) -> bool:
    return isinstance(x, MT_FORMULA_TYPES)


@dataclass(frozen=True)
class Sequent:
    lhs: Structure
    rhs: Structure

    def __post_init__(self):
        if self.lhs.sort != self.rhs.sort:
            raise SortError(self, self.lhs.sort, self.rhs.sort, "sequent sides differ in sort")

    @property
    def sort(self) -> int:
        return self.lhs.sort

    def __str__(self) -> str:
        return pretty_print(self)


@dataclass(frozen=True)
class ProofTree:
    rule: str
    conclusion: Sequent
    premises: tuple["ProofTree", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def nodes(self, path: tuple[int, ...] = ()):
        """Yield ``(path, node)`` pairs in pre-order."""
        yield path, self
        for k, p in enumerate(self.premises):
            yield from p.nodes(path + (k,))

    def at(self, path: tuple[int, ...]) -> "ProofTree":
        node = self
        for k in path:
            node = node.premises[k]
        return node

    def replace(self, path: tuple[int, ...], new: "ProofTree") -> "ProofTree":
        if not path:
            return new
        k = path[0]
        prem = list(self.premises)
        prem[k] = prem[k].replace(path[1:], new)
        return ProofTree(self.rule, self.conclusion, tuple(prem))


# ---------------------------------------------------------------------------
# S-expression surface

_MT_CONSTS = {f"{k}{i}": (k, i) for k in ("one", "zero") for i in (1, 2)}
_S_CONSTS = {f"S{k}{i}": (k, i) for k in ("one", "zero") for i in (1, 2)}
_MT_BIN = {f"{op}{i}": (op, i) for op in ("meet", "join") for i in (1, 2)}
_MT_RES = {f"{op}{i}": (op, i) for op in ("imp", "sub") for i in (1, 2)}
_S_BIN = {f"S{h}{i}": (op, i) for h, op in (("cap", "cap"), ("cup", "cup"), ("rresR", "rresR"), ("rresL", "rresL")) for i in (1, 2)}
_SIM = {"sim1": 1, "sim2": 2}
_STAR = {"Sstar1": 1, "Sstar2": 2}
RESERVED = frozenset(
    list(_MT_CONSTS) + list(_S_CONSTS) + list(_MT_BIN) + list(_MT_RES) + list(_S_BIN)
    + list(_SIM) + list(_STAR)
)
_HEADS = sorted(
    set(_MT_BIN) | set(_MT_RES) | set(_S_BIN) | set(_SIM) | set(_STAR)
    | {"p", "n", "SN", "SP", "seq", "by"}
)

_STOKEN = re.compile(r"\(|\)|[^\s();]+")


def _tokenize_sexpr(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch == ";":
            nl = text.find("\n", pos)
            pos = len(text) if nl < 0 else nl
        else:
            m = _STOKEN.match(text, pos)
            tokens.append((m.group(0), pos))
            pos = m.end()
    return tokens


_META = re.compile(r"\?([A-Za-z][A-Za-z_]*)([12])")


class _SexprParser:
    def __init__(self, text: str, patterns: bool):
        self.tokens = _tokenize_sexpr(text)
        self.i = 0
        self.end = len(text)
        self.patterns = patterns

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.end

    def take(self) -> str:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of input", self.end, ["(", "term"])
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def close(self) -> None:
        if self.peek() != ")":
            raise ParseError(f"unexpected {self.peek()!r}", self.pos(), [")"])
        self.take()

    def term(self):
        start = self.pos()
        tok = self.take()
        if tok == ")":
            raise ParseError("unexpected ')'", start, ["(", "term"])
        if tok != "(":
            return self.leaf(tok, start)
        head_pos = self.pos()
        head = self.take()
        try:
            node = self.compound(head, head_pos)
        except SortError:
            raise
        except (ValueError, TypeError) as exc:
            raise ParseError(str(exc), head_pos) from None
        return node

    def leaf(self, tok: str, start: int):
        if tok in _MT_CONSTS:
            return MConst(*_MT_CONSTS[tok])
        if tok in _S_CONSTS:
            return SConst(*_S_CONSTS[tok])
        m = _META.fullmatch(tok)
        if m and self.patterns:
            name = m.group(1)
            kind = "formula" if name[0] in "AB" else "atom" if name[0] == "p" else "structure"
            return Meta(name, int(m.group(2)), kind)
        if MT_ATOM.fullmatch(tok) and tok not in RESERVED:
            return MAtom(tok)
        raise ParseError(f"bad token {tok!r}", start, ["sorted atom", "constant", "("])

    def args(self, count: int) -> list:
        out = [self.term() for _ in range(count)]
        self.close()
        return out

    def compound(self, head: str, head_pos: int):
        if head in _MT_CONSTS or head in _S_CONSTS:
            self.close()
            return self.leaf(head, head_pos)
        if head in _MT_BIN:
            op, s = _MT_BIN[head]
            a, b = self.args(2)
            self.formula_args(head, a, b)
            return MBin(op, s, a, b)
        if head in _MT_RES:
            op, s = _MT_RES[head]
            a, b = self.args(2)
            self.formula_args(head, a, b)
            return MRes(op, s, a, b)
        if head in _S_BIN:
            op, s = _S_BIN[head]
            a, b = self.args(2)
            return SBin(op, s, a, b)
        if head in _SIM:
            (a,) = self.args(1)
            self.formula_args(head, a)
            return MSim(_SIM[head], a)
        if head in _STAR:
            (a,) = self.args(1)
            return SStar(_STAR[head], a)
        if head == "p":
            (a,) = self.args(1)
            self.formula_args(head, a)
            return MP(a)
        if head == "n":
            (a,) = self.args(1)
            self.formula_args(head, a)
            return MN(a)
        if head == "SN":
            (a,) = self.args(1)
            return SN(a)
        if head == "SP":
            (a,) = self.args(1)
            return SP(a)
        if head == "seq":
            a, b = self.args(2)
            return Sequent(a, b)
        if head == "by":
            rule_pos = self.pos()
            rule = self.take()
            if rule in ("(", ")"):
                raise ParseError("missing rule id", rule_pos, ["rule id"])
            concl = self.term()
            if not isinstance(concl, Sequent):
                raise ParseError("proof node needs a sequent", rule_pos, ["(seq ...)"])
            subs = []
            while self.peek() == "(":
                sub = self.term()
                if not isinstance(sub, ProofTree):
                    raise ParseError("subproof expected", self.pos(), ["(by ...)"])
                subs.append(sub)
            self.close()
            return ProofTree(rule, concl, tuple(subs))
        raise ParseError(f"unknown head {head!r}", head_pos, _HEADS)

    def formula_args(self, head: str, *args) -> None:
        for a in args:
            if not (is_formula(a) or (isinstance(a, Meta) and a.kind != "structure")):
                raise SortError(head, "formula", type(a).__name__, f"{head} takes formulas, got {pretty_print(a)}")


def parse_mt(text: str, patterns: bool = False):
    """Parse one S-expression: a formula, structure, sequent or proof tree.

    With ``patterns`` set, tokens like ``?X1`` and ``?A2`` denote metavariables.
    """
    p = _SexprParser(text, patterns)
    result = p.term()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}", p.pos(), ["<end>"])
    return result


def parse_mt_many(text: str, patterns: bool = False) -> list:
    p = _SexprParser(text, patterns)
    out = []
    while p.peek() is not None:
        out.append(p.term())
    return out


def _sx(x) -> str:
    if isinstance(x, MAtom):
        return x.name
    if isinstance(x, MConst):
        return f"{x.kind}{x.sort}"
    if isinstance(x, MBin):
        return f"({x.op}{x.sort} {_sx(x.left)} {_sx(x.right)})"
    if isinstance(x, MRes):
        return f"({x.op}{x.sort} {_sx(x.left)} {_sx(x.right)})"
    if isinstance(x, MP):
        return f"(p {_sx(x.arg)})"
    if isinstance(x, MN):
        return f"(n {_sx(x.arg)})"
    if isinstance(x, MSim):
        return f"(sim{x.sort} {_sx(x.arg)})"
    if isinstance(x, SConst):
        return f"S{x.kind}{x.sort}"
    if isinstance(x, SBin):
        return f"(S{x.op}{x.sort} {_sx(x.left)} {_sx(x.right)})"
    if isinstance(x, SN):
        return f"(SN {_sx(x.arg)})"
    if isinstance(x, SP):
        return f"(SP {_sx(x.arg)})"
    if isinstance(x, SStar):
        return f"(Sstar{x.sort} {_sx(x.arg)})"
    if isinstance(x, Meta):
        return f"?{x.name}{x.sort}"
    if isinstance(x, Sequent):
        return f"(seq {_sx(x.lhs)} {_sx(x.rhs)})"
    raise TypeError(f"cannot print {x!r}")


def _print_tree(t: ProofTree, indent: int) -> str:
    pad = "  " * indent
    head = f"{pad}(by {t.rule} {_sx(t.conclusion)}"
    if not t.premises:
        return head + ")"
    inner = "\n".join(_print_tree(p, indent + 1) for p in t.premises)
    return f"{head}\n{inner})"


def pretty_print(term) -> str:
    """Render any term in its concrete surface; the output parses back to ``term``."""
    if isinstance(term, (Atom, TruthConst, Neg, Confl, Bin, FMeta)):
        return print_formula(term)
    if isinstance(term, FSequent):
        return str(term)
    if isinstance(term, ProofTree):
        return _print_tree(term, 0)
    return _sx(term)


def complexity(x) -> int:
    """Number of connective nodes; atoms and constants count zero."""
    if isinstance(x, (Neg, Confl, MP, MN, MSim)):
        return 1 + complexity(x.arg)
    if isinstance(x, (Bin, MBin, MRes)):
        return 1 + complexity(x.left) + complexity(x.right)
    if isinstance(x, (Atom, TruthConst, FMeta, MAtom, MConst, Meta)):
        return 0
    raise TypeError(f"not a formula: {x!r}")


def mt_atoms(x) -> list[str]:
    """Sorted atom names of a two-sorted term, in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(y):
        if isinstance(y, MAtom):
            seen.setdefault(y.name)
        elif isinstance(y, Sequent):
            walk(y.lhs)
            walk(y.rhs)
        elif isinstance(y, (MBin, MRes, SBin)):
            walk(y.left)
            walk(y.right)
        elif isinstance(y, (MP, MN, MSim, SN, SP, SStar)):
            walk(y.arg)

    walk(x)
    return list(seen)


def uses_star(x) -> bool:
    """True if ``x`` mentions a D.CBL-only symbol (``sim`` or ``Sstar``)."""
    if isinstance(x, (MSim, SStar)):
        return True
    if isinstance(x, Sequent):
        return uses_star(x.lhs) or uses_star(x.rhs)
    if isinstance(x, (MBin, MRes, SBin)):
        return uses_star(x.left) or uses_star(x.right)
    if isinstance(x, (MP, MN, SN, SP)):
        return uses_star(x.arg)
    return False
