"""Command-line entry point: ``bilat <command> ...``.

Exit status is 0 on accept/valid, 1 on reject/countermodel and 2 on usage or
input errors.  ``--json`` switches to one JSON object per output line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import bundle
from .algebra import AlgebraError, UnboundAtom, consequence, evaluate, evaluate_mt
from .catalog import ENV_VAR, load_catalog
from .cutelim import FuelExhausted, NotPrincipal, Stuck, UnknownShape, cut_ranks, eliminate, rank_trace_decreasing
from .display import check_proof, normalize_system, rule_table
from .hilbert import ArityMismatch, UnknownSchema, check_hilbert, parse_hilbert
from .oracle import conservativity_report, mt_valid, soundness_sweep, st_valid
from .search import Exhausted, prove
from .syntax import (
    FSequent, ParseError, ProofTree, Sequent, SortError, is_formula, parse_formula, parse_fsequent,
    parse_mt, parse_mt_many, pretty_print, uses_conflation, uses_star,
)
from .translate import ConflInBLMode, translate, translate_sequent

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, obj: dict | None = None) -> None:
        if self.as_json:
            print(json.dumps(obj if obj is not None else {"text": text}))
        else:
            print(text)


# ---------------------------------------------------------------------------
# input helpers

def _source(arg: str) -> str:
    """The text of ``arg`` if it names an existing file, else ``arg`` itself."""
    if arg == "-":
        return sys.stdin.read()
    p = Path(arg)
    if p.suffix in (".mts", ".blf", ".jsonl", ".json") or os.sep in arg:
        return p.read_text(encoding="utf-8")
    if p.is_file():
        return p.read_text(encoding="utf-8")
    return arg


def _is_sexpr(text: str) -> bool:
    body = "\n".join(l for l in text.splitlines() if not l.lstrip().startswith(";")).lstrip()
    return body.startswith("(") or (bool(body) and " " not in body.strip() and body.strip()[-1:].isdigit())


def _single_type(text: str):
    return parse_fsequent(text) if "|-" in text else parse_formula(text)


def _catalog(args):
    return load_catalog(getattr(args, "catalog", None))


def _system_for(arg: str | None, material) -> str:
    if arg:
        return normalize_system(arg)
    return "D.CBL" if uses_star(material) else "D.BL"


def _goal(text: str) -> Sequent:
    if _is_sexpr(text):
        terms = [t for t in parse_mt_many(text) if isinstance(t, Sequent)]
        if len(terms) != 1:
            raise UsageError("expected exactly one (seq ...) goal")
        return terms[0]
    s = parse_fsequent(text.strip())
    return translate_sequent(s, conflation=True)


def _trees(text: str) -> list[ProofTree]:
    trees = [t for t in parse_mt_many(text) if isinstance(t, ProofTree)]
    if not trees:
        raise UsageError("no (by ...) proof tree found")
    return trees


def _algebra(cat, name: str):
    if name in cat.bilattices:
        return cat.bilattices[name]
    if name in cat.hbls:
        return cat.hbls[name]
    raise UsageError(f"unknown algebra {name!r}; known: {', '.join([*cat.bilattices, *cat.hbls])}")


def _valuation(text: str | None) -> dict:
    out = {}
    for part in filter(None, (text or "").split(",")):
        key, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"bad valuation entry {part!r}; use name=element")
        out[key.strip()] = val.strip()
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_parse(args, out: Out) -> int:
    text = _source(args.input)
    if _is_sexpr(text):
        items = parse_mt_many(text)
        for x in items:
            kind = ("tree" if isinstance(x, ProofTree) else "sequent" if isinstance(x, Sequent)
                    else "formula" if is_formula(x) else "structure")
            out.emit(pretty_print(x), {"kind": kind, "sort": x.sort if hasattr(x, "sort") else
                                       x.conclusion.sort if isinstance(x, ProofTree) else None,
                                       "text": pretty_print(x)})
        return OK
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        x = _single_type(line)
        out.emit(pretty_print(x), {"kind": "fsequent" if isinstance(x, FSequent) else "formula",
                                   "text": pretty_print(x)})
    return OK


def cmd_check_hilbert(args, out: Out) -> int:
    proof = parse_hilbert(_source(args.file))
    try:
        v = check_hilbert(proof, args.system, printed=args.printed_axioms)
    except (UnknownSchema, ArityMismatch) as e:
        out.emit(f"rejected: {type(e).__name__}: {e}", {"ok": False, "kind": "rejected",
                                                      "code": type(e).__name__, "message": str(e)})
        return FAIL
    if v.ok:
        out.emit(f"accepted: {proof.conclusion} ({v.message})", v.to_json())
        return OK
    out.emit(f"rejected at step {v.locus}: {v.code}: {v.message}", v.to_json())
    return FAIL


def cmd_check_display(args, out: Out) -> int:
    trees = _trees(_source(args.file))
    status = OK
    for k, t in enumerate(trees, 1):
        v = check_proof(t, _system_for(args.system, t.conclusion))
        if v.ok:
            out.emit(f"tree {k}: accepted {pretty_print(t.conclusion)} ({t.size()} nodes)",
                     {"tree": k, **v.to_json(), "conclusion": pretty_print(t.conclusion)})
        else:
            status = FAIL
            out.emit(f"tree {k}: rejected at {list(v.locus or ())} by {v.rule}: {v.code}: {v.message}",
                     {"tree": k, **v.to_json()})
    return status


def cmd_translate(args, out: Out) -> int:
    text = _source(args.input)
    conflation = args.system.upper() != "BL"
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        x = _single_type(line)
        if isinstance(x, FSequent):
            y = translate_sequent(x, conflation, side=args.side)
        else:
            y = translate(x, args.side, conflation)
        out.emit(pretty_print(y), {"input": pretty_print(x), "side": args.side, "output": pretty_print(y)})
    return OK


def cmd_prove(args, out: Out) -> int:
    goal = _goal(_source(args.goal))
    system = _system_for(args.system, goal)
    stats: dict = {}
    start = time.perf_counter()
    result = prove(goal, system, max_depth=args.depth, max_nodes=args.max_nodes, stats=stats)
    elapsed = round(time.perf_counter() - start, 3)
    if isinstance(result, Exhausted):
        out.emit(f"exhausted: {goal} (depth {args.depth}, {result.nodes} nodes, "
                 f"stopped by {result.reason}, {elapsed}s)", {**result.to_json(), "seconds": elapsed})
        return FAIL
    if out.as_json:
        out.emit("", {"result": "proved", "goal": str(goal), "height": result.height(),
                      "size": result.size(), "nodes": stats.get("nodes"), "seconds": elapsed,
                      "proof": pretty_print(result)})
    else:
        print(f"; proved in {system}: height {result.height()}, {stats.get('nodes')} nodes searched")
        print(pretty_print(result))
    return OK


def cmd_cutelim(args, out: Out) -> int:
    status = OK
    for k, t in enumerate(_trees(_source(args.file)), 1):
        system = _system_for(args.system, t.conclusion)
        trace: list = []
        try:
            r = eliminate(t, fuel=args.fuel, system=system, parametric=args.parametric, trace=trace)
        except FuelExhausted as e:
            out.emit(f"tree {k}: fuel exhausted: {e}", {"tree": k, "result": "fuel-exhausted"})
            status = FAIL
            continue
        except (NotPrincipal, UnknownShape) as e:
            out.emit(f"tree {k}: {type(e).__name__}: {e}", {"tree": k, "result": type(e).__name__})
            status = FAIL
            continue
        ranks = [e["ranks"] for e in trace]
        if isinstance(r, Stuck):
            status = FAIL
            out.emit(f"tree {k}: stuck at {list(r.locus)} on {pretty_print(r.formula)}: {r.reason}",
                     {"tree": k, **r.to_json(), "ranks": ranks})
            continue
        if out.as_json:
            out.emit("", {"tree": k, "result": "cut-free", "steps": len(trace) - 1, "ranks": ranks,
                          "decreasing": rank_trace_decreasing(trace), "proof": pretty_print(r)})
        else:
            print(f"; tree {k}: cut-free after {len(trace) - 1} steps, rank trace {ranks}")
            print(pretty_print(r))
    return status


def cmd_eval(args, out: Out) -> int:
    cat = _catalog(args)
    A = _algebra(cat, args.algebra)
    v = _valuation(args.valuation)
    text = _source(args.formula).strip()
    try:
        if args.algebra in cat.hbls:
            term = parse_mt(text)
            val = A.lattice(term.sort).carrier[evaluate_mt(A, v, term)]
        else:
            val = A.carrier[evaluate(A, v, parse_formula(text))]
    except ValueError as e:
        if args.algebra in cat.hbls:
            known = f"L1 {A.L1.carrier}, L2 {A.L2.carrier}"
        else:
            known = str(A.carrier)
        raise UsageError(f"unknown element in valuation ({e}); elements are {known}") from None
    out.emit(val, {"algebra": args.algebra, "formula": text, "valuation": v, "value": val})
    return OK


def cmd_valid(args, out: Out) -> int:
    cat = _catalog(args)
    lhs, rhs = _source(args.lhs).strip(), _source(args.rhs).strip()
    if _is_sexpr(lhs):
        s = parse_mt(f"(seq {lhs} {rhs})")
        models = cat if args.algebra == "all" else _algebra(cat, args.algebra)
        v = mt_valid(s, models)
    else:
        s = FSequent(parse_formula(lhs), parse_formula(rhs))
        if args.algebra == "all":
            v = st_valid(s, cat)
        else:
            v = consequence(_algebra(cat, args.algebra), s.lhs, s.rhs)
    if v.ok:
        out.emit(f"valid: {s}", {"sequent": str(s), **v.to_json()})
        return OK
    shown = ", ".join(f"{k}={x}" for k, x in (v.valuation or {}).items())
    out.emit(f"countermodel in {v.model}: {shown} ({v.message})", {"sequent": str(s), **v.to_json()})
    return FAIL


def cmd_soundness(args, out: Out) -> int:
    cat = load_catalog(args.models) if args.models else _catalog(args)
    system = normalize_system(args.system)
    rows = soundness_sweep(rule_table(system), cat.hbls.values())
    for r in rows:
        print(json.dumps(r))
    return OK if all(r["sound"] for r in rows) else FAIL


def run_corpus(depth: int = 12, max_nodes: int = 20000, catalog=None, emit=None) -> dict:
    """Run every bundled check in a fixed order; return pass/fail counts per section."""
    emit = emit or (lambda text, obj: None)
    cat = catalog or load_catalog()
    summary: dict = {}

    def record(section: str, name: str, ok: bool, detail: str = "") -> None:
        ent = summary.setdefault(section, {"passed": 0, "failed": 0})
        ent["passed" if ok else "failed"] += 1
        emit(f"{'ok  ' if ok else 'FAIL'} {section:12} {name} {detail}".rstrip(),
             {"section": section, "name": name, "ok": ok, "detail": detail})

    for e in bundle.derivation_trees():
        system = normalize_system(e.system)
        for k, t in enumerate(e.trees):
            v = check_proof(t, system)
            goal_ok = not e.goals or translate_sequent(e.goals[0]) == t.conclusion
            record("derivations", f"{e.name}#{k + 1}", v.ok and goal_ok, "" if v.ok else v.message)

    scripts = bundle.hilbert_scripts()
    for name, system, proof in scripts:
        v = check_hilbert(proof, system)
        record("hilbert", name, v.ok, str(proof.conclusion))

    for e in bundle.cut_inputs():
        t = e.tree
        trace: list = []
        r = eliminate(t, system=normalize_system(e.system), trace=trace)
        ok = (isinstance(r, ProofTree) and not cut_ranks(r) and r.conclusion == t.conclusion
              and check_proof(r, normalize_system(e.system)).ok and rank_trace_decreasing(trace))
        record("cuts", e.name, ok, f"ranks {[x['ranks'] for x in trace]}")

    sequents = bundle.sequent_corpus()
    for s in sequents:
        cbl = uses_conflation(s.lhs) or uses_conflation(s.rhs)
        goal = translate_sequent(s)
        r = prove(goal, "D.CBL" if cbl else "D.BL", max_depth=depth, max_nodes=max_nodes)
        ok = isinstance(r, Exhausted) or mt_valid(goal, cat).ok
        record("search", str(s), ok, "exhausted" if isinstance(r, Exhausted) else f"proved, height {r.height()}")

    extra = [p.conclusion for _, _, p in scripts if p.conclusion not in sequents]
    for row in conservativity_report(sequents + extra, cat, [p for _, _, p in scripts], depth, max_nodes):
        record("square", row.sequent, not row.violations,
               "; ".join(row.violations) or f"hilbert={row.hilbert} search={row.search} "
                                             f"four={row.single} mt={row.multi}")
    return summary


def cmd_corpus(args, out: Out) -> int:
    summary = run_corpus(args.depth, args.max_nodes, _catalog(args), out.emit)
    failed = sum(v["failed"] for v in summary.values())
    for section, counts in summary.items():
        out.emit(f"{section}: {counts['passed']} passed, {counts['failed']} failed",
                 {"section": section, **counts, "summary": True})
    return OK if failed == 0 else FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="one JSON object per output line")
    common.add_argument("--catalog", help=f"model catalog file (default ${ENV_VAR} or the bundled one)")

    ap = argparse.ArgumentParser(prog="bilat", description="bilattice logic workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and pretty-print")
    p.add_argument("input", help="text or file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check-hilbert", parents=[common], help="check a JSONL Hilbert proof")
    p.add_argument("--system", default="BL", type=str.upper, choices=["BL", "CBL"])
    p.add_argument("--printed-axioms", action="store_true",
                   help="use the weaker tensor/plus distributivity variant")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_hilbert)

    p = sub.add_parser("check-display", parents=[common], help="check display-calculus proof trees")
    p.add_argument("--system", choices=["dbl", "dcbl"])
    p.add_argument("file")
    p.set_defaults(func=cmd_check_display)

    p = sub.add_parser("translate", parents=[common], help="translate formulas or sequents")
    p.add_argument("--system", default="cbl", type=str.lower, choices=["bl", "cbl"])
    p.add_argument("--side", type=int, default=1, choices=[1, 2])
    p.add_argument("input", help="text or .blf file")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("prove", parents=[common], help="bounded proof search")
    p.add_argument("--system", choices=["dbl", "dcbl"])
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--max-nodes", type=int, default=20000)
    p.add_argument("goal", help="(seq ...) goal, single-type sequent, or file")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("cutelim", parents=[common], help="eliminate cuts")
    p.add_argument("--system", choices=["dbl", "dcbl"])
    p.add_argument("--fuel", type=int, default=1000)
    p.add_argument("--parametric", action="store_true", help="also permute non-principal cuts")
    p.add_argument("file")
    p.set_defaults(func=cmd_cutelim)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in a catalog algebra")
    p.add_argument("--algebra", default="four")
    p.add_argument("--valuation", help="comma-separated name=element pairs")
    p.add_argument("formula")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("valid", parents=[common], help="semantic validity of lhs |- rhs")
    p.add_argument("--algebra", default="all", help="catalog algebra name, or 'all'")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(func=cmd_valid)

    p = sub.add_parser("soundness", parents=[common], help="rule soundness sweep, JSON lines")
    p.add_argument("--system", default="dcbl", choices=["dbl", "dcbl"])
    p.add_argument("--models", help="catalog file")
    p.set_defaults(func=cmd_soundness)

    p = sub.add_parser("corpus", parents=[common], help="run the bundled suite")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--max-nodes", type=int, default=20000)
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Out(args.json)
    try:
        return args.func(args, out)
    except (ParseError, SortError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return USAGE
    except (OSError, UsageError, UnboundAtom, AlgebraError, ConflInBLMode, json.JSONDecodeError,
            KeyError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
