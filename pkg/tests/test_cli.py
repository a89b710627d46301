import json

import pytest

from bilat import bundle
from bilat.cli import FAIL, OK, USAGE, main

DERIVATIONS = bundle.CORPUS_DIR / "paper"
CUTS = bundle.CORPUS_DIR / "cuts"
HILBERT = bundle.CORPUS_DIR / "hilbert"


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def lines(text):
    return [json.loads(x) for x in text.splitlines() if x.strip()]


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "!(p&q)")
    assert code == OK and out.strip() == "!(p & q)"


def test_parse_mixed_tier_is_usage_error(capsys):
    code, _, err = run(capsys, "parse", "p & q * r")
    assert code == USAGE and "MixedTierError" in err


def test_parse_json(capsys):
    code, out, _ = run(capsys, "parse", "--json", "(seq (SN a1) b2)")
    assert code == OK and lines(out) == [{"kind": "sequent", "sort": 2, "text": "(seq (SN a1) b2)"}]


def test_check_display(capsys):
    code, out, _ = run(capsys, "check-display", "--system", "dbl", str(DERIVATIONS / "dneg.mts"))
    assert code == OK and "accepted" in out
    code, out, _ = run(capsys, "check-display", "--system", "dbl", str(DERIVATIONS / "dconf.mts"))
    assert code == FAIL and "SystemViolation" in out


def test_check_display_bad_tree(capsys, tmp_path):
    f = tmp_path / "bad.mts"
    f.write_text("(by id (seq (p a2) (p a2)))")
    code, out, _ = run(capsys, "check-display", "--json", str(f))
    assert code == FAIL and lines(out)[0]["ok"] is False


def test_check_hilbert(capsys):
    path = HILBERT / "comm_and.jsonl"
    code, out, _ = run(capsys, "check-hilbert", "--json", str(path))
    assert code == OK and lines(out)[0]["ok"]


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "p & q |- q")
    assert code == OK and out.strip() == "(seq (meet1 p1 q1) q1)"
    code, out, _ = run(capsys, "translate", "--side", "2", "p & q |- q")
    assert code == OK and out.strip() == "(seq q2 (join2 p2 q2))"
    code, _, err = run(capsys, "translate", "--system", "bl", "-p |- p")
    assert code == USAGE and err


def test_prove(capsys):
    code, out, _ = run(capsys, "prove", "--json", "p & q |- p")
    obj = lines(out)[0]
    assert code == OK and obj["result"] == "proved" and obj["proof"].startswith("(by")
    code, out, _ = run(capsys, "prove", "--depth", "3", "p |- q")
    assert code == FAIL and out.startswith("exhausted")


def test_cutelim(capsys):
    code, out, _ = run(capsys, "cutelim", "--json", str(CUTS / "05_meet1.mts"))
    obj = lines(out)[0]
    assert code == OK and obj["result"] == "cut-free" and obj["decreasing"] and obj["ranks"][-1] == []


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--valuation", "p=t,q=top", "p & q")
    assert code == OK and out.strip() == "top"
    code, out, _ = run(capsys, "eval", "--algebra", "four+", "--valuation", "a1=top", "(p (n a1))")
    assert code == OK and out.strip() == "top"
    code, _, err = run(capsys, "eval", "--valuation", "p=1", "p")
    assert code == USAGE and "elements" in err
    code, _, err = run(capsys, "eval", "--algebra", "nope", "p")
    assert code == USAGE


def test_valid(capsys):
    code, out, _ = run(capsys, "valid", "--algebra", "four", "p & !p", "q")
    assert code == FAIL and "p=top" in out and "q=f" in out
    code, out, _ = run(capsys, "valid", "p", "p | q")
    assert code == OK
    code, out, _ = run(capsys, "valid", "--json", "(meet1 a1 b1)", "a1")
    assert code == OK and lines(out)[0]["ok"]


def test_soundness(capsys):
    code, out, _ = run(capsys, "soundness", "--system", "dbl")
    rows = lines(out)
    assert code == OK and len(rows) == 66 and all(r["sound"] for r in rows)


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "check-display", "/nonexistent/x.mts")
    assert code == USAGE and err


def test_bad_catalog_env(capsys, monkeypatch, tmp_path):
    f = tmp_path / "cat.json"
    f.write_text("{not json")
    monkeypatch.setenv("BILAT_CATALOG", str(f))
    code, _, err = run(capsys, "valid", "p", "p")
    assert code == USAGE


def test_argparse_usage():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == USAGE
