import io
import json
import subprocess
import sys

import pytest

from fo3pdl.cli import main
from fo3pdl.structures import load_model
from fo3pdl.syntax import parse_any, parse_fo, parse_state

M0 = {"size": 4, "predicates": {"P": [1, 3], "Q": [2]}, "relations": {"a": [[0, 2], [1, 2], [1, 3]]}}
M1 = {"size": 4, "relations": {"a": [[1, 2], [2, 3]]}}
BAD = {"size": 3, "relations": {"a": [[0, 0], [1, 2], [2, 1]]}}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue().strip(), err.getvalue().strip()


@pytest.fixture
def models(tmp_path):
    paths = {}
    for name, data in (("m0", M0), ("m1", M1), ("bad", BAD), ("empty", {"size": 2, "relations": {"a": []}})):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    return paths


def test_translate_examples():
    assert run("translate", "--to", "pdl", "exists y. (x <= y & P(y))") == \
        (0, "loop(le . test(P & <inv(le)>true) . inv(le))", "")
    assert run("translate", "--to", "fo3", "P(x)")[:2] == (0, "P(x)")


def test_translate_parse_error():
    code, _, err = run("translate", "exists .")
    assert code == 2
    assert "position" in err


def test_translate_outputs_reparse():
    for text in ("a(x,y) & !(y <= x)", "forall y. (x <= y -> P(y))", "exists x. P(x)"):
        code, out, _ = run("translate", text)
        assert code == 0
        parse_any(out)
        code, out, _ = run("translate", "--to", "fo3", text)
        assert parse_fo(out) is not None


def test_translate_from_file(tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("exists y. (x <= y & P(y))\n")
    assert run("translate", "--file", str(f))[1] == "loop(le . test(P & <inv(le)>true) . inv(le))"
    assert run("translate", "--file", str(f), "P(x)")[0] == 3


def test_translate_no_simplify_still_sound(models):
    code, out, _ = run("translate", "--no-simplify", "exists y. (a(x,y) & P(y))")
    assert code == 0
    code, pts, _ = run("eval", "--model", models["m0"], out)
    assert pts == "1"


def test_translate_then_eval(models):
    _, s, _ = run("translate", "exists y. (x <= y & P(y))")
    assert run("eval", "--model", models["m0"], s)[1] == "0 1 2 3"
    parse_state(s)


def test_eval_examples(models):
    assert run("eval", "--model", models["m0"], "<a>Q")[:2] == (0, "0 1")
    assert run("eval", "--model", models["m1"], "c3(a)")[:2] == (0, "(1,3)")
    assert run("eval", "--model", models["m0"], "exists y. (x <= y & P(y))", "--assign", "x=3")[1] == "true"
    assert run("eval", "--model", models["m0"], "P(x)", "--assign", "x=0")[1] == "false"


def test_eval_errors(models):
    assert run("eval", "--model", models["m0"], "P(x)")[0] == 3
    assert run("eval", "--model", models["m0"], "P(x)", "--assign", "x=9")[0] == 3
    assert run("eval", "--model", models["m0"], "P(x)", "--assign", "x")[0] == 3
    code, _, err = run("eval", "--model", models["bad"], "<a>true")
    assert code == 4 and "a1=0 a2=1 b=1" in err
    assert run("eval", "--model", models["bad"], "--allow-non-ip", "<a>true")[:2] == (0, "0 1 2")
    assert run("eval", "--model", "/nonexistent.json", "P")[0] == 4


def test_check_ip(models):
    assert run("check-ip", "--model", models["m0"]) == (0, "a: ok", "")
    assert run("check-ip", "--model", models["empty"])[:2] == (0, "a: ok")
    code, out, _ = run("check-ip", "--model", models["bad"])
    assert code == 5
    assert "a1=0 a2=1 b=1" in out
    assert run("check-ip", "--model", models["m0"], "--relation", "nope")[0] == 3


def test_equiv(models, tmp_path):
    assert run("equiv", "x <= y", "!!(x <= y)")[0] == 0
    code, out, _ = run("equiv", "P(x)", "Q(x)", "--out", str(tmp_path / "s.json"))
    assert code == 5 and "FAIL" in out
    assert json.loads((tmp_path / "s.json").read_text())["status"] == "fail"
    assert run("equiv", "P(x)", "Q(x)", "--model", models["m0"])[1] == "differ at x=1"
    assert run("equiv", "P(x)", "P(x)", "--max-size", "5")[0] == 3


def test_fuzz(tmp_path):
    code, out, _ = run("fuzz", "--iters", "200", "--seed", "42", "--max-size", "8", "--depth", "3",
                       "--out", str(tmp_path / "f.json"))
    assert code == 0 and out.startswith("fuzz: PASS")
    assert json.loads((tmp_path / "f.json").read_text())["config"]["seed"] == 42
    assert run("fuzz", "--iters", "0")[0] == 3
    assert run("fuzz", "--jobs", "0")[0] == 3


def test_fuzz_negative_control_replay():
    code, out, _ = run("fuzz", "--negative-control", "--seed", "42", "--replay", "524")
    assert code == 5
    assert "assignment:" in out
    assert run("fuzz", "--seed", "42", "--replay", "5")[0] == 0
    assert run("fuzz", "--replay", "5000")[0] == 3


def test_exhaustive():
    code, out, _ = run("exhaustive", "--max-size", "3", "--formula", "exists y. (a(x,y) & !P(y))")
    assert code == 0 and "PASS" in out


def test_gen(tmp_path):
    p = tmp_path / "u.json"
    assert run("gen", "--kind", "until", "--size", "4", "--seed", "7", "--out", str(p))[0] == 0
    load_model(p)
    assert run("check-ip", "--model", str(p))[0] == 0
    for kind in ("monotone", "succ", "random"):
        code, out, _ = run("gen", "--kind", kind, "--size", "5", "--seed", "1")
        assert code == 0 and json.loads(out)["size"] == 5
    code, out, _ = run("gen", "--kind", "non-ip", "--size", "3")
    assert json.loads(out)["relations"]["a"] == [[0, 0], [1, 2], [2, 1]]


def test_usage_errors():
    assert run("bogus")[0] == 3
    assert run("translate", "--unknown", "P(x)")[0] == 3
    assert run()[0] == 3
    assert run("gen", "--kind", "until", "--size", "-1")[0] == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "fo3pdl", "translate", "--to", "fo3", "P(x)"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "P(x)"
