import io
import json
import shutil
import subprocess

import pytest

from promild.cli import parse_order, run
from promild.words import Alphabet, GOrder, LengthLex, Lex, Opposite

SQUARE = {"vertices": ["x1", "x2", "x3", "x4"],
          "edges": [["x1", "x2"], ["x2", "x3"], ["x3", "x4"], ["x4", "x1"]]}
TRIANGLE_FORMS = {"prime": 3, "generators": ["x1", "x2", "x3"],
                  "forms": ["x1x2 - x2x1", "x1x3 - x3x1", "x2x3 - x3x2"]}
PRES = {"prime": 3, "generators": [{"name": "x1"}, {"name": "x2"}, {"name": "x3"}, {"name": "x4"}],
        "relators": ["[x1,x2]", "[x2,x3]", "[x3,x4]", "[x4,x1]"]}
KOCH = {"prime": 3, "d": 4, "m": 4, "a": {}, "ajk": [[1, 2, 1], [2, 3, 1], [3, 4, 1], [4, 1, 1]]}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, data in [("square", SQUARE), ("tri", TRIANGLE_FORMS), ("p", PRES), ("koch", KOCH)]:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(data))
        out[name] = str(path)
    return out


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_expand(files):
    code, out, _ = call("expand", "--pres", files["p"], "--element", "[x1,x2]", "--max-degree", "2")
    assert code == 0
    assert "1 + x1x2 - x2x1" in out


def test_raag(files):
    code, out, _ = call("raag", "--graph", files["square"])
    assert code == 0 and out.startswith("MildCertified")


def test_oracle_gap(files):
    code, out, _ = call("oracle", "--forms", files["tri"], "--max-degree", "3")
    assert code == 1 and "FirstGapAt(3, 10, 9)" in out


def test_circuit_and_prime_override(files):
    assert call("circuit", "--koch", files["koch"], "--oracle", "5")[0] == 0
    code, _, err = call("circuit", "--koch", files["koch"], "--prime", "5")
    assert code == 2 and "override" in err


def test_check_and_failure(files):
    code, out, _ = call("check", "--pres", files["p"], "--order", "lenlex:x2<x4<x1<x3",
                        "--A", "X^2", "--B", "x1x2,x1x4,x3x2,x3x4")
    assert code == 0 and out.startswith("Certified")
    code, out, _ = call("check", "--pres", files["p"], "--order", "lenlex",
                        "--A", "X^2", "--B", "x1x2,x1x4,x3x2,x3x4")
    assert code == 1 and out.startswith("Failure(b)")


def test_partition(files):
    code, _, _ = call("partition", "--pres", files["p"], "--parts", "Y0:x1,x3|Y1:x2,x4", "--k", "1,1")
    assert code == 0


def test_matrix_zassenhaus_lyndon_shuffle(files):
    code, out, _ = call("matrix", "--pres", files["p"], "--order", "lenlex:x2<x4<x1<x3", "--B", "x1x2,x3x4")
    assert code == 0 and "rank 2 of m = 4" in out
    code, out, _ = call("zassenhaus", "--pres", files["p"])
    assert code == 0 and out.count("Degree(2)") == 4
    code, out, _ = call("lyndon", "--generators", "a,b", "--length", "4")
    assert code == 0 and "3 Lyndon words" in out
    code, out, _ = call("shuffle", "--generators", "x1,x2,x3", "--u", "x1x2", "--v", "x3")
    assert out.splitlines()[-1] == "x1x2x3 + x1x3x2 + x3x1x2"


def test_json_schema_and_determinism(files):
    argv = ["raag", "--graph", files["square"], "--json", "--oracle", "4"]
    first = call(*argv)[1]
    second = call(*argv)[1]
    assert first == second
    report = json.loads(first)
    assert {"verdict", "certificate", "witness", "dims", "series"} <= set(report)
    assert report["verdict"] == "MildCertified"
    assert len(report["input_digest"]) == 64

    report = json.loads(call("oracle", "--forms", files["tri"], "--max-degree", "3", "--json")[1])
    assert report["dims"] == [1, 3, 6, 10] and report["series"] == [1, 3, 6, 9]
    assert report["verdict"] == "FirstGapAt(3, 10, 9)"


def test_human_output_contains_json_verdict(files):
    for argv in (["raag", "--graph", files["square"]], ["oracle", "--forms", files["tri"], "--max-degree", "3"],
                 ["expand", "--pres", files["p"], "--element", "x1", "--max-degree", "1"]):
        verdict = json.loads(call(*argv, "--json")[1])["verdict"]
        assert verdict in call(*argv)[1]


@pytest.mark.parametrize("argv", [
    ["check", "--pres", "missing.json", "--order", "lex", "--A", "X^2", "--B", "x1x2"],
    ["expand", "--generators", "x1", "--prime", "3", "--element", "[x1,"],
    ["expand", "--generators", "x1", "--element", "x1"],
    ["lyndon", "--length", "2"],
    ["nonsense"],
])
def test_input_errors(argv):
    assert call(*argv)[0] == 2


def test_parse_error_reports_position(files):
    code, _, err = call("expand", "--pres", files["p"], "--element", "x1*x7")
    assert code == 2 and "position 3" in err


def test_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{ not json")
    code, _, err = call("raag", "--graph", str(path))
    assert code == 2 and "line 1" in err


def test_parse_order():
    a = Alphabet.standard(4)
    assert parse_order("lenlex:x2<x4<x1<x3", a) == LengthLex((1, 3, 0, 2))
    assert parse_order("lex", a) == Lex.natural(4)
    g = parse_order("gorder:tau=1;parts=Y0:x1,x3|Y1:x2,x4", a)
    assert isinstance(g, GOrder) and g.sigmas == ((0, 1, 0, 1),)
    assert isinstance(parse_order("op:lenlex", a), Opposite)
    with pytest.raises(Exception):
        parse_order("lenlex:x1<x2", a)


@pytest.mark.skipif(shutil.which("mild") is None, reason="console script not installed")
def test_console_script(files):
    proc = subprocess.run(["mild", "raag", "--graph", files["square"]], capture_output=True, text=True)
    assert proc.returncode == 0 and "MildCertified" in proc.stdout
