import json
import subprocess
import sys

import pytest

from qfkit.cli import run
from qfkit.jsonio import lattice_from_obj


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pair(tmp_path):
    return (write(tmp_path, "l.json", {"gram": [[1, 0], [0, 11]]}),
            write(tmp_path, "m.json", {"gram": [[3]]}))


def test_minima(capsys, pair):
    code, out, _ = call(capsys, "minima", pair[0])
    assert code == 0
    assert json.loads(out)["minima"] == [1, 11]


def test_represent_global_and_genus(capsys, pair):
    code, out, _ = call(capsys, "represent", "--ambient", pair[0], "--target", pair[1], "--global")
    assert code == 0 and json.loads(out)["verdict"] == "NotFound"
    code, out, _ = call(capsys, "represent", "--ambient", pair[0], "--target", pair[1], "--genus")
    res = json.loads(out)
    assert code == 0 and res["verdict"] == "Represented"
    assert {"2", "11"} <= set(res["per_prime"])
    code, out, _ = call(capsys, "represent", "--ambient", pair[0], "--target", pair[1], "--local", "3")
    assert code == 0 and json.loads(out)["verdict"] == "Represented"


def test_audit_exit_codes(capsys, tmp_path, pair):
    code, out, _ = call(capsys, "audit", "--n", "1", "--bound", "5", pair[0])
    assert code == 1
    assert json.loads(out)["counterexample"]["candidate"] == [[3]]
    i3 = write(tmp_path, "i3.json", [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    code, out, _ = call(capsys, "audit", "--n", "1", "--bound", "10", i3)
    assert code == 0 and json.loads(out)["verdict"] == "VerifiedUpToBound"


def test_usage_errors(capsys, pair):
    for argv in (["frobnicate", pair[0]], ["minima"], ["jordan", pair[0]],
                 ["jordan", "-p", "4", pair[0]], ["minima", "--bogus", pair[0]]):
        code, out, err = call(capsys, *argv)
        assert code == 64, argv
        assert out == ""
        assert json.loads(err)["error"] == "bad_arguments"


def test_bad_input(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"gram": [[2, 1], [0, 2]]})
    code, out, err = call(capsys, "jordan", "-p", "3", bad)
    assert code == 65 and out == ""
    assert "error" in json.loads(err)
    garbage = tmp_path / "g.json"
    garbage.write_text("{not json")
    assert call(capsys, "minima", str(garbage))[0] == 65
    assert call(capsys, "minima", str(tmp_path / "missing.json"))[0] == 65
    indefinite = write(tmp_path, "ind.json", [[1, 2], [2, 1]])
    assert call(capsys, "minima", indefinite)[0] == 65


def test_module_error_exit_code(capsys, tmp_path):
    L = write(tmp_path, "l.json", [[2, 0], [0, 6]])
    code, out, err = call(capsys, "watson", "-p", "3", "--drive", "--cap", "2", L)
    assert code == 2 and out == ""
    assert json.loads(err)["error"]


def test_watson_steps(capsys, tmp_path):
    L = write(tmp_path, "l.json", [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 18, 0], [0, 0, 0, 18]])
    code, out, _ = call(capsys, "watson", "-p", "3", L)
    res = json.loads(out)
    assert code == 0 and res["steps"][0]["r"] == "1/9"
    code, out, _ = call(capsys, "watson", "-p", "3", "--drive", L)
    res = json.loads(out)
    assert code == 0 and [s["r"] for s in res["steps"]] == ["1/9"]


def test_invariants_and_charprimes(capsys, tmp_path):
    L = write(tmp_path, "l.json", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    code, out, _ = call(capsys, "invariants", L)
    res = json.loads(out)
    assert code == 0 and res["discriminant"] == 1 and res["local"]["2"]["anisotropic"]
    W = write(tmp_path, "w.json", {"diagonal": [1, 1, 1, 1, 1]})
    code, out, _ = call(capsys, "charprimes", W)
    assert code == 0 and json.loads(out)["primes"] == [2]
    W = write(tmp_path, "w4.json", {"diagonal": [1, 1, 1, 1]})
    assert call(capsys, "charprimes", W)[0] == 65


def test_round_trip_of_emitted_lattices(capsys, tmp_path):
    L = write(tmp_path, "l.json", [[2, 1, 0], [1, 4, 1], [0, 1, 6]])
    _, out, _ = call(capsys, "watson", "-p", "2", "--drive", L)
    res = json.loads(out)
    for step in res["steps"]:
        g = step["gram"]
        assert [list(r) for r in lattice_from_obj(g).gram] == g
    assert [list(r) for r in lattice_from_obj(res["result"]).gram] == res["result"]


def test_determinism(capsys, tmp_path, pair):
    outs = {call(capsys, "represent", "--ambient", pair[0], "--target", pair[1], "--genus",
                 "--seed", str(s))[1] for s in (1, 2, 3)}
    assert len(outs) == 1


def test_bigint_output(capsys, tmp_path):
    big = 2 ** 60 + 1
    L = write(tmp_path, "big.json", [[big, 0], [0, 1]])
    code, out, _ = call(capsys, "invariants", L)
    res = json.loads(out)
    assert code == 0 and res["bigint"] is True
    assert res["discriminant"] == str(big)
    assert json.loads(call(capsys, "invariants", pair_small(tmp_path))[1]).get("bigint") is None


def pair_small(tmp_path):
    return write(tmp_path, "small.json", [[1, 0], [0, 11]])


def test_console_entry_point(pair):
    proc = subprocess.run([sys.executable, "-m", "qfkit", "minima", pair[0]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["minima"] == [1, 11]
