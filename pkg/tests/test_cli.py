import json

import pytest

from extremal_lab.cli import main, parse_vector, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_basis_json(capsys):
    code, out, _ = run(capsys, "basis", "--r", "2", "--s", "4", "--json")
    data = json.loads(out)
    assert code == 0 and data["n"] == 8 and data["layers"] == [2, 1, 2, 3]
    assert {"index", "degree", "children", "ell0", "chain", "I"} <= set(data["elements"][5])


def test_extremal_poly_specialized(capsys):
    code, out, _ = run(capsys, "extremal-poly", "--r", "2", "--s", "4", "--i", "3", "--v", "e5+e6")
    assert code == 0 and "1/2*x1^2" in out and "x2" in out


def test_classify_gk_curve(capsys):
    code, out, _ = run(capsys, "classify", "--r", "2", "--s", "4", "--h", "1;0,1", "--json")
    report = json.loads(out)
    assert code == 0 and report["strict"] == "candidate" and report["corank"] >= 1


def test_verify_and_determinism(capsys):
    args = ("verify", "--r", "2", "--s", "3", "--h", "1,2;0,1", "--v0=-e1+1/2e4", "--samples", "3", "--json")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first[0] == 0 and first == second
    assert json.loads(first[1])["master_identity"] is True


def test_controls_file_and_length(capsys, tmp_path):
    f = tmp_path / "h.json"
    f.write_text(json.dumps([{"t0": "0", "t1": "1", "coeffs": [["1"], ["0", "1"]]}]))
    code, out, _ = run(capsys, "length", "--controls", str(f), "--json")
    assert code == 0 and json.loads(out)["length_squared"] == "4/3"


def test_quotient_commands(capsys, tmp_path):
    f = tmp_path / "q.json"
    f.write_text(json.dumps({"r": 2, "s": 3, "S": [1, 2, 3], "zeta": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"], ["0", "0", "0"]]}))
    assert run(capsys, "lift", "--quotient", str(f), "--h", "1;0,1")[0] == 0
    assert run(capsys, "quotient-check", "--quotient", str(f), "--h", "1;0,1", "--lambda0", "1,2,3")[0] == 0
    code, out, _ = run(capsys, "quotient-classify", "--quotient", str(f), "--h", "1;0,1", "--json")
    assert code == 0 and json.loads(out)["corank"] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"r": 2, "s": 3, "S": [1, 2, 3], "zeta": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["0", "0", "1"], ["0", "0", "0"]]}))
    assert run(capsys, "lift", "--quotient", str(bad), "--h", "1;0,1")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "basis", "--r", "2")[0] == 2
    assert run(capsys, "develop", "--r", "2", "--s", "3", "--h", "1")[0] == 2
    assert run(capsys, "verify", "--r", "2", "--s", "3", "--h", "1;0", "--v0", "1,2")[0] == 2
    assert run(capsys, "basis", "--r", "2", "--s", "3", "--cap", "0")[0] == 2


def test_resource_cap(capsys):
    code, _, err = run(capsys, "basis", "--r", "3", "--s", "6", "--cap", "50")
    assert code == 3 and "resource cap" in err


def test_corrupted_cache_exit_code(capsys, tmp_path):
    from extremal_lab.gg_realization import build_group, write_cache
    from extremal_lab.selftest import corrupt_cache_file

    corrupt_cache_file(write_cache(build_group(2, 3), tmp_path))
    code, _, err = run(capsys, "constants", "--r", "2", "--s", "3", "--cache-dir", str(tmp_path))
    assert code == 1 and "verification failure" in err


def test_reproduce_all(capsys):
    code, out, _ = run(capsys, "reproduce", "all", "--json")
    assert code == 0 and all(r["passed"] for r in json.loads(out))


def test_selftest_without_trials(capsys):
    code, out, _ = run(capsys, "selftest", "--r", "2", "--s", "3", "--trials", "0", "--json")
    suites = {r["suite"]: r for r in json.loads(out)}
    assert code == 0 and "master-identity" not in suites and suites["rr-identity"]["passed"]


def test_parse_vector():
    assert parse_vector("2e3-e1", 3) == [-1, 0, 2]
    assert parse_vector("1/2,0", 2) == [0.5, 0]
    for bad in ("e4", "1,2", "x1"):
        with pytest.raises(UsageError):
            parse_vector(bad, 3)


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--r", "2", "--s", "3", "--json")
    assert code == 0 and {"i": 2, "j": 1, "k": 3, "c": "1"} in json.loads(out)["constants"]
    code, out, _ = run(capsys, "constants", "--r", "2", "--s", "3", "--generalized", "--json")
    rows = json.loads(out)["constants"]
    assert code == 0 and {"i": 2, "alpha": [1, 0, 0, 0, 0], "k": 3, "c": "1"} in rows
