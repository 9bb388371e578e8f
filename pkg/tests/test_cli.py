import json

import pytest

from bezoutdl import cli
from bezoutdl.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_UNSUPPORTED, main

P12 = {"m": 1, "n": 2, "grade": 2, "coeffs": [[["1", "0"]], [["0", "0"]], [["0", "1"]]]}
Z2 = {"m": 2, "n": 2, "grade": 2,
      "coeffs": [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]], [["1", "0"], ["0", "0"]]]}
CUBIC = {"m": 1, "n": 1, "grade": 3, "coeffs": [[["1"]], [["0"]], [["0"]], [["1"]]]}


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        p = tmp_path / name
        p.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dl_worked(capsys, write):
    code, out, _ = run(capsys, "dl", write("p.json", P12), "--omega", "1,-1", "--mu0", "0")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["summary"] == {"size": [2, 4], "normal_rank_P": 1, "normal_rank_L": 2,
                               "exclusion": True}
    assert data["pencil"]["coeffs"][1] == [["0", "1", "0", "-1"], ["0", "-1", "-1", "0"]]
    assert data["blocks"]["c"] == ["-1", "1"]


def test_json_flag_is_compact(capsys, write):
    path = write("p.json", P12)
    _, compact, _ = run(capsys, "dl", path, "--omega", "1,-1", "--json")
    _, pretty, _ = run(capsys, "dl", path, "--omega", "1,-1")
    assert compact.count("\n") == 1 and json.loads(compact) == json.loads(pretty)


def test_eig(capsys, write):
    code, out, _ = run(capsys, "eig", write("z.json", Z2))
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["finite"] == {"0": [2]} and data["right"] == [0] and data["left"] == [0]


def test_bad_json_reports_position(capsys, write):
    code, _, err = run(capsys, "eig", write("bad.json", '{"m": 1,\n "n": }'))
    assert code == EXIT_INPUT
    assert "bad.json:2:7" in err and "^" in err


@pytest.mark.parametrize("argv", [
    ["dl", "P", "--omega", "1,0,1"],      # wrong ansatz length
    ["dl", "P", "--omega", "0,0"],        # zero ansatz
    ["dl", "P", "--omega", "1,x"],        # not rational
    ["dl", "P", "--omega", "1,-1", "--mu0", "1"],  # mu0 is a root of v
    ["mobius", "P", "--map", "1,2,2,4"],  # singular map
    ["recover", "P", "minbasis", "--omega", "1,-1"],  # not a pencil
])
def test_input_errors(capsys, write, argv):
    path = write("p.json", P12)
    argv = [path if a == "P" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and err.startswith("bezoutdl: error:")


def test_missing_file(capsys):
    code, _, err = run(capsys, "eig", "/nonexistent/p.json")
    assert code == EXIT_INPUT


def test_irrational_roots_unsupported(capsys, write):
    code, _, err = run(capsys, "dl", write("c.json", CUBIC), "--omega", "1,0,-2", "--mu0", "1")
    assert code == EXIT_UNSUPPORTED and "unsupported" in err


def test_verify_failure_exit(capsys, monkeypatch):
    def failing(args):
        return {"seed": args[0], "pass": False, "hypothesis": "holds", "checks": [
            {"name": "bezout", "status": "fail", "detail": "forced"}],
            "spec": {"m": 1, "n": 1, "grade": 2, "rank": 1}}
    monkeypatch.setattr(cli, "verify_seed", failing)
    code, out, _ = run(capsys, "verify", "--count", "1")
    assert code == EXIT_FAIL and "FAIL" in out and "forced" in out


def test_verify_random_deterministic(capsys):
    argv = ["verify", "--seed", "5", "--count", "3", "--max-size", "2,2,3", "--json"]
    code, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert code == EXIT_OK and a == b
    reps = [json.loads(line) for line in a.splitlines()]
    assert [r["seed"] for r in reps] == [5, 6, 7] and all(r["pass"] for r in reps)


def test_verify_jobs_same_output(capsys):
    base = ["verify", "--seed", "11", "--count", "3", "--max-size", "2,2,3", "--json"]
    _, one, _ = run(capsys, *base)
    _, two, _ = run(capsys, *base, "--jobs", "2")
    assert one == two


def test_verify_spec_file_and_check_filter(capsys, write):
    spec = {"m": 2, "n": 2, "grade": 2, "rank": 1, "finite": {"0": [2]}, "right": [0], "left": [0]}
    path = write("s.json", [spec])
    code, out, _ = run(capsys, "verify", path, "--check", "bezout", "--check", "index-sum", "--json")
    rep = json.loads(out)
    assert code == EXIT_OK and sorted(c["name"] for c in rep["checks"]) == ["bezout", "index-sum"]
    assert all("seconds" not in c for c in rep["checks"])


def test_verify_human_and_timing(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "1", "--max-size", "2,2,2", "--timing")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "1 instance(s), all passed" and "s  " not in out.splitlines()[0]
    assert any(line.strip().endswith("s") for line in out.splitlines()[1:-1])


def test_verify_violated_skips_structure(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "3", "--violate")
    assert code == EXIT_OK and "hypothesis-violated, structural checks skipped" in out


def test_verify_rejects_bad_spec(capsys, write):
    path = write("s.json", {"m": 1, "n": 2, "grade": 2, "rank": 1, "right": [1]})
    code, _, err = run(capsys, "verify", path)
    assert code == EXIT_INPUT and "index sum" in err


def _pencil(capsys, write, data, omega):
    _, out, _ = run(capsys, "dl", write("p.json", data), "--omega", omega, "--json")
    return write("L.json", json.loads(out)["pencil"])


def test_recover_minbasis(capsys, write):
    L = _pencil(capsys, write, P12, "1,-1")
    code, out, _ = run(capsys, "recover", L, "minbasis", "--omega", "1,-1")
    data = json.loads(out)
    assert code == EXIT_OK and data["indices"] == [2] and data["P"] == P12


def test_recover_eigvec_and_rootpolys(capsys, write):
    L = _pencil(capsys, write, Z2, "1,-1")
    code, out, _ = run(capsys, "recover", L, "eigvec", "--omega", "1,-1", "--lambda", "0")
    data = json.loads(out)
    # ker P(0) is everything here; the kernel direction e2 comes back as well
    assert code == EXIT_OK and data["eigenvalue"] and data["dim_ker_P"] == len(data["vectors"]) == 2
    assert data["dim_quotient_P"] == data["dim_quotient_L"] == 1
    code, out, _ = run(capsys, "recover", L, "rootpolys", "--omega", "1,-1", "--lambda", "0")
    data = json.loads(out)
    assert code == EXIT_OK and data["maximal"] and [r["order"] for r in data["root_polynomials"]] == [2]
    code, out, _ = run(capsys, "recover", L, "eigvec", "--omega", "1,-1", "--lambda", "3")
    assert not json.loads(out)["eigenvalue"]


def test_recover_needs_lambda(capsys, write):
    L = _pencil(capsys, write, Z2, "1,-1")
    code, _, _ = run(capsys, "recover", L, "eigvec", "--omega", "1,-1")
    assert code == EXIT_INPUT


def test_mobius_with_diagram(capsys, write):
    code, out, _ = run(capsys, "mobius", write("p.json", P12), "--map", "0,1,1,0", "--omega", "1,-1")
    data = json.loads(out)
    assert code == EXIT_OK and data["diagram"] == {"ok": True, "block": None}
    assert data["result"]["coeffs"][0] == [["0", "1"]]


def test_module_entry_point():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "bezoutdl", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "verify" in out.stdout


def test_verify_violated_records_observations(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "3", "--violate", "--json")
    rep = json.loads(out)
    skipped = [c for c in rep["checks"] if c["status"] == "skipped"]
    assert code == EXIT_OK and rep["hypothesis"] == "violated" and rep["pass"]
    assert skipped and all("observed" in c for c in skipped)
