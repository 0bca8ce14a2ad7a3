import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

import netstab
from netstab import cli
from netstab.fixtures import path as data_path
from netstab.oracle import NumericReport

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report.schema.json").read_text())
P11 = str(data_path("p11.json"))
CAND6 = str(data_path("cand6.json"))
FIG4 = str(data_path("fig4_sets.json"))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv, "--no-timings")
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return doc


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return _write


def test_analyze_p11(capsys):
    doc = report(capsys, "analyze", P11)
    r = doc["result"]
    assert r["stabilizable"] is False
    assert (r["mdim"]["lower"], r["mdim"]["upper"]) == (7, 7)
    assert r["missing_selfloops"] == [3, 7, 8, 10, 11]
    assert doc["version"] == netstab.__version__ and not doc["approximate"]
    assert len(doc["inputs"][0]["sha256"]) == 64


def test_analyze_selfloop(capsys, write):
    doc = report(capsys, "analyze", write("loop.json", {"n": 1, "a_edges": [[1, 1]], "b_edges": []}))
    assert doc["result"]["stabilizable"] is True
    assert (doc["result"]["mdim"]["lower"], doc["result"]["mdim"]["upper"]) == (1, 1)


def test_analyze_bad_file(capsys, write):
    code, out, err = run(capsys, "analyze", write("bad.json", {"n": 2, "a_edges": [[1, 3]], "b_edges": []}))
    assert code == 2 and "[1, 3]" in err and out == ""
    code, _, err = run(capsys, "analyze", "/nonexistent/file.json")
    assert code == 2


def test_attack(capsys):
    r = report(capsys, "attack", P11, "--budget", "1")["result"]
    assert r["removed"] == [1] and r["objective"] == 5
    r = report(capsys, "attack", P11, "--budget", "0")["result"]
    assert r["removed"] == [] and r["objective"] == 7


def test_attack_reduction_assumption_error(capsys):
    code, _, err = run(capsys, "attack", P11, "--budget", "1", "--method", "reduction")
    assert code == 2 and "Hall" in err


def test_attack_gadget(capsys, tmp_path):
    gadget = tmp_path / "gadget.json"
    doc = report(capsys, "reduce", FIG4, "--keep", "2", "--output", str(gadget))
    assert doc["result"]["system"]["n"] == 10
    r = report(capsys, "attack", str(gadget), "--budget", "2")["result"]
    assert r["objective"] == 8
    r = report(capsys, "attack", str(gadget), "--budget", "2", "--method", "reduction")["result"]
    assert r["objective"] == 8 and r["base_value"] == 5


def test_recover(capsys):
    r = report(capsys, "recover", P11, "--candidates", CAND6, "--budget", "3", "--method", "greedy")["result"]
    assert r["final"] == 11 and r["trace"] == [9, 10, 11] and r["pick_labels"][0] == "u4"
    ex = report(capsys, "recover", P11, "--candidates", CAND6, "--budget", "3", "--method", "exact")["result"]
    assert ex["final"] == r["final"]
    assert report(capsys, "recover", P11, "--candidates", CAND6, "--budget", "0")["result"]["final"] == 7


def test_verify(capsys):
    r = report(capsys, "verify", P11, "--samples", "2000", "--seed", "42")["result"]
    assert r["best_stabdim"] == 7 and r["modal_rank"] == 3
    assert r["sandwich"]["upper_violations"] == 0


def test_verify_zero_inputs(capsys, write):
    f = write("auto.json", {"n": 3, "a_edges": [[1, 2], [3, 3]], "b_edges": []})
    r = report(capsys, "verify", f, "--samples", "50")["result"]
    assert r["rank_histogram"] == {"0": 50} and r["seed"] == 0


def test_verify_exit_3_on_violation(capsys, monkeypatch):
    fake = NumericReport(3, {3: 3}, {8: 3}, 8, 1e-8, 1e-9, 0, (3, 3, 3), (8, 8, 8))
    monkeypatch.setattr(cli, "monte_carlo_mdim", lambda *a, **k: fake)
    code, out, err = run(capsys, "verify", P11, "--samples", "3", "--no-timings")
    assert code == 3 and "exceeds" in err
    assert json.loads(out)["result"]["sandwich"]["upper_violations"] == 3


def test_reduce(capsys, tmp_path, write):
    out = tmp_path / "g.json"
    r = report(capsys, "reduce", FIG4, "--keep", "2", "--output", str(out), "--solve")["result"]
    assert r["union_size"] == r["set_solver_union_size"] == 3
    assert netstab.parse_system(out.read_text()).n == 10
    empty = report(capsys, "reduce", write("e.json", {"universe": 0, "sets": []}), "--keep", "0")["result"]
    assert empty["system"]["a_edges"] == [] and empty["system"]["b_edges"] == []
    code, _, _ = run(capsys, "reduce", FIG4, "--keep", "9")
    assert code == 2


def test_resource_limit(capsys, write):
    ring = write("ring.json", {"n": 9, "a_edges": [[k, k % 9 + 1] for k in range(1, 10)], "b_edges": []})
    code, _, err = run(capsys, "analyze", ring, "--exact-limit", "4")
    assert code == 4 and "force-heuristic" in err
    doc = report(capsys, "analyze", ring, "--exact-limit", "4", "--force-heuristic")
    assert doc["approximate"] is True


def test_env_limit(capsys, write, monkeypatch):
    ring = write("ring.json", {"n": 9, "a_edges": [[k, k % 9 + 1] for k in range(1, 10)], "b_edges": []})
    monkeypatch.setenv("NETSTAB_EXACT_LIMIT", "4")
    code, _, _ = run(capsys, "analyze", ring)
    assert code == 4


def test_byte_identical(capsys):
    argv = ["verify", P11, "--samples", "100", "--seed", "3", "--no-timings"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_timings_present(capsys):
    code, out, _ = run(capsys, "analyze", P11)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["timings"]["total_seconds"] >= 0


def test_text_format(capsys):
    code, out, _ = run(capsys, "analyze", P11, "--format", "text", "--no-timings")
    assert code == 0
    assert "result.stabilizable: false" in out
    assert "result.mdim.lower: 7" in out


def test_argparse_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["attack", P11])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["analyze", P11, "--exact-limit", "-1"])
    assert exc.value.code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "netstab", "analyze", P11, "--no-timings"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["mdim"]["upper"] == 7
