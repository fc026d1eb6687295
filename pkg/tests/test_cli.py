import json
import subprocess
import sys

from radonmono.cli import fixture_path, main


def run_cli(args):
    proc = subprocess.run(
        [sys.executable, "-m", "radonmono", *args],
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_compute_four_lines(tmp_path):
    code, out, err = run_cli(["compute", "--input", fixture_path("four_lines")])
    assert code == 0
    doc = json.loads(out)
    assert doc["dims"] == {"E": 1, "H": 3, "W": 2}
    assert len(doc["gtilde"]) == 6
    assert doc["report"]["gtilde_product_identity"] is True


def test_compute_zariski_c():
    code, out, _ = run_cli(["compute", "--input", "fixture:zariski_c"])
    assert code == 0
    doc = json.loads(out)
    assert doc["dims"] == {"E": 1, "H": 5, "W": 4}
    assert len(doc["gtilde"]) == 18


def test_compute_deterministic_output():
    _, out1, _ = run_cli(["compute", "--input", "fixture:four_lines", "--verify"])
    _, out2, _ = run_cli(["compute", "--input", "fixture:four_lines", "--verify"])
    assert out1 == out2


def test_compute_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run_cli(
        ["compute", "--input", "fixture:four_lines", "--output", str(target)]
    )
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["dims"]["W"] == 2


def test_compute_jobs_flag_deterministic():
    _, out1, _ = run_cli(["compute", "--input", "fixture:four_lines"])
    _, out2, _ = run_cli(["compute", "--input", "fixture:four_lines", "--jobs", "2"])
    assert out1 == out2


def test_rank_outputs():
    code, out, _ = run_cli(["rank", "--input", "fixture:four_lines"])
    assert code == 0 and out == "2\n"
    code, out, _ = run_cli(["rank", "--input", "fixture:zariski_c"])
    assert code == 0 and out == "4\n"
    code, out, _ = run_cli(["rank", "--input", "fixture:zariski_cprime"])
    assert code == 0 and out == "4\n"


def test_check_four_lines():
    code, out, _ = run_cli(["check", "--input", "fixture:four_lines"])
    assert code == 0
    doc = json.loads(out)
    assert doc["product_ok"] and doc["vankampen_ok"]
    assert doc["relations_checked"] == 3 and doc["relations_ok"] is True


def test_check_without_relations_passes():
    code, out, _ = run_cli(["check", "--input", "fixture:zariski_c"])
    assert code == 0
    doc = json.loads(out)
    assert doc["relations_checked"] == 0 and doc["relations_ok"] is True


def test_exit_code_on_bad_product(tmp_path, four_lines_doc):
    doc = json.loads(json.dumps(four_lines_doc))
    doc["matrices"][0][0][0] = "1"  # tamper: product becomes -1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run_cli(["compute", "--input", str(bad)])
    assert code == 2
    code, out, _ = run_cli(["check", "--input", str(bad)])
    assert code == 2
    assert json.loads(out)["product_ok"] is False


def test_exit_code_on_missing_file():
    code, _, err = run_cli(["compute", "--input", "/nonexistent/input.json"])
    assert code == 2
    assert "error" in err


def test_exit_code_on_bad_json(tmp_path):
    bad = tmp_path / "syntax.json"
    bad.write_text("{not json")
    code, _, err = run_cli(["compute", "--input", str(bad)])
    assert code == 2
    assert "line" in err


def test_group_scalar_fixture_exact():
    code, out, _ = run_cli(["group", "--input", "fixture:scalar_group", "--exact"])
    assert code == 0
    doc = json.loads(out)
    assert doc["group"]["order"] == 6
    assert doc["group"]["solvable"] is True


def test_group_zariski_c_modular():
    code, out, _ = run_cli(
        ["group", "--input", "fixture:zariski_c", "--primes", "7,13"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["group"]["order"] == 648
    assert doc["group"]["solvable"] is True
    assert doc["group"]["decomposition"]["fixed_dim"] == 1
    assert doc["group"]["decomposition"]["moving_dim"] == 3


def test_group_cap_exceeded_reported():
    code, out, _ = run_cli(
        ["group", "--input", "fixture:scalar_group", "--exact", "--cap", "2"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["group"]["status"] == "cap_exceeded"
    assert doc["group"]["order"] is None


def test_main_function_direct(capsys):
    assert main(["rank", "--input", fixture_path("four_lines")]) == 0
    assert capsys.readouterr().out == "2\n"


def test_unknown_fixture_is_input_error():
    code, _, err = run_cli(["rank", "--input", "fixture:missing"])
    assert code == 2
