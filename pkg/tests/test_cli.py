import json

import pytest

from kappa_lp.cli import main
from kappa_lp.generators import gen_infeasible
from kappa_lp.io import serialize_instance


@pytest.fixture
def netflow_file(tmp_path):
    path = tmp_path / "nf.json"
    assert main(["gen", "netflow", "--nodes", "4", "--arcs", "7", "--seed", "2", "-o", str(path)]) == 0
    return path


def test_solve_check_round_trip(tmp_path, netflow_file):
    sol, cert, trace = tmp_path / "sol.json", tmp_path / "cert.json", tmp_path / "trace.ndjson"
    code = main(["solve", str(netflow_file), "--delta", "1e-3", "-o", str(sol), "--emit-cert", str(cert),
                 "--trace", str(trace), "--oracle-check"])
    assert code == 0
    doc = json.loads(sol.read_text())
    assert doc["verdict"] == "Solved" and doc["oracle"]["within_delta"]
    events = [json.loads(line) for line in trace.read_text().splitlines()]
    assert sum(e["steps"] for e in events) == doc["gradient_steps"]
    assert {e["phase"] for e in events} <= {"TwoPhase", "Outer", "Inner", "FGM", "Cert"}
    assert main(["check", str(netflow_file), str(sol), str(cert)]) == 0


def test_tampered_certificate(tmp_path, netflow_file, capsys):
    sol, cert = tmp_path / "sol.json", tmp_path / "cert.json"
    main(["solve", str(netflow_file), "-o", str(sol), "--emit-cert", str(cert)])
    doc = json.loads(cert.read_text())
    doc["w_minus"][0] = -abs(doc["w_minus"][0]) - 1.0
    cert.write_text(json.dumps(doc))
    capsys.readouterr()
    assert main(["check", str(netflow_file), str(sol), str(cert)]) == 1
    assert "negative" in capsys.readouterr().err


def test_infeasible_exit_code(tmp_path):
    path = tmp_path / "inf.json"
    path.write_text(serialize_instance(gen_infeasible(4, 7, 0)))
    assert main(["solve", str(path), "-o", str(tmp_path / "out.json")]) == 2


def test_kappa_cap_exit_code(tmp_path, netflow_file):
    code = main(["solve", str(netflow_file), "--max-kappa", "1", "--budget-multiplier", "1e-12",
                 "-o", str(tmp_path / "out.json")])
    assert code == 3


def test_kappa_subcommand(netflow_file, capsys):
    assert main(["kappa", str(netflow_file)]) == 0
    assert json.loads(capsys.readouterr().out) == {"kappa": "1", "kappa_bar": 1}


def test_gen_hoffman_and_random(tmp_path, capsys):
    assert main(["gen", "hoffman", "--epsilon", "0.01"]) == 0
    assert json.loads(capsys.readouterr().out)["c"] == [-0.01, 0.0, 1.0]
    assert main(["gen", "random", "--rows", "2", "--cols", "4", "--seed", "1"]) == 0


def test_usage_and_input_errors(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"m": 1, "n": 1, "A": [[0, 3, 1]], "b": [0], "c": [1], "u": [1]}')
    assert main(["solve", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
