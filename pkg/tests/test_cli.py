import json

import numpy as np
import pytest

from starergodic.algebra import build_diagonal_swap
from starergodic.cli import main
from starergodic.recurrence import RecurrenceReport
from starergodic.specio import parse_system, system_to_json

SWAP = '{"kind":"matrix","preset":"example_4_7","c1":[0.5,0],"c2":[0.5,0]}'
E11 = "[[[1,0],[0,0]],[[0,0],[0,0]]]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys):
    assert run(capsys, "validate", SWAP)[0] == 0
    code, out, err = run(capsys, "validate", SWAP.replace("[0.5,0],\"c2", "[2,0],\"c2"))
    assert code == 1 and "FAIL  contraction" in out
    code, out, _ = run(capsys, "validate", "--json", SWAP)
    assert json.loads(out)["passed"] is True


def test_validate_from_file(tmp_path, capsys):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps(system_to_json(build_diagonal_swap(0.5, 1j))))
    assert run(capsys, "validate", str(path))[0] == 0


def test_raw_matrix_spec_round_trips():
    sys = build_diagonal_swap(0.25, -1j)
    again, fms = parse_system(json.dumps(system_to_json(sys)))
    assert fms is None
    np.testing.assert_array_equal(again.tau.T, sys.tau.T)
    np.testing.assert_array_equal(again.state.rho, sys.state.rho)


def test_gns(capsys):
    code, out, _ = run(capsys, "gns", "--json", SWAP)
    d = json.loads(out)
    assert code == 0 and d["quotient_dimension"] == 4 and d["fixed_dimension"] == 1


def test_ergodic_reports_non_ergodic_without_error(capsys):
    code, out, _ = run(capsys, "ergodic", '{"kind":"measure","preset":"rotation","N":4,"r":2}')
    assert code == 0
    assert "verdict: not ergodic" in out and "fixed_dimension=2" in out
    code, out, _ = run(capsys, "ergodic", "--method", "projector", "--json", SWAP)
    assert json.loads(out)["ergodic"] is True


def test_ergodic_disagreement_exits_3(capsys):
    # spectral gap 1e-4: the projector sees ergodicity, the finite averages have not settled yet
    spec = '{"kind":"matrix","preset":"example_4_7","c1":[0.9999,0],"c2":[0.5,0]}'
    code, _, err = run(capsys, "ergodic", "--method", "time-mean", spec)
    assert code == 0
    code, _, err = run(capsys, "ergodic", spec)
    assert code == 3 and json.loads(err)["error"] == "ConsistencyError"


def test_recur_measure_with_oracle(tmp_path, capsys):
    out_json = tmp_path / "r.json"
    spec = '{"kind":"measure","preset":"rotation","N":12,"r":1}'
    code, out, _ = run(capsys, "recur", spec, "--A", "[0,1,2,3,4,5]", "--epsilon", "0.05", "--out", str(out_json))
    assert code == 0 and "oracle_err" in out
    r = RecurrenceReport.from_json(out_json.read_text())
    assert r.window == 12 and r.horizon == 120 and r.oracle_max_error <= 1e-12


def test_recur_hypothesis_failure(capsys):
    spec = '{"kind":"measure","mu":[0.25,0.25,0.25,0.25],"T":[0,1,2,3]}'
    code, _, err = run(capsys, "recur", spec, "--A", "[0]", "--B", "[1]", "--epsilon", "0.01")
    assert code == 2 and json.loads(err)["error"] == "HypothesisError"
    code, out, _ = run(capsys, "recur", spec, "--A", "[0]", "--B", "[1]", "--epsilon", "0.01", "--horizon", "1000", "--force")
    assert code == 0 and "|E|         0" in out


def test_recur_reports_are_deterministic(tmp_path, capsys):
    paths = []
    for i in range(2):
        for suffix in ("json", "csv"):
            p = tmp_path / f"r{i}.{suffix}"
            assert run(capsys, "recur", SWAP, "--A", E11, "--B", E11, "--epsilon", "0.05", "--out", str(p))[0] == 0
            paths.append(p)
    assert paths[0].read_bytes() == paths[2].read_bytes()
    assert paths[1].read_bytes() == paths[3].read_bytes()
    assert paths[1].read_text().startswith("k,value,in_E\n")


def test_invalid_measure_spec_exits_1(capsys):
    code, _, err = run(capsys, "recur", '{"kind":"measure","mu":[0.75,0.25],"T":[0,0]}', "--A", "[0]", "--epsilon", "0.05")
    assert code == 1 and json.loads(err)["error"] == "InvalidSystemError"


def test_malformed_input_exits_1(capsys):
    assert run(capsys, "validate", '{"kind":"tensor"}')[0] == 1
    assert run(capsys, "validate", "/nonexistent/spec.json")[0] == 1
    code, _, err = run(capsys, "validate", '{"kind":"matrix","n":2,"rho":[["a"]],"tau":[[1]]}')
    assert code == 1 and "error" in json.loads(err)


def test_appendix_csv(tmp_path, capsys):
    code, out, _ = run(capsys, "appendix", "--m-range", "1..4", "--density-max", "9")
    dims, dens = out.strip().split("\n\n")
    assert dims.splitlines()[1:] == [f"{m},2,1" for m in range(1, 5)]
    rows = dens.splitlines()
    assert rows[0] == "n,density,density_times_sqrt_n" and rows[4].startswith("4,0.5,")
    assert run(capsys, "appendix", "--m-range", "1..2", "--density-max", "4", "--out-dir", str(tmp_path))[0] == 0
    assert (tmp_path / "appendix_density.csv").exists()
    assert run(capsys, "appendix", "--m-range", "5..2")[0] == 1
