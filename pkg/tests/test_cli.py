import json
import math

import pytest

from coinflip.bob import recover_primal, solve_dual
from coinflip.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fair_n2(capsys):
    code, out, _ = run(capsys, "fair", "--n", "2")
    assert code == 0
    d = json.loads(out)
    assert d["n"] == 2
    assert d["theta_deg"] == pytest.approx(26.92, abs=0.01)
    assert d["p_fair"] == pytest.approx(0.8975, abs=5e-4)
    assert d["theta_rad"] == pytest.approx(math.radians(d["theta_deg"]))


def test_fair_table(capsys):
    code, out, _ = run(capsys, "fair", "--n-max", "3")
    assert code == 0
    assert [row["n"] for row in json.loads(out)] == [1, 2, 3]


def test_alice(capsys):
    code, out, _ = run(capsys, "alice", "--n", "1", "--theta-deg", "36.87")
    assert code == 0
    assert json.loads(out)["alice_bias"] == pytest.approx(0.9, abs=1e-5)


def test_alice_radians(capsys):
    code, out, _ = run(capsys, "alice", "--n", "2", "--theta-rad", "0.5")
    assert code == 0
    assert json.loads(out)["theta_deg"] == pytest.approx(math.degrees(0.5))


def test_bob_reports_two_qubit_extras(capsys):
    code, out, _ = run(capsys, "bob", "--n", "2", "--theta-deg", "26.92")
    d = json.loads(out)
    assert code == 0
    assert d["bob_dual"] == pytest.approx(0.8975, abs=5e-4)
    assert d["quartic_value"] == pytest.approx(d["bob_dual"], abs=1e-8)
    assert d["xi"] == pytest.approx(-0.2098, abs=5e-4)


def test_bob_csv(capsys):
    code, out, _ = run(capsys, "bob", "--n", "1", "--theta-deg", "30", "--format", "csv")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header.startswith("n,theta_rad,theta_deg")


def test_simulate_bob_optimal(capsys):
    code, out, _ = run(
        capsys, "simulate", "--n", "1", "--theta-deg", "36.87", "--p-loss", "0.5",
        "--trials", "100000", "--seed", "7", "--cheat", "bob-optimal",
    )
    assert code == 0
    d = json.loads(out)
    assert abs(d["success_rate"] - 0.9) <= 4 * math.sqrt(0.09 / 1e5)
    assert d["mean_restarts"] == pytest.approx(1.0, abs=0.05)


def test_simulate_bob_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(recover_primal(solve_dual(2, 0.47)).to_json())
    code, out, _ = run(
        capsys, "simulate", "--n", "2", "--theta-rad", "0.47", "--seed", "3",
        "--trials", "20000", "--cheat", "bob-file", str(path),
    )
    assert code == 0
    assert json.loads(out)["success_rate"] == pytest.approx(0.8975, abs=0.01)


def test_simulate_alice_optimal_and_honest(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "2", "--theta-deg", "26.92", "--seed", "1",
                       "--trials", "20000", "--cheat", "alice-optimal")
    assert code == 0 and json.loads(out)["success_rate"] == pytest.approx(0.8975, abs=0.01)
    code, out, _ = run(capsys, "simulate", "--n", "2", "--theta-deg", "26.92", "--seed", "1",
                       "--trials", "20000")
    assert code == 0 and json.loads(out)["outcome0_frac"] == pytest.approx(0.5, abs=0.02)


def test_simulate_output_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["simulate", "--n", "2", "--theta-deg", "20", "--seed", "5", "--trials", "2000",
                     "--p-loss", "0.2", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_csv_to_file(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--n", "2", "--grid", "30:10:5", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "theta_rad,theta_deg,alice,bob_dual,bob_primal,gap"
    assert len(lines) == 6
    degs = [float(line.split(",")[1]) for line in lines[1:]]
    assert degs == sorted(degs)


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--n", "1", "--theta-deg", "30"],
        ["alice", "--n", "1"],
        ["alice", "--n", "1", "--theta-deg", "30", "--theta-rad", "0.5"],
        ["alice", "--n", "1", "--theta-deg", "95"],
        ["alice", "--n", "11", "--theta-deg", "30"],
        ["bogus"],
        ["sweep", "--n", "1", "--grid", "1:2"],
        ["simulate", "--n", "1", "--theta-deg", "30", "--seed", "1", "--cheat", "bob-file"],
        ["simulate", "--n", "1", "--theta-deg", "30", "--seed", "1", "--p-loss", "1.0"],
    ],
)
def test_usage_errors_exit_2_with_json(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    diag = json.loads(err.strip())
    assert set(diag) == {"error", "message"}


def test_gap_failure_exits_3(capsys, monkeypatch):
    import coinflip.cli as cli
    import coinflip.config as config

    monkeypatch.setattr(cli, "TOL", config.Tolerances(duality_gap=-1.0))
    code, out, err = run(capsys, "bob", "--n", "2", "--theta-deg", "26.92")
    assert code == 3
    assert json.loads(err)["error"] == "certification"
    assert json.loads(out)["n"] == 2


def test_verify_quick_passes(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0
    assert out.count("[PASS]") == 7


def test_verify_tampered_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--tolerance-scale", "0")
    assert code != 0
    assert "[FAIL]" in out
