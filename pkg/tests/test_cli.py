"""Command-line interface: outputs, determinism, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from phaselock import OscillatorNetwork, write_network
from phaselock.cli import main


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.json"
    write_network(OscillatorNetwork(3, [1.0, 2.0, 3.0], [9.0, 6.0, 0.0]), path)
    return path


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    write_network(OscillatorNetwork(2, [0.5, 0.0], [1.0]), path)
    return path


def test_simulate_writes_trajectory(chain_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "simulate",
            "--network",
            str(chain_file),
            "--t-end",
            "1.0",
            "--dt",
            "0.01",
            "--seed",
            "3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,theta_1,theta_2,theta_3,thetadot_1,thetadot_2,thetadot_3"
    assert len(lines) == 102  # header + 101 stored steps
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == 0.0 and len(first) == 7


def test_simulate_theta0_flag(pair_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "simulate",
            "--network",
            str(pair_file),
            "--t-end",
            "0.5",
            "--dt",
            "0.01",
            "--theta0",
            "0.1,-0.2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    first = (out / "trajectory.csv").read_text().splitlines()[1].split(",")
    assert float(first[1]) == pytest.approx(0.1)
    assert float(first[2]) == pytest.approx(-0.2)


def test_simulate_deterministic_bytes(chain_file, tmp_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert (
            main(
                [
                    "simulate",
                    "--network",
                    str(chain_file),
                    "--t-end",
                    "2.0",
                    "--dt",
                    "0.01",
                    "--seed",
                    "42",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        outputs.append((out / "trajectory.csv").read_bytes())
    assert outputs[0] == outputs[1]


def test_analyze_report_fields(chain_file, tmp_path):
    out = tmp_path / "out"
    assert main(["analyze", "--network", str(chain_file), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["classification"] == "semistable-candidate"
    assert report["equilibrium"][0] == pytest.approx(0.0, abs=1e-9)
    assert report["equilibrium"][1] == pytest.approx(-np.pi / 6, abs=1e-9)
    assert len(report["eigenvalues"]) == 6
    assert all(len(pair) == 2 for pair in report["eigenvalues"])
    assert report["bounds"]["per_edge_sufficient"] == [1.5, 3.0, 1.5]
    assert report["bounds"]["uniform_k0"] == 1.5
    assert report["certificates"] is None
    assert report["sync_frequency"] == 2.0


def test_bounds_output(pair_file, tmp_path):
    out = tmp_path / "out"
    assert main(["bounds", "--network", str(pair_file), "--out", str(out)]) == 0
    payload = json.loads((out / "bounds.json").read_text())
    assert payload["per_edge_sufficient"] == [0.5]
    assert payload["uniform_k0"] == 0.5


def test_invariance_pass_and_fail_exit_codes(pair_file, tmp_path, capsys):
    out = tmp_path / "ok"
    code = main(
        [
            "invariance",
            "--network",
            str(pair_file),
            "--samples",
            "50",
            "--t-end",
            "20",
            "--seed",
            "1",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    payload = json.loads((out / "invariance.json").read_text())
    assert payload["certificates"]["invariance"]["passed"] is True

    weak = tmp_path / "weak.json"
    write_network(OscillatorNetwork(3, [0.0, 4.0, 8.0], [3.0, 6.0, 3.0]), weak)
    out2 = tmp_path / "fail"
    code = main(
        [
            "invariance",
            "--network",
            str(weak),
            "--samples",
            "30",
            "--t-end",
            "20",
            "--seed",
            "1",
            "--out",
            str(out2),
        ]
    )
    assert code == 2
    assert "FAILED" in capsys.readouterr().err


def test_portrait_three_oscillators(chain_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        ["portrait", "--network", str(chain_file), "--grid", "5", "--out", str(out)]
    )
    assert code == 0
    lines = (out / "field.csv").read_text().splitlines()
    assert lines[0] == "x1,x2,dx1,dx2"
    assert len(lines) == 26
    assert not (out / "gboundary.csv").exists()


def test_portrait_two_oscillators_emits_planar_files(pair_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        ["portrait", "--network", str(pair_file), "--grid", "7", "--out", str(out)]
    )
    assert code == 0
    gb = (out / "gboundary.csv").read_text().splitlines()
    assert gb[0] == "x1,upper,lower"
    assert len(gb) == 8
    x1, upper, lower = (float(v) for v in gb[1].split(","))
    assert upper == pytest.approx(1.0 * (1 - np.sin(x1)))
    assert lower == pytest.approx(-1.0 * (1 + np.sin(x1)))
    cones = (out / "cones.csv").read_text().splitlines()
    assert cones[0] == "a,lo_slope,hi_slope,nontangent"
    assert all(row.endswith(",1") for row in cones[1:])


def test_experiment_three_chain(tmp_path, capsys):
    out = tmp_path / "exp"
    assert main(["experiment", "three_chain", "--out", str(out)]) == 0
    assert "all checks passed" in capsys.readouterr().out
    report = json.loads((out / "report.json").read_text())
    assert report["classification"] == "semistable-candidate"
    assert (out / "field.csv").exists()


def test_experiment_five_network(tmp_path):
    out = tmp_path / "exp"
    assert main(["experiment", "five_network", "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["sync_frequency"] == 3.0
    assert report["worst_deviation"] < 1e-6
    assert (out / "trajectory.csv").exists()


def test_missing_network_file_is_an_error(tmp_path, capsys):
    code = main(["analyze", "--network", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_malformed_network_file_is_an_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = main(["simulate", "--network", str(bad), "--out", str(tmp_path)])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_module_entry_point(tmp_path, chain_file):
    result = subprocess.run(
        [
            sys.executable,
            "-m",
            "phaselock.cli",
            "bounds",
            "--network",
            str(chain_file),
            "--out",
            str(tmp_path / "sp"),
        ],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert (tmp_path / "sp" / "bounds.json").exists()


def test_analyze_certify_fills_certificates(pair_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "analyze",
            "--network",
            str(pair_file),
            "--certify",
            "--samples",
            "30",
            "--t-end",
            "10",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    cert = report["certificates"]["invariance"]
    assert cert["passed"] is True and cert["n_samples"] == 30


def test_bad_step_configuration_is_an_error(chain_file, tmp_path, capsys):
    code = main(
        [
            "simulate",
            "--network",
            str(chain_file),
            "--t-end",
            "1.0",
            "--dt",
            "-0.5",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 1
    assert "dt must be positive" in capsys.readouterr().err
