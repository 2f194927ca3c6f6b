import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ortholadder.analytic import krawtchouk_amplitudes
from ortholadder.cli import main, read_trajectory_csv, trajectory_csv
from ortholadder.systems import FAMILIES


def run(args, capsys=None):
    code = main([str(a) for a in args])
    return code


def write_config(path, doc):
    path.write_text(json.dumps(doc))
    return path


KRAW = ["--family", "krawtchouk", "--param", "N=4", "--param", "epsilon=0"]


def test_simulate_full_inversion(tmp_path):
    out = tmp_path / "k.csv"
    code = run(["simulate", *KRAW, "--t-stop", math.pi, "--num-points", 101, "--output", out])
    assert code == 0
    text = out.read_text()
    assert "\r" not in text
    header, t, rho, mean, norm = read_trajectory_csv(text)
    assert header == ["t", "rho_0", "rho_1", "rho_2", "rho_3", "rho_4", "mean_n", "norm"]
    assert len(t) == 101
    assert rho[-1, 4] == pytest.approx(1.0, abs=1e-9)
    assert rho[0, 0] == 1 and mean[0] == 0 and norm[0] == 1


@pytest.mark.parametrize("name", list(FAMILIES))
def test_first_row_is_ground_state(tmp_path, name):
    config = write_config(
        tmp_path / "c.json",
        {
            "system": {"family": name, "params": dict(FAMILIES[name].example)},
            "time": {"start": 0, "stop": 1, "num_points": 3},
            "method": FAMILIES[name].methods[0],
        },
    )
    out = tmp_path / "o.csv"
    assert run(["simulate", "--config", config, "--output", out]) == 0
    _, _, rho, mean, norm = read_trajectory_csv(out.read_text())
    assert rho[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert mean[0] == pytest.approx(0.0, abs=1e-12)
    assert norm[0] == pytest.approx(1.0, abs=1e-12)


def test_csv_round_trip_is_exact():
    traj = krawtchouk_amplitudes(5, 0.3, np.linspace(0, 7, 23))
    _, t, rho, mean, norm = read_trajectory_csv(trajectory_csv(traj))
    np.testing.assert_array_equal(t, traj.times)
    np.testing.assert_array_equal(rho, traj.populations)
    np.testing.assert_allclose(norm, rho.sum(axis=1), rtol=0, atol=1e-15)
    np.testing.assert_allclose(mean, rho @ np.arange(6), rtol=0, atol=1e-14)


def test_outputs_are_deterministic(tmp_path):
    out = tmp_path / "a.json"
    args = ["simulate", *KRAW, "--method", "oracle", "--t-stop", 2, "--num-points", 5, "--format", "structured", "--output", out]
    assert run(args) == 0
    first = out.read_bytes()
    assert run(args) == 0
    assert out.read_bytes() == first


def test_structured_output_has_complex_amplitudes(tmp_path):
    out = tmp_path / "s.json"
    assert run(["simulate", *KRAW, "--t-stop", 1, "--num-points", 3, "--format", "structured", "--output", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["system"]["family"] == "krawtchouk"
    amps = np.array(doc["trajectory"]["amplitudes"])
    assert amps.shape == (3, 5, 2)
    exact = krawtchouk_amplitudes(4, 0.0, doc["trajectory"]["times"]).amplitudes
    np.testing.assert_array_equal(amps[..., 0] + 1j * amps[..., 1], exact)
    assert doc["method"] == "analytic"


def test_companion_file(tmp_path):
    out, comp = tmp_path / "x.csv", tmp_path / "x.json"
    assert run(["simulate", *KRAW, "--num-points", 4, "--output", out, "--companion", comp]) == 0
    assert out.read_text().startswith("t,rho_0")
    assert "amplitudes" in json.loads(comp.read_text())["trajectory"]


def test_config_file_and_flag_override(tmp_path):
    config = write_config(
        tmp_path / "c.json",
        {
            "command": "simulate",
            "system": {"family": "krawtchouk", "params": {"N": 2, "epsilon": 0.5}},
            "time": {"start": 0, "stop": 3, "num_points": 4},
            "output": {"format": "csv"},
        },
    )
    out = tmp_path / "o.csv"
    assert run(["simulate", "--config", config, "--param", "N=3", "--num-points", 6, "--output", out]) == 0
    header, t, *_ = read_trajectory_csv(out.read_text())
    assert header[-3] == "rho_3" and len(t) == 6


def test_unknown_family_exit_2(tmp_path, capsys):
    config = write_config(tmp_path / "c.json", {"system": {"family": "pollaczek", "params": {}}})
    assert run(["simulate", "--config", config]) == 2
    err = capsys.readouterr().err
    for name in FAMILIES:
        assert name in err


def test_usage_errors_exit_2(tmp_path, capsys):
    assert run(["simulate", "--family", "custom", "--param", "couplings=[1,2]", "--method", "analytic"]) == 2
    assert run(["spectral", "--family", "jacobi", "--param", "alpha=1", "--param", "beta=1"]) == 2
    assert run(["simulate", *KRAW, "--t-start", 2, "--t-stop", 1]) == 2
    assert run(["simulate", *KRAW, "--num-points", 1]) == 2
    assert run(["simulate", "--family", "krawtchouk", "--param", "N=0"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["simulate", "--config", bad]) == 2


def test_numerical_failure_exit_3(tmp_path, capsys):
    config = write_config(
        tmp_path / "c.json",
        {
            "system": {"family": "krawtchouk", "params": {"N": 5}},
            "time": {"start": 0, "stop": 10, "num_points": 3},
            "method": "oracle",
            "oracle": {"step": 0.5, "max_steps": 40},
        },
    )
    assert run(["simulate", "--config", config, "--output", tmp_path / "o.csv"]) == 3
    assert "numerical failure" in capsys.readouterr().err


def test_spectral_equal_rabi_document(tmp_path):
    out = tmp_path / "r.csv"
    args = ["spectral", "--family", "custom", "--param", "couplings=[1,1,1]", "--num-points", 5, "--output", out]
    assert run(args) == 0
    doc = json.loads((tmp_path / "r.decomposition.json").read_text())
    expected = sorted([2 * math.cos(math.pi / 5), -2 * math.cos(math.pi / 5), 2 * math.cos(2 * math.pi / 5), -2 * math.cos(2 * math.pi / 5)])
    np.testing.assert_allclose(doc["eigenvalues"], expected, atol=1e-13)
    assert doc["v8_residual"] is None
    assert out.read_text().startswith("t,rho_0,rho_1,rho_2,rho_3,mean_n,norm\n")


def test_spectral_two_level_weights(tmp_path):
    out = tmp_path / "two.csv"
    assert run(["spectral", "--family", "custom", "--param", "couplings=[1]", "--output", out]) == 0
    doc = json.loads((tmp_path / "two.decomposition.json").read_text())
    np.testing.assert_allclose(doc["weights"], [0.5, 0.5], atol=1e-15)


def test_spectral_krawtchouk_common_polynomial(tmp_path):
    out = tmp_path / "k.csv"
    assert run(["spectral", "--family", "krawtchouk", "--param", "N=3", "--output", out]) == 0
    doc = json.loads((tmp_path / "k.decomposition.json").read_text())
    assert doc["v8_residual"] < 1e-10


def test_verify_pass_and_fail(tmp_path):
    out = tmp_path / "v.json"
    base = ["verify", "--family", "krawtchouk", "--param", "N=5", "--param", "epsilon=0.3", "--t-stop", 10, "--num-points", 51]
    assert run([*base, "--output", out]) == 0
    report = json.loads(out.read_text())
    assert report["checks"]["analytic_vs_oracle"]["max_pop_residual"] < 1e-6
    assert run([*base, "--oracle-tolerance", 1e-2, "--output", out]) == 1
    report = json.loads(out.read_text())
    assert not report["passed"] and "oracle.resolution" in report["failures"]


def test_verify_bessel_residual(tmp_path):
    out = tmp_path / "b.json"
    args = ["verify", "--family", "jacobi-antisymmetric", "--param", "alpha=0.5", "--t-stop", 5, "--num-points", 11, "--output", out]
    assert run(args) == 0
    assert json.loads(out.read_text())["checks"]["bessel_formula"]["value"] < 1e-8


def test_families_listing(capsys):
    assert main(["families"]) == 0
    text = capsys.readouterr().out
    for name in ("krawtchouk", "jacobi", "jacobi-antisymmetric", "christoffel-legendre", "legendre-function", "custom", "degenerate-krawtchouk"):
        assert f"\n{name}\n" in "\n" + text


def test_console_script_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "ortholadder.cli", "families"], capture_output=True, text=True
    )
    assert result.returncode == 0 and "krawtchouk" in result.stdout
