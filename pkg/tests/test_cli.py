import json
import os

import numpy as np
import pytest

from mbcs.cli import main
from mbcs.serialize import load_matrix
from mbcs.unitaries import unitarity_defect


def run(*argv):
    return main(list(argv))


def write_config(tmp_path, doc):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return str(path)


def hom_config(tmp_path, **overrides):
    doc = {
        "unitary": {"file": "balanced.json"},
        "input_ports": [0, 1],
        "spectra": [
            {
                "shape": "sinc",
                "bandwidth": 1.0,
                "central_frequency": 20.0,
                "emission_time": 0.0,
                "jones": [1.0, 0.0, 0.0, 0.0],
            }
            for _ in range(2)
        ],
        "grid": {"half_width": 0.2},
        "theta": 0.3,
        "mode": "pol-insensitive",
        "seed": 3,
    }
    doc.update(overrides)
    from mbcs.serialize import save_matrix

    u = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
    save_matrix(u, tmp_path / "balanced.json")
    return write_config(tmp_path, doc)


def single_photon_config(tmp_path):
    doc = {
        "unitary": {"file": "identity.json"},
        "input_ports": [0],
        "spectra": [
            {
                "shape": "sinc",
                "bandwidth": 1.0,
                "central_frequency": 20.0,
                "emission_time": 0.0,
                "jones": [1.0, 0.0, 0.0, 0.0],
            }
        ],
        "grid": {"half_width": 0.2},
        "theta": 0.3,
        "mode": "pol-insensitive",
        "seed": 4,
    }
    from mbcs.serialize import save_matrix

    save_matrix(np.eye(2, dtype=complex), tmp_path / "identity.json")
    return write_config(tmp_path, doc)


def test_gen_unitary_writes_valid_matrix(tmp_path):
    out = str(tmp_path / "out")
    assert run("gen-unitary", "--n", "6", "--seed", "9", "--out", out) == 0
    u = load_matrix(os.path.join(out, "unitary.json"))
    assert u.shape == (6, 6)
    assert unitarity_defect(u) < 1e-12


def test_gen_unitary_scalar_case(tmp_path):
    out = str(tmp_path / "o1")
    assert run("gen-unitary", "--n", "1", "--seed", "2", "--out", out) == 0
    u = load_matrix(os.path.join(out, "unitary.json"))
    assert abs(abs(u[0, 0]) - 1.0) < 1e-12


def test_gen_unitary_is_byte_deterministic(tmp_path):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    run("gen-unitary", "--n", "5", "--seed", "77", "--out", out_a)
    run("gen-unitary", "--n", "5", "--seed", "77", "--out", out_b)
    a = open(os.path.join(out_a, "unitary.json"), "rb").read()
    b = open(os.path.join(out_b, "unitary.json"), "rb").read()
    assert a == b


def test_gen_unitary_requires_size_and_seed(tmp_path):
    assert run("gen-unitary", "--seed", "1", "--out", str(tmp_path)) == 2
    assert run("gen-unitary", "--n", "3", "--out", str(tmp_path)) == 2


def test_probs_hom_all_coincidences_vanish(tmp_path):
    config = hom_config(tmp_path)
    out = str(tmp_path / "out")
    assert run("probs", "--config", config, "--out", out) == 0
    rows = open(os.path.join(out, "distribution.csv")).read().strip().split("\n")
    assert rows[0] == "ports,bins,pols,probability"
    assert len(rows) == 26  # one port pair, 5x5 bin pairs, insensitive
    for row in rows[1:]:
        assert float(row.rsplit(",", 1)[1]) < 1e-12
    summary = json.load(open(os.path.join(out, "summary.json")))
    assert summary["total_mass"] < 1e-12
    assert summary["bins"] == 5


def test_probs_single_photon_uniform(tmp_path):
    config = single_photon_config(tmp_path)
    out = str(tmp_path / "out")
    assert run("probs", "--config", config, "--out", out) == 0
    rows = open(os.path.join(out, "distribution.csv")).read().strip().split("\n")[1:]
    port0 = [r for r in rows if r.startswith("0,")]
    assert len(port0) == 5
    for r in port0:
        assert abs(float(r.rsplit(",", 1)[1]) - 0.2) < 1e-12


def test_probs_rerun_is_byte_identical(tmp_path):
    config = hom_config(tmp_path)
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    run("probs", "--config", config, "--out", out_a)
    run("probs", "--config", config, "--out", out_b)
    for name in ("distribution.csv", "summary.json"):
        a = open(os.path.join(out_a, name), "rb").read()
        b = open(os.path.join(out_b, name), "rb").read()
        assert a == b


def test_sample_outputs_and_determinism(tmp_path):
    config = single_photon_config(tmp_path)
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    assert run("sample", "--config", config, "--n", "500", "--out", out_a) == 0
    assert run("sample", "--config", config, "--n", "500", "--out", out_b) == 0
    a = open(os.path.join(out_a, "samples.csv"), "rb").read()
    b = open(os.path.join(out_b, "samples.csv"), "rb").read()
    assert a == b
    summary = json.load(open(os.path.join(out_a, "sample_summary.json")))
    assert summary["draws"] == 500
    assert 0.0 <= summary["tvd_vs_exact"] <= 1.0
    assert abs(summary["mass_deficit"]) < 1e-9  # single photon: no bunching


def test_sample_seed_flag_overrides_config(tmp_path):
    config = single_photon_config(tmp_path)
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    run("sample", "--config", config, "--n", "200", "--seed", "1", "--out", out_a)
    run("sample", "--config", config, "--n", "200", "--seed", "2", "--out", out_b)
    a = open(os.path.join(out_a, "samples.csv")).read()
    b = open(os.path.join(out_b, "samples.csv")).read()
    assert a != b


def test_verify_suite_exit_status_and_report(tmp_path):
    out = str(tmp_path / "v")
    assert run("verify", "--suite", "hom", "--out", out) == 0
    report = json.load(open(os.path.join(out, "verify_hom.json")))
    assert report["suite"] == "hom"
    assert report["passed"] is True
    assert all(c["passed"] for c in report["checks"])


def test_verify_requires_suite(tmp_path):
    assert run("verify", "--out", str(tmp_path)) == 2


@pytest.mark.parametrize(
    "suite", ["hom", "beat", "marginals", "normalization", "gaussian", "perm"]
)
def test_all_verification_suites_pass(suite):
    from mbcs.verify import run_suite

    report = run_suite(suite)
    failing = [c["name"] for c in report["checks"] if not c["passed"]]
    assert report["passed"], f"{suite} failing checks: {failing}"


def test_output_dir_from_config(tmp_path, monkeypatch):
    monkeypatch.delenv("MBCS_OUT_DIR", raising=False)
    out_dir = tmp_path / "from_config"
    config = single_photon_config(tmp_path)
    doc = json.loads(open(config).read())
    doc["out_dir"] = str(out_dir)
    config = write_config(tmp_path, doc)
    assert run("probs", "--config", config) == 0
    assert (out_dir / "distribution.csv").exists()


def test_output_dir_environment_override(tmp_path, monkeypatch):
    env_dir = tmp_path / "from_env"
    monkeypatch.setenv("MBCS_OUT_DIR", str(env_dir))
    monkeypatch.chdir(tmp_path)
    assert run("gen-unitary", "--n", "2", "--seed", "5") == 0
    assert (env_dir / "unitary.json").exists()


def test_threads_flag_never_changes_output(tmp_path):
    config = hom_config(tmp_path)
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    run("probs", "--config", config, "--out", out_a, "--threads", "1")
    run("probs", "--config", config, "--out", out_b, "--threads", "2")
    a = open(os.path.join(out_a, "distribution.csv"), "rb").read()
    b = open(os.path.join(out_b, "distribution.csv"), "rb").read()
    assert a == b


def test_guard_overflow_reports_cardinality_without_traceback(tmp_path, capsys):
    config = hom_config(tmp_path, grid={"half_width": 1.0 / 4001})
    assert run("probs", "--config", config, "--out", str(tmp_path / "o")) == 2
    err = capsys.readouterr().err
    assert "error:" in err
    assert str(4001**2) in err


def test_missing_config_file_reports_io_error(tmp_path, capsys):
    assert run("probs", "--config", str(tmp_path / "nope.json")) == 2
    assert "i/o error" in capsys.readouterr().err


def test_mode_flag_overrides_config(tmp_path):
    config = hom_config(tmp_path)
    out = str(tmp_path / "out")
    run("probs", "--config", config, "--out", out, "--mode", "pol-resolved")
    rows = open(os.path.join(out, "distribution.csv")).read().strip().split("\n")
    assert len(rows) == 1 + 25 * 4
