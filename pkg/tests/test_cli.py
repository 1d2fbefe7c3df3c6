"""Command-line behavior: exit codes, artifacts, determinism."""

from __future__ import annotations

import os

import pytest

from photonlab import __version__
from photonlab.cli import main

CONFIG = """\
grid.n_per_axis = 32
grid.delta_k = 0.75
packet.kind = gaussian
packet.k0 = 0, 0, 10
packet.sigma = 1.0
time.t_list = 0.0, 0.3
outputs.densities = number, energy
run.seed = 3
"""


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "demo.cfg"
    path.write_text(CONFIG)
    return path


def invoke(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_version(capsys):
    code, out, err = invoke(capsys, "version")
    assert code == 0
    assert out.strip() == __version__
    assert err == ""


def test_run_exports_artifacts_and_passes(capsys, tmp_path, config_path):
    outdir = tmp_path / "out"
    code, out, err = invoke(capsys, "run", str(config_path), "--outdir", str(outdir))
    assert code == 0, err
    assert "PASS fft-quadrature" in out
    assert "PASS number-norm" in out
    names = sorted(os.listdir(outdir))
    assert names == [
        "energy_t0.f64",
        "energy_t1.f64",
        "number_t0.f64",
        "number_t1.f64",
        "summary.txt",
    ]
    summary = (outdir / "summary.txt").read_text()
    assert summary.startswith("photonlab-summary v1\n")
    for name in names[:-1]:
        assert f"artifact.{name} = sha256:" in summary
    assert not any(n.startswith(".tmp-") for n in os.listdir(outdir))


def test_reruns_are_byte_identical(capsys, tmp_path, config_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert invoke(capsys, "run", str(config_path), "--outdir", str(out1))[0] == 0
    assert invoke(capsys, "run", str(config_path), "--outdir", str(out2))[0] == 0
    for name in os.listdir(out1):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_seed_changes_nothing_but_the_summary_seed_line(capsys, tmp_path, config_path):
    """The seed picks spot-check points; the physics and arrays must agree."""
    reseeded = tmp_path / "reseeded.cfg"
    reseeded.write_text(CONFIG.replace("run.seed = 3", "run.seed = 4"))
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert invoke(capsys, "run", str(config_path), "--outdir", str(out1))[0] == 0
    assert invoke(capsys, "run", str(reseeded), "--outdir", str(out2))[0] == 0
    assert (out1 / "number_t0.f64").read_bytes() == (out2 / "number_t0.f64").read_bytes()
    assert (out1 / "summary.txt").read_bytes() != (out2 / "summary.txt").read_bytes()


def test_config_errors_exit_2_with_location(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("grid.n_per_axis = 32\npacket.sigma_x = 2\n")
    code, out, err = invoke(capsys, "run", str(bad))
    assert code == 2
    assert f"{bad}:2: unknown key 'packet.sigma_x'" in err


def test_missing_config_exits_2(capsys, tmp_path):
    code, _, err = invoke(capsys, "run", str(tmp_path / "nope.cfg"))
    assert code == 2
    assert "configuration error" in err


def test_failing_tolerance_exits_1_and_names_the_check(capsys, tmp_path):
    tight = tmp_path / "tight.cfg"
    tight.write_text(CONFIG + "tolerances.spot_check = 1e-18\n")
    code, out, err = invoke(capsys, "run", str(tight), "--outdir", str(tmp_path / "o"))
    assert code == 1
    assert "FAIL fft-quadrature" in out
    assert "fft-quadrature:spot_check" in err


def test_export_slice_writes_csv(capsys, tmp_path, config_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = invoke(
        capsys, "export-slice", str(config_path), "--kind", "number", "--plane", "z=0.1"
    )
    assert code == 0
    produced = tmp_path / "number_z_0.1.csv"
    assert produced.exists()
    lines = produced.read_text().splitlines()
    assert lines[0].startswith("# photonlab-slice v1 kind=number plane_axis=2")
    assert lines[1] == "x,y,value"
    assert len(lines) == 2 + 32 * 32


def test_export_slice_rejects_bad_requests(capsys, tmp_path, config_path):
    out_csv = str(tmp_path / "x.csv")
    code, _, err = invoke(
        capsys, "export-slice", str(config_path), "--kind", "banana", "--plane", "z=0",
        "--out", out_csv,
    )
    assert code == 1 and "unknown density kind 'banana'" in err
    code, _, err = invoke(
        capsys, "export-slice", str(config_path), "--kind", "number", "--plane", "q=0",
        "--out", out_csv,
    )
    assert code == 1 and "plane must look like" in err


def test_selftest_runs_registry_and_controls(capsys):
    code, out, err = invoke(capsys, "selftest")
    assert code == 0, out + err
    assert "number-density sign calibration = -1" in out
    for name in (
        "fock-identities",
        "number-norm",
        "current-integral",
        "energy-momentum",
        "continuity",
        "helicity-spin",
        "transport",
        "omega-identity",
        "longitudinal-cancellation",
        "retarded-solver",
        "localization",
        "control-corrupted-convention",
        "control-nonconserved-source",
    ):
        assert f"PASS {name}:" in out
    assert "\nOK (" in out or out.rstrip().splitlines()[-1].startswith("OK ")
