import json

import numpy as np
import pytest

from gaborshear.cli import parse_atom_index, run, UsageError
from gaborshear.io import read_coefficients, read_image, read_json, sidecar_path, write_pgm, write_raw


def report(capsys):
    return json.loads(capsys.readouterr().out)


def smooth_image(N):
    x = (np.arange(N) - N / 2) / N
    return 0.5 + 0.4 * np.exp(-(x[None, :] ** 2 + x[:, None] ** 2) / 0.02)


def test_filters_check(capsys):
    assert run(["filters", "check", "--M", "2", "--samples", "512"]) == 0
    out = report(capsys)
    assert out["modulation_matrix_residual"] < 1e-12
    assert out["smith_barnwell_residual"] < 1e-12


def test_subband_check(capsys):
    assert run(["subband", "check", "--M", "2", "--len", "64", "--trials", "3"]) == 0
    out = report(capsys)
    assert max(v for k, v in out.items() if isinstance(v, float)) < 1e-10


def test_frame_check_gabor(tmp_path):
    out = tmp_path / "r.json"
    assert run(["frame", "check-gabor", "--grid", "1024", "--out", str(out)]) == 0
    assert read_json(out)["partition_residual"] < 1e-12


@pytest.mark.parametrize("system", ["cone", "group"])
def test_transform_reconstruct_round_trip(tmp_path, capsys, system):
    img = smooth_image(32)
    src, coeffs, rec = tmp_path / "in.raw", tmp_path / "c.bin", tmp_path / "rec.raw"
    write_raw(src, img)
    assert run(["transform", "--system", system, "--in", str(src), "--out", str(coeffs)]) == 0
    out = report(capsys)
    assert out["config"]["N"] == 32
    table, _, meta = read_coefficients(coeffs)
    assert meta["system"] == system and len(table) == out["count"]
    if system == "group":
        assert 0 < out["covered_energy_fraction"] < 1
    assert run(["reconstruct", "--in", str(coeffs), "--out", str(rec)]) == 0
    if system == "cone":
        assert np.linalg.norm(read_image(rec) - img) / np.linalg.norm(img) < 2e-2


def test_transform_pgm_and_config_mismatch(tmp_path, capsys):
    src, cfg = tmp_path / "in.pgm", tmp_path / "c.json"
    write_pgm(src, smooth_image(32))
    cfg.write_text('{"N": 64}')
    assert run(["transform", "--config", str(cfg), "--in", str(src), "--out", str(tmp_path / "c.bin")]) == 2
    assert "N=64" in capsys.readouterr().err


def test_nonzero_only(tmp_path, capsys):
    src = tmp_path / "in.raw"
    write_raw(src, np.zeros((32, 32)))
    assert run(["transform", "--in", str(src), "--out", str(tmp_path / "c.bin"), "--nonzero-only"]) == 0
    capsys.readouterr()
    table, _, _ = read_coefficients(tmp_path / "c.bin")
    assert len(table) == 0


def test_atoms_render(tmp_path, capsys):
    out = tmp_path / "a.pgm"
    assert run(["atoms", "render", "--idx", "v,1,3,0,0,0", "--N", "32", "--out", str(out)]) == 0
    assert report(capsys)["index"] == [1, 1, 1, 3, 0, 0, 0]
    assert read_image(out).max() == 1.0
    assert run(["atoms", "render", "--idx", "1,99,0,0,0", "--N", "32", "--out", str(out)]) == 2


def test_parse_atom_index():
    assert parse_atom_index("2,0,1,-1,3", "group") == (0, 0, 2, 0, 1, -1, 3)
    with pytest.raises(UsageError):
        parse_atom_index("v,1,1,0,0,0", "group")
    with pytest.raises(UsageError):
        parse_atom_index("1,2,3", "cone")
    with pytest.raises(UsageError):
        parse_atom_index("1,a,0,0,0", "cone")


def test_nterm_csv(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    args = ["nterm", "--N", "64", "--cartoon", "disk", "--baseline", "wavelet", "--nmin", "16", "--nmax", "256", "--out", str(out)]
    assert run(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "N,err2_shearlet,err2_wavelet"
    assert [int(r.split(",")[0]) for r in lines[1:]] == [16, 23, 32, 45, 64, 91, 128, 181, 256]
    summary = read_json(sidecar_path(out))
    assert summary == report(capsys)
    assert summary["slope_margin"] == pytest.approx(summary["wavelet"]["slope"] - summary["shearlet"]["slope"])


def test_exit_codes(tmp_path, capsys):
    assert run([]) == 2
    assert run(["filters", "check", "--M", "1"]) == 2
    assert run(["nterm", "--N", "100"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["nterm", "--config", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    # A missing input file is not a validation problem.
    assert run(["transform", "--in", str(tmp_path / "none.pgm"), "--out", str(tmp_path / "c.bin")]) == 1
    assert "runtime error" in capsys.readouterr().err
