import csv

import numpy as np
import pytest

from core import DegenerateGcvError
from blur import BoundaryCondition, Psf, gaussian_psf
from formats.psffile import read_psf, write_psf
from formats.signalfile import read_signal, write_signal
from multidim import disk_psf
from synthetic import oscillating_image, smooth_signal
import main as cli
import oracle


def _table(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture
def files(tmp_path):
    """Paths under tmp_path plus a few ready-made inputs"""

    def path(name):
        return str(tmp_path / name)

    write_psf(path("identity.txt"), Psf.from_weights([1.0]))
    write_psf(path("hat.txt"), Psf.from_weights([0.25, 0.5, 0.25]))
    write_psf(path("gauss.txt"), gaussian_psf(3, 1.5))
    write_signal(path("signal.csv"), smooth_signal(32))
    return path


def test_eigs_identity(files):
    assert cli.main(["eigs", "--psf", files("identity.txt"), "--n", "8", "--bc", "hoc-cosine", "--out", files("d.csv")]) == 0
    rows = _table(files("d.csv"))
    assert [int(r["index"]) for r in rows] == list(range(1, 9))
    assert all(float(r["real"]) == 1.0 and float(r["imag"]) == 0.0 for r in rows)


def test_eigs_pins_boundary_rows(files):
    cli.main(["eigs", "--psf", files("gauss.txt"), "--n", "20", "--bc", "antireflective", "--out", files("d.csv")])
    rows = _table(files("d.csv"))
    assert float(rows[0]["real"]) == 1.0
    assert float(rows[-1]["real"]) == 1.0
    assert float(rows[5]["real"]) < 1.0


def test_eigs_periodic_example(files):
    cli.main(["eigs", "--psf", files("hat.txt"), "--n", "4", "--bc", "periodic", "--out", files("d.csv")])
    np.testing.assert_allclose([float(r["real"]) for r in _table(files("d.csv"))], [1.0, 0.5, 0.0, 0.5], atol=1e-15)


def test_eigs_of_2d_psf(files):
    write_psf(files("disk.txt"), disk_psf(1))
    cli.main(["eigs", "--psf", files("disk.txt"), "--n", "6", "--bc", "reflective", "--out", files("d.csv")])
    assert len(_table(files("d.csv"))) == 36


def test_blur_matches_circulant(files):
    args = ["blur", "--psf", files("gauss.txt"), "--input", files("signal.csv"), "--bc", "periodic"]
    assert cli.main(args + ["--output", files("g.csv")]) == 0
    expected = oracle.stencil_blur_matrix(gaussian_psf(3, 1.5), 32, BoundaryCondition.PERIODIC) @ smooth_signal(32)
    np.testing.assert_allclose(read_signal(files("g.csv")), expected, atol=1e-12)


def test_blur_noise_is_reproducible(files):
    base = ["blur", "--psf", files("gauss.txt"), "--input", files("signal.csv"), "--bc", "reflective"]
    cli.main(base + ["--output", files("clean.csv")])
    cli.main(base + ["--noise", "0.01", "--seed", "7", "--output", files("a.csv")])
    cli.main(base + ["--noise", "0.01", "--seed", "7", "--output", files("b.csv")])
    clean, noisy = read_signal(files("clean.csv")), read_signal(files("a.csv"))
    assert np.linalg.norm(noisy - clean) / np.linalg.norm(clean) == pytest.approx(0.01, rel=1e-10)
    with open(files("a.csv"), "rb") as a, open(files("b.csv"), "rb") as b:
        assert a.read() == b.read()


def test_blur_true_extended_shortens_the_signal(files):
    cli.main(["blur", "--psf", files("gauss.txt"), "--input", files("signal.csv"), "--output", files("g.csv")])
    assert read_signal(files("g.csv")).size == 26


def test_deblur_identity_with_fixed_mu(files, capsys):
    args = ["deblur", "--psf", files("identity.txt"), "--input", files("signal.csv"), "--bc", "hoc-cosine"]
    assert cli.main(args + ["--mu", "1e-12", "--output", files("f.csv")]) == 0
    assert capsys.readouterr().out.splitlines() == ["mu=1e-12 source=fixed"]
    np.testing.assert_allclose(read_signal(files("f.csv")), smooth_signal(32), rtol=1e-11)


def test_deblur_reports_imaginary_residue(files, capsys):
    args = ["deblur", "--psf", files("gauss.txt"), "--input", files("signal.csv"), "--bc", "hoc-fourier"]
    cli.main(args + ["--mu", "0.01", "--output", files("f.csv")])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "mu=0.01 source=fixed"
    assert lines[1].startswith("imag=")
    assert float(lines[1][5:]) < 1e-6


def test_deblur_with_gcv_truth_and_curves(files, capsys):
    cli.main(["blur", "--psf", files("gauss.txt"), "--input", files("signal.csv"), "--bc", "antireflective",
              "--noise", "0.01", "--output", files("g.csv")])
    assert cli.main([
        "deblur", "--psf", files("gauss.txt"), "--input", files("g.csv"), "--bc", "antireflective",
        "--reg", "laplacian", "--truth", files("signal.csv"), "--mu-range", "1e-6", "1", "20",
        "--curves", files("curves.csv"), "--output", files("f.csv"),
    ]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].endswith("source=gcv")
    assert 1e-6 <= float(lines[0].split()[0][3:]) <= 1.0
    assert float(lines[1][4:]) < 0.2
    curves = _table(files("curves.csv"))
    assert len(curves) == 20
    assert list(curves[0]) == ["mu", "G", "rre"]


def test_validation_errors_exit_with_two(files, capsys):
    write_signal(files("short.csv"), np.ones(6))
    with open(files("bad.txt"), "w", encoding="utf-8") as f:
        f.write("1 3 1 2\n1 2 1\n")

    assert cli.main(["deblur", "--psf", files("bad.txt"), "--input", files("signal.csv"), "--bc", "periodic",
                     "--output", files("f.csv")]) == 2
    assert capsys.readouterr().err.startswith("error: ")

    assert cli.main(["deblur", "--psf", files("gauss.txt"), "--input", files("short.csv"), "--bc", "periodic",
                     "--output", files("f.csv")]) == 2
    assert cli.main(["deblur", "--psf", files("gauss.txt"), "--input", files("signal.csv"), "--bc", "periodic",
                     "--mu", "abc", "--output", files("f.csv")]) == 2
    assert cli.main(["deblur", "--psf", files("gauss.txt"), "--input", files("missing.csv"), "--bc", "periodic",
                     "--output", files("f.csv")]) == 2


def test_numerical_errors_exit_with_three(files, capsys, monkeypatch):
    def degenerate(*args, **kwargs):
        raise DegenerateGcvError("GCV denominator vanishes")

    monkeypatch.setattr(cli, "restore", degenerate)
    assert cli.main(["deblur", "--psf", files("hat.txt"), "--input", files("signal.csv"), "--bc", "periodic",
                     "--output", files("f.csv")]) == 3
    assert "GCV denominator vanishes" in capsys.readouterr().err


def test_unknown_boundary_condition_is_a_usage_error(files):
    with pytest.raises(SystemExit):
        cli.main(["deblur", "--psf", files("hat.txt"), "--input", files("signal.csv"), "--bc", "zero",
                  "--output", files("f.csv")])


def test_compare_with_identity_psf(files):
    assert cli.main(["compare", "--psf", files("identity.txt"), "--input", files("signal.csv"), "--noise", "0",
                     "--quiet", "--out", files("table.csv")]) == 0
    rows = _table(files("table.csv"))
    assert [r["bc"] for r in rows] == cli.BC_NAMES
    assert list(rows[0]) == ["bc", "min_rre", "mu_opt", "mu_gcv", "rre_gcv"]
    for row in rows:
        assert float(row["min_rre"]) < 1e-9
        assert float(row["mu_opt"]) <= 1e-10


def test_compare_subset(files):
    cli.main(["compare", "--psf", files("hat.txt"), "--input", files("signal.csv"), "--bc-list",
              "reflective, hoc-cosine", "--quiet", "--out", files("table.csv")])
    assert [r["bc"] for r in _table(files("table.csv"))] == ["reflective", "hoc-cosine"]


def test_psf_command(files):
    assert cli.main(["psf", "--kind", "gaussian", "--m", "3", "--sigma", "1.5", "--output", files("p.txt")]) == 0
    np.testing.assert_array_equal(read_psf(files("p.txt")).weights, gaussian_psf(3, 1.5).weights)
    cli.main(["psf", "--kind", "disk", "--radius", "2", "--output", files("disk.txt")])
    assert read_psf(files("disk.txt")).weights.shape == (5, 5)


def test_synth_command(files):
    assert cli.main(["synth", "--n", "32", "--margin", "4", "--output", files("s.csv")]) == 0
    np.testing.assert_array_equal(read_signal(files("s.csv")), smooth_signal(32, 4))
    cli.main(["synth", "--n", "6", "8", "--output", files("image.csv")])
    assert read_signal(files("image.csv")).shape == (6, 8)
    cli.main(["synth", "--n", "6", "8", "--scene", "oscillating", "--output", files("wave.csv")])
    np.testing.assert_allclose(read_signal(files("wave.csv")), oscillating_image(6, 8), rtol=1e-15)


def test_dims_flag_reshapes_flat_input(files):
    write_signal(files("flat.csv"), np.linspace(0, 1, 48))
    write_psf(files("disk.txt"), disk_psf(1))
    assert cli.main(["blur", "--psf", files("disk.txt"), "--input", files("flat.csv"), "--dims", "6", "8",
                     "--bc", "reflective", "--output", files("g.csv")]) == 0
    assert read_signal(files("g.csv")).shape == (6, 8)


def test_dimension_mismatch(files):
    write_psf(files("disk.txt"), disk_psf(1))
    assert cli.main(["blur", "--psf", files("disk.txt"), "--input", files("signal.csv"), "--bc", "periodic",
                     "--output", files("g.csv")]) == 2
