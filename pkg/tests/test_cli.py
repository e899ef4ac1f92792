import csv
import math
import subprocess
import sys

import numpy as np
import pytest

from quadphi import cli, verify
from quadphi.mmio import read_mtx, write_mtx
from quadphi.taylor import ps_shape


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def zero4(tmp_path):
    p = tmp_path / "zero.mtx"
    write_mtx(p, np.zeros((4, 4)))
    return p


def test_phi_zero(zero4, tmp_path):
    out = tmp_path / "out"
    assert cli.main(["phi", "--input", str(zero4), "--l", "2", "--out", str(out)]) == 0
    assert np.array_equal(read_mtx(out / "C_2.mtx"), 0.5 * np.eye(4))
    assert sorted(p.name for p in out.iterdir()) == ["C_0.mtx", "C_1.mtx", "C_2.mtx", "plan.csv"]
    (row,) = read_csv(out / "plan.csv")
    assert (row["m"], row["s"], float(row["eta"]), row["products"]) == ("1", "0", 0.0, "0")


def test_phi_large_identity(tmp_path):
    p = tmp_path / "a.mtx"
    write_mtx(p, 1000.0 * np.eye(8))
    assert cli.main(["phi", "--input", str(p), "--l", "0", "--out", str(tmp_path / "o")]) == 0
    (row,) = read_csv(tmp_path / "o" / "plan.csv")
    assert (row["m"], row["s"], float(row["eta"])) == ("20", "3", 1000.0)
    assert int(row["products"]) == 4 + 3 + 3


def test_phi_csv_format(zero4, tmp_path):
    out = tmp_path / "o"
    assert cli.main(["phi", "--input", str(zero4), "--l", "1", "--out", str(out), "--format", "csv"]) == 0
    text = (out / "C_1.csv").read_bytes()
    assert b"\r" not in text
    rows = list(csv.reader(text.decode().splitlines()))
    assert rows[0] == ["c0", "c1", "c2", "c3"]
    assert np.array_equal(np.array(rows[1:], dtype=float), np.eye(4))


def test_phi_missing_file(tmp_path, capsys):
    missing = tmp_path / "missing.mtx"
    assert cli.main(["phi", "--input", str(missing), "--out", str(tmp_path / "o")]) == 1
    assert str(missing) in capsys.readouterr().err


def test_phi_rejects_non_square(tmp_path, capsys):
    p = tmp_path / "r.mtx"
    write_mtx(p, np.ones((2, 3)))
    assert cli.main(["phi", "--input", str(p), "--out", str(tmp_path / "o")]) == 1
    assert "square" in capsys.readouterr().err


def test_phi_rejects_malformed(tmp_path):
    p = tmp_path / "bad.mtx"
    p.write_text("%%MatrixMarket matrix array real general\n2 2\n1\n")
    assert cli.main(["phi", "--input", str(p), "--out", str(tmp_path / "o")]) == 1


def test_theta_defaults(tmp_path):
    out = tmp_path / "theta.csv"
    assert cli.main(["theta", "--out", str(out)]) == 0
    rows = {int(r["m"]): float(r["theta"]) for r in read_csv(out)}
    assert sorted(rows) == list(range(1, 21))
    assert f"{rows[10]:.3g}" == "2.9"
    assert f"{rows[20]:.4g}" == "47.35"


def test_theta_looser_tolerance(tmp_path):
    cli.main(["theta", "--out", str(tmp_path / "a.csv")])
    cli.main(["theta", "--tol", "1e-8", "--out", str(tmp_path / "b.csv")])
    a, b = read_csv(tmp_path / "a.csv"), read_csv(tmp_path / "b.csv")
    assert all(float(y["theta"]) > float(x["theta"]) for x, y in zip(a, b))


def test_theta_rejects_bad_tol(capsys):
    assert cli.main(["theta", "--tol", "-1"]) == 1


def test_verify_unknown_suite(capsys):
    assert cli.main(["verify", "nonsense"]) == 1
    assert "unknown suite" in capsys.readouterr().err


def test_verify_action(tmp_path):
    out = tmp_path / "v.csv"
    assert cli.main(["verify", "action", "--trials", "3", "--steps", "2000", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["case", "metric", "value", "threshold", "pass"]
    assert len(rows) == 3 and all(r["pass"] == "true" for r in rows)


def test_verify_failure_exit_code(monkeypatch, tmp_path):
    monkeypatch.setitem(verify.SUITES, "action",
                        lambda **kw: [verify.Check("x", "m", 1.0, 0.5)])
    assert cli.main(["verify", "action", "--out", str(tmp_path / "v.csv")]) == 2
    assert read_csv(tmp_path / "v.csv")[0]["pass"] == "false"


def test_verify_gallery_suite(tmp_path):
    assert cli.main(["verify", "gallery", "--out", str(tmp_path / "g.csv")]) == 0


def test_bench_products(tmp_path):
    out = tmp_path / "b.csv"
    assert cli.main(["bench", "--sizes", "1", "128", "--l", "7", "--trials", "2", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert [r["n"] for r in rows] == ["1", "1", "128", "128"]
    for r in rows:
        m, s, L = int(r["m"]), int(r["s"]), int(r["L"])
        q, _ = ps_shape(m)
        assert int(r["products"]) == (q - 1) + (L + 1) * (m // q - 1) + s * (2 + 2 * (L - 1))
    out2 = tmp_path / "b2.csv"
    cli.main(["bench", "--sizes", "1", "128", "--l", "7", "--trials", "2", "--out", str(out2)])
    assert [r["products"] for r in read_csv(out2)] == [r["products"] for r in rows]


def test_gallery_command(tmp_path):
    out = tmp_path / "g"
    assert cli.main(["gallery", "--out", str(out)]) == 0
    manifest = read_csv(out / "manifest.csv")
    assert list(manifest[0]) == ["name", "n", "norm1"]
    assert len(manifest) >= 30
    for row in manifest:
        a = read_mtx(out / f"{row['name']}.mtx")
        assert a.shape == (int(row["n"]),) * 2
        assert math.isclose(np.abs(a).sum(axis=0).max(), float(row["norm1"]))


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "quadphi", "theta", "--out", "-"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.splitlines()[0] == "m,theta"
