import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from brightdark import SlitGeometry
from brightdark.cli import main
from brightdark.correlations import UNDEFINED
from brightdark.modes import pattern
from brightdark.records import parse_record, read_record


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def record(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return parse_record(out)


PATTERN = ("pattern", "--slit-width", "5e-6", "--wavelength", "1e-6",
           "--theta-min", "-0.5", "--theta-max", "0.5", "--points", "1001")


def test_pattern_example(capsys):
    code, out, _ = run(capsys, *PATTERN, "--format", "csv")
    assert code == 0
    assert [l for l in out.splitlines() if not l.startswith("#")][0] == "theta,beta,intensity"
    rec = parse_record(out)
    assert len(rec.rows) == 1001
    rows = np.array(rec.rows)
    assert rows[500, 0] == 0.0 and rows[500, 2] == 1.0 == rows[:, 2].max()
    geom = SlitGeometry(5e-6, 1e-6)
    assert np.array_equal(rows, pattern(geom, np.linspace(-0.5, 0.5, 1001)))


def test_pattern_zero_at_first_minimum(capsys):
    theta = math.asin(0.2)
    rec = record(capsys, "pattern", "--slit-width", "5", "--wavelength", "1",
                 "--theta-min", str(-theta), "--theta-max", str(theta), "--points", "3")
    assert rec.rows[-1][1] == pytest.approx(math.pi, rel=1e-15)
    assert rec.rows[-1][2] < 1e-30


def test_decompose_examples(capsys):
    rec = record(capsys, "decompose", "--beta", "0.94247779607", "--nmax", "2")
    weights = {r[0]: r[3] for r in rec.rows}
    assert abs(weights[0] - 0.737) < 5e-4
    assert rec.rows[2][4] is None and abs(rec.rows[3][4] - 0.514) < 1e-3
    assert rec.footer["captured_weight"] + rec.footer["tail_bound"] >= 1

    rec = record(capsys, "decompose", "--beta", "0", "--nmax", "5")
    nonzero = [r for r in rec.rows if r[3] > 1e-30]
    assert len(nonzero) == 1 and nonzero[0][0] == 0 and nonzero[0][3] == 1.0


@pytest.mark.parametrize("beta", ["0.1", "1.7", "3.14159265359", "9.5", "-4"])
@pytest.mark.parametrize("nmax", ["5", "64", "500"])
def test_decompose_footer_covers_unit_mass(capsys, beta, nmax):
    rec = record(capsys, "decompose", "--beta", beta, "--nmax", nmax)
    assert rec.footer["captured_weight"] + rec.footer["tail_bound"] >= 1


def test_flag_styles_agree(capsys):
    b, lam, theta = 5e-6, 1e-6, 0.137
    beta = repr(math.pi * b * math.sin(theta) / lam)
    physical = record(capsys, "decompose", "--slit-width", str(b), "--wavelength", str(lam),
                      "--theta", str(theta), "--nmax", "8")
    direct = record(capsys, "decompose", "--beta", beta, "--nmax", "8")
    assert np.allclose(np.array(physical.rows, dtype=float), np.array(direct.rows, dtype=float),
                       rtol=0, atol=1e-12, equal_nan=True)

    a = record(capsys, "correlate", "--source", "fock:3", "--slit-width", str(b), "--wavelength", str(lam),
               "--theta", str(theta))
    c = record(capsys, "correlate", "--source", "fock:3", "--beta", beta)
    assert np.allclose(a.rows[0], c.rows[0], rtol=0, atol=1e-12)


def test_correlate_examples(capsys):
    rec = record(capsys, "correlate", "--source", "fock:2", "--beta", "0.94247779607")
    assert rec.columns == ["g1", "g2", "mean_total_photons", "bright_mode_population"]
    assert rec.rows[0][1] == 0.5
    rec = record(capsys, "correlate", "--source", "coherent:1,0", "--slit-width", "1",
                 "--wavelength", "1", "--theta", "0")
    assert rec.rows[0][1] == 1.0
    rec = record(capsys, "correlate", "--source", "fock:3", "--beta", "3.14159265359")
    assert rec.rows[0][1] is UNDEFINED
    code, out, _ = run(capsys, "correlate", "--source", "fock:3", "--beta", "3.14159265359")
    assert "undefined" in out.splitlines()[-1]


def test_correlate_coupling(capsys):
    rec = record(capsys, "correlate", "--source", "fock:2", "--beta", "0", "--coupling", "2")
    assert rec.rows[0][0] == 8.0


@pytest.mark.parametrize("argv", [
    ("correlate", "--source", "fock:x", "--beta", "0.1"),
    ("correlate", "--source", "laser", "--beta", "0.1"),
    ("correlate", "--source", "coherent:1,0", "--beta", "0.1"),
    ("correlate", "--source", "fock:2", "--beta", "0.1", "--coupling", "0"),
    ("decompose", "--beta", "0.1", "--slit-width", "1", "--wavelength", "1", "--theta", "0.1"),
    ("decompose", "--beta", "0.1", "--theta", "0.1"),
    ("decompose", "--slit-width", "1", "--wavelength", "1"),
    ("decompose", "--beta", "nan"),
    ("decompose", "--beta", "1", "--nmax", "0"),
    ("decompose", "--beta", "9.5", "--nmax", "3"),
    ("pattern", "--slit-width", "1", "--wavelength", "1", "--theta-min", "0", "--theta-max", "1",
     "--points", "1"),
    ("pattern", "--slit-width", "-1", "--wavelength", "1", "--theta-min", "0", "--theta-max", "1",
     "--points", "5"),
    ("sample", "--shots", "0", "--seed", "1", "--slit-width", "5", "--wavelength", "1"),
    ("sample", "--shots", "10", "--seed", "-1", "--slit-width", "5", "--wavelength", "1"),
    ("sample", "--shots", "10", "--seed", "1"),
    ("sample", "--shots", "10", "--seed", "1", "--observable", "g2", "--source", "fock:2",
     "--beta", "3.141592653589793"),
    ("verify", "--level", "huge"),
    ("nonsense",),
])
def test_usage_errors_exit_2(capsys, argv, tmp_path):
    out = tmp_path / "out.csv"
    try:
        code = main([*argv, "--out", str(out)])
    except SystemExit as exc:  # argparse rejects before dispatch
        code = exc.code
    assert code == 2
    assert not out.exists()


def test_unwritable_exit_3(capsys, tmp_path):
    target = tmp_path / "no" / "such" / "dir.csv"
    code, _, err = run(capsys, "decompose", "--beta", "0.3", "--out", str(target))
    assert code == 3 and "cannot write" in err
    assert not (tmp_path / "no").exists()


def test_out_file_round_trip(capsys, tmp_path):
    target = tmp_path / "d.csv"
    assert main(["decompose", "--beta", "0.7", "--out", str(target)]) == 0
    text = target.read_text()
    rec = read_record(target)
    # every value is reproduced to the last emitted digit
    body = [l for l in text.splitlines() if not l.startswith("#")][1:]
    for line, row in zip(body, rec.rows):
        cells = line.split(",")
        assert [float(c) if c else None for c in cells] == [None if v is None else float(v) for v in row]
    assert list(tmp_path.iterdir()) == [target]


def test_json_output(capsys):
    code, out, _ = run(capsys, "decompose", "--beta", "0.3", "--nmax", "2", "--format", "json")
    obj = json.loads(out)
    assert obj["schema_version"] == "1" and obj["columns"][0] == "n"
    assert len(obj["rows"]) == 5 and "timestamp" in obj["provenance"]


SAMPLE = ("sample", "--source", "single", "--shots", "1000000", "--seed", "7",
          "--slit-width", "5", "--wavelength", "1")


def test_sample_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([*SAMPLE, "--no-provenance", "--out", str(a)]) == 0
    assert main([*SAMPLE, "--no-provenance", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rec = read_record(a)
    assert rec.provenance == {"tool_version": rec.provenance["tool_version"], "seed": 7}
    assert rec.footer["total"] == 1_000_000 == sum(r[2] for r in rec.rows)
    # bin containing beta = pi (sin theta = 0.2)
    theta = math.asin(0.2)
    [row] = [r for r in rec.rows if r[0] <= theta < r[1]]
    assert row[2] < 20


def test_sample_timestamps_differ_only_in_provenance(capsys):
    _, first, _ = run(capsys, *SAMPLE)
    _, second, _ = run(capsys, *SAMPLE)
    strip = lambda t: [l for l in t.splitlines() if not l.startswith("#provenance")]
    assert strip(first) == strip(second)


def test_sample_g2(capsys):
    rec = record(capsys, "sample", "--source", "fock:2", "--observable", "g2", "--shots", "1000000",
                 "--seed", "3", "--beta", "0.94247779607")
    value, stderr, closed, shots = rec.rows[0]
    assert closed == 0.5 and shots == 1_000_000
    assert abs(value - 0.5) <= 3 * stderr


def test_verify_quick(capsys, tmp_path):
    target = tmp_path / "report.json"
    assert main(["verify", "--out", str(target), "--format", "json"]) == 0
    obj = json.loads(target.read_text())
    names = [r[0] for r in obj["rows"]]
    assert "normalization sum|c_n|^2 at beta=0.3pi" in names
    assert obj["footer"]["passed"] is True


def test_verify_reports_failure(capsys, monkeypatch, tmp_path):
    original = __import__("brightdark.modes", fromlist=["coefficients"]).coefficients
    monkeypatch.setattr("brightdark.modes.coefficients", lambda beta, ns: np.conj(original(beta, ns)))
    target = tmp_path / "report.csv"
    assert main(["verify", "--out", str(target)]) == 1
    rec = read_record(target)
    assert rec.footer["passed"] is False
    assert any(r[3] is False for r in rec.rows)


@pytest.mark.skipif(shutil.which("brightdark") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["brightdark", "correlate", "--source", "single", "--beta", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert parse_record(proc.stdout).rows[0][0] == 1.0
