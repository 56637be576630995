import csv
import io
import json
import math
import subprocess
import sys

import pytest

from conftest import run_cli, run_json


def test_spectrum_oned1_two_levels():
    d = run_json("spectrum", "--model", "oned1", "-B", "1", "-C", "1", "-j", "1")
    r = math.sqrt(55) / 3
    assert d["eps_roots"] == pytest.approx([-r, r], rel=1e-14)
    assert d["params"]["A"] == pytest.approx(-52 / 9)
    assert d["complex_root_count"] == 0
    assert set(d) >= {"family", "params", "j", "eps_roots", "energies", "complex_root_count",
                      "residual_max", "normalizability"}


def test_spectrum_oned2_ground():
    d = run_json("spectrum", "--model", "oned2", "-B", "2", "-C", "1", "-j", "0")
    assert d["energies"] == pytest.approx([-math.sqrt(2)], rel=1e-14)


def test_spectrum_guard_exit_code():
    code, out, err = run_cli("spectrum", "--model", "oned1", "-B", "0", "-C", "1", "-j", "0")
    assert code == 2 and out == ""
    assert "B must be nonzero" in err and err.count("\n") == 1


@pytest.mark.parametrize("argv", [
    ("spectrum", "--model", "oned1", "-B", "1", "-C", "1", "--bogus"),
    ("spectrum", "--model", "nope"),
    ("frobnicate",),
    (),
    ("spectrum", "--model", "twod1", "-A", "1", "-B", "1", "-C", "1"),
    ("spectrum", "--model", "oned1", "-A", "1", "-B", "1", "-C", "1"),
    ("spectrum", "--model", "oned1", "-B", "1", "-C", "1", "-j", "-1"),
    ("oracle", "--harmonic", "-C", "1", "--n", "10"),
    ("oracle", "--harmonic", "-C", "1", "--count", "0"),
    ("verify", "--skip", "nonsense"),
    ("spectrum", "--model", "oned1", "-B", "1", "-C", "1", "--config", "/nonexistent/cfg"),
])
def test_usage_and_domain_errors_exit_2(argv):
    code, _, err = run_cli(*argv)
    assert code == 2
    assert err.startswith("qesdw: ") and err.count("\n") == 1


def test_polynomials_oned2_scale():
    d = run_json("polynomials", "--model", "oned2", "-j", "1", "-B", "2", "-C", "1")
    assert d["tabulated"]["proportional"] is True
    assert d["tabulated"]["scale"] == pytest.approx(-1 / (2 * math.sqrt(2)))
    assert len(d["critical"]) == 3


def test_polynomials_twod1():
    d = run_json("polynomials", "--model", "twod1", "-j", "1", "-A", "1", "-B", "1")
    assert d["tabulated"]["proportional"] is True
    assert d["critical"] == pytest.approx([2.0, 0.0, 0.5])


@pytest.mark.parametrize("family,params", [
    ("oned1", ["-B", "1", "-C", "1"]),
    ("oned2", ["-B", "1", "-C", "1"]),
    ("twod1", ["-A", "1", "-B", "1"]),
])
def test_polynomials_j0_degree_one(family, params):
    d = run_json("polynomials", "--model", family, "-j", "0", *params)
    assert len(d["critical"]) == 2


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_wavefunction_ground_state_csv():
    code, out, _ = run_cli("wavefunction", "--model", "oned1", "-B", "-1", "-C", "1", "-j", "0")
    assert code == 0
    rows = _csv(out)
    assert len(rows) == 201
    assert list(rows[0]) == ["x", "R", "exponent", "psi", "saturated"]
    ex = [float(r["exponent"]) for r in rows]
    assert all(b < a for a, b in zip(ex, ex[1:]))
    mid = rows[100]
    assert float(mid["x"]) == 0.0 and float(mid["psi"]) == 1.0


def test_wavefunction_zero_at_node():
    d = run_json("spectrum", "--model", "oned1", "-B", "1", "-C", "1", "-j", "1")
    assert d["node_counts"] == [1, 1]
    code, out, _ = run_cli("wavefunction", "--model", "oned1", "-B", "1", "-C", "1", "-j", "1",
                           "--samples", "4001", "--xmin", "-10", "--xmax", "10")
    rows = _csv(out)
    R = [float(r["R"]) for r in rows]
    i = min(range(len(R)), key=lambda k: abs(R[k]))
    assert abs(float(rows[i]["psi"])) < abs(max(float(r["psi"]) for r in rows)) * 1e-2


def test_wavefunction_saturation_flag():
    code, out, _ = run_cli("wavefunction", "--model", "oned1", "-B", "1", "-C", "1", "-j", "0",
                           "--xmin", "-50", "--xmax", "0", "--samples", "3")
    rows = _csv(out)
    assert rows[0]["saturated"] == "true"
    assert rows[-1]["saturated"] == "false"


def test_wavefunction_2d():
    d = run_json("wavefunction", "--model", "twod1", "-A", "1", "-B", "-1", "-C", "1", "-j", "1",
                 "--kmax", "0", "--samples", "5", "--ysamples", "3")
    assert d["schema"] == "qesdw/wavefunction2d/v1"


def test_2d_examples():
    d = run_json("2d", "--model", "twod1", "-A", "1", "-B", "-1", "-C", "1", "-j", "1", "--kmax", "0")
    assert sorted(L["E_total"] for L in d["levels"]) == pytest.approx([d["E0"] - 2, d["E0"] + 2])
    d = run_json("2d", "--model", "twod1", "-A", "1", "-B", "1", "-j", "1", "--kmax", "0")
    assert d["levels"] == [] and d["complex_root_count"] == 2
    d = run_json("2d", "--model", "twod2", "--jx", "0", "--jy", "0",
                 "--A1", "1", "--A2", "1", "--B1", "1", "--B2", "1")
    assert len(d["levels"]) == 1


def test_oracle_harmonic():
    d = run_json("oracle", "--harmonic", "-C", "2")
    assert [r["exact"] for r in d["rows"]] == [2.0, 6.0, 10.0]
    assert max(r["error"] for r in d["rows"]) <= 1e-6


def test_oracle_contrast():
    code, out, _ = run_cli("oracle", "--model", "oned1", "-B", "1", "-C", "1", "-j", "0",
                           "--n", "1000", "--format", "csv")
    assert code == 0
    assert "normalizability" in out.splitlines()[0]


def test_verify_default_ok():
    code, out, _ = run_cli("verify")
    assert code == 0
    lines = out.splitlines()[2:]
    assert lines and all(line.startswith("ok") for line in lines)


def test_verify_impossible_tolerance_fails():
    code, out, _ = run_cli("verify", "--tol", "1e-20", "--skip", "oracle,algebra")
    assert code == 1
    assert any(line.startswith("FAIL") and "residual" in line for line in out.splitlines())


def test_verify_skip():
    code, out, _ = run_cli("verify", "--skip", "oracle")
    assert code == 0 and "oracle" not in out
    d = run_json("verify", "--skip", "oracle", "--skip", "residual,gauge")
    assert {c["group"] for c in d["checks"]}.isdisjoint({"oracle", "residual", "gauge"})


def test_formats_and_output_file(tmp_path):
    base = ("spectrum", "--model", "oned1", "-B", "1", "-C", "1", "-j", "2")
    for fmt in ("json", "csv", "table"):
        target = tmp_path / f"out.{fmt}"
        code, out, _ = run_cli(*base, "--format", fmt, "-o", target)
        assert code == 0 and out == ""
        assert target.read_text() == run_cli(*base, "--format", fmt)[1]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nmodel = oned1\nB = 1\nC = 1\nj = 1\n")
    d = run_json("spectrum", "--config", cfg)
    assert len(d["eps_roots"]) == 2
    d = run_json("spectrum", "--config", cfg, "-j", "0")
    assert d["j"] == 0
    cfg.write_text("model oned1\n")
    assert run_cli("spectrum", "--config", cfg)[0] == 2


def test_sweep_parallel_matches_serial():
    base = ("spectrum", "--model", "oned2", "-B", "1.3", "-C", "0.8", "-j", "0", "1", "2", "3")
    serial = run_cli(*base)
    parallel = run_cli(*base, "--parallel")
    assert serial[0] == parallel[0] == 0
    assert serial[1] == parallel[1]
    assert [d["j"] for d in json.loads(serial[1])] == [0, 1, 2, 3]


def test_discrepancy_log(tmp_path):
    log = tmp_path / "disc.json"
    code, _, _ = run_cli("spectrum", "--model", "oned2", "-B", "2", "-C", "1", "--discrepancy-log", log)
    assert code == 0
    d = json.loads(log.read_text())
    topics = {e["topic"] for e in d["entries"]}
    assert {"oned2-table-j2", "oned2-table-j3", "twod1-potential"} <= topics


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "qesdw", "spectrum", "--model", "oned2",
                        "-B", "2", "-C", "1"], capture_output=True, text=True, check=False)
    assert p.returncode == 0
    assert json.loads(p.stdout)["schema"] == "qesdw/spectrum/v1"


def test_version():
    p = subprocess.run([sys.executable, "-m", "qesdw", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("qesdw ")
