import json

import pytest

from fqlcu.cli import SCAN_HEADER, main
from fqlcu.hamiltonians import gen_random_dense, write_fcidump


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_random_summary(capsys, tmp_path):
    coeffs = tmp_path / "c.csv"
    code, out, _ = run(capsys, "decompose", "--random", "--dim", "4", "--seed", "1",
                       "--coeffs", str(coeffs))
    doc = json.loads(out)
    assert code == 0 and doc["nnz_two_unique"] <= 45 and doc["kind"] == "general"
    assert doc["lambda_total"] == pytest.approx(doc["lambda_block"], rel=1e-12)
    assert coeffs.read_text().startswith("# one\n")


def test_decompose_ueg_reports_zero_lambda_u(capsys):
    code, out, _ = run(capsys, "decompose", "--ueg", "--grid", "2", "--n", "14", "--rs", "5")
    doc = json.loads(out)
    assert code == 0 and doc["lambda_U"] == 0.0 and doc["kind"] == "diagonal"


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "decompose", "--fcidump", str(tmp_path / "missing"))
    assert code == 2 and "no such file" in err


def test_fcidump_source(capsys, tmp_path):
    f = tmp_path / "FCIDUMP"
    write_fcidump(gen_random_dense(2, 0), f, nelec=3)
    code, out, _ = run(capsys, "decompose", "--fcidump", str(f))
    assert code == 0 and json.loads(out)["N"] == 3


def test_estimate_modes(capsys):
    base = ["estimate", "--ueg", "--grid", "4", "--n", "14", "--rs", "5"]
    _, out_q, _ = run(capsys, *base, "--mode", "min-qu")
    _, out_t, _ = run(capsys, *base, "--mode", "min-t")
    q, t = json.loads(out_q), json.loads(out_t)
    assert q["kappa1"] == 1 and t["kappa1"] >= 1
    assert q["eps"]["trunc"] == 0.0
    assert q["logical_qubits"] <= t["logical_qubits"]
    assert t["total_toffoli"] <= q["total_toffoli"]
    walk = sum(r["toffoli"] or 0 for r in q["rows"] if r["section"] == "walk")
    assert q["total_toffoli"] == (walk + 2) * q["iterations"]


def test_estimate_min_t_picks_kappa_above_one_at_d512(capsys):
    _, out, _ = run(capsys, "estimate", "--ueg", "--grid", "8", "--n", "14", "--rs", "5",
                    "--mode", "min-t")
    assert json.loads(out)["kappa1"] > 1


def test_estimate_usage_errors(capsys):
    assert run(capsys, "estimate", "--random", "--eps-tot", "0")[0] == 2
    assert run(capsys, "estimate", "--random", "--eps-tot", "-1")[0] == 2
    assert run(capsys, "estimate", "--random", "--kappa1", "3")[0] == 2


def test_estimate_zero_lambda_exit_3(capsys, tmp_path):
    f = tmp_path / "FCIDUMP"
    f.write_text(" &FCI NORB=2,NELEC=2,\n &END\n1.0 1 1 0 0\n1.0 2 2 0 0\n")
    code, _, err = run(capsys, "estimate", "--fcidump", str(f))
    assert code == 3 and "zero" in err


def test_binary_handoff(capsys, tmp_path):
    b = tmp_path / "lcu.bin"
    run(capsys, "decompose", "--random", "--dim", "4", "--n", "3", "--binary", str(b))
    _, direct, _ = run(capsys, "estimate", "--random", "--dim", "4", "--n", "3")
    _, via, _ = run(capsys, "estimate", "--lcu-in", str(b))
    d, v = json.loads(direct), json.loads(via)
    assert d["total_toffoli"] == v["total_toffoli"] and d["logical_qubits"] == v["logical_qubits"]
    assert run(capsys, "estimate", "--lcu-in", str(tmp_path / "nope"))[0] == 2


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--random", "--dim", "2", "--n", "2", "--seed", "7")
    assert code == 0 and "FAIL" not in out
    line = next(l for l in out.splitlines() if "lcu reconstruction" in l)
    assert float(line.split("deviation=")[1].split()[0]) < 1e-10
    code, out, _ = run(capsys, "verify", "--diag", "--grid", "2", "--n", "2")
    assert code == 0 and out.count("PASS") == 6


def test_verify_guard_exit_4(capsys):
    code, _, err = run(capsys, "verify", "--dim", "8", "--n", "5")
    assert code == 4 and "guard" in err
    assert run(capsys, "verify", "--dim", "16", "--n", "4")[0] == 4


def test_scan_random_dense(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FQLCU_THREADS", "2")
    out = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--system", "random-dense", "--dims", "16,4,8",
                     "--seeds", "0,1", "--n", "4", "--out", str(out))
    text = out.read_text()
    lines = text.splitlines()
    assert code == 0 and lines[0] == SCAN_HEADER
    rows = [l.split(",") for l in lines[2:] if not l.startswith("#")]
    assert [(r[1], r[2]) for r in rows] == [(d, s) for d in ("4", "8", "16") for s in ("0", "1")]
    fits = {l.split()[2]: float(l.split("exponent=")[1].split()[0])
            for l in lines if l.startswith("# fit")}
    assert "nnz" in fits and "lambda_2" in fits
    # byte-identical rerun with a different pool size
    monkeypatch.setenv("FQLCU_THREADS", "1")
    out2 = tmp_path / "scan2.csv"
    run(capsys, "scan", "--system", "random-dense", "--dims", "4,8,16", "--seeds", "0,1",
        "--n", "4", "--out", str(out2))
    assert out2.read_text() == text


def test_scan_ueg_lambda_u_zero_and_warning(capsys):
    code, out, err = run(capsys, "scan", "--system", "ueg", "--grids", "2", "--n", "14")
    assert code == 0 and "fit skipped" in err
    row = out.splitlines()[2].split(",")
    assert float(row[7]) == 0.0


def test_scan_bad_config(capsys):
    assert run(capsys, "scan", "--system", "random-dense")[0] == 2
    assert run(capsys, "scan", "--system", "random-dense", "--dims", "6")[0] == 2


def test_deterministic_decompose(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for p in (a, b):
        run(capsys, "decompose", "--random", "--dim", "8", "--seed", "3", "--coeffs", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "fqlcu", "verify", "--dim", "8", "--n", "5"],
                       capture_output=True, text=True)
    assert r.returncode == 4 and r.stdout == ""
