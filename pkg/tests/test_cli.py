import json
import os
import subprocess
import sys

import numpy as np
import pytest

from fracsub.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    return lines[0], [list(map(float, l.split(","))) for l in lines[1:]]


# ------------------------------------------------------------------ evaluation commands

def test_stable_pdf_row(capsys):
    code, out, _ = run(["stable-pdf", "--alpha", "2", "--theta", "0", "--x", "0"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == "x,u"
    assert data[0][1] == pytest.approx(0.2820947918, abs=1e-10)
    assert len(out.splitlines()[1].split(",")[1].replace("0.", "", 1)) >= 16


def test_mlf_and_wright(capsys):
    code, out, _ = run(["mlf", "--alpha", "1", "--z", "-1", "0"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == "z,value" and data[0][1] == pytest.approx(np.exp(-1), rel=1e-15)
    code, out, _ = run(["wright", "--nu", "0.5", "--kind", "F", "--z", "1"], capsys)
    assert code == 0 and rows(out)[1][0][1] == pytest.approx(0.2196956447, abs=1e-10)


def test_green_table_mass_footer(capsys):
    code, out, _ = run(["green", "--alpha", "1.5", "--beta", "0.9", "--x-min", "-40",
                        "--x-max", "40", "--num", "801"], capsys)
    assert code == 0
    footer = [l for l in out.splitlines() if l.startswith("# mass=")]
    assert footer
    mass = float(footer[0].split()[1].split("=")[1])
    assert abs(mass - 1) < 1e-2


def test_green_mass_failure_exits_4(capsys):
    code, _, err = run(["green", "--alpha", "1.5", "--beta", "0.9", "--x-min", "0",
                        "--x-max", "1", "--num", "11"], capsys)
    assert code == 4 and "mass" in err
    code, _, _ = run(["green", "--alpha", "1.5", "--beta", "0.9", "--x-min", "0",
                      "--x-max", "1", "--num", "11", "--no-mass-check"], capsys)
    assert code == 0


def test_drift(capsys):
    code, out, _ = run(["drift", "--beta", "0.5", "--x", "1", "-0.5"], capsys)
    assert code == 0
    _, data = rows(out)
    assert data[0][1] == pytest.approx(0.4393912894, abs=1e-10) and data[1][1] == 0.0


def test_exit_codes(capsys):
    assert run(["stable-pdf", "--alpha", "3", "--x", "0"], capsys)[0] == 3
    assert run(["stable-pdf", "--alpha", "1", "--theta", "1", "--x", "0"], capsys)[0] == 3
    assert run(["drift", "--beta", "1", "--x", "1"], capsys)[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["stable-pdf", "--theta", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--alpha", "2", "--beta", "0.8", "--tau-star", "-1"])
    assert exc.value.code == 2


# ------------------------------------------------------------------ files and metadata

def test_output_dir_and_meta(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FRACSUB_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(["stable-pdf", "--alpha", "1.5", "--x", "0.5", "1", "-o", "sub/pdf.csv"],
                       capsys)
    assert code == 0 and out == ""
    csv = tmp_path / "sub" / "pdf.csv"
    assert csv.read_bytes().count(b"\r") == 0
    meta = json.loads((tmp_path / "sub" / "pdf.csv.meta.json").read_text())
    assert meta["config"]["alpha"] == 1.5 and meta["config"]["command"] == "stable-pdf"
    run(["stable-pdf", "--alpha", "1.5", "--x", "1", "-o", "bare.csv", "--no-meta"], capsys)
    assert not (tmp_path / "bare.csv.meta.json").exists()


def test_simulate_rows_and_determinism(tmp_path, capsys):
    args = ["simulate", "--alpha", "1.5", "--theta", "0", "--beta", "0.9", "--tau-star", "1",
            "--steps", "10000", "--seed", "42"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["-o", str(a)], capsys)[0] == 0
    assert run(args + ["-o", str(b)], capsys)[0] == 0
    text = a.read_text()
    assert text.splitlines()[0] == "n,t_star,t,x"
    assert len(text.splitlines()) == 10002
    assert a.read_bytes() == b.read_bytes()


def test_simulate_multi_path_workers(tmp_path, capsys):
    base = ["simulate", "--alpha", "2", "--beta", "0.8", "--tau-star", "0.01", "--steps",
            "200", "--seed", "3", "--paths", "4", "--plot", "subordinated"]
    assert run(base + ["-o", str(tmp_path / "one" / "p.csv")], capsys)[0] == 0
    assert run(base + ["--workers", "4", "-o", str(tmp_path / "four" / "p.csv")], capsys)[0] == 0
    for k in range(4):
        a = (tmp_path / "one" / f"p_{k}.csv").read_bytes()
        b = (tmp_path / "four" / f"p_{k}.csv").read_bytes()
        assert a == b and a.startswith(b"t,x\n")
    meta = json.loads((tmp_path / "one" / "p.csv.meta.json").read_text())
    assert meta["files"] == [f"p_{k}.csv" for k in range(4)]
    assert run(base, capsys)[0] == 3  # several paths need --output


def test_plot_and_lint(tmp_path, capsys):
    files = []
    for kind in ("leading", "parent", "subordinated"):
        f = tmp_path / f"{kind}.csv"
        assert run(["simulate", "--alpha", "1.5", "--beta", "0.9", "--steps", "100",
                    "--plot", kind, "-o", str(f)], capsys)[0] == 0
        files.append(str(f))
    code, out, _ = run(["lint", files[0], "--monotone", "--require-waiting"], capsys)
    assert code == 0 and out.strip().endswith("ok")
    assert run(["lint"] + files[1:] + ["--require-waiting"], capsys)[0] == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x\n0,0\n1,1\n2,2\n")
    assert run(["lint", str(bad)], capsys)[0] == 1


def test_invert(capsys):
    code, out, _ = run(["invert", "--alpha", "2", "--beta", "0.7", "--steps", "50"], capsys)
    assert code == 0
    header, data = rows(out)
    assert header == "t,t_star" and len(data) == 101
    ts = np.array(data)[:, 1]
    assert np.all(np.diff(ts) >= 0)


def test_verify_small(tmp_path, capsys):
    out = tmp_path / "v.json"
    args = ["verify", "--alpha", "2", "--beta", "0.8", "--t", "1", "--paths", "2000",
            "--tau-star", "1e-2", "--seed", "7", "--omit-timing", "--ks-tol", "0.05"]
    code, _, _ = run(args + ["-o", str(out)], capsys)
    rep = json.loads(out.read_text())
    assert set(rep) == {"params", "n_paths", "tau_star", "t_obs", "ks_sup", "pass", "seed",
                        "runtime_s"}
    assert rep["runtime_s"] is None and rep["n_paths"] == 2000
    assert code == (0 if rep["pass"] else 1)
    assert rep["pass"]
    again = tmp_path / "w.json"
    run(args + ["--workers", "2", "-o", str(again)], capsys)
    assert again.read_bytes() == out.read_bytes()
    code, _, _ = run(args[:-2] + ["--ks-tol", "1e-9", "-o", str(out)], capsys)
    assert code == 1


def test_console_script_entry_point(tmp_path):
    env = dict(os.environ)
    res = subprocess.run([sys.executable, "-m", "fracsub.cli", "stable-pdf", "--alpha", "1",
                          "--x", "1"], capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1].startswith("1,0.15915494309189")
