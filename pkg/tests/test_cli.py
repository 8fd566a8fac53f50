import json
import subprocess
import sys

import pytest

from wedgelab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_delta_csv(capsys):
    code, out, _ = run(capsys, "expand", "--form", "delta", "--prec", "100", "--out", "csv")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 100
    assert rows[0] == "1,1,0" and rows[1] == "2,-24,0"


def test_global_flags_before_command(capsys):
    code, out, _ = run(capsys, "--prec", "5", "expand", "--form", "eta11")
    assert code == 0 and out.splitlines() == ["1,1,0", "2,-2,0", "3,-1,0", "4,2,0", "5,1,0"]


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("WEDGELAB_PREC", "7")
    code, out, _ = run(capsys, "expand", "--form", "delta")
    assert len(out.splitlines()) == 7


def test_precision_prefix_and_determinism(capsys):
    _, small, _ = run(capsys, "expand", "--form", "eta4_6", "--prec", "50")
    _, big, _ = run(capsys, "expand", "--form", "eta4_6", "--prec", "120")
    _, again, _ = run(capsys, "expand", "--form", "eta4_6", "--prec", "120")
    assert big.startswith(small) and big == again


def test_exact_output(capsys):
    code, out, _ = run(capsys, "expand", "--form", "delta", "--prec", "2", "--exact")
    assert out.splitlines() == ["1,1,1", "2,1,-24"]


def test_scan_p_power_recurrence_path(capsys):
    code, out, _ = run(
        capsys, "scan", "--form", "delta", "--subseq", "p-power", "--p", "2", "--j", "1",
        "--theta1", "-0.5", "--theta2", "0.5", "--prec", "1048576", "--out", "json",
    )
    rep = json.loads(out)
    assert code == 0 and rep["scanned"] == 21
    assert len([n for n in rep["escapes"] if n <= 20]) >= 3


def test_scan_csv_and_input(tmp_path, capsys):
    f = tmp_path / "seq.csv"
    f.write_text("1,1,0\n2,-1,0\n3,0,0\n4,2,1\n")
    code, out, _ = run(capsys, "scan", "--input", str(f), "--theta1", "-0.5", "--theta2", "0.5")
    rows = out.splitlines()
    assert rows[0] == "event,i,j"
    assert "escape,2," in rows and "re_change,1,2" in rows and "re_change,2,4" in rows
    code, out, _ = run(capsys, "scan", "--input", str(f), "--theta1", "-0.5", "--theta2", "0.5", "--strict-wedge")
    assert "escape,3," in out.splitlines()


def test_scan_t_square(capsys):
    code, out, _ = run(capsys, "scan", "--form", "theta_8_3", "--subseq", "t-square", "--prec", "400", "--out", "json")
    rep = json.loads(out)
    assert code == 0 and rep["sequence"] == "a(1n^2)"


def test_hecke_json(capsys):
    code, out, _ = run(capsys, "hecke", "--form", "delta", "--p", "2", "--j", "2", "--prec", "200", "--out", "json")
    rep = json.loads(out)
    assert rep["eigen_polynomial"] and not rep["eigen_formula"]
    assert rep["sequence"][1] == [1, -1472]


def test_shimura_csv(capsys):
    code, out, _ = run(capsys, "shimura", "--form", "synth_k6", "--prec", "60", "--terms", "10")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 10 and rows[0] == "1,1,0"


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "--kronecker", "-4", "--prec", "20000", "--s", "2", "--out", "json")
    rep = json.loads(out)
    assert abs(rep["partial_sums"][0]["value"][0] - 0.9159655941772190) <= rep["partial_sums"][0]["tail_bound"]
    assert abs(rep["absolute"]["estimate"] - 1) < 0.1


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--out", "json")
    names = [e["name"] for e in json.loads(out)]
    assert {"delta", "eta11", "eta4_6", "theta_8_3"} <= set(names)


def test_usage_errors(capsys):
    assert run(capsys, "expand", "--form", "no_such_form")[0] == 2
    assert run(capsys, "scan", "--form", "delta", "--theta1", "0", "--theta2", "4")[0] == 2
    assert run(capsys, "scan", "--form", "delta", "--subseq", "p-power")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["hecke", "--form", "delta", "--p", "4"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_computational_failure_exit_code(tmp_path, capsys):
    # eta(z)^16 eta(2z)^4 lies on Gamma0(4) but is not a T(3) eigenfunction,
    # so the recurrence path for a(3^m) must refuse
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps({"kind": "eta_quotient", "factors": [[1, 16], [2, 4]]}))
    code, _, err = run(capsys, "hecke", "--spec", str(spec), "--p", "3", "--terms", "30", "--prec", "50")
    assert code == 1 and "eigenfunction" in err


def test_verify_wedge_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "wedge", "--out", "json")
    rep = json.loads(out)
    assert code == 0 and rep["suite"] == "wedge"
    assert {c["status"] for c in rep["checks"]} <= {"pass", "refuted"}


def test_console_script():
    res = subprocess.run(
        [sys.executable, "-m", "wedgelab.cli", "expand", "--form", "delta", "--prec", "3"],
        capture_output=True, text=True, check=True,
    )
    assert res.stdout == "1,1,0\n2,-24,0\n3,252,0\n"
