import json

import pytest

from baileykit.cli import run


@pytest.fixture
def capture(capsys):
    def go(args):
        code = run(args)
        out = capsys.readouterr()
        return code, out.out, out.err

    return go


def test_list(capture):
    code, out, _ = capture(["list"])
    assert code == 0
    assert "KMRR" in out and "T8PSI8" in out and "constraints" in out


def test_verify_pass_and_fail_codes(capture, tmp_path):
    code, out, _ = capture(["verify", "K1MRR", "--param", "m=5", "--order", "40"])
    assert code == 0 and "pass" in out
    code, out, err = capture(["verify", "KMRR", "--param", "k=0", "--param", "m=1", "--order", "40"])
    assert code == 2


def test_coeffs_golden(capture):
    code, out, _ = capture(["coeffs", "RR1", "--side", "rhs", "--order", "20"])
    assert code == 0
    assert out.splitlines()[:5] == ["0 1", "2 1", "4 1", "6 1", "8 2"]


def test_verify_all_and_exit_codes(capture, tmp_path):
    good = tmp_path / "good.txt"
    good.write_text("RR1 order=60\nKMRR k=2 m=1 order=60\nJTP z=2q order=40\n")
    code, out, _ = capture(["verify-all", "--file", str(good)])
    assert code == 0 and "3/3 passed" in out

    bad = tmp_path / "bad.txt"
    bad.write_text("RR1 order=60\nKMRR k=2 m=$ order=40\n")
    code, _, err = capture(["verify-all", "--file", str(bad)])
    assert code == 2
    assert "line 2" in err and "column" in err


def test_verify_all_jobs_deterministic(capture, tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("RR1 order=60\nRR2 order=60\nK1MRR m=9 order=20\nJTP z=2q order=40\n")
    code1, out1, _ = capture(["verify-all", "--file", str(f), "--jobs", "1"])
    code2, out2, _ = capture(["verify-all", "--file", str(f), "--jobs", "4"])
    assert code1 == code2 == 0
    assert out1 == out2


def test_report_json_schema(capture, tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("RR1 order=60\nT8PSI8 m=1 rho1=2q rho2=3q mu1=2 mu2=3 alpha=3q^2 order=60\n")
    out_path = tmp_path / "report.json"
    code, _, _ = capture(["report", "--file", str(f), "--format", "json", "--out", str(out_path)])
    assert code == 0
    arr = json.loads(out_path.read_text())
    assert [r["id"] for r in arr] == ["RR1", "T8PSI8"]
    for r in arr:
        assert set(r) >= {"id", "params", "order", "status", "terms_summed", "elapsed_ms"}
        assert r["status"] == "pass"
    assert arr[1]["params"]["rho1"] == "2q"
    assert "lam" in arr[1]["params"]  # derived binding reported


def test_env_default_order(capture, monkeypatch):
    monkeypatch.setenv("BAILEYKIT_DEFAULT_ORDER", "40")
    code, out, _ = capture(["verify", "K1MRR", "--param", "m=7"])
    assert code == 0
    monkeypatch.delenv("BAILEYKIT_DEFAULT_ORDER")
    code, _, err = capture(["verify", "K1MRR", "--param", "m=7"])
    assert code == 2


def test_q_order_flag(capture):
    code, out, _ = capture(["verify", "RR1", "--q-order", "20"])
    assert code == 0 and "order=40" in out


def test_verify_fail_exit_code(capture):
    from baileykit.corpus import CORPUS, IdentityDef, ParamSpec, _check_km, _kmrr_build, _product, inv_euler, theta3
    from baileykit.series import TSeries

    def bad_build(b, order, cfg):
        lhs, _ = _kmrr_build(b, order, cfg)
        k, m = b["k"], b["m"]
        rhs = _product(
            [lambda o: theta3(2 * k * (m + 1), 4 * k, o), lambda o: inv_euler(o)], order
        )
        return lhs, rhs

    CORPUS["KMRR_BAD"] = IdentityDef(
        "KMRR_BAD", "series",
        (ParamSpec("k", "pos-int"), ParamSpec("m", "nonneg-int")),
        "negative control", "k >= 1", _check_km, bad_build,
    )
    try:
        code, out, _ = capture(["verify", "KMRR_BAD", "--param", "k=2", "--param", "m=1", "--order", "60"])
        assert code == 1
        assert "FAIL at t^" in out
    finally:
        del CORPUS["KMRR_BAD"]


def test_coeffs_bivariate_rejected(capture):
    code, _, err = capture(["coeffs", "QULTRA_CONN", "--side", "lhs",
                            "--param", "n=2", "--param", "beta=2q", "--param", "c=3q",
                            "--order", "20"])
    assert code == 2 and "bivariate" in err
