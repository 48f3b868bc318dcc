"""Command-line interface: exit codes, output formats, caching."""

import json

import numpy as np
import pytest

from g2sigma.cli import main


@pytest.fixture(scope="module")
def curve_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "curve.json"
    lam = [[0.0, 0.0], [4.0, 0.0], [0.0, 0.0], [-5.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    path.write_text(json.dumps({"lambda": lam}))
    return str(path)


def test_periods_command(curve_file, tmp_path, capsys):
    cache = str(tmp_path / "cache.json")
    assert main(["periods", "--curve", curve_file, "--cache", cache]) == 0
    out = capsys.readouterr().out
    assert "modulus Z" in out
    doc = json.loads(open(cache).read())
    assert doc["quad_order"] == 192 and "c" in doc


def test_missing_curve_file_exit_1(tmp_path):
    assert main(["periods", "--curve", str(tmp_path / "nope.json")]) == 1


def test_bad_curve_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    lam = [[0.0, 0.0]] * 5 + [[2.0, 0.0]]
    path.write_text(json.dumps({"lambda": lam}))
    assert main(["periods", "--curve", str(path)]) == 2


def test_complex_branch_exit_2(tmp_path):
    path = tmp_path / "cplx.json"
    lam = [[2.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    path.write_text(json.dumps({"lambda": lam}))
    assert main(["periods", "--curve", str(path)]) == 2


def test_eval_sigma_origin(curve_file, capsys):
    assert main(["eval", "sigma", "--curve", curve_file, "--u", "0,0,0,0"]) == 0
    out = capsys.readouterr().out.strip()
    re_part, im_part = json.loads(out)
    assert abs(complex(re_part, im_part)) < 1e-10


def test_eval_psi_point(curve_file, capsys):
    assert main(["eval", "psi", "--curve", curve_file, "--n", "2", "--point", "3,0"]) == 0
    out = capsys.readouterr().out.strip()
    value = complex(*json.loads(out))
    assert abs(value - 2 * np.sqrt(120.0)) < 1e-5


def test_eval_wp_pair(curve_file, capsys):
    code = main(["eval", "wp", "--curve", curve_file, "--idx", "22",
                 "--point", "3,0", "--point2", "4,0"])
    assert code == 0
    value = complex(*json.loads(capsys.readouterr().out.strip()))
    assert abs(value - 7.0) < 1e-5


def test_eval_wp_on_divisor_exit_4(curve_file, capsys):
    # the origin lies on the theta divisor: domain error
    assert main(["eval", "wp", "--curve", curve_file, "--idx", "22", "--u", "0,0,0,0"]) == 4


def test_verify_pass_and_report(curve_file, tmp_path, capsys):
    report = str(tmp_path / "report.json")
    code = main(["verify", "--curve", curve_file, "--fs-n", "2", "--kiepert-n", "2,3",
                 "--report", report])
    assert code == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    doc = json.loads(open(report).read())
    assert doc["reports"] and all("residual" in r for r in doc["reports"])


def test_verify_fail_exit_5(curve_file, capsys):
    code = main(["verify", "--curve", curve_file, "--tol", "1e-14", "--eps", "1e-15",
                 "--fs-n", "2", "--kiepert-n", "2"])
    assert code == 5


def test_verify_uses_cache(curve_file, tmp_path, capsys):
    cache = str(tmp_path / "cache.json")
    assert main(["periods", "--curve", curve_file, "--cache", cache]) == 0
    capsys.readouterr()
    code = main(["verify", "--curve", curve_file, "--cache", cache,
                 "--fs-n", "2", "--kiepert-n", "2"])
    assert code == 0


def test_bad_flag_values_exit_1(curve_file):
    assert main(["verify", "--curve", curve_file, "--fs-n", "9"]) == 1
    assert main(["verify", "--curve", curve_file, "--eps", "1e-3", "--tol", "1e-5"]) == 1
