"""psi functions, determinant identities, and the verification suite."""

import json

import numpy as np
import pytest

from g2sigma import (
    CurvePoint,
    SuiteConfig,
    abel_point,
    check_limit_lemma31,
    fs_det,
    fs_lhs,
    kiepert_det,
    psi,
    run_suite,
    write_report,
)
from g2sigma.errors import NotOnThetaDivisor


def _image_point(ctx, xv):
    P = CurvePoint(xv, np.sqrt(complex(ctx.pd.curve.f(xv))))
    return abel_point(P, ctx), P


def test_psi_small_n(ctx):
    res, P = _image_point(ctx, 3.0)
    assert abs(psi(2, res.u, ctx) - 2 * P.y) < 1e-6 * abs(2 * P.y)
    assert abs(psi(3, res.u, ctx) + 8 * P.y**3) < 1e-6 * abs(8 * P.y**3)


def test_psi_periodic(ctx):
    res, _ = _image_point(ctx, 3.5)
    ell = ctx.pd.omega1 @ [1.0, 0.0] + ctx.pd.omega2 @ [0.0, 1.0]
    a = psi(3, res.u, ctx)
    assert abs(psi(3, res.u + ell, ctx) - a) < 1e-6 * abs(a)


def test_psi_rejects_generic_point(ctx):
    u = ctx.pd.omega1 @ [0.27, -0.13] + ctx.pd.omega2 @ [0.19, 0.08]
    with pytest.raises(NotOnThetaDivisor):
        psi(2, u, ctx)


def test_two_point_quotient_is_x_difference(ctx):
    ra, Pa = _image_point(ctx, 3.0)
    rb, Pb = _image_point(ctx, -4.0)
    val = fs_lhs([ra.u, rb.u], ctx)
    assert abs(val - (Pb.x - Pa.x)) < 1e-6 * abs(Pb.x - Pa.x)
    det = fs_det([ra.u, rb.u], ctx)
    assert abs(det - (Pb.x - Pa.x)) < 1e-6 * abs(Pb.x - Pa.x)


def test_fs_ratio_and_permutation(ctx):
    pts = [_image_point(ctx, xv)[0].u for xv in (3.0, -4.0, 2.6 + 1.2j)]
    ratio = fs_det(pts, ctx) / fs_lhs(pts, ctx)
    assert abs(ratio - 1.0) < 1e-5
    # a transposition flips both sides identically
    swapped = [pts[1], pts[0], pts[2]]
    assert abs(fs_det(swapped, ctx) + fs_det(pts, ctx)) < 1e-6 * abs(fs_det(pts, ctx))
    ratio2 = fs_det(swapped, ctx) / fs_lhs(swapped, ctx)
    assert abs(ratio2 - 1.0) < 1e-5


def test_kiepert_small_cases(ctx):
    res, P = _image_point(ctx, 3.0)
    # n = 2: 1x1 determinant, magnitude equals |psi_2| = |2y|
    for j in (1, 2):
        val = kiepert_det(res.u, 2, j, ctx)
        assert abs(abs(val) - abs(2 * P.y)) < 1e-6 * abs(2 * P.y)
    # n = 3, j = 2: value is 16 y^3 = -2 psi_3
    val = kiepert_det(res.u, 3, 2, ctx)
    assert abs(val - 16 * P.y**3) < 1e-6 * abs(16 * P.y**3)


def test_limit_quotient(ctx):
    P = CurvePoint(3.0, np.sqrt(120.0 + 0.0j))
    residuals = check_limit_lemma31(P, ctx, [1e-2, 1e-3, 1e-4])
    assert residuals[0] > residuals[1] > residuals[2]
    assert residuals[-1] < 1e-3


def test_run_suite_all_pass(ctx):
    reports = run_suite(ctx, SuiteConfig())
    assert reports
    failed = [r.name for r in reports if not r.passed]
    assert failed == []


def test_run_suite_subset_and_determinism(ctx):
    cfg = SuiteConfig(fs_n=(), kiepert_n=(), samples=3)
    a = run_suite(ctx, cfg)
    b = run_suite(ctx, cfg)
    assert all(not r.name.startswith(("thm23", "thm33")) for r in a)
    assert [(r.name, r.residual) for r in a] == [(r.name, r.residual) for r in b]


def test_run_suite_negative_control(ctx):
    # a tolerance below the double-precision floor must produce failures
    reports = run_suite(ctx, SuiteConfig(tol=1e-14, samples=2, fs_n=(2,), kiepert_n=(2,)))
    assert any(not r.passed for r in reports)


def test_write_report(ctx, tmp_path):
    cfg = SuiteConfig(fs_n=(2,), kiepert_n=(2,), samples=2)
    reports = run_suite(ctx, cfg)
    path = tmp_path / "report.json"
    write_report(reports, cfg, path)
    doc = json.loads(path.read_text())
    assert doc["config"]["fs_n"] == [2]
    assert len(doc["reports"]) == len(reports)
    first = doc["reports"][0]
    assert isinstance(first["lhs"], list) and len(first["lhs"]) == 2
