"""Abel map paths, asymptotics at infinity, and coordinate recovery."""

import numpy as np
import pytest

from g2sigma import CurvePoint, abel_from_chart, abel_pair, abel_point, chart_point, curve_coords, lattice_reduce, sigma
from g2sigma.errors import NotOnThetaDivisor, OriginSingular, PathThroughBranchPoint


def test_infinity_maps_to_zero(ctx):
    res = abel_point(CurvePoint.infinity(), ctx)
    assert np.abs(res.u).max() == 0.0


def test_chart_asymptotics(curve):
    # u2 = t + O(t^3), u1 = u2^3/3 + O(u2^4) along the chart through infinity
    for t in (1e-2, 1e-3):
        u, P = abel_from_chart(curve, t)
        assert abs(u[1] / t - 1.0) < 5e-4
        assert abs(u[0] / (u[1] ** 3 / 3.0) - 1.0) < 1e-2
        # chart branch: x = 1/t^2, y = -1/t^5 (1 + O(t^2))
        assert abs(P.x * t**2 - 1.0) < 1e-12
        assert abs(P.y * t**5 + 1.0) < 1e-2


def test_sigma_vanishes_on_abel_image(ctx):
    P = CurvePoint(3.0, np.sqrt(120.0 + 0.0j))
    res = abel_point(P, ctx)
    assert abs(sigma(res.u, ctx)) < 1e-8 * ctx.sigma_scale()


def test_path_through_branch_point_rejected(ctx):
    with pytest.raises(PathThroughBranchPoint):
        abel_point(CurvePoint(2.0 + 1e-10, 1e-5), ctx)


def test_path_invariance_mod_lattice(ctx):
    P = CurvePoint(-3.0 + 2.0j, np.sqrt(complex(ctx.pd.curve.f(-3.0 + 2.0j))))
    u_a = abel_point(P, ctx).u
    u_b = abel_point(P, ctx, alt_path=True).u
    diff, _, _ = lattice_reduce(u_a - u_b, ctx.pd)
    assert np.abs(diff).max() < 1e-6


def test_pair_symmetric_and_infinity_neutral(ctx):
    P1 = CurvePoint(3.0, np.sqrt(120.0 + 0.0j))
    P2 = CurvePoint(4.0, np.sqrt(720.0 + 0.0j))
    assert np.abs(abel_pair(P1, P2, ctx) - abel_pair(P2, P1, ctx)).max() < 1e-10
    assert np.abs(abel_pair(P1, CurvePoint.infinity(), ctx) - abel_point(P1, ctx).u).max() < 1e-12


def test_involution_pair_is_lattice_point(ctx):
    P = CurvePoint(3.0, np.sqrt(120.0 + 0.0j))
    u = abel_pair(P, P.conjugate_sheet(), ctx)
    u_red, _, _ = lattice_reduce(u, ctx.pd)
    assert np.abs(u_red).max() < 1e-6


def test_curve_coords_inverts_abel(ctx):
    for xv in (3.0, 4.0, -3.5 + 1.0j):
        P = CurvePoint(xv, np.sqrt(complex(ctx.pd.curve.f(xv))))
        res = abel_point(P, ctx)
        x, y = curve_coords(res.u, ctx)
        assert abs(x - P.x) < 1e-6 * max(1.0, abs(P.x))
        assert abs(y - P.y) < 1e-6 * max(1.0, abs(P.y))


def test_curve_coords_asymptotics(ctx):
    # x(u) ~ 1/u2^2 and y(u) ~ -1/u2^5 near the origin of the Abel image
    for t in (1e-2, 1e-3):
        u, _ = abel_from_chart(ctx.pd.curve, t)
        x, y = curve_coords(u, ctx)
        assert abs(x * u[1] ** 2 - 1.0) < 1e-2
        assert abs(y * u[1] ** 5 + 1.0) < 1e-2


def test_curve_coords_domain_errors(ctx, rng):
    with pytest.raises(OriginSingular):
        curve_coords(np.zeros(2), ctx)
    # generic points are off the Abel image
    u = ctx.pd.omega1 @ [0.31, -0.17] + ctx.pd.omega2 @ [0.23, 0.11]
    with pytest.raises(NotOnThetaDivisor):
        curve_coords(u, ctx)


def test_chart_point_satisfies_curve(curve):
    P = chart_point(curve, 0.05)
    assert abs(P.y**2 - curve.f(P.x)) < 1e-6 * abs(P.y) ** 2
