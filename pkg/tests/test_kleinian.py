"""Kleinian wp values, parity, periodicity, and the addition formula."""

import numpy as np
import pytest

from g2sigma import CurvePoint, abel_pair, check_addition_formula, wp, wp3
from g2sigma.errors import OnThetaDivisor


@pytest.fixture(scope="module")
def u_pair(ctx):
    P1 = CurvePoint(3.0, np.sqrt(120.0 + 0.0j))
    P2 = CurvePoint(4.0, np.sqrt(720.0 + 0.0j))
    return abel_pair(P1, P2, ctx)


def _cell_point(ctx, rng):
    return ctx.pd.omega1 @ rng.uniform(-0.35, 0.35, 2) + ctx.pd.omega2 @ rng.uniform(-0.35, 0.35, 2)


def test_wp_values_at_known_pair(ctx, u_pair):
    assert abs(wp(u_pair, (2, 2), ctx) - 7.0) < 1e-5
    assert abs(wp(u_pair, (1, 2), ctx) + 12.0) < 1e-5


def test_wp_random_pairs_sum_product(ctx, rng):
    curve = ctx.pd.curve
    for _ in range(3):
        xa, xb = rng.uniform(2.5, 6.0, 2) * np.exp(1j * rng.uniform(-np.pi, np.pi, 2))
        Pa = CurvePoint(xa, np.sqrt(complex(curve.f(xa))))
        Pb = CurvePoint(xb, np.sqrt(complex(curve.f(xb))))
        u = abel_pair(Pa, Pb, ctx)
        assert abs(wp(u, (2, 2), ctx) - (xa + xb)) < 1e-5 * max(1.0, abs(xa + xb))
        assert abs(wp(u, (1, 2), ctx) + xa * xb) < 1e-5 * max(1.0, abs(xa * xb))


def test_wp_even_and_periodic(ctx, rng):
    u = _cell_point(ctx, rng)
    for idx in ((1, 1), (1, 2), (2, 2)):
        a = wp(u, idx, ctx)
        assert abs(wp(-u, idx, ctx) - a) < 1e-8 * max(1.0, abs(a))
        for gen in range(4):
            m = [gen == 0, gen == 1]
            n = [gen == 2, gen == 3]
            ell = ctx.pd.omega1 @ np.array(m, float) + ctx.pd.omega2 @ np.array(n, float)
            assert abs(wp(u + ell, idx, ctx) - a) < 1e-6 * max(1.0, abs(a))


def test_wp_rejects_theta_divisor(ctx):
    with pytest.raises(OnThetaDivisor):
        wp(np.zeros(2), (2, 2), ctx)


def test_wp3_odd(ctx, rng):
    u = _cell_point(ctx, rng)
    for idx in ((2, 2, 2), (1, 2, 2), (1, 1, 2), (1, 1, 1)):
        a = wp3(u, idx, ctx)
        assert abs(wp3(-u, idx, ctx) + a) < 1e-6 * max(1.0, abs(a))


def test_wp3_matches_fd_of_wp(ctx, rng):
    u = _cell_point(ctx, rng)
    h = 1e-5
    e2 = np.array([0.0, 1.0])
    fd = (wp(u + h * e2, (2, 2), ctx) - wp(u - h * e2, (2, 2), ctx)) / (2 * h)
    a = wp3(u, (2, 2, 2), ctx)
    assert abs(fd - a) < 1e-5 * max(1.0, abs(a))
    # mixed-index consistency: d1 of wp22 equals wp{1,2,2}
    e1 = np.array([1.0, 0.0])
    fd_m = (wp(u + h * e1, (2, 2), ctx) - wp(u - h * e1, (2, 2), ctx)) / (2 * h)
    b = wp3(u, (1, 2, 2), ctx)
    assert abs(fd_m - b) < 1e-5 * max(1.0, abs(b))


def test_addition_formula(ctx, rng):
    count = 0
    while count < 20:
        u = _cell_point(ctx, rng)
        v = _cell_point(ctx, rng)
        try:
            res = check_addition_formula(u, v, ctx)
        except OnThetaDivisor:
            continue
        assert res < 1e-6
        count += 1
