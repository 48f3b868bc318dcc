"""Period matrices, lattice reduction, and the JSON cache."""

import numpy as np
import pytest

from g2sigma import compute_periods, lattice_reduce, load_period_cache, make_curve, save_period_cache
from g2sigma.errors import UnsupportedBranchConfiguration
from g2sigma.periods import loop_integral_ellipse, segment_integrals


def test_modulus_symmetric_and_positive(pd):
    Z = pd.modulus
    assert np.abs(Z - Z.T).max() < 1e-9
    eigs = np.linalg.eigvalsh(Z.imag)
    assert eigs.min() > 0


def test_quadrature_stability(curve):
    a = segment_integrals(curve, 192)
    b = segment_integrals(curve, 384)
    assert np.abs(2 * a - 2 * b).max() < 1e-10


def test_pairing_identity(pd):
    pairing = pd.legendre_pairing() / (2j * np.pi)
    assert np.abs(pairing - np.eye(2)).max() < 1e-8


def test_loop_oracle_matches_doubled_segment(curve):
    segs = 2.0 * segment_integrals(curve, 384)
    for k in range(4):
        loop = loop_integral_ellipse(curve, k, rho=0.05)
        d = min(np.abs(loop - segs[k]).max(), np.abs(loop + segs[k]).max())
        assert d < 1e-7


def test_loop_oracle_contour_independence(curve):
    a = loop_integral_ellipse(curve, 1, rho=0.05)
    b = loop_integral_ellipse(curve, 1, rho=0.055)
    assert np.abs(a - b).max() < 1e-9


def test_complex_branch_points_rejected():
    curve = make_curve([2.0, 0, 0, 0, 0, 1])  # x^5 + 2 has one real root only
    with pytest.raises(UnsupportedBranchConfiguration):
        compute_periods(curve)


def test_lattice_reduce_lattice_points(pd, rng):
    for _ in range(20):
        m = rng.integers(-3, 4, size=2)
        n = rng.integers(-3, 4, size=2)
        u = pd.omega1 @ m + pd.omega2 @ n
        u_red, m_out, n_out = lattice_reduce(u, pd)
        assert np.abs(u_red).max() < 1e-8
        assert np.array_equal(m_out, m) and np.array_equal(n_out, n)


def test_lattice_reduce_idempotent(pd, rng):
    u = pd.omega1 @ rng.uniform(-0.4, 0.4, 2) + pd.omega2 @ rng.uniform(-0.4, 0.4, 2)
    u_red, m, n = lattice_reduce(u, pd)
    assert np.abs(u_red - u).max() < 1e-12
    assert not m.any() and not n.any()
    # shifted copy reduces back to the same representative
    u2, _, _ = lattice_reduce(u + pd.omega1 @ [3, -2], pd)
    assert np.abs(u2 - u_red).max() < 1e-9


def test_cache_round_trip(pd, tmp_path):
    path = tmp_path / "cache.json"
    save_period_cache(pd, path, c=0.5 + 0.0j, eps=1e-12)
    pd2, c, eps = load_period_cache(path, pd.curve)
    assert c == 0.5 + 0.0j and eps == 1e-12
    for name in ("omega1", "omega2", "eta1", "eta2", "modulus"):
        assert np.array_equal(getattr(pd, name), getattr(pd2, name))


def test_cache_rejects_other_curve(pd, tmp_path):
    path = tmp_path / "cache.json"
    save_period_cache(pd, path)
    other = make_curve([0.0, 6.0, 0, -5.5, 0, 1])
    with pytest.raises(ValueError):
        load_period_cache(path, other)
