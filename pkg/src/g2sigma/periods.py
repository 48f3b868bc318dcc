"""Period matrices of the curve and lattice reduction in C^2.

For five distinct real branch points e1 < ... < e5 the four gap loops
(loops encircling [e1,e2], [e2,e3], [e3,e4], [e4,e5]) generate the
homology of the curve; each loop integral equals twice the straight
segment integral taken on a fixed branch of y = sqrt(f).  A small search
over branch-sign assignments (and over two integer combinations making
the basis symplectic) picks the orientation for which the modulus
Z = omega1^-1 omega2 is symmetric with positive-definite imaginary part
and the first/second-kind pairing has the canonical 2*pi*i normalization.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .curve_ring import Curve, make_curve
from .errors import QuadratureNonConvergent, UnsupportedBranchConfiguration

_REAL_BRANCH_TOL = 1e-9
_STABILITY_TOL = 1e-10
_SYMMETRY_TOL = 1e-9
_MAX_COND = 1e8

# Residue pairing res_inf(eta_j * int(omega_i)) is the identity for the
# form normalization used here; the Riemann bilinear relation then reads
# omega1 @ eta2.T - omega2 @ eta1.T = 2*pi*i * PAIRING_SIGN * I.
TWO_PI_I = 2j * np.pi


@dataclass(frozen=True)
class PeriodData:
    """Cycle integrals of the four basic differentials plus the modulus."""

    omega1: np.ndarray  # 2x2, first kind over alpha-cycles
    omega2: np.ndarray  # 2x2, first kind over beta-cycles
    eta1: np.ndarray  # 2x2, second kind over alpha-cycles
    eta2: np.ndarray  # 2x2, second kind over beta-cycles
    modulus: np.ndarray  # Z = omega1^-1 omega2
    quad_order: int
    curve: Curve

    def lattice_generators(self) -> list[np.ndarray]:
        """The four generators of Lambda as column vectors."""
        return [self.omega1[:, 0], self.omega1[:, 1], self.omega2[:, 0], self.omega2[:, 1]]

    def legendre_pairing(self) -> np.ndarray:
        """omega1 @ eta2.T - omega2 @ eta1.T; canonical value 2*pi*i*I."""
        return self.omega1 @ self.eta2.T - self.omega2 @ self.eta1.T


def _form_values(curve: Curve, x):
    """Integrand numerators [1, x, lam3*x + 2*lam4*x^2 + 3*x^3, x^2] (over 2y)."""
    lam = curve.lam
    return np.stack(
        [
            np.ones_like(x),
            x,
            lam[3] * x + 2 * lam[4] * x**2 + 3 * lam[5] * x**3,
            x**2,
        ]
    )


def segment_integrals(curve: Curve, order: int) -> np.ndarray:
    """Integrals of the four forms over the gaps [e_k, e_{k+1}], k = 1..4.

    The substitution x = c + r*cos(theta) cancels the inverse-square-root
    endpoint singularity of dx/y; y is the principal square root of f,
    which is continuous on each open gap.  Returns shape (4 gaps, 4 forms).
    """
    e = np.array(curve.branch_points)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    theta = 0.5 * np.pi * (nodes + 1.0)
    wt = 0.5 * np.pi * weights
    out = np.empty((4, 4), dtype=complex)
    for k in range(4):
        c = 0.5 * (e[k] + e[k + 1])
        r = 0.5 * (e[k + 1] - e[k])
        x = c + r * np.cos(theta)
        y = np.sqrt(curve.f(x).astype(complex))
        # dx = -r sin(theta) dtheta; orientation is fixed later by the sign search
        jac = -r * np.sin(theta)
        forms = _form_values(curve, x)
        out[k] = (forms * (jac / (2.0 * y)) * wt).sum(axis=1)
    return out


def loop_integral_ellipse(curve: Curve, k: int, rho: float, order: int = 4096) -> np.ndarray:
    """Four form integrals over an ellipse tightly enclosing gap k (0-based).

    Independent realization of the gap loop used to cross-check the
    doubled-segment values; y is continued along the contour by sign
    continuity, so the result matches +-2 * segment_integrals()[k].
    """
    e = np.array(curve.branch_points)
    c = 0.5 * (e[k] + e[k + 1])
    r = 0.5 * abs(e[k + 1] - e[k])
    theta = np.linspace(0.0, 2.0 * np.pi, order, endpoint=False)
    x = c + (r + rho) * np.cos(theta) + 1j * rho * np.sin(theta)
    dx = -(r + rho) * np.sin(theta) + 1j * rho * np.cos(theta)
    y = np.empty_like(x)
    s = np.sqrt(curve.f(x[0]).astype(complex))
    y[0] = s
    for i in range(1, order):
        s = np.sqrt(curve.f(x[i]).astype(complex))
        y[i] = s if abs(s - y[i - 1]) <= abs(s + y[i - 1]) else -s
    # closedness of the lifted contour: two branch points enclosed
    s0 = np.sqrt(curve.f(x[0]).astype(complex))
    forms = _form_values(curve, x)
    dtheta = 2.0 * np.pi / order
    vals = (forms * (dx / (2.0 * y))).sum(axis=1) * dtheta
    if abs(s0 - y[-1]) > abs(s0 + y[-1]):
        raise ArithmeticError("lifted ellipse contour failed to close")
    return vals


def _candidate_bases():
    """Cycle coefficient matrices over the gap loops gamma_1..gamma_4.

    Each candidate is (alpha_rows, beta_rows) of shape (2, 4).  The gap
    loops form a chain (consecutive loops intersect once), so the naive
    assignment beta = (gamma_2, gamma_4) is not symplectic; the integer
    combination beta = (gamma_4 - gamma_2, -gamma_4) is, and it also
    places the base point at infinity on the cycle attached to the fixed
    odd theta characteristic.  The plain chain basis is kept as a
    fallback for orientations where the first choice is degenerate.
    """
    aligned = (
        np.array([[1, 0, 0, 0], [0, 0, 1, 0]]),
        np.array([[0, -1, 0, 1], [0, 0, 0, -1]]),
    )
    chain = (
        np.array([[1, 0, 0, 0], [1, 0, 1, 0]]),
        np.array([[0, 1, 0, 0], [0, 0, 0, 1]]),
    )
    return [aligned, chain]


def _assemble(loops: np.ndarray, rows: np.ndarray, signs: np.ndarray, forms) -> np.ndarray:
    """2x2 matrix of cycle integrals for the two given forms."""
    signed = loops * signs[:, None]  # (4 loops, 4 forms)
    return (rows @ signed[:, forms]).T  # (2 forms, 2 cycles)


def _char_alignment(om1: np.ndarray, Z: np.ndarray) -> float:
    """Misalignment of the fixed odd characteristic with the first variable.

    g = omega1^-T grad theta(0) is the gradient of the sigma numerator at
    the origin; a basis matched to the characteristic gives g parallel to
    e1 (the series of sigma then starts with u1).  Returns |g2| / |g1|.
    """
    from .sigma import ThetaCharacteristic, theta_char

    th = theta_char(np.zeros(2), Z, ThetaCharacteristic(), eps=1e-10, order=1)
    g = np.linalg.solve(om1.T, th.d1)
    if abs(g[0]) == 0.0:
        return np.inf
    return float(abs(g[1]) / abs(g[0]))


def _basis_search(loops: np.ndarray):
    """Pick signs and basis making Z symmetric, Im Z > 0, pairing canonical,
    and the theta gradient at 0 aligned with the first coordinate."""
    best = None
    for alpha_rows, beta_rows in _candidate_bases():
        for signs in itertools.product([1.0, -1.0], repeat=4):
            s = np.array(signs)
            om1 = _assemble(loops, alpha_rows, s, [0, 1])
            om2 = _assemble(loops, beta_rows, s, [0, 1])
            if np.linalg.cond(om1) > _MAX_COND:
                continue
            Z = np.linalg.solve(om1, om2)
            if np.abs(Z - Z.T).max() > _SYMMETRY_TOL:
                continue
            im_eigs = np.linalg.eigvalsh(Z.imag)
            if im_eigs.min() <= 0:
                continue
            et1 = _assemble(loops, alpha_rows, s, [2, 3])
            et2 = _assemble(loops, beta_rows, s, [2, 3])
            pairing = om1 @ et2.T - om2 @ et1.T
            defect = np.abs(pairing - TWO_PI_I * np.eye(2)).max()
            if defect > 1e-6:
                continue
            misalign = _char_alignment(om1, Z)
            if misalign > 1e-6:
                continue
            if best is None or defect < best[0]:
                best = (defect, om1, om2, et1, et2, Z)
    if best is None:
        raise UnsupportedBranchConfiguration(
            "no cycle orientation yields a canonically paired symmetric modulus"
        )
    return best[1:]


def compute_periods(curve: Curve, quad_order: int = 192) -> PeriodData:
    """Compute all four period matrices by quadrature over the branch gaps.

    Requires five distinct real branch points.  Gauss-Legendre order is
    doubled until every entry is stable to 1e-10; QuadratureNonConvergent
    is raised when stability is not reached.
    """
    e = np.array(curve.branch_points)
    if np.abs(e.imag).max() > _REAL_BRANCH_TOL:
        raise UnsupportedBranchConfiguration(
            "v1 supports only curves with 5 distinct real branch points"
        )
    curve = Curve(curve.lam, tuple(complex(er) for er in e.real))

    order = quad_order
    prev = segment_integrals(curve, order)
    for _ in range(4):
        cur = segment_integrals(curve, 2 * order)
        if np.abs(2 * cur - 2 * prev).max() < _STABILITY_TOL:
            break
        prev, order = cur, 2 * order
    else:
        raise QuadratureNonConvergent(
            f"period integrals not stable to {_STABILITY_TOL} at order {order}"
        )

    loops = 2.0 * cur
    om1, om2, et1, et2, Z = _basis_search(loops)
    return PeriodData(om1, om2, et1, et2, Z, quad_order, curve)


def lattice_reduce(u, pd: PeriodData):
    """Split u = u_red + omega1 @ m + omega2 @ n with u_red in the base cell.

    Works in the z = omega1^-1 u coordinates, where the lattice is
    Z^2 + modulus Z^2; both real coefficient vectors are rounded to the
    nearest integer, so the reduction is idempotent.
    """
    u = np.asarray(u, dtype=complex).reshape(2)
    z = np.linalg.solve(pd.omega1, u)
    b = np.linalg.solve(pd.modulus.imag, z.imag)
    n = np.floor(b + 0.5).astype(int)
    z1 = z - pd.modulus @ n
    m = np.floor(z1.real + 0.5).astype(int)
    z_red = z1 - m
    u_red = pd.omega1 @ z_red
    return u_red, m, n


# -- persistence ------------------------------------------------------


def _mat_to_json(mat: np.ndarray):
    return [[v.real, v.imag] for v in np.asarray(mat).reshape(-1)]


def _mat_from_json(rows) -> np.ndarray:
    return np.array([complex(re, im) for re, im in rows]).reshape(2, 2)


def save_period_cache(pd: PeriodData, path, c=None, eps=None):
    """Write a JSON period cache; complex entries as [re, im] pairs."""
    doc = {
        "lambda": [[v.real, v.imag] for v in pd.curve.lam],
        "quad_order": pd.quad_order,
        "omega1": _mat_to_json(pd.omega1),
        "omega2": _mat_to_json(pd.omega2),
        "eta1": _mat_to_json(pd.eta1),
        "eta2": _mat_to_json(pd.eta2),
        "modulus": _mat_to_json(pd.modulus),
    }
    if c is not None:
        doc["c"] = [complex(c).real, complex(c).imag]
    if eps is not None:
        doc["eps"] = float(eps)
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_period_cache(path, curve: Curve | None = None):
    """Read a period cache; validates the stored lambda against `curve`.

    Returns (PeriodData, c_or_None, eps_or_None).
    """
    with open(path) as fh:
        doc = json.load(fh)
    lam = tuple(complex(re, im) for re, im in doc["lambda"])
    if curve is not None and lam != curve.lam:
        raise ValueError("period cache was computed for a different curve")
    cached_curve = curve if curve is not None else make_curve(lam)
    pd = PeriodData(
        _mat_from_json(doc["omega1"]),
        _mat_from_json(doc["omega2"]),
        _mat_from_json(doc["eta1"]),
        _mat_from_json(doc["eta2"]),
        _mat_from_json(doc["modulus"]),
        int(doc["quad_order"]),
        cached_curve,
    )
    c = complex(*doc["c"]) if "c" in doc else None
    eps = doc.get("eps")
    return pd, c, eps
