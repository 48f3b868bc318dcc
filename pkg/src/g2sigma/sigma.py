"""Baker sigma function for the genus-2 curve.

sigma(u) = c * exp(-1/2 u^T M u) * theta[delta](omega1^-1 u; Z) with
M = eta1 omega1^-1 and the odd half-integer characteristic
delta' = [0, 1/2], delta'' = [1/2, 1/2].  The constant c is calibrated so
the expansion of sigma at the origin starts with u1.

Arguments are lattice-reduced before the theta series is summed; the
removed lattice vector re-enters through the exact theta shift law, so
truncation radii stay small for n-fold multiples and long point sums.
All derivatives (up to third order) are analytic: the theta series is
differentiated term by term and combined with the quadratic log-prefactor
by the Leibniz rule.

Convention note: the defining formula treats u as a row vector; here u is
a column vector and every product is transposed accordingly, in this one
module only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTheta, NotPositiveDefinite, UnsupportedOrder
from .periods import PeriodData, lattice_reduce

_TWO_PI_I = 2j * np.pi


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Half-integer theta characteristic; the default choice is odd."""

    delta1: tuple[float, float] = (0.0, 0.5)  # delta'
    delta2: tuple[float, float] = (0.5, 0.5)  # delta''

    def parity_odd(self) -> bool:
        d1 = np.array(self.delta1)
        d2 = np.array(self.delta2)
        return int(round(4.0 * d2 @ d1)) % 2 == 1


@dataclass
class ThetaEval:
    """Theta value and z-derivatives up to the requested order."""

    value: complex
    d1: np.ndarray | None = None  # (2,)
    d2: np.ndarray | None = None  # (2,2)
    d3: np.ndarray | None = None  # (2,2,2)


def _trunc_radius(im_z_min_eig: float, eps: float) -> float:
    # Gaussian tail exp(-pi*lam_min*rho^2) with margin for the cubic
    # polynomial factors of the differentiated series.
    rho = np.sqrt((np.log(1.0 / eps) + 25.0) / (np.pi * im_z_min_eig))
    return min(max(rho, 4.0), 40.0)


def theta_char(z, Z, char: ThetaCharacteristic, eps: float = 1e-12, order: int = 0) -> ThetaEval:
    """Truncated theta series with characteristics and its z-derivatives.

    Sums exp[2 pi i (1/2 q^T Z q + q^T (z + delta'))] over q = n + delta''
    inside a ball whose radius keeps the absolute tail below eps; the ball
    is centered on the maximizer of the Gaussian factor, so moderately
    shifted arguments stay accurate.
    """
    z = np.asarray(z, dtype=complex).reshape(2)
    Z = np.asarray(Z, dtype=complex).reshape(2, 2)
    im_eigs = np.linalg.eigvalsh(Z.imag)
    if im_eigs.min() <= 0:
        raise NotPositiveDefinite("Im Z must be positive definite")
    d1 = np.array(char.delta1)
    d2 = np.array(char.delta2)

    rho = _trunc_radius(im_eigs.min(), eps)
    center = np.linalg.solve(Z.imag, -(z + d1).imag)
    n0 = np.round(center - d2).astype(int)
    half = int(np.ceil(rho)) + 1
    rng = np.arange(-half, half + 1)
    n1, n2 = np.meshgrid(n0[0] + rng, n0[1] + rng, indexing="ij")
    q = np.stack([n1.ravel(), n2.ravel()], axis=1) + d2  # (N, 2)

    quad = 0.5 * np.einsum("ni,ij,nj->n", q, Z, q)
    lin = q @ (z + d1)
    terms = np.exp(_TWO_PI_I * (quad + lin))

    out = ThetaEval(value=terms.sum())
    if order >= 1:
        w = _TWO_PI_I * q  # (N, 2)
        out.d1 = np.einsum("n,na->a", terms, w)
    if order >= 2:
        out.d2 = np.einsum("n,na,nb->ab", terms, w, w)
    if order >= 3:
        out.d3 = np.einsum("n,na,nb,nc->abc", terms, w, w, w)
    return out


@dataclass
class SigmaContext:
    """Everything needed to evaluate sigma and its partials."""

    pd: PeriodData
    char: ThetaCharacteristic
    c: complex
    eps: float
    # derived, filled in __post_init__
    W: np.ndarray = field(init=False, repr=False)  # omega1^-1
    M: np.ndarray = field(init=False, repr=False)  # eta1 omega1^-1
    S: np.ndarray = field(init=False, repr=False)  # symmetrized M
    _scale: float | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.W = np.linalg.inv(self.pd.omega1)
        self.M = self.pd.eta1 @ self.W
        self.S = 0.5 * (self.M + self.M.T)

    def sigma_scale(self, samples: int = 64, seed: int = 12345) -> float:
        """Median |sigma| over random points of the fundamental cell."""
        if self._scale is None:
            rng = np.random.default_rng(seed)
            ab = rng.uniform(-0.5, 0.5, size=(samples, 4))
            vals = []
            for row in ab:
                u = self.pd.omega1 @ row[:2] + self.pd.omega2 @ row[2:]
                vals.append(abs(sigma(u, self)))
            self._scale = float(np.median(vals))
        return self._scale


@dataclass
class SigmaDerivs:
    value: complex
    d1: np.ndarray | None = None
    d2: np.ndarray | None = None
    d3: np.ndarray | None = None


def _sigma_derivs(u, ctx: SigmaContext, order: int) -> SigmaDerivs:
    """sigma and partials at u, evaluated at the lattice-reduced argument.

    With u = v + ell, ell = omega1 m + omega2 n, the theta shift law gives
    sigma(u) = c * exp(Phi(v)) * theta(W v) where Phi collects the
    quadratic prefactor at v + ell and the exact shift exponent; Phi is a
    quadratic polynomial in v, so all derivatives are available in closed
    form.
    """
    pd = ctx.pd
    u = np.asarray(u, dtype=complex).reshape(2)
    v, m, n = lattice_reduce(u, pd)
    ell = u - v
    z = ctx.W @ v
    th = theta_char(z, pd.modulus, ctx.char, ctx.eps, order)

    d1 = np.array(ctx.char.delta1)
    d2 = np.array(ctx.char.delta2)
    w = v + ell
    phi = -0.5 * w @ ctx.M @ w + _TWO_PI_I * (
        d2 @ m - d1 @ n - n @ z - 0.5 * n @ pd.modulus @ n
    )
    K = ctx.c * np.exp(phi)
    G = -ctx.S @ w - _TWO_PI_I * (ctx.W.T @ n)  # gradient of Phi at v
    S = ctx.S

    out = SigmaDerivs(value=K * th.value)
    if order >= 1:
        T1 = ctx.W.T @ th.d1
        out.d1 = K * (G * th.value + T1)
    if order >= 2:
        T2 = ctx.W.T @ th.d2 @ ctx.W
        out.d2 = K * (
            (np.outer(G, G) - S) * th.value
            + np.outer(G, T1)
            + np.outer(T1, G)
            + T2
        )
    if order >= 3:
        T3 = np.einsum("aj,bk,cl,abc->jkl", ctx.W, ctx.W, ctx.W, th.d3)
        GG = np.outer(G, G) - S
        d3 = np.einsum("j,k,l->jkl", G, G, G) * th.value
        d3 -= (
            np.einsum("j,kl->jkl", G, S)
            + np.einsum("k,jl->jkl", G, S)
            + np.einsum("l,jk->jkl", G, S)
        ) * th.value
        d3 += (
            np.einsum("kl,j->jkl", GG, T1)
            + np.einsum("jl,k->jkl", GG, T1)
            + np.einsum("jk,l->jkl", GG, T1)
        )
        d3 += (
            np.einsum("j,kl->jkl", G, T2)
            + np.einsum("k,jl->jkl", G, T2)
            + np.einsum("l,jk->jkl", G, T2)
        )
        d3 += T3
        out.d3 = K * d3
    return out


def sigma(u, ctx: SigmaContext) -> complex:
    """Evaluate sigma(u)."""
    return _sigma_derivs(u, ctx, 0).value


def sigma_partial(u, ctx: SigmaContext, multi_index) -> complex:
    """Partial derivative of sigma for a multi-index over {1, 2}, order <= 3."""
    idx = tuple(int(i) for i in multi_index)
    if not idx or len(idx) > 3:
        raise UnsupportedOrder(f"multi-index order {len(idx)} not supported")
    if any(i not in (1, 2) for i in idx):
        raise ValueError("multi-index entries must be 1 or 2")
    d = _sigma_derivs(u, ctx, len(idx))
    ax = tuple(i - 1 for i in idx)
    if len(ax) == 1:
        return complex(d.d1[ax[0]])
    if len(ax) == 2:
        return complex(d.d2[ax])
    return complex(d.d3[ax])


def sigma_with_partials(u, ctx: SigmaContext, order: int) -> SigmaDerivs:
    """sigma together with all partial tensors up to `order` (<= 3)."""
    if order > 3:
        raise UnsupportedOrder("derivatives supported up to order 3 only")
    return _sigma_derivs(u, ctx, order)


def calibrate_c(pd: PeriodData, char: ThetaCharacteristic | None = None, eps: float = 1e-12) -> SigmaContext:
    """Fix the constant c so that d(sigma)/du1 at the origin equals 1."""
    char = char or ThetaCharacteristic()
    ctx = SigmaContext(pd, char, 1.0 + 0.0j, eps)
    d = _sigma_derivs(np.zeros(2), ctx, 1)
    s1 = d.d1[0]
    if abs(s1) < 1e-12:
        raise DegenerateTheta(f"unnormalized d(sigma)/du1 at 0 is {abs(s1):.3e}")
    return SigmaContext(pd, char, 1.0 / s1, eps)


def translation_character(ctx: SigmaContext, m, n, u) -> complex:
    """chi(ell) estimated at u for ell = omega1 m + omega2 n.

    Uses sigma(u + ell) = chi(ell) sigma(u) exp[-(u + ell/2)^T (eta1 m + eta2 n)];
    the exponent sign matches the sign of the quadratic prefactor of sigma.
    For a canonically normalized period set the result is +-1 for every u.
    """
    pd = ctx.pd
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    u = np.asarray(u, dtype=complex).reshape(2)
    ell = pd.omega1 @ m + pd.omega2 @ n
    eta_ell = pd.eta1 @ m + pd.eta2 @ n
    lhs = sigma(u + ell, ctx)
    rhs = sigma(u, ctx) * np.exp(-(u + 0.5 * ell) @ eta_ell)
    return lhs / rhs
