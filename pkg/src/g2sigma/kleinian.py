"""Kleinian p-functions: second and third logarithmic derivatives of sigma."""

from __future__ import annotations

import numpy as np

from .errors import OnThetaDivisor
from .sigma import SigmaContext, sigma_with_partials

_DIVISOR_TOL = 1e-8


def _check_off_divisor(value, ctx: SigmaContext):
    if abs(value) <= _DIVISOR_TOL * ctx.sigma_scale():
        raise OnThetaDivisor(
            f"|sigma(u)| = {abs(value):.3e} is below the pole-proximity threshold"
        )


def wp(u, idx, ctx: SigmaContext) -> complex:
    """wp_{jk}(u) = -(d^2/du_j du_k) log sigma(u) for a size-2 index."""
    idx = tuple(sorted(int(i) for i in idx))
    if len(idx) != 2 or any(i not in (1, 2) for i in idx):
        raise ValueError("wp index must be a size-2 multiset over {1, 2}")
    d = sigma_with_partials(u, ctx, 2)
    _check_off_divisor(d.value, ctx)
    j, k = idx[0] - 1, idx[1] - 1
    s = d.value
    return complex(-(d.d2[j, k] * s - d.d1[j] * d.d1[k]) / (s * s))


def wp3(u, idx, ctx: SigmaContext) -> complex:
    """Third-order wp_{jkl}(u) via sigma partials up to order 3.

    -d_j d_k d_l log sigma expanded over the sigma partials:
    -(s_jkl s^2 - s*(s_j s_kl + s_k s_jl + s_l s_jk) + 2 s_j s_k s_l) / s^3.
    """
    idx = tuple(sorted(int(i) for i in idx))
    if len(idx) != 3 or any(i not in (1, 2) for i in idx):
        raise ValueError("wp3 index must be a size-3 multiset over {1, 2}")
    d = sigma_with_partials(u, ctx, 3)
    _check_off_divisor(d.value, ctx)
    j, k, l = (i - 1 for i in idx)
    s = d.value
    num = (
        d.d3[j, k, l] * s * s
        - s * (d.d1[j] * d.d2[k, l] + d.d1[k] * d.d2[j, l] + d.d1[l] * d.d2[j, k])
        + 2.0 * d.d1[j] * d.d1[k] * d.d1[l]
    )
    return complex(-num / s**3)


def check_addition_formula(u, v, ctx: SigmaContext) -> float:
    """Relative residual of the two-variable sigma addition formula.

    |sigma(u+v) sigma(u-v) / (sigma(u)^2 sigma(v)^2) + wp11(u) - wp11(v)
     + wp12(u) wp22(v) - wp12(v) wp22(u)| normalized by max(1, |lhs|).
    """
    u = np.asarray(u, dtype=complex).reshape(2)
    v = np.asarray(v, dtype=complex).reshape(2)
    du = sigma_with_partials(u, ctx, 2)
    dv = sigma_with_partials(v, ctx, 2)
    _check_off_divisor(du.value, ctx)
    _check_off_divisor(dv.value, ctx)
    from .sigma import sigma

    lhs = -sigma(u + v, ctx) * sigma(u - v, ctx) / (du.value**2 * dv.value**2)
    rhs = (
        wp(u, (1, 1), ctx)
        - wp(v, (1, 1), ctx)
        + wp(u, (1, 2), ctx) * wp(v, (2, 2), ctx)
        - wp(v, (1, 2), ctx) * wp(u, (2, 2), ctx)
    )
    return float(abs(lhs - rhs) / max(1.0, abs(lhs)))
