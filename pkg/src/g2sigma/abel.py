"""Abel map from curve points to C^2 and coordinate recovery on its image.

The canonical path from infinity to an affine point P runs in three
pieces: the local chart x = 1/t^2 (with y = -t^-5 sqrt(t^10 f(1/t^2)),
branch fixed so the root tends to 1 as t -> 0) out to the circle
|x| = R = 2*max|e_i| + 1; an arc on that circle to arg x(P); a straight
run to x(P), displaced by small circular detours around any branch point
closer than 1e-2 to it.  y is continued by sign continuity along the
quadrature nodes.  The branch at infinity makes x(u) ~ 1/u2^2 and
y(u) ~ -1/u2^5 along the image of the curve near the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curve_ring import Curve, CurvePoint
from .errors import NotOnThetaDivisor, OriginSingular, PathThroughBranchPoint
from .periods import lattice_reduce
from .sigma import SigmaContext, sigma, sigma_with_partials

_DETOUR_RADIUS = 1e-2
_PIECE_TOL = 1e-11
_GL_ORDER = 64
_MAX_DEPTH = 10


@dataclass
class AbelResult:
    u: np.ndarray
    path_log: list[str] = field(default_factory=list)
    sheet_sign: int = 1


def _chart_g(curve: Curve, t):
    """t^10 * f(1/t^2) as a polynomial in t; equals 1 at t = 0."""
    lam = curve.lam
    t2 = t * t
    acc = np.zeros_like(np.asarray(t, dtype=complex))
    for i in range(6):
        acc = acc * t2 + lam[i]
    return acc


def chart_point(curve: Curve, t: complex) -> CurvePoint:
    """The curve point at chart parameter t (x = 1/t^2, canonical y branch)."""
    t = complex(t)
    x = 1.0 / (t * t)
    y = -np.sqrt(_chart_g(curve, t)) / t**5
    return CurvePoint(x, y)


def _gl_nodes(order):
    n, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (n + 1.0), 0.5 * w


_NODES, _WEIGHTS = _gl_nodes(_GL_ORDER)


def _chart_integral(curve: Curve, t_end: complex):
    """Integrals of (omega1, omega2) along the chart ray from 0 to t_end."""

    def quad(panels):
        u = np.zeros(2, dtype=complex)
        for p in range(panels):
            s = (p + _NODES) / panels
            t = s * t_end
            root = np.sqrt(_chart_g(curve, t))
            du2 = (t_end / panels) * (_WEIGHTS / root).sum()
            du1 = (t_end / panels) * (_WEIGHTS * t * t / root).sum()
            u += np.array([du1, du2])
        return u

    prev = quad(1)
    for depth in range(1, _MAX_DEPTH):
        cur = quad(2**depth)
        if np.abs(cur - prev).max() < _PIECE_TOL:
            return cur
        prev = cur
    return prev


class _Piece:
    """Parametrized path piece s in [0,1] -> x-plane."""

    def __init__(self, xfun, dxfun, label):
        self.xfun = xfun
        self.dxfun = dxfun
        self.label = label


def _line(a, b):
    d = b - a
    return _Piece(lambda s: a + d * s, lambda s: d * np.ones_like(s), f"line {a:.4g}->{b:.4g}")


def _arc(center, radius, th0, th1):
    dth = th1 - th0

    def xfun(s):
        return center + radius * np.exp(1j * (th0 + dth * s))

    def dxfun(s):
        return 1j * radius * dth * np.exp(1j * (th0 + dth * s))

    return _Piece(xfun, dxfun, f"arc r={radius:.4g} {th0:.4g}->{th1:.4g}")


def _line_with_detours(curve: Curve, a: complex, b: complex) -> list[_Piece]:
    """Straight run a -> b with circular detours around close branch points."""
    seg = b - a
    L2 = abs(seg) ** 2
    if L2 == 0:
        return []
    hits = []
    for e in curve.branch_points:
        s_star = ((e - a) * np.conj(seg)).real / L2
        s_star = min(max(s_star, 0.0), 1.0)
        foot = a + seg * s_star
        if abs(foot - e) < _DETOUR_RADIUS:
            if abs(b - e) < _DETOUR_RADIUS or abs(a - e) < _DETOUR_RADIUS:
                raise PathThroughBranchPoint(
                    f"path endpoint within {_DETOUR_RADIUS} of branch point {e:.6g}"
                )
            # chord/circle intersections around e
            h = np.sqrt(_DETOUR_RADIUS**2 - abs(foot - e) ** 2)
            ds = h / abs(seg)
            hits.append((s_star - ds, s_star + ds, e))
    hits.sort()
    pieces: list[_Piece] = []
    s_cur = 0.0
    for s1, s2, e in hits:
        s1, s2 = max(s1, 0.0), min(s2, 1.0)
        p1 = a + seg * s1
        p2 = a + seg * s2
        if s1 > s_cur:
            pieces.append(_line(a + seg * s_cur, p1))
        th1 = np.angle(p1 - e)
        th2 = np.angle(p2 - e)
        # go the short way around; either side keeps the detour radius
        if th2 - th1 > np.pi:
            th2 -= 2 * np.pi
        elif th1 - th2 > np.pi:
            th2 += 2 * np.pi
        pieces.append(_arc(e, _DETOUR_RADIUS, th1, th2))
        s_cur = s2
    if s_cur < 1.0:
        pieces.append(_line(a + seg * s_cur, b))
    return pieces


def _integrate_piece(curve: Curve, piece: _Piece, y_start: complex):
    """(omega1, omega2) integrals over one piece with sheet-continuous y."""

    def quad(panels):
        u = np.zeros(2, dtype=complex)
        y_prev = y_start
        for p in range(panels):
            s = (p + _NODES) / panels
            x = piece.xfun(s)
            dx = piece.dxfun(s) / panels
            y = np.empty_like(x)
            for i in range(len(x)):
                root = np.sqrt(complex(curve.f(x[i])))
                y_prev = root if abs(root - y_prev) <= abs(root + y_prev) else -root
                y[i] = y_prev
            du1 = (_WEIGHTS * dx / (2.0 * y)).sum()
            du2 = (_WEIGHTS * x * dx / (2.0 * y)).sum()
            u += np.array([du1, du2])
        # continue to the right endpoint
        x_end = piece.xfun(np.array([1.0]))[0]
        root = np.sqrt(complex(curve.f(x_end)))
        y_end = root if abs(root - y_prev) <= abs(root + y_prev) else -root
        return u, y_end

    prev, y_end = quad(2)
    for depth in range(2, _MAX_DEPTH):
        cur, y_end = quad(2**depth)
        if np.abs(cur - prev).max() < _PIECE_TOL:
            return cur, y_end
        prev = cur
    return prev, y_end


def abel_from_chart(curve: Curve, t: complex) -> tuple[np.ndarray, CurvePoint]:
    """Abel image of the chart point at parameter t, along the chart ray."""
    u = _chart_integral(curve, complex(t))
    return u, chart_point(curve, t)


def abel_point(P: CurvePoint, ctx: SigmaContext, alt_path: bool = False) -> AbelResult:
    """Abel map of a single curve point along the canonical path.

    alt_path flips the direction of the circular arc; the two results
    differ by a lattice vector (path independence modulo Lambda).
    """
    curve = ctx.pd.curve
    if P.at_infinity:
        return AbelResult(np.zeros(2, dtype=complex), ["infinity"], 1)

    for e in curve.branch_points:
        if abs(P.x - e) < 1e-8:
            raise PathThroughBranchPoint(
                f"target x = {P.x:.6g} coincides with a branch point"
            )

    rmax = 2.0 * max(abs(e) for e in curve.branch_points) + 1.0
    t_r = 1.0 / np.sqrt(rmax)
    u = _chart_integral(curve, t_r)
    start = chart_point(curve, t_r)
    y_cur = start.y
    log = [f"chart t=0->{t_r:.6g}"]

    theta = float(np.angle(P.x))
    if alt_path:
        theta = theta - 2 * np.pi if theta > 0 else theta + 2 * np.pi
    pieces: list[_Piece] = []
    if abs(theta) > 1e-15:
        pieces.append(_arc(0.0, rmax, 0.0, theta))
    anchor = rmax * np.exp(1j * theta)
    if abs(P.x - anchor) > 1e-15:
        pieces.extend(_line_with_detours(curve, complex(anchor), complex(P.x)))

    for piece in pieces:
        du, y_cur = _integrate_piece(curve, piece, y_cur)
        u = u + du
        log.append(piece.label)

    if abs(y_cur - P.y) <= abs(y_cur + P.y):
        return AbelResult(u, log, 1)
    return AbelResult(-u, log + ["sheet flip"], -1)


def abel_pair(P1: CurvePoint, P2: CurvePoint, ctx: SigmaContext) -> np.ndarray:
    """Abel map of the degree-2 divisor P1 + P2 - 2*infinity."""
    return abel_point(P1, ctx).u + abel_point(P2, ctx).u


def curve_coords(u, ctx: SigmaContext) -> tuple[complex, complex]:
    """Recover (x(u), y(u)) for u on the Abel image of the curve.

    x = -sigma_1/sigma_2 and y = sigma(2u) / (2 sigma_2(u)^4); the second
    expression is half the n = 2 psi function.
    """
    u = np.asarray(u, dtype=complex).reshape(2)
    u_red, _, _ = lattice_reduce(u, ctx.pd)
    period_scale = max(np.abs(ctx.pd.omega1).max(), np.abs(ctx.pd.omega2).max())
    if np.abs(u_red).max() < 1e-7 * period_scale:
        raise OriginSingular("x(u), y(u) have poles at lattice points")
    scale = ctx.sigma_scale()
    d = sigma_with_partials(u, ctx, 1)
    if abs(d.value) > 1e-6 * scale:
        raise NotOnThetaDivisor(
            f"|sigma(u)| = {abs(d.value):.3e} too large; u is not on the Abel image"
        )
    s1, s2 = d.d1
    x = -s1 / s2
    y = sigma(2.0 * u, ctx) / (2.0 * s2**4)
    return complex(x), complex(y)
