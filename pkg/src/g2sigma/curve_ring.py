"""Exact model of the curve y^2 = f(x) and its coordinate ring.

The ring elements are finite sums  sum c_{a,b} x^a y^b  with integer
(possibly negative) x-exponents and b in {0, 1}; y^2 is eliminated via
y^2 = f(x) at construction time.  Two derivations act on the ring:

    D1(x) = 2y,     D1(y) = Df(x),
    D2(x) = 2y/x,   D2(y) = Df(x)/x,

so that D1 = x * D2 as operators.  These are the d/du derivatives of the
coordinate functions along the image of the curve in its Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfinityNotSupported, NotMonicQuintic, PoleAtPoint, SingularCurve

# Guard rail on Laurent exponents; generous for determinant sizes up to n ~ 10.
MAX_LAURENT_EXP = 64

_COEFF_TOL = 1e-14
_MIN_ROOT_SEPARATION = 1e-9


@dataclass(frozen=True)
class Curve:
    """Genus-2 curve y^2 = f(x) with monic quintic f."""

    lam: tuple[complex, ...]
    branch_points: tuple[complex, ...]

    def f(self, x):
        """Evaluate f(x) = sum lam_i x^i (Horner)."""
        acc = 0.0 + 0.0j
        for c in reversed(self.lam):
            acc = acc * x + c
        return acc

    def df(self, x):
        """Evaluate the formal derivative Df(x)."""
        acc = 0.0 + 0.0j
        for i in range(5, 0, -1):
            acc = acc * x + i * self.lam[i]
        return acc

    def f_elem(self) -> "RingElement":
        return RingElement({(i, 0): c for i, c in enumerate(self.lam) if c != 0})

    def df_elem(self) -> "RingElement":
        return RingElement(
            {(i - 1, 0): i * c for i, c in enumerate(self.lam) if i > 0 and c != 0}
        )


def make_curve(lam) -> Curve:
    """Build a Curve from the six coefficients lam_0..lam_5.

    Branch points are companion-matrix eigenvalues refined by three Newton
    steps, ordered lexicographically by (Re, Im).  Raises NotMonicQuintic
    unless lam_5 == 1 and SingularCurve when roots collide.
    """
    lam = tuple(complex(c) for c in lam)
    if len(lam) != 6:
        raise NotMonicQuintic("expected 6 coefficients lam_0..lam_5")
    if lam[5] != 1:
        raise NotMonicQuintic(f"lam_5 must be exactly 1, got {lam[5]}")

    roots = np.roots(list(reversed(lam)))
    # Newton refinement; skip steps that would divide by a vanishing derivative.
    for _ in range(3):
        fr = np.array([_polyval(lam, r) for r in roots])
        dfr = np.array([_polyval_deriv(lam, r) for r in roots])
        mask = np.abs(dfr) > 1e-30
        roots = np.where(mask, roots - fr / np.where(mask, dfr, 1.0), roots)

    roots = sorted(roots, key=lambda r: (r.real, r.imag))
    for i in range(5):
        for j in range(i + 1, 5):
            if abs(roots[i] - roots[j]) <= _MIN_ROOT_SEPARATION:
                raise SingularCurve(
                    f"repeated branch point near {roots[i]:.6g}"
                )
    return Curve(lam, tuple(complex(r) for r in roots))


def _polyval(lam, x):
    acc = 0.0 + 0.0j
    for c in reversed(lam):
        acc = acc * x + c
    return acc


def _polyval_deriv(lam, x):
    acc = 0.0 + 0.0j
    for i in range(5, 0, -1):
        acc = acc * x + i * lam[i]
    return acc


class CurvePoint:
    """Affine point (x, y) with y^2 = f(x), or the point at infinity."""

    __slots__ = ("x", "y", "at_infinity")

    def __init__(self, x=None, y=None, at_infinity=False):
        self.at_infinity = bool(at_infinity)
        if self.at_infinity:
            self.x = None
            self.y = None
        else:
            self.x = complex(x)
            self.y = complex(y)

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls(at_infinity=True)

    @classmethod
    def on_curve(cls, curve: Curve, x, y) -> "CurvePoint":
        x, y = complex(x), complex(y)
        fx = curve.f(x)
        if abs(y * y - fx) > 1e-10 * max(1.0, abs(fx), abs(y) ** 2):
            raise ValueError(f"({x}, {y}) does not satisfy y^2 = f(x)")
        return cls(x, y)

    def conjugate_sheet(self) -> "CurvePoint":
        """Hyperelliptic involution (x, y) -> (x, -y)."""
        if self.at_infinity:
            return self
        return CurvePoint(self.x, -self.y)

    def __repr__(self):
        if self.at_infinity:
            return "CurvePoint(infinity)"
        return f"CurvePoint({self.x}, {self.y})"


@dataclass(frozen=True)
class RingElement:
    """Sparse sum of monomials c * x^a * y^b with b in {0, 1}."""

    coeffs: dict[tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (a, b), c in self.coeffs.items():
            if b not in (0, 1):
                raise ValueError("y-exponent must be 0 or 1 after reduction")
            if abs(a) > MAX_LAURENT_EXP:
                raise ValueError(f"Laurent exponent {a} exceeds bound {MAX_LAURENT_EXP}")
            if c != 0:
                clean[(a, b)] = complex(c)
        object.__setattr__(self, "coeffs", clean)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "RingElement":
        return cls({})

    @classmethod
    def one(cls) -> "RingElement":
        return cls({(0, 0): 1.0})

    @classmethod
    def monomial(cls, a: int, b: int, c=1.0) -> "RingElement":
        return cls({(a, b): complex(c)})

    @classmethod
    def x_power(cls, a: int) -> "RingElement":
        return cls({(a, 0): 1.0})

    @classmethod
    def y(cls) -> "RingElement":
        return cls({(0, 1): 1.0})

    # -- algebra ------------------------------------------------------

    def __add__(self, other: "RingElement") -> "RingElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0.0) + c
        return RingElement(out)

    def __sub__(self, other: "RingElement") -> "RingElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0.0) - c
        return RingElement(out)

    def __neg__(self) -> "RingElement":
        return RingElement({k: -c for k, c in self.coeffs.items()})

    def scale(self, s) -> "RingElement":
        return RingElement({k: s * c for k, c in self.coeffs.items()})

    def mul(self, other: "RingElement", curve: Curve) -> "RingElement":
        """Product with eager y^2 -> f(x) reduction."""
        out: dict[tuple[int, int], complex] = {}

        def acc(a, b, c):
            out[(a, b)] = out.get((a, b), 0.0) + c

        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                a, b, c = a1 + a2, b1 + b2, c1 * c2
                if b < 2:
                    acc(a, b, c)
                else:
                    for i, lam_i in enumerate(curve.lam):
                        if lam_i != 0:
                            acc(a + i, 0, c * lam_i)
        return RingElement(out)

    def is_zero(self, tol=_COEFF_TOL) -> bool:
        return all(abs(c) <= tol for c in self.coeffs.values())

    def approx_equal(self, other: "RingElement", tol=1e-10) -> bool:
        diff = self - other
        scale = max(
            [abs(c) for c in self.coeffs.values()]
            + [abs(c) for c in other.coeffs.values()]
            + [1.0]
        )
        return all(abs(c) <= tol * scale for c in diff.coeffs.values())


def ring_derive(elem: RingElement, curve: Curve, j: int) -> RingElement:
    """Apply the derivation D_j (j = 1 or 2) to a ring element.

    D1 sends x -> 2y and y -> Df(x); D2 = (1/x) * D1.  On a monomial
    x^a y^b the Leibniz rule plus y^2 = f(x) reduction gives, for D1,

        D1(x^a)   = 2a x^(a-1) y
        D1(x^a y) = 2a x^(a-1) f(x) + x^a Df(x).
    """
    if j not in (1, 2):
        raise ValueError("derivation index must be 1 or 2")
    out = RingElement.zero()
    df = curve.df_elem()
    f = curve.f_elem()
    for (a, b), c in elem.coeffs.items():
        if b == 0:
            if a != 0:
                out = out + RingElement.monomial(a - 1, 1, 2 * a * c)
        else:
            if a != 0:
                out = out + f.mul(RingElement.monomial(a - 1, 0, 2 * a * c), curve)
            out = out + df.mul(RingElement.monomial(a, 0, c), curve)
    if j == 2:
        out = out.mul(RingElement.x_power(-1), curve)
    return out


def ring_eval(elem: RingElement, P: CurvePoint) -> complex:
    """Evaluate a ring element at an affine curve point."""
    if P.at_infinity:
        raise InfinityNotSupported("cannot evaluate a ring element at infinity")
    val = 0.0 + 0.0j
    for (a, b), c in elem.coeffs.items():
        if a < 0 and P.x == 0:
            raise PoleAtPoint(f"x^{a} has a pole at x = 0")
        val += c * P.x**a * (P.y if b else 1.0)
    return val


def pole_order(a: int, b: int) -> int:
    """Order of the pole of x^a y^b at the point at infinity."""
    return 2 * a + 5 * b


def monomial_sequence(count: int, include_one: bool) -> list[RingElement]:
    """First `count` monomials x^a y^b ordered by pole order at infinity.

    Pole orders run 0, 2, 4, 5, 6, 7, ... (1 and 3 are the Weierstrass
    gaps); dropping the constant starts the list at x.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    order = 0 if include_one else 2
    while len(out) < count:
        if order % 2 == 0:
            out.append(RingElement.x_power(order // 2))
        elif order >= 5:
            out.append(RingElement.monomial((order - 5) // 2, 1))
        order += 1
    return out
