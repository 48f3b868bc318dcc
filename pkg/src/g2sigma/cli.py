"""Command-line front end: period caches, point evaluation, verification.

Exit codes: 1 unreadable input, 2 bad curve or branch configuration,
3 non-convergent quadrature, 4 domain error during evaluation, 5 failed
verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .abel import abel_pair, abel_point
from .curve_ring import CurvePoint, make_curve
from .errors import (
    G2Error,
    NotMonicQuintic,
    QuadratureNonConvergent,
    SingularCurve,
    UnsupportedBranchConfiguration,
)
from .identities import SuiteConfig, psi, run_suite, write_report
from .kleinian import wp
from .periods import compute_periods, load_period_cache, save_period_cache
from .sigma import calibrate_c, sigma


@dataclass
class RunConfig:
    curve_file: str
    eps: float = 1e-12
    tol: float = 1e-5
    quad_order: int = 192
    fs_n: tuple[int, ...] = (2, 3, 4)
    kiepert_n: tuple[int, ...] = (2, 3, 4, 5)
    seed: int = 0
    cache_path: str | None = None
    report_path: str | None = None

    def __post_init__(self):
        if not self.eps < self.tol:
            raise ValueError("eps must be smaller than tol")
        if any(n < 1 for n in self.fs_n) or any(n < 1 for n in self.kiepert_n):
            raise ValueError("all n must be >= 1")
        if any(n > 6 for n in self.fs_n):
            raise ValueError("fs_n entries must be <= 6")
        if any(n > 8 for n in self.kiepert_n):
            raise ValueError("kiepert_n entries must be <= 8")


def _fmt(value: complex) -> str:
    return f"[{value.real:.17g}, {value.imag:.17g}]"


def load_curve_file(path):
    with open(path) as fh:
        doc = json.load(fh)
    lam = [complex(re, im) for re, im in doc["lambda"]]
    return make_curve(lam)


def _int_list(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _build_config(args) -> RunConfig:
    return RunConfig(
        curve_file=args.curve,
        eps=args.eps,
        tol=args.tol,
        quad_order=args.quad_order,
        fs_n=_int_list(args.fs_n),
        kiepert_n=_int_list(args.kiepert_n),
        seed=args.seed,
        cache_path=args.cache,
        report_path=args.report,
    )


def _context(config: RunConfig):
    """SigmaContext from the cache when present, else from fresh periods."""
    curve = load_curve_file(config.curve_file)
    if config.cache_path:
        try:
            pd, c, eps = load_period_cache(config.cache_path, curve)
        except FileNotFoundError:
            pd, c, eps = None, None, None
        if pd is not None:
            ctx = calibrate_c(pd, eps=eps or config.eps)
            return ctx
    pd = compute_periods(curve, config.quad_order)
    return calibrate_c(pd, eps=config.eps)


def cmd_periods(config: RunConfig) -> int:
    curve = load_curve_file(config.curve_file)
    pd = compute_periods(curve, config.quad_order)
    ctx = calibrate_c(pd, eps=config.eps)
    if config.cache_path:
        save_period_cache(pd, config.cache_path, c=ctx.c, eps=config.eps)
    print("modulus Z:")
    for row in pd.modulus:
        print("  " + "  ".join(_fmt(v) for v in row))
    sym = np.abs(pd.modulus - pd.modulus.T).max()
    eigs = np.linalg.eigvalsh(pd.modulus.imag)
    print(f"symmetry defect: {sym:.3e}")
    print(f"Im Z eigenvalues: {eigs[0]:.6g} {eigs[1]:.6g}")
    pairing = pd.legendre_pairing() / (2j * np.pi)
    print(f"pairing / 2*pi*i defect from identity: "
          f"{np.abs(pairing - np.eye(2)).max():.3e}")
    return 0


def _parse_u(text) -> np.ndarray:
    vals = _float_list(text)
    if len(vals) != 4:
        raise ValueError("--u expects 4 comma-separated floats: re1,im1,re2,im2")
    return np.array([complex(vals[0], vals[1]), complex(vals[2], vals[3])])


def _parse_point(text, curve) -> CurvePoint:
    vals = _float_list(text)
    if len(vals) == 2:
        x = complex(vals[0], vals[1])
        return CurvePoint(x, np.sqrt(complex(curve.f(x))))
    if len(vals) == 4:
        return CurvePoint(complex(vals[0], vals[1]), complex(vals[2], vals[3]))
    raise ValueError("--point expects x_re,x_im or x_re,x_im,y_re,y_im")


def cmd_eval(config: RunConfig, args) -> int:
    ctx = _context(config)
    curve = ctx.pd.curve
    if args.what == "sigma":
        value = sigma(_parse_u(args.u), ctx)
    elif args.what == "psi":
        if args.point is None:
            raise ValueError("psi evaluation needs --point")
        u = abel_point(_parse_point(args.point, curve), ctx).u
        value = psi(args.n, u, ctx)
    elif args.what == "wp":
        idx = tuple(int(ch) for ch in args.idx)
        if args.u is not None:
            u = _parse_u(args.u)
        elif args.point is not None and args.point2 is not None:
            u = abel_pair(
                _parse_point(args.point, curve), _parse_point(args.point2, curve), ctx
            )
        else:
            raise ValueError("wp evaluation needs --u or --point/--point2")
        value = wp(u, idx, ctx)
    else:
        raise ValueError(f"unknown target {args.what}")
    print(_fmt(complex(value)))
    return 0


def cmd_verify(config: RunConfig) -> int:
    ctx = _context(config)
    suite = SuiteConfig(
        fs_n=config.fs_n, kiepert_n=config.kiepert_n, seed=config.seed, tol=config.tol
    )
    reports = run_suite(ctx, suite)
    if config.report_path:
        write_report(reports, suite, config.report_path)
    width = max(len(r.name) for r in reports) + 2
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        extra = "" if r.sign_ratio is None else f"  sign={r.sign_ratio:.3f}"
        print(f"{r.name:<{width}} {status}  residual={r.residual:.3e}  "
              f"params={r.params}{extra}")
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return 0 if failed == 0 else 5


def build_parser():
    p = argparse.ArgumentParser(prog="g2sigma", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--curve", required=True, help="curve spec JSON file")
        sp.add_argument("--eps", type=float, default=1e-12)
        sp.add_argument("--tol", type=float, default=1e-5)
        sp.add_argument("--quad-order", dest="quad_order", type=int, default=192)
        sp.add_argument("--fs-n", dest="fs_n", default="2,3,4")
        sp.add_argument("--kiepert-n", dest="kiepert_n", default="2,3,4,5")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--cache", default=None)
        sp.add_argument("--report", default=None)

    sp = sub.add_parser("periods", help="compute and cache the period matrices")
    common(sp)

    sp = sub.add_parser("eval", help="evaluate sigma, psi, or wp at a point")
    common(sp)
    sp.add_argument("what", choices=["sigma", "psi", "wp"])
    sp.add_argument("--u", default=None, help="re1,im1,re2,im2")
    sp.add_argument("--point", default=None, help="curve point x_re,x_im[,y_re,y_im]")
    sp.add_argument("--point2", default=None, help="second curve point for wp")
    sp.add_argument("--n", type=int, default=2, help="psi index")
    sp.add_argument("--idx", default="22", help="wp index pair, e.g. 22 or 12")

    sp = sub.add_parser("verify", help="run the full identity suite")
    common(sp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "periods":
            return cmd_periods(config)
        if args.command == "eval":
            return cmd_eval(config, args)
        return cmd_verify(config)
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: cannot read input: {exc!r}", file=sys.stderr)
        return 1
    except (NotMonicQuintic, SingularCurve, UnsupportedBranchConfiguration) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except QuadratureNonConvergent as exc:
        print(f"error: QuadratureNonConvergent: {exc}", file=sys.stderr)
        return 3
    except (G2Error, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
