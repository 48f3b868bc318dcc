"""Numerical toolkit for genus-2 sigma, Kleinian wp, and psi functions."""

from .abel import AbelResult, abel_from_chart, abel_pair, abel_point, chart_point, curve_coords
from .curve_ring import (
    Curve,
    CurvePoint,
    RingElement,
    make_curve,
    monomial_sequence,
    ring_derive,
    ring_eval,
)
from .identities import (
    IdentityReport,
    SuiteConfig,
    check_limit_lemma31,
    fs_det,
    fs_lhs,
    kiepert_det,
    psi,
    run_suite,
    write_report,
)
from .kleinian import check_addition_formula, wp, wp3
from .periods import (
    PeriodData,
    compute_periods,
    lattice_reduce,
    load_period_cache,
    save_period_cache,
)
from .sigma import (
    SigmaContext,
    ThetaCharacteristic,
    calibrate_c,
    sigma,
    sigma_partial,
    theta_char,
    translation_character,
)

__all__ = [
    "AbelResult",
    "Curve",
    "CurvePoint",
    "IdentityReport",
    "PeriodData",
    "RingElement",
    "SigmaContext",
    "SuiteConfig",
    "ThetaCharacteristic",
    "abel_from_chart",
    "abel_pair",
    "abel_point",
    "calibrate_c",
    "chart_point",
    "check_addition_formula",
    "check_limit_lemma31",
    "compute_periods",
    "curve_coords",
    "fs_det",
    "fs_lhs",
    "kiepert_det",
    "lattice_reduce",
    "load_period_cache",
    "make_curve",
    "monomial_sequence",
    "psi",
    "ring_derive",
    "ring_eval",
    "run_suite",
    "save_period_cache",
    "sigma",
    "sigma_partial",
    "theta_char",
    "translation_character",
    "wp",
    "wp3",
    "write_report",
]

__version__ = "0.1.0"
