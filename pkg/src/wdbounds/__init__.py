"""Certified two-sided polynomial bounds for Wilker and Shafer-Fink type inequalities."""

from .bounds import (
    BoundPair,
    OddPolyBound,
    eval_bound,
    eval_bound_with_error,
    sf_d_bounds,
    sf_e_bounds,
    wd_bound_pair,
    wilker_bounds,
    wilker_gap_constant,
)
from .errors import (
    DomainViolation,
    InsufficientCoefficients,
    OrderTooSmall,
    PrecisionCapExceeded,
    WDBoundsError,
)
from .exact import PI, BigFloat, BigRational, PiConstant, bernoulli, format_exact, parse_exact, pi_eval, pi_sign
from .oracle import SF_D3, SF_DPI, SF_E_LHS, WILKER, TargetFn, eval_target, taylor_head
from .series import CoeffSeq, SplitSeries, sf_d, sf_e, split_nonneg, wilker_c
from .verify import ErrorTableRow, VerificationReport, max_gap, verify_escalating, verify_pair, wilker_error_table

__version__ = "0.1.0"
