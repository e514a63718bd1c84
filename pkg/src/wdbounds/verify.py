"""Numerical verification of bound pairs against the oracle.

A pair is *verified* on a grid when, at every sampled point, the oracle sits
strictly between the two bounds by more than the combined evaluation error
of the three numbers involved.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import gmpy2

from .bounds import BoundPair, eval_bound, eval_bound_with_error, wilker_bounds, wilker_gap_constant
from .errors import OrderTooSmall
from .exact import BigFloat, pi_eval, pi_sign, precision_context, ulp
from .oracle import eval_target_with_error, target_fn

VERIFIED = "verified"
INDETERMINATE = "indeterminate"
VIOLATED = "violated"


@dataclass(frozen=True)
class VerificationReport:
    target: str
    order: int
    grid_points: int
    precision_bits: int
    min_lower_margin: BigFloat
    min_upper_margin: BigFloat
    max_gap: BigFloat
    argmax_x: BigFloat
    status: str

    def to_dict(self, digits: int = 20) -> dict:
        out = asdict(self)
        for key in ("min_lower_margin", "min_upper_margin", "max_gap", "argmax_x"):
            out[key] = f"{out[key]:.{digits}g}"
        return out


@dataclass(frozen=True)
class ErrorTableRow:
    m: int
    sup_gap: BigFloat


def grid(end: BigFloat, points: int, precision: int) -> list[BigFloat]:
    """x_i = end * i / (points + 1), i = 1..points, rounded to ``precision`` bits."""
    with precision_context(precision):
        return [end * i / (points + 1) for i in range(1, points + 1)]


@lru_cache(maxsize=16)
def _oracle_on_grid(fn_id: str, points: int, precision: int):
    fn = target_fn(fn_id)
    xs = grid(pi_eval(fn.domain_end, precision), points, precision)
    return tuple((x,) + eval_target_with_error(fn, x, precision) for x in xs)


def _oracle_key(target: str) -> str:
    # the sf_e bounds enclose the same function as the k = 3 D bounds
    return "sf_d3" if target == "sf_e" else target


def verify_pair(pair: BoundPair, grid_points: int, precision: int) -> VerificationReport:
    """Check lower < oracle < upper on a strictly interior uniform grid."""
    if grid_points < 2:
        raise ValueError("grid must be >= 2")
    samples = _oracle_on_grid(_oracle_key(pair.target), grid_points, precision)

    verified = True
    violated = False
    min_lo = min_hi = max_gap = argmax = None
    with precision_context(precision):
        for x, f, f_err in samples:
            lo, lo_err = eval_bound_with_error(pair.lower, x, precision)
            hi, hi_err = eval_bound_with_error(pair.upper, x, precision)
            m_lo = f - lo
            m_hi = hi - f
            # one extra rounding in each subtraction
            budget_lo = f_err + lo_err + ulp(m_lo, precision)
            budget_hi = f_err + hi_err + ulp(m_hi, precision)
            if m_lo <= budget_lo or m_hi <= budget_hi:
                verified = False
            if m_lo < -budget_lo or m_hi < -budget_hi:
                violated = True
            gap = hi - lo
            if min_lo is None or m_lo < min_lo:
                min_lo = m_lo
            if min_hi is None or m_hi < min_hi:
                min_hi = m_hi
            if max_gap is None or gap > max_gap:
                max_gap, argmax = gap, x

    status = VIOLATED if violated else VERIFIED if verified else INDETERMINATE
    return VerificationReport(
        target=pair.target,
        order=pair.order,
        grid_points=grid_points,
        precision_bits=precision,
        min_lower_margin=min_lo,
        min_upper_margin=min_hi,
        max_gap=max_gap,
        argmax_x=argmax,
        status=status,
    )


def verify_escalating(
    pair: BoundPair, grid_points: int, precision: int, max_precision: int = 2**16
) -> VerificationReport:
    """Double the precision while the report is indeterminate."""
    report = verify_pair(pair, grid_points, precision)
    while report.status == INDETERMINATE and precision * 2 <= max_precision:
        precision *= 2
        report = verify_pair(pair, grid_points, precision)
    return report


# ---------------------------------------------------------------------------
# maximum gap


_INV_PHI = (5**0.5 - 1) / 2


def max_gap(pair: BoundPair, precision: int, scan_points: int = 1024) -> tuple[BigFloat, BigFloat]:
    """Maximize upper - lower over the domain; returns (argmax, gap).

    A uniform scan picks the best cell, then golden-section search refines
    inside the neighbouring cells until the bracket is narrower than
    2**(-precision/2).  Bracket ends are candidates too, so a gap that grows
    up to the right endpoint reports that endpoint.
    """
    end = pi_eval(pair.domain_end, precision)

    def gap(x):
        return eval_bound(pair.upper, x, precision) - eval_bound(pair.lower, x, precision)

    with precision_context(precision):
        xs = [gmpy2.mpfr(0)] + grid(end, scan_points, precision) + [end]
        values = [gap(x) for x in xs]
        j = max(range(len(xs)), key=lambda i: (values[i], -i))
        a = xs[max(j - 1, 0)]
        b = xs[min(j + 1, len(xs) - 1)]
        best_x, best = xs[j], values[j]
        for x in (a, b):
            g = gap(x)
            if g > best:
                best_x, best = x, g

        tol = gmpy2.mul_2exp(gmpy2.mpfr(1), -(precision // 2))
        r = gmpy2.mpfr(_INV_PHI)
        c = b - r * (b - a)
        d = a + r * (b - a)
        gc, gd = gap(c), gap(d)
        while b - a > tol:
            if gc >= gd:
                b, d, gd = d, c, gc
                c = b - r * (b - a)
                gc = gap(c)
            else:
                a, c, gc = c, d, gd
                d = a + r * (b - a)
                gd = gap(d)
            for x, g in ((c, gc), (d, gd)):
                if g > best:
                    best_x, best = x, g
        if best <= 0:
            best = gmpy2.mpfr(0)
    return best_x, best


# ---------------------------------------------------------------------------
# error table for the Wilker bounds


def wilker_error_table(orders, precision: int) -> list[ErrorTableRow]:
    """sup over (0, pi/2) of upper_m - lower_m for each order m.

    The gap is gap_constant(m) * (2x/pi)**(2m+1); with a positive constant it
    increases in x, so the supremum is the constant itself.  A non-positive
    constant would fall back to a numeric search.
    """
    rows = []
    for m in orders:
        if m < 3:
            raise OrderTooSmall(f"order {m} < 3")
        constant = wilker_gap_constant(m)
        if pi_sign(constant) > 0:
            sup = pi_eval(constant, precision)
        else:
            sup = max_gap(wilker_bounds(m), precision)[1]
        rows.append(ErrorTableRow(m, sup))
    return rows
