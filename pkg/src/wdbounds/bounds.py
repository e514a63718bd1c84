"""Two-sided odd-polynomial bounds built from a positive-coefficient series.

Given f(x) = sum_k c_k x**(2k+1) on (0, b) with all but finitely many c_k
positive, the lower bound is the Taylor head through x**(2n+1) and the upper
bound replaces the last term by the endpoint-corrected
(f(b) - sum_{k<n} c_k b**(2k+1)) * (x/b)**(2n+1).  Negative coefficients
are carried unchanged on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import gmpy2

from .errors import DomainViolation, InsufficientCoefficients, OrderTooSmall
from .exact import (
    ONE,
    PI,
    ZERO,
    BigFloat,
    PiConstant,
    as_pi_constant,
    bigfloat,
    pi_eval,
    precision_context,
    ulp,
)
from .series import sf_d, sf_e, split_nonneg, wilker_c

TARGETS = ("wilker", "sf_d3", "sf_dpi", "sf_e")
DENOMINATORS = ("one", "two_plus_sqrt")

HALF_PI = PI / 2


@dataclass(frozen=True)
class OddPolyBound:
    """sum coeff * x**degree on [0, domain_end], optionally divided by 2 + sqrt(1 - x**2)."""

    terms: tuple[tuple[int, PiConstant], ...]
    side: str
    domain_end: PiConstant
    denominator: str = "one"

    def __post_init__(self):
        degrees = [d for d, _ in self.terms]
        if any(d <= 0 or d % 2 == 0 for d in degrees):
            raise ValueError(f"degrees must be odd and positive: {degrees}")
        if degrees != sorted(set(degrees)):
            raise ValueError(f"degrees must be strictly increasing: {degrees}")
        if self.side not in ("lower", "upper"):
            raise ValueError(f"bad side {self.side!r}")
        if self.denominator not in DENOMINATORS:
            raise ValueError(f"bad denominator {self.denominator!r}")

    @classmethod
    def from_coeffs(cls, coeffs: dict[int, PiConstant], side, domain_end, denominator="one"):
        terms = tuple((d, c) for d, c in sorted(coeffs.items()) if not c.is_zero)
        return cls(terms, side, domain_end, denominator)

    @property
    def domain(self) -> tuple[PiConstant, PiConstant]:
        return (ZERO, self.domain_end)

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def coefficient(self, degree: int) -> PiConstant:
        for d, c in self.terms:
            if d == degree:
                return c
        return ZERO

    def numerator_at(self, point) -> PiConstant:
        """Exact value of the polynomial part at a point of the ring (e.g. the endpoint)."""
        point = as_pi_constant(point)
        total = ZERO
        for d, c in self.terms:
            total = total + c * point**d
        return total


@dataclass(frozen=True)
class BoundPair:
    target: str
    order: int
    lower: OddPolyBound
    upper: OddPolyBound
    endpoint_value: PiConstant

    def __post_init__(self):
        if self.lower.side != "lower" or self.upper.side != "upper":
            raise ValueError("lower/upper sides swapped")
        if (self.lower.domain_end, self.lower.denominator) != (
            self.upper.domain_end,
            self.upper.denominator,
        ):
            raise ValueError("lower and upper bounds disagree on domain or denominator")

    @property
    def domain_end(self) -> PiConstant:
        return self.upper.domain_end

    @property
    def denominator(self) -> str:
        return self.upper.denominator

    def gap_coefficients(self) -> dict[int, PiConstant]:
        """Exact coefficients of upper - lower (numerators, if a denominator is present)."""
        out: dict[int, PiConstant] = {}
        for d, c in self.upper.terms:
            out[d] = out.get(d, ZERO) + c
        for d, c in self.lower.terms:
            out[d] = out.get(d, ZERO) - c
        return {d: c for d, c in sorted(out.items()) if not c.is_zero}


def wd_bound_pair(
    coeffs: Sequence,
    n: int,
    endpoint_value,
    b,
    *,
    target: str = "custom",
    denominator: str = "one",
) -> BoundPair:
    """Order-``n`` lower/upper bounds for f(x) = sum_k coeffs[k] x**(2k+1) on (0, b).

    ``endpoint_value`` is f(b-).  ``coeffs`` must contain entries 0..n and
    every negative coefficient of the series; extra positive entries past n
    are ignored.  ``b`` has to be a monomial q*pi**e so that b**-(2n+1)
    stays in the ring.
    """
    if n < 1:
        raise OrderTooSmall("order n must be at least 1")
    if len(coeffs) <= n:
        raise InsufficientCoefficients(f"need coefficients 0..{n}, got {len(coeffs)}")
    b = as_pi_constant(b)
    endpoint_value = as_pi_constant(endpoint_value)

    split = split_nonneg(coeffs)
    lower: dict[int, PiConstant] = {}
    upper: dict[int, PiConstant] = {}

    def add(poly, k, c):
        d = 2 * k + 1
        poly[d] = poly.get(d, ZERO) + c

    remainder = endpoint_value
    for k in range(n + 1):
        add(lower, k, split.nonneg[k])
    for k in range(n):
        add(upper, k, split.nonneg[k])
        remainder = remainder - split.nonneg[k] * b ** (2 * k + 1)
    for j, c in split.negative_terms:
        add(lower, j, c)
        add(upper, j, c)
        remainder = remainder - c * b ** (2 * j + 1)
    add(upper, n, remainder * b ** (-(2 * n + 1)))

    return BoundPair(
        target=target,
        order=n,
        lower=OddPolyBound.from_coeffs(lower, "lower", b, denominator),
        upper=OddPolyBound.from_coeffs(upper, "upper", b, denominator),
        endpoint_value=endpoint_value,
    )


def wilker_endpoint_value() -> PiConstant:
    """f(pi/2) for f = 1/x + sin(2x)/(2x**2) - 2cot(x) - 8x**3/45 + 8x**5/945 (sin(pi) = cot(pi/2) = 0)."""
    b = HALF_PI
    return b.inverse() - Fraction(8, 45) * b**3 + Fraction(8, 945) * b**5


def sf_endpoint_value(k: str) -> PiConstant:
    """f_k(1) = arcsin(1) - k/2."""
    if k not in ("three", "pi"):
        raise ValueError(f"k must be 'three' or 'pi', got {k!r}")
    mult = PiConstant.rational(3) if k == "three" else PI
    return HALF_PI - mult / 2


@lru_cache(maxsize=None)
def wilker_bounds(m: int) -> BoundPair:
    if m < 3:
        raise OrderTooSmall("wilker bounds need m >= 3 (lower orders are identically zero)")
    coeffs = [wilker_c(k) for k in range(m + 1)]
    return wd_bound_pair(coeffs, m, wilker_endpoint_value(), HALF_PI, target="wilker")


@lru_cache(maxsize=None)
def sf_d_bounds(k: str, n: int) -> BoundPair:
    if n < 1:
        raise OrderTooSmall("Shafer-Fink D bounds need n >= 1")
    coeffs = [sf_d(k, m) for m in range(n + 1)]
    target = "sf_d3" if k == "three" else "sf_dpi"
    return wd_bound_pair(coeffs, n, sf_endpoint_value(k), ONE, target=target)


@lru_cache(maxsize=None)
def sf_e_bounds(n: int) -> BoundPair:
    """Bounds on arcsin(x) - 3x/(2+sqrt(1-x**2)) whose numerators carry E(m), over 2 + sqrt(1 - x**2)."""
    if n < 2:
        raise OrderTooSmall("Shafer-Fink E bounds need n >= 2")
    lower = {2 * m + 1: sf_e(m) for m in range(2, n + 1)}
    upper = {2 * m + 1: sf_e(m) for m in range(2, n)}
    tail = PI
    for m in range(n):
        tail = tail - sf_e(m)
    upper[2 * n + 1] = tail
    return BoundPair(
        target="sf_e",
        order=n,
        lower=OddPolyBound.from_coeffs(lower, "lower", ONE, "two_plus_sqrt"),
        upper=OddPolyBound.from_coeffs(upper, "upper", ONE, "two_plus_sqrt"),
        endpoint_value=PI / 2 - PiConstant.rational(3) / 2,
    )


def build_pair(target: str, order: int) -> BoundPair:
    """Dispatch on the target name used by the CLI and verify module."""
    if target == "wilker":
        return wilker_bounds(order)
    if target == "sf_d3":
        return sf_d_bounds("three", order)
    if target == "sf_dpi":
        return sf_d_bounds("pi", order)
    if target == "sf_e":
        return sf_e_bounds(order)
    raise ValueError(f"unknown target {target!r}")


MIN_ORDER = {"wilker": 3, "sf_d3": 1, "sf_dpi": 1, "sf_e": 2}


def wilker_gap_constant(m: int) -> PiConstant:
    """f(pi/2) - sum_{k=3}^{m} c_k (pi/2)**(2k+1); upper - lower = this * (2x/pi)**(2m+1)."""
    if m < 3:
        raise OrderTooSmall("m must be at least 3")
    total = wilker_endpoint_value()
    for k in range(3, m + 1):
        total = total - wilker_c(k) * HALF_PI ** (2 * k + 1)
    return total


# ---------------------------------------------------------------------------
# numeric evaluation


@dataclass(frozen=True)
class _Prepared:
    lowest: int
    dense: tuple  # coefficients in t = x**2, starting at x**lowest
    dense_abs: tuple
    end: BigFloat
    error_ulps: int


@lru_cache(maxsize=512)
def _prepare(bound: OddPolyBound, precision: int) -> _Prepared:
    if not bound.terms:
        return _Prepared(1, (), (), pi_eval(bound.domain_end, precision), 0)
    lowest = bound.terms[0][0]
    dense = [gmpy2.mpfr(0, precision)] * ((bound.degree - lowest) // 2 + 1)
    for d, c in bound.terms:
        dense[(d - lowest) // 2] = pi_eval(c, precision)
    # Horner on t = x**2: two roundings per step plus x**lowest, coefficients (1 ulp each)
    # and the optional denominator.
    err = 8 + 2 * bound.degree + (4 if bound.denominator == "two_plus_sqrt" else 0)
    return _Prepared(
        lowest,
        tuple(dense),
        tuple(abs(a) for a in dense),
        pi_eval(bound.domain_end, precision),
        err,
    )


def _check_domain(x: BigFloat, end: BigFloat, precision: int):
    if x < 0 or x > end + ulp(end, min(precision, x.precision)):
        raise DomainViolation(f"x = {x} outside [0, {end}]")


def eval_bound_with_error(bound: OddPolyBound, x, precision: int) -> tuple[BigFloat, BigFloat]:
    """Value of ``bound`` at ``x`` and an absolute error bound, both at ``precision`` bits.

    The error bound is ``(8 + 2*degree [+4]) * 2**(1-p) * A`` where A is the
    same expression evaluated on |coefficients| and |x|.
    """
    if precision < 16:
        raise ValueError("precision must be at least 16 bits")
    prep = _prepare(bound, precision)
    with precision_context(precision):
        x = x if isinstance(x, BigFloat) else bigfloat(x, precision)
        _check_domain(x, prep.end, precision)
        if not prep.dense:
            return gmpy2.mpfr(0), gmpy2.mpfr(0)
        t = x * x
        h = gmpy2.mpfr(0)
        habs = gmpy2.mpfr(0)
        for a, aa in zip(reversed(prep.dense), reversed(prep.dense_abs)):
            h = h * t + a
            habs = habs * t + aa
        xp = x**prep.lowest
        value = h * xp
        mag = habs * abs(xp)
        if bound.denominator == "two_plus_sqrt":
            den = 2 + gmpy2.sqrt(1 - t)
            value = value / den
            mag = mag / den
        err = gmpy2.mul_2exp(mag * prep.error_ulps, 1 - precision)
    return value, err


def eval_bound(bound: OddPolyBound, x, precision: int) -> BigFloat:
    return eval_bound_with_error(bound, x, precision)[0]
