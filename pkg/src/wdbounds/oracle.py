"""Reference values of the bounded functions, used as ground truth by verify.

The Wilker remainder is a sum of three O(1/x) terms that cancel down to
O(x**7); it is evaluated with enough extra bits to absorb that loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import gmpy2

from .errors import DomainViolation, PrecisionCapExceeded
from .exact import (
    DEFAULT_PRECISION_CAP,
    GUARD_BITS,
    BigFloat,
    PiConstant,
    _pi,
    bigfloat,
    precision_context,
    ulp,
)

ORACLE_ULPS = 16


@dataclass(frozen=True)
class TargetFn:
    id: str
    domain_end: PiConstant


WILKER = TargetFn("wilker", PiConstant.pi_power(1, Fraction(1, 2)))
SF_D3 = TargetFn("sf_d3", PiConstant.rational(1))
SF_DPI = TargetFn("sf_dpi", PiConstant.rational(1))
SF_E_LHS = TargetFn("sf_e_lhs", PiConstant.rational(1))

_BY_ID = {fn.id: fn for fn in (WILKER, SF_D3, SF_DPI, SF_E_LHS)}
# bound targets map onto the function they enclose
_FOR_BOUND_TARGET = {"wilker": WILKER, "sf_d3": SF_D3, "sf_dpi": SF_DPI, "sf_e": SF_E_LHS}


def target_fn(name: str) -> TargetFn:
    if name in _BY_ID:
        return _BY_ID[name]
    if name in _FOR_BOUND_TARGET:
        return _FOR_BOUND_TARGET[name]
    raise ValueError(f"unknown target function {name!r}")


def _working_bits(fn: TargetFn, x: BigFloat, precision: int) -> int:
    # bits lost to cancellation: about 8*log2(1/x) near 0 (Wilker is the worst case)
    # and log2(1/(1-x)) in 1 - x**2 near the right end of (0, 1)
    small = max(0, 1 - gmpy2.get_exp(x))
    bits = precision + GUARD_BITS + 8 * small
    if fn is not WILKER and x < 1:
        bits += 2 * max(0, 1 - gmpy2.get_exp(1 - x))
    return bits


def eval_target_with_error(
    fn: TargetFn, x, precision: int, cap: int = DEFAULT_PRECISION_CAP
) -> tuple[BigFloat, BigFloat]:
    """Value at ``x`` rounded to ``precision`` bits together with its 16-ulp error budget."""
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    if not isinstance(x, BigFloat):
        x = bigfloat(x, precision)
    if x <= 0:
        raise DomainViolation(f"x = {x} must be positive")

    bits = _working_bits(fn, x, precision)
    if bits > cap:
        raise PrecisionCapExceeded(f"x = {x} needs {bits} working bits (cap {cap})")

    with precision_context(bits):
        if fn is WILKER:
            if x > _pi(bits) / 2:
                raise DomainViolation(f"x = {x} outside (0, pi/2]")
            s = gmpy2.sin(x)
            c = gmpy2.cos(x)
            x2 = x * x
            value = 1 / x + s * c / x2 - 2 * c / s - 8 * x2 * x / 45 + 8 * x2 * x2 * x / 945
        else:
            if x > 1:
                raise DomainViolation(f"x = {x} outside (0, 1]")
            k = _pi(bits) if fn is SF_DPI else gmpy2.mpfr(3)
            value = gmpy2.asin(x) - k * x / (2 + gmpy2.sqrt(1 - x * x))
    value = gmpy2.mpfr(value, precision)
    return value, ulp(value, precision) * ORACLE_ULPS


def eval_target(fn: TargetFn, x, precision: int) -> BigFloat:
    return eval_target_with_error(fn, x, precision)[0]


# ---------------------------------------------------------------------------
# exact Taylor head of the Wilker remainder, independent of the Bernoulli formula


def _series_div(num: list[Fraction], den: list[Fraction], n: int) -> list[Fraction]:
    q: list[Fraction] = []
    for j in range(n):
        acc = num[j]
        for i in range(1, j + 1):
            acc -= den[i] * q[j - i]
        q.append(acc / den[0])
    return q


def taylor_head(terms: int, fn: str = "wilker") -> list[PiConstant]:
    """First ``terms`` odd-power Taylor coefficients of the Wilker remainder at 0.

    Works on x*f(x) = 1 + sin(2x)/(2x) - 2 x cot(x) - 8x**4/45 + 8x**6/945 as
    a series in t = x**2, with x cot x = cos(x) / (sin(x)/x) obtained by exact
    series division.  Coefficient k of the result multiplies x**(2k+1).
    """
    if fn != "wilker":
        raise ValueError("taylor_head is only defined for the wilker target")
    if not 0 <= terms <= 200:
        raise ValueError("terms must be in 0..200")
    n = terms + 1
    sin2x_over_2x = [Fraction((-1) ** j * 4**j, factorial(2 * j + 1)) for j in range(n)]
    cos_x = [Fraction((-1) ** j, factorial(2 * j)) for j in range(n)]
    sinc_x = [Fraction((-1) ** j, factorial(2 * j + 1)) for j in range(n)]
    x_cot_x = _series_div(cos_x, sinc_x, n)

    xf = [sin2x_over_2x[j] - 2 * x_cot_x[j] for j in range(n)]
    xf[0] += 1
    if n > 2:
        xf[2] -= Fraction(8, 45)
    if n > 3:
        xf[3] += Fraction(8, 945)
    assert xf[0] == 0, "x*f(x) must vanish at 0"
    return [PiConstant.rational(a) for a in xf[1:]]
