"""Exact arithmetic: rationals, Bernoulli numbers and constants of the form sum q_e * pi**e.

Rationals are :class:`fractions.Fraction` (always reduced, positive denominator).
Multiprecision floats are MPFR numbers from :mod:`gmpy2`; every elementary
operation on them is correctly rounded, which is what the error budgets in
:mod:`wdbounds.bounds` and :mod:`wdbounds.oracle` rely on.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Union

import gmpy2

from .errors import PrecisionCapExceeded

BigRational = Fraction
BigFloat = gmpy2.mpfr

GUARD_BITS = 32
DEFAULT_PRECISION_CAP = 2**20

RationalLike = Union[int, Fraction]


def precision_context(bits: int):
    """Context manager setting the gmpy2 working precision for this thread."""
    return gmpy2.context(gmpy2.get_context(), precision=bits)


def bigfloat(value, precision: int) -> BigFloat:
    """Round ``value`` (int, Fraction, str, float or mpfr) to ``precision`` bits."""
    if isinstance(value, Fraction):
        value = gmpy2.mpq(value.numerator, value.denominator)
    return gmpy2.mpfr(value, precision)


def ulp(value: BigFloat, precision: int) -> BigFloat:
    """Unit in the last place of ``value`` at ``precision`` bits (0 maps to the tiniest ulp)."""
    if value == 0:
        return gmpy2.mpfr(2) ** (-precision - 1074)
    return gmpy2.mul_2exp(gmpy2.mpfr(1), gmpy2.get_exp(value) - precision)


# ---------------------------------------------------------------------------
# Bernoulli numbers

_bernoulli_lock = threading.Lock()
_bernoulli_table: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def bernoulli(n: int) -> Fraction:
    """Return B_n with the convention B_1 = -1/2.

    Uses sum_{j=0}^{m} C(m+1, j) B_j = 0, memoized.  Odd indices above 1 are
    zero and are skipped in the recurrence.
    """
    if n < 0:
        raise ValueError("bernoulli index must be nonnegative")
    table = _bernoulli_table
    if n < len(table):
        return table[n]
    with _bernoulli_lock:
        while len(table) <= n:
            m = len(table)
            if m % 2:
                table.append(Fraction(0))
                continue
            acc = Fraction(1) - Fraction(m + 1, 2)  # j = 0 and j = 1 terms
            for j in range(2, m, 2):
                acc += comb(m + 1, j) * table[j]
            table.append(-acc / (m + 1))
    return table[n]


# ---------------------------------------------------------------------------
# pi and the ring Q[pi, 1/pi]


@lru_cache(maxsize=64)
def _pi(bits: int) -> BigFloat:
    # MPFR's const_pi is correctly rounded at any precision.
    return gmpy2.const_pi(precision=bits)


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class PiConstant:
    """An exact real number sum_e q_e * pi**e with rational q_e and integer e.

    Instances are immutable and canonical: zero coefficients are never
    stored, so equality is term-by-term.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        items = []
        for e, q in (terms or {}).items():
            q = _as_fraction(q)
            if q:
                items.append((int(e), q))
        items.sort()
        self._terms: tuple[tuple[int, Fraction], ...] = tuple(items)
        self._hash = hash(self._terms)

    @classmethod
    def _from_items(cls, items: Iterable[tuple[int, Fraction]]) -> "PiConstant":
        acc: dict[int, Fraction] = {}
        for e, q in items:
            acc[e] = acc.get(e, Fraction(0)) + q
        return cls(acc)

    @classmethod
    def rational(cls, q: RationalLike) -> "PiConstant":
        return cls({0: q})

    @classmethod
    def pi_power(cls, e: int, q: RationalLike = 1) -> "PiConstant":
        return cls({e: q})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def exponents(self) -> set[int]:
        return {e for e, _ in self._terms}

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_rational(self) -> bool:
        return all(e == 0 for e, _ in self._terms)

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coefficient(self, e: int) -> Fraction:
        for ee, q in self._terms:
            if ee == e:
                return q
        return Fraction(0)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coefficient(0)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "PiConstant | None":
        if isinstance(other, PiConstant):
            return other
        if isinstance(other, (int, Fraction)):
            return PiConstant.rational(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PiConstant._from_items(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return PiConstant({e: -q for e, q in self._terms})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PiConstant._from_items(
            (e1 + e2, q1 * q2) for e1, q1 in self._terms for e2, q2 in other._terms
        )

    __rmul__ = __mul__

    def inverse(self) -> "PiConstant":
        """Multiplicative inverse; only monomials q * pi**e are invertible in this ring."""
        if not self.is_monomial:
            raise ZeroDivisionError(f"{self} is not an invertible monomial")
        (e, q), = self._terms
        return PiConstant({-e: 1 / q})

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = PiConstant.rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"PiConstant({dict(self._terms)!r})"

    def __str__(self):
        return format_exact(self)


ZERO = PiConstant()
ONE = PiConstant.rational(1)
PI = PiConstant.pi_power(1)


def as_pi_constant(value) -> PiConstant:
    if isinstance(value, PiConstant):
        return value
    return PiConstant.rational(_as_fraction(value))


# ---------------------------------------------------------------------------
# numeric evaluation


def _enclose(c: PiConstant, bits: int) -> tuple[BigFloat, BigFloat]:
    """Midpoint and error radius of ``c`` computed with ``bits`` of working precision."""
    with precision_context(bits):
        pi = _pi(bits)
        total = gmpy2.mpfr(0)
        weighted = gmpy2.mpfr(0)
        k = len(c.items())
        for e, q in c.items():
            term = gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator)) * pi**e
            total += term
            weighted += abs(term) * (abs(e) + 4 + k)
        # first-order per-term and summation error, doubled for slack
        radius = gmpy2.mul_2exp(weighted, 1 - bits)
    return total, radius


def pi_eval(c: PiConstant, precision: int, cap: int = DEFAULT_PRECISION_CAP) -> BigFloat:
    """Numeric value of ``c`` rounded to ``precision`` bits, within 1 ulp.

    Working precision starts at ``precision + GUARD_BITS`` and doubles while
    cancellation between terms leaves the error radius above half an ulp.
    """
    if precision < 16:
        raise ValueError("precision must be at least 16 bits")
    c = as_pi_constant(c)
    if c.is_zero:
        return gmpy2.mpfr(0, precision)
    bits = precision + GUARD_BITS
    while bits <= cap:
        total, radius = _enclose(c, bits)
        if total != 0 and radius <= gmpy2.mul_2exp(ulp(total, precision), -1):
            return gmpy2.mpfr(total, precision)
        bits *= 2
    raise PrecisionCapExceeded(f"could not evaluate {c} to {precision} bits within {cap} bits")


def pi_sign(c: PiConstant, cap: int = DEFAULT_PRECISION_CAP) -> int:
    """Exact sign of ``c`` as -1, 0 or +1."""
    c = as_pi_constant(c)
    if c.is_zero:
        return 0
    if c.is_monomial:
        (_, q), = c.items()
        return 1 if q > 0 else -1
    # pi is transcendental, so a canonical multi-term constant is never zero
    bits = 64
    while bits <= cap:
        total, radius = _enclose(c, bits)
        if abs(total) > radius:
            return 1 if total > 0 else -1
        bits *= 2
    raise PrecisionCapExceeded(f"sign of {c} unresolved within {cap} bits")


# ---------------------------------------------------------------------------
# textual grammar
#
#   constant := "0" | term { (" + " | " - ") term }      first term may carry a leading "-"
#   term     := rational | rational "*" pipow | pipow
#   rational := digits [ "/" digits ]
#   pipow    := "pi" [ "^" [ "-" ] digits ]
#
# Terms are printed in ascending exponent order; pi powers always carry "^e".

_TERM_RE = re.compile(r"^(?:(\d+)(?:/(\d+))?)?(\*)?(?:(pi)(?:\^(-?\d+))?)?$")


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_exact(c) -> str:
    c = as_pi_constant(c)
    if c.is_zero:
        return "0"
    parts = []
    for i, (e, q) in enumerate(c.items()):
        mag = abs(q)
        if e == 0:
            body = _format_rational(mag)
        elif mag == 1:
            body = f"pi^{e}"
        else:
            body = f"{_format_rational(mag)}*pi^{e}"
        if i == 0:
            parts.append(("-" if q < 0 else "") + body)
        else:
            parts.append((" - " if q < 0 else " + ") + body)
    return "".join(parts)


def parse_exact(text: str) -> PiConstant:
    """Inverse of :func:`format_exact` (also accepts bare ``pi`` for pi^1)."""
    s = text.strip()
    if not s:
        raise ValueError("empty constant")
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:]
    pieces = re.split(r" ([+-]) ", s)
    signs = [sign] + [1 if op == "+" else -1 for op in pieces[1::2]]
    acc: dict[int, Fraction] = {}
    for sg, tok in zip(signs, pieces[0::2]):
        m = _TERM_RE.match(tok)
        if not m or not tok:
            raise ValueError(f"malformed term {tok!r} in {text!r}")
        num, den, star, pi, exp = m.groups()
        if pi is None and (star or exp):
            raise ValueError(f"malformed term {tok!r} in {text!r}")
        if pi is not None and num is not None and not star:
            raise ValueError(f"missing '*' in term {tok!r}")
        if num is None and star:
            raise ValueError(f"malformed term {tok!r} in {text!r}")
        q = Fraction(int(num), int(den) if den else 1) if num is not None else Fraction(1)
        e = (int(exp) if exp is not None else 1) if pi is not None else 0
        acc[e] = acc.get(e, Fraction(0)) + sg * q
    return PiConstant(acc)
