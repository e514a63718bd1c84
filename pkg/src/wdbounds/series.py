"""Exact coefficient sequences of the Wilker and Shafer-Fink remainders.

Every sequence is indexed by m, where entry m is the coefficient of x**(2m+1).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .exact import PI, PiConstant, ZERO, as_pi_constant, bernoulli, pi_sign

SEQUENCE_IDS = ("wilker_c", "sf_d3", "sf_dpi", "sf_e")
SF_CONSTANTS = ("three", "pi")


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return factorial(n)


@lru_cache(maxsize=None)
def _wilker_c(k: int) -> Fraction:
    if k <= 2:
        return Fraction(0)
    b = abs(bernoulli(2 * k + 2))
    sign = 1 if (k + 1) % 2 == 0 else -1
    return 2 ** (2 * k + 2) * ((4 * k + 6) * b + sign) / _fact(2 * k + 3)


def wilker_c(k: int) -> PiConstant:
    """Coefficient of x**(2k+1) in 1/x + sin(2x)/(2x**2) - 2cot(x) - 8x**3/45 + 8x**5/945."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return PiConstant.rational(_wilker_c(k))


@lru_cache(maxsize=None)
def _sf_d_parts(m: int) -> tuple[Fraction, Fraction]:
    # D_k(m) = head - k * tail, both rational
    head = Fraction(_fact(2 * m), _fact(m) ** 2 * (2 * m + 1) * 2 ** (2 * m))
    tail = Fraction((-1) ** m, 3 ** (m + 1))
    for i in range(m):
        tail += Fraction(
            (-1) ** (m - 1 - i) * _fact(2 * i),
            3 ** (m - i) * _fact(i) * _fact(i + 1) * 2 ** (2 * i + 1),
        )
    return head, tail


def _sf_multiplier(k: str) -> PiConstant:
    if k == "three":
        return PiConstant.rational(3)
    if k == "pi":
        return PI
    raise ValueError(f"k must be one of {SF_CONSTANTS}, got {k!r}")


def sf_d(k: str, m: int) -> PiConstant:
    """Coefficient of x**(2m+1) in arcsin(x) - k*x/(2 + sqrt(1 - x**2)), k in {"three", "pi"}.

    For k = pi the first two entries are negative (1 - pi/3 and 1/6 - pi/18).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    head, tail = _sf_d_parts(m)
    return head - _sf_multiplier(k) * tail


@lru_cache(maxsize=None)
def _sf_e(m: int) -> Fraction:
    if m == 0:
        return Fraction(3)
    if m == 1:
        return Fraction(0)
    first = Fraction(m * _fact(2 * m - 1), (2 * m + 1) * 2 ** (2 * m - 2) * _fact(m) ** 2)
    second = Fraction(2 * m * 2 ** (2 * m - 2) * _fact(m - 1) ** 2, _fact(2 * m + 1))
    return first - second


def sf_e(m: int) -> PiConstant:
    """E(m) for the (2 + sqrt(1 - x**2))-weighted Shafer-Fink remainder.

    E(0) = 3 is a convention, not a Taylor coefficient: it makes
    pi - sum_{m<n} E(m) the exact upper-tail coefficient at every order n.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    return PiConstant.rational(_sf_e(m))


class CoeffSeq:
    """A lazily extended, memoized view of one of the four sequences."""

    def __init__(self, seq_id: str):
        if seq_id not in SEQUENCE_IDS:
            raise ValueError(f"unknown sequence {seq_id!r}")
        self.id = seq_id
        self._values: list[PiConstant] = []
        self._lock = threading.Lock()

    def _compute(self, m: int) -> PiConstant:
        if self.id == "wilker_c":
            return wilker_c(m)
        if self.id == "sf_d3":
            return sf_d("three", m)
        if self.id == "sf_dpi":
            return sf_d("pi", m)
        return sf_e(m)

    def __getitem__(self, m: int) -> PiConstant:
        if m < 0:
            raise IndexError(m)
        if m >= len(self._values):
            with self._lock:
                while len(self._values) <= m:
                    self._values.append(self._compute(len(self._values)))
        return self._values[m]

    def take(self, n: int) -> list[PiConstant]:
        """The first ``n`` values."""
        if n > 0:
            self[n - 1]
        return self._values[:n]

    def __repr__(self):
        return f"CoeffSeq({self.id!r}, computed={len(self._values)})"


@dataclass(frozen=True)
class SplitSeries:
    """Nonnegative part C_k of a coefficient list plus the (index, value) pairs that were negative."""

    nonneg: tuple[PiConstant, ...]
    negative_terms: tuple[tuple[int, PiConstant], ...]

    @property
    def negative_indices(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.negative_terms)

    def reassemble(self) -> list[PiConstant]:
        out = list(self.nonneg)
        for j, c in self.negative_terms:
            out[j] = out[j] + c
        return out


def split_nonneg(coeffs: Sequence) -> SplitSeries:
    """Keep positive coefficients, zero out the rest and collect the negative ones."""
    nonneg = []
    negative = []
    for j, c in enumerate(coeffs):
        c = as_pi_constant(c)
        s = pi_sign(c)
        if s > 0:
            nonneg.append(c)
        else:
            nonneg.append(ZERO)
            if s < 0:
                negative.append((j, c))
    return SplitSeries(tuple(nonneg), tuple(negative))
