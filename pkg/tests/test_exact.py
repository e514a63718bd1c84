import threading
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bernoulli_egf, bernoulli_sum_identity
from wdbounds.errors import PrecisionCapExceeded
from wdbounds.exact import (
    PI,
    ZERO,
    PiConstant,
    bernoulli,
    bigfloat,
    format_exact,
    parse_exact,
    pi_eval,
    pi_sign,
    precision_context,
)

# pi to 60 digits, independent of MPFR
PI_60 = "3.14159265358979323846264338327950288419716939937510582097494"


@pytest.mark.parametrize(
    "n, expected",
    [(0, Fraction(1)), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (8, Fraction(-1, 30)), (12, Fraction(-691, 2730))],
)
def test_bernoulli_values(n, expected):
    assert bernoulli(n) == expected


def test_bernoulli_matches_generating_function():
    egf = bernoulli_egf(61)
    assert [bernoulli(n) for n in range(61)] == egf


def test_bernoulli_odd_vanish_and_recurrence():
    bs = [bernoulli(n) for n in range(202)]
    assert all(bs[n] == 0 for n in range(3, 202, 2))
    assert all(bernoulli_sum_identity(bs, m) == 0 for m in range(1, 201))


def test_bernoulli_concurrent_access():
    results = []

    def work(n):
        results.append((n, bernoulli(n)))

    threads = [threading.Thread(target=work, args=(n,)) for n in range(250, 290, 2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    egf = bernoulli_egf(290)
    assert all(v == egf[n] for n, v in results)


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli(-1)


# -- PiConstant ---------------------------------------------------------------


def test_canonical_form_drops_zeros():
    c = PiConstant({0: 1, 1: 0, -2: Fraction(0)})
    assert c.terms == {0: Fraction(1)}
    assert PiConstant({1: 1}) - PI == ZERO
    assert ZERO.is_zero and not ZERO


def test_arithmetic_with_rationals():
    c = 1 - PI / 3
    assert c == PiConstant({0: 1, 1: Fraction(-1, 3)})
    assert (PI / 2) ** -2 == PiConstant({-2: 4})
    assert 2 * PI - PI == PI
    assert Fraction(1, 2) * PI == PiConstant({1: Fraction(1, 2)})
    with pytest.raises(ZeroDivisionError):
        (1 + PI).inverse()


pi_constants = st.dictionaries(
    st.integers(-6, 6),
    st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100),
    max_size=4,
).map(PiConstant)


@given(pi_constants, pi_constants, pi_constants)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert hash(a + b) == hash(b + a)


@given(pi_constants)
def test_grammar_round_trip(c):
    assert parse_exact(format_exact(c)) == c


@pytest.mark.parametrize(
    "c, text",
    [
        (1 - PI / 3, "1 - 1/3*pi^1"),
        (Fraction(-271, 180) + PI / 2, "-271/180 + 1/2*pi^1"),
        (PI - Fraction(181, 60), "-181/60 + pi^1"),
        (PiConstant({-8: 256, -4: Fraction(-128, 45)}), "256*pi^-8 - 128/45*pi^-4"),
        (ZERO, "0"),
        (-PI, "-pi^1"),
    ],
)
def test_grammar_examples(c, text):
    assert format_exact(c) == text
    assert parse_exact(text) == c


def test_parse_accepts_bare_pi_and_rejects_garbage():
    assert parse_exact("2*pi") == 2 * PI
    for bad in ["", "3pi", "1/3*", "pi^", "1 -- 2", "*pi"]:
        with pytest.raises(ValueError):
            parse_exact(bad)


def test_pi_eval_rational_is_exact():
    assert pi_eval(PiConstant.rational(1), 64) == 1


def test_pi_eval_half_pi_minus_three_halves():
    v = pi_eval(PiConstant({1: Fraction(1, 2), 0: Fraction(-3, 2)}), 128)
    with precision_context(200):
        ref = gmpy2.mpfr(PI_60) / 2 - gmpy2.mpfr(1.5)
        assert abs(v - ref) < gmpy2.mpfr(2) ** -125
    assert f"{v:.18f}".startswith("0.070796326794896619")


def test_pi_eval_wilker_endpoint():
    v = pi_eval(PiConstant({-1: 2, 3: Fraction(-1, 45), 5: Fraction(1, 3780)}), 128)
    assert f"{v:.12f}".startswith("0.028548")


@settings(max_examples=60, deadline=None)
@given(pi_constants, st.sampled_from([32, 64, 100, 160]))
def test_pi_eval_precision_coherence(c, p):
    lo = pi_eval(c, p)
    hi = pi_eval(c, 2 * p)
    with precision_context(4 * p):
        tol = 8 * gmpy2.mpfr(2) ** -p * (abs(hi) + 1)
        assert abs(lo - hi) <= tol


def test_pi_eval_resolves_heavy_cancellation():
    # 355/113 agrees with pi to about 2.7e-7
    c = PI - Fraction(355, 113)
    v = pi_eval(c, 64)
    with precision_context(200):
        ref = gmpy2.mpfr(PI_60) - gmpy2.mpfr(355) / 113
        assert abs(v - ref) <= abs(ref) * gmpy2.mpfr(2) ** -62


def test_pi_sign_examples():
    assert pi_sign(ZERO) == 0
    assert pi_sign(PiConstant({0: Fraction(3, 40), 1: Fraction(-5, 216)})) == 1
    assert pi_sign(PiConstant({0: 1, 1: Fraction(-1, 3)})) == -1
    assert pi_sign(PiConstant({-3: Fraction(-2, 7)})) == -1


@settings(max_examples=80, deadline=None)
@given(pi_constants)
def test_pi_sign_agrees_with_evaluation(c):
    v = pi_eval(c, 512) if c else gmpy2.mpfr(0)
    if abs(v) > gmpy2.mpfr(2.0) ** -256:
        assert pi_sign(c) == (1 if v > 0 else -1)


def test_pi_sign_cap():
    # a convergent of pi that is far too close for a 128-bit cap
    c = PI - Fraction(PI_60[:57])
    with pytest.raises(PrecisionCapExceeded):
        pi_sign(c, cap=128)
    assert pi_sign(c) in (-1, 1)


def test_bigfloat_from_fraction_rounds_once():
    x = bigfloat(Fraction(1, 3), 80)
    assert x.precision == 80
    with precision_context(200):
        assert abs(x - gmpy2.mpfr(1) / 3) < gmpy2.mpfr(2) ** -81
