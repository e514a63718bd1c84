from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import K_VALUES, sf_d_series, sf_e_series
from wdbounds.exact import PI, ZERO, PiConstant, pi_sign
from wdbounds.series import CoeffSeq, sf_d, sf_e, split_nonneg, wilker_c

WILKER_DISPLAYED = [
    Fraction(16, 14175),
    Fraction(8, 467775),
    Fraction(3184, 638512875),
    Fraction(272, 638512875),
    Fraction(7264, 162820783125),
]

SF_DPI_PRINTED = [
    1 - PI / 3,
    Fraction(1, 6) - PI / 18,
    Fraction(3, 40) - 5 * PI / 216,
    Fraction(5, 112) - 17 * PI / 1296,
    Fraction(35, 1152) - 269 * PI / 31104,
    Fraction(63, 2816) - 1163 * PI / 186624,
    Fraction(231, 13312) - 10657 * PI / 2239488,
]


def test_wilker_c_small_indices_vanish():
    assert [wilker_c(k) for k in range(3)] == [ZERO] * 3


def test_wilker_c_matches_displayed_series():
    assert [wilker_c(k) for k in range(3, 8)] == [PiConstant.rational(q) for q in WILKER_DISPLAYED]


def test_wilker_c_rational_and_positive():
    for k in range(3, 201):
        c = wilker_c(k)
        assert c.is_rational
        assert c.as_fraction() > 0


@pytest.mark.parametrize(
    "m, expected",
    [(0, 0), (1, 0), (2, Fraction(1, 180)), (3, Fraction(1, 189)), (6, Fraction(14929, 4852224))],
)
def test_sf_d_three(m, expected):
    assert sf_d("three", m) == expected


def test_sf_d_pi_matches_printed_example():
    assert [sf_d("pi", m) for m in range(7)] == SF_DPI_PRINTED


@pytest.mark.parametrize("k", ["three", "pi"])
def test_sf_d_matches_series_expansion(k):
    expected = sf_d_series(K_VALUES[k], 41)
    assert [sf_d(k, m) for m in range(41)] == expected


def test_sf_d_pi_parts():
    for m in range(60):
        assert sf_d("three", m).exponents() <= {0}
        assert sf_d("pi", m).exponents() <= {0, 1}


def test_sf_d_positive_from_two():
    for m in range(2, 201):
        assert pi_sign(sf_d("three", m)) == 1
        assert pi_sign(sf_d("pi", m)) == 1


def test_sf_d_rejects_bad_k():
    with pytest.raises(ValueError):
        sf_d("four", 2)


def test_sf_e_values():
    assert sf_e(1) == 0
    assert sf_e(2) == Fraction(1, 60)
    assert sf_e(4) == Fraction(67, 6720)
    assert sf_e(0) == 3
    assert sf_e(0) + sf_e(1) + sf_e(2) == Fraction(181, 60)


def test_sf_e_matches_series_expansion_from_one():
    expected = sf_e_series(41)
    # the Taylor coefficient at m = 0 is 0; E(0) = 3 is the endpoint convention
    assert expected[0] == 0
    assert [sf_e(m) for m in range(1, 41)] == expected[1:]


def test_sf_e_positive_and_partial_sums_below_pi_minus_three():
    total = Fraction(0)
    prev = Fraction(-1)
    for m in range(2, 201):
        e = sf_e(m).as_fraction()
        assert e > 0
        total += e
        assert total > prev
        prev = total
        assert pi_sign(PI - 3 - total) == 1


def test_coeff_seq_lazy_and_memoized():
    seq = CoeffSeq("sf_dpi")
    assert seq.take(3) == SF_DPI_PRINTED[:3]
    assert seq[6] == SF_DPI_PRINTED[6]
    assert seq.take(7) == SF_DPI_PRINTED
    assert CoeffSeq("wilker_c")[3] == Fraction(16, 14175)
    with pytest.raises(ValueError):
        CoeffSeq("nope")


def test_split_examples():
    s = split_nonneg([0, 0, Fraction(1, 180)])
    assert s.nonneg == (ZERO, ZERO, PiConstant.rational(Fraction(1, 180)))
    assert s.negative_terms == ()

    s = split_nonneg(SF_DPI_PRINTED[:3])
    assert s.nonneg == (ZERO, ZERO, SF_DPI_PRINTED[2])
    assert s.negative_terms == ((0, 1 - PI / 3), (1, Fraction(1, 6) - PI / 18))
    assert s.negative_indices == (0, 1)

    s = split_nonneg([])
    assert s.nonneg == () and s.negative_terms == ()


small_consts = st.dictionaries(
    st.integers(-2, 2), st.fractions(max_denominator=20).filter(lambda q: abs(q) < 10), max_size=3
).map(PiConstant)


@given(st.lists(small_consts, max_size=8))
def test_split_round_trip(coeffs):
    s = split_nonneg(coeffs)
    assert s.reassemble() == coeffs
    assert all(pi_sign(c) >= 0 for c in s.nonneg)
    assert all(pi_sign(c) < 0 for _, c in s.negative_terms)
