"""Core q-series arithmetic: offsets, precision bookkeeping, exactness."""

import random
from fractions import Fraction

import pytest

from designlab import OffsetError, PrecisionError, QSeries


def brute_convolve(a, b, out_len):
    """Schoolbook polynomial product, the oracle for the packed kernel."""
    out = [0] * out_len
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < out_len:
                out[i + j] += x * y
    return out


def test_kronecker_multiply_matches_schoolbook():
    rng = random.Random(20240817)
    for _ in range(25):
        la = [rng.randint(-10**6, 10**6) for _ in range(rng.randint(1, 40))]
        lb = [rng.randint(-10**6, 10**6) for _ in range(rng.randint(1, 40))]
        f = QSeries.from_int_list(0, la)
        g = QSeries.from_int_list(0, lb)
        got = f * g
        n = min(len(la), len(lb))
        expect = brute_convolve(la, lb, n)
        assert [got[i] for i in range(n)] == expect


def test_multiply_adds_offsets_and_takes_min_prec():
    f = QSeries.from_int_list(1, [1, 2, 3])          # prec 2
    g = QSeries.from_int_list(8, [1, -1, 0, 5])      # prec 3
    h = f * g
    assert h.offset24 == 9
    assert h.prec == 2
    assert [h[i] for i in range(3)] == [1, 1, 1]


def test_addition_requires_compatible_grid():
    f = QSeries.from_int_list(1, [1, 1, 1])
    g = QSeries.from_int_list(0, [1, 1, 1])
    with pytest.raises(OffsetError):
        _ = f + g


def test_addition_aligns_integer_offset_gaps():
    f = QSeries.from_int_list(0, [1, 2, 3, 4])       # 1 + 2q + 3q^2 + 4q^3
    g = QSeries.from_int_list(48, [7, 7])            # 7q^2 + 7q^3
    h = f + g
    assert h.offset24 == 0
    assert h.prec == 3
    assert [h[i] for i in range(4)] == [1, 2, 10, 11]


def test_leading_zero_cancellation_reduces_offset():
    f = QSeries.from_int_list(0, [1, 5, 2, 9])
    g = QSeries.from_int_list(0, [1, 3, 2, 1])
    d = f - g
    # difference is 2q + 8q^3: offset moves onto the first nonzero slot
    assert d.offset24 == 24
    assert d.prec == 2
    assert [d[i] for i in range(3)] == [2, 0, 8]


def test_reading_past_prec_fails_loudly():
    f = QSeries.from_int_list(0, [1, 2])
    assert f[1] == 2
    with pytest.raises(PrecisionError):
        _ = f[2]


def test_truncate_only_shrinks():
    f = QSeries.from_int_list(0, [1, 2, 3])
    assert f.truncate(1).prec == 1
    with pytest.raises(PrecisionError):
        f.truncate(5)


def test_pow_and_div_are_inverse():
    f = QSeries.from_int_list(2, [1, -3, 5, 7, -2, 1])
    cube = f.pow(3)
    assert cube.offset24 == 6
    back = cube.div(f.pow(2))
    assert back.agrees_with(f)


def test_division_by_unknown_leading_block_fails():
    z = QSeries.zero(5)
    f = QSeries.one(5)
    with pytest.raises(ZeroDivisionError):
        f.div(z)


def test_rational_coefficients_survive_roundtrip():
    f = QSeries(0, 2, {0: Fraction(1, 3), 2: Fraction(-7, 24)})
    g = QSeries.from_json(f.to_json())
    assert g == f
    assert g[2] == Fraction(-7, 24)


def test_json_shape_is_stable():
    f = QSeries.from_int_list(8, [1, -8])
    assert f.to_json() == (
        '{"offset24": 8, "prec": 1, "coeffs": [[0, "1/1"], [1, "-8/1"]]}')


def test_scale_and_proportionality():
    f = QSeries.from_int_list(24, [1, -24, 252])
    g = f.scale(Fraction(3, 7))
    assert g.proportional_to(f) == Fraction(3, 7)
    assert f.proportional_to(g) == Fraction(7, 3)
    h = QSeries.from_int_list(24, [1, -24, 251])
    assert f.proportional_to(h) is None


def test_mixed_rational_product_is_exact():
    f = QSeries(0, 3, {0: Fraction(1, 2), 1: Fraction(1, 3)})
    g = QSeries(0, 3, {0: Fraction(3), 1: Fraction(-1, 5)})
    h = f * g
    assert h[0] == Fraction(3, 2)
    assert h[1] == Fraction(1) - Fraction(1, 10)
    assert h[2] == Fraction(-1, 15)
