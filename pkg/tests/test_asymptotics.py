import math
from fractions import Fraction

import mpmath as mp
import pytest

from peaklab.asymptotics import (
    AsymptoticParams,
    binomial_correction,
    fixed_point_correction_expansion,
    gaussian_approximant,
    limit_variance,
    mgf_quadratic_coefficient,
    necklace_ratio,
    predicted_mgf,
    prediction_residual,
    range_split_threshold,
    range_sum,
    substitution_point,
)
from peaklab.combinatorics import CycleType
from peaklab.peaks import class_mgf, series_coeff_at


def test_substitution_point_satisfies_defining_equation():
    for n in (1, 4, 10, 1000):
        for s in (0.1, 1.0, 3.5):
            t = substitution_point(n, s, prec=250)
            with mp.workprec(250):
                lhs = 4 * t / (1 + t) ** 2
                rhs = mp.exp(-mp.mpf(s) / mp.sqrt(n))
                assert abs(lhs - rhs) < mp.mpf(10) ** -70
            assert 0 < t < 1
    with pytest.raises(ValueError):
        substitution_point(5, 0)
    with pytest.raises(ValueError):
        substitution_point(0, 1.0)


def test_substitution_point_known_value():
    # e^{-s} = 8/9 gives t = 1/2 in closed form
    t = substitution_point(1, -math.log(8 / 9))
    assert abs(t - 0.5) < 1e-15
    assert abs(float(substitution_point(10_000, 1)) - 0.8186) < 5e-5


def test_range_split_threshold_and_params():
    params = AsymptoticParams.from_scale(100, 1)
    assert float(params.split_threshold) == pytest.approx(0.062364, abs=1e-5)
    assert params.small_range_end() == 19
    assert params.ratio_constant == 4
    assert params.n == 100
    for s in (0.25, 1, 4):
        thr = float(range_split_threshold(s))
        assert 0 < thr <= 1 / (2 * math.sqrt(s) * math.e**2) + 1e-12
    with pytest.raises(ValueError):
        range_split_threshold(0)


def test_necklace_ratio_values_and_decay():
    assert necklace_ratio(1, 3) == Fraction(3, 4)
    assert necklace_ratio(5, 1) == 1
    assert necklace_ratio(5, 2) == 1
    for a in (1, 2, 7):
        for i in (3, 4, 9):
            g = float(necklace_ratio(a, i))
            bound = 4.0 * (2 * a) ** (-2 * i / 3)
            assert math.exp(-bound) <= g <= math.exp(bound)
    with pytest.raises(ValueError):
        necklace_ratio(0, 3)


def test_binomial_correction_cases():
    assert binomial_correction(1, 3) == Fraction(3, 2)
    assert binomial_correction(9, 0) == 1
    for f in range(1, 30):
        assert binomial_correction(f, 1) == 1
        assert binomial_correction(f, 2) == 1
    # agrees with the series coefficient when f is small relative to m
    for f in range(1, 5):
        for m in range(9):
            expected = Fraction(
                math.factorial(m) * series_coeff_at(m, f), (2 * f) ** m
            )
            assert binomial_correction(f, m) == expected
    with pytest.raises(ValueError):
        binomial_correction(0, 3)
    with pytest.raises(ValueError):
        binomial_correction(3, -1)


def test_binomial_correction_upper_envelope():
    # K(f, m) <= e^{m^2/f}, the bound behind the scan cutoff
    for f in (2, 5, 11, 24):
        for m in (1, 2, 3, 5, 8):
            assert float(binomial_correction(f, m)) <= math.exp(m * m / f)


def test_fixed_point_expansion_values():
    assert fixed_point_correction_expansion(0, 1) == 1.0
    v = fixed_point_correction_expansion(10, 10**4)
    direct = math.exp(10**3 / (12 * 10**8) - 3 * 10**5 / (160 * 10**16))
    assert v == pytest.approx(direct, rel=5e-16)
    assert abs(v - 1.000000833333493) < 1e-14
    with pytest.raises(ValueError):
        fixed_point_correction_expansion(10, 19)
    with pytest.raises(ValueError):
        fixed_point_correction_expansion(-1, 5)


def test_range_sum_reassembles_exact_mgf():
    # the rearranged identity, checked end to end at modest sizes
    for parts in ((2, 2), (3, 2, 1), (4, 4)):
        lam = CycleType.from_parts(parts)
        n = lam.n
        with mp.workprec(300):
            t = substitution_point(n, 1, prec=300)
            prefix = (2 * (1 - t) / ((1 + t) * (-mp.log(t)))) ** (n + 1)
            val = mp.exp(mp.mpf(1) / mp.sqrt(n)) * prefix * range_sum(lam, 1, prec=300)
            exact = class_mgf(lam, 1, prec=300)
            assert abs(val - exact) < mp.mpf("1e-25") * exact


def test_range_sum_splits_and_errors():
    lam = CycleType({2: 2})
    with mp.workprec(300):
        full = range_sum(lam, 1)
        low = range_sum(lam, 1, lo=1, hi=6)
        high = range_sum(lam, 1, lo=7)
        assert abs((low + high) - full) < mp.mpf("1e-25") * full
    assert range_sum(lam, 1, lo=5, hi=4) == 0
    with pytest.raises(ValueError):
        range_sum(lam, 1, lo=0)
    with pytest.raises(ValueError):
        range_sum(lam, 0)


def test_limit_variance_and_quadratic_coefficient():
    assert limit_variance(Fraction(1, 2)) == Fraction(67, 1440)
    assert limit_variance(0) == Fraction(2, 45)
    assert limit_variance(1) == 0
    for al in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
        assert 2 * mgf_quadratic_coefficient(al) == limit_variance(al)
    # spot float inputs
    assert limit_variance(0.0) == pytest.approx(2 / 45)
    with pytest.raises(ValueError):
        limit_variance(Fraction(3, 2))
    with pytest.raises(ValueError):
        mgf_quadratic_coefficient(-0.1)


def test_predicted_mgf():
    # full fixed-point density: the class is a single permutation, mgf 1
    assert predicted_mgf(9, 1, 2.0) == 1
    assert predicted_mgf(9, Fraction(1), 0.5) == 1
    # alpha = 1/2, s = 1, n = 100: drift term is -(1 - 1/8)/3 * 10 = -35/12
    got = predicted_mgf(100, Fraction(1, 2), 1)
    with mp.workprec(200):
        expected = mp.exp(
            mp.mpf(-35) / 12
            + mp.mpf(1) / 45
            + mp.mpf(1) / 144
            - mp.mpf(3) / 320
            + mp.mpf(1) / 288
        )
        assert abs(got - expected) < mp.mpf("1e-30")
    with pytest.raises(ValueError):
        predicted_mgf(9, 1.5, 1.0)


def test_prediction_residual_three_cycles():
    lam = CycleType({3: 1})
    s = math.sqrt(3) * math.log(2)
    b = prediction_residual(lam, s)
    assert b.n == 3
    assert b.fixed_point_density == 0.0
    assert b.mean_term == pytest.approx(-math.log(2), abs=1e-12)
    assert b.s2_term == pytest.approx(math.log(2) ** 2 / 15, abs=1e-12)
    assert b.log_mgf_exact == pytest.approx(math.log(0.75), abs=1e-12)
    assert b.residual == pytest.approx(
        math.log(1.5) - math.log(2) ** 2 / 15, abs=1e-12
    )


def test_prediction_residual_identity_class_vanishes():
    # identity class: zero peaks, and every prediction term vanishes at
    # full fixed-point density, so the residual is exactly zero
    b = prediction_residual(CycleType({1: 9}), 1.0)
    assert b.log_mgf_exact == 0.0
    assert b.mean_term == 0.0
    assert b.s2_term == 0.0
    assert b.residual == 0.0


def test_gaussian_approximant():
    assert gaussian_approximant(16, 0.0) == 1.0
    assert gaussian_approximant(4, 2.0) == pytest.approx(16 * math.exp(-4), rel=1e-15)
    assert gaussian_approximant(9, -3.0) == 0.0
    assert gaussian_approximant(9, -4.0) == 0.0
    for x in (-2.0, -0.5, 0.5, 2.0):
        gaps = [
            abs(gaussian_approximant(4**j, x) - math.exp(-x * x / 2))
            for j in range(7)
        ]
        assert all(b <= a + 1e-15 for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-2
    with pytest.raises(ValueError):
        gaussian_approximant(0, 1.0)
