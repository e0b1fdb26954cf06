from fractions import Fraction
import math

import pytest

import sievelab as sl


def test_hand_values():
    g = sl.make_g("ones", 3)
    f = sl.sieve(g, 1, 20)
    assert sl.mean_value(g, 1) == Fraction(11, 3)
    assert sl.selberg_integral(f, 4, 1) == Fraction(10, 9)
    assert sl.symmetry_integral(f, 4, 1) == 10
    assert sl.correlation(sl.sieve(g, 1, 30), 10, 1) == 28


def test_remainder_split():
    g = sl.make_g("ones", 2)
    f = sl.sieve(g, 1, 30)
    assert sl.correlation_main_term(g, 9, 1) == Fraction(37, 2)
    assert sl.remainder(g, f, 9, 1) == Fraction(-1, 2)
    assert sl.correlation_main_term(g, 9, 1) + sl.remainder(g, f, 9, 1) == sl.correlation(f, 9, 1)


def test_seed_and_table():
    g = sl.g_from_values([1, "-1/2", 0, Fraction(1, 3)])
    f = sl.sieve(g, 1, 12)
    assert f.value(12) == 1 - Fraction(1, 2) + Fraction(1, 3)
    assert sl.dyadic_sum(f, 6) == sum(f.value(n) for n in range(7, 13))
    with pytest.raises(ValueError):
        sl.make_g("random_bounded", 5)


def test_kernels():
    h = 7
    assert sum(sl.kernel_value("W", h, a) for a in range(-2 * h, 2 * h + 1)) == 0
    assert sum(sl.kernel_value("S", h, a) for a in range(-2 * h, 2 * h + 1)) == 4 * h * h
    beta = 0.137
    direct = sum(sl.kernel_value("W", h, a) * math.cos(2 * math.pi * a * beta) for a in range(-2 * h, 2 * h + 1))
    assert abs(sl.fourier_W(h, beta) - direct) <= 1e-9 * (1 + abs(direct))
    assert sl.fejer_S(1, 1, 2) == pytest.approx(0, abs=1e-12)
    assert sl.sum_W_over_multiples(3, 2) == 2


def test_residual_checks():
    f = sl.sieve(sl.make_g("delta1", 1), 1, 300)
    r = sl.check_lemma1(f, 100, 5)
    assert r["residual"] == 0 and r["ratio"] == 0
    g = sl.make_g("moebius", 20)
    f = sl.sieve(g, 1, 2 * 1000 + 4 * 10)
    for check, cap in ((sl.check_lemma1, sl.LEMMA1_RATIO_CAP), (sl.check_lemma2, sl.LEMMA2_RATIO_CAP),
                       (sl.check_theorem_I_rep, sl.THEOREM_RATIO_CAP)):
        r = check(f, 1000, 10)
        assert r["lhs"] - r["rhs_main"] == r["residual"]
        assert r["ratio"] <= cap


def test_run_grid():
    recs = sl.run_grid([1024, 4096], 0.5, 0.6, "ones", None, "exact", 2)
    assert [r["N"] for r in recs] == [1024, 4096]
    assert isinstance(recs[0]["J"], Fraction)
    floats = sl.run_grid([1024, 4096], 0.5, 0.6, "ones", None, "float", 2)
    for e, x in zip(recs, floats):
        assert x["ratio_J"] == pytest.approx(e["ratio_J"], rel=1e-9)
