from fractions import Fraction

import mpmath
import numpy as np
import pytest
from sympy import primerange

from cubic_twists import curves, lseries
from cubic_twists.eisenstein import EisensteinInt
from cubic_twists.lattice import period_omega_t


def test_psi_inert_prime():
    assert lseries.psi_value(lseries.HeckeCharacter(14), 5) == EisensteinInt(-5, 0)
    with pytest.raises(ValueError):
        lseries.psi_value(lseries.HeckeCharacter(14), 7)


def test_conductor_generator():
    assert lseries.HeckeCharacter(4 * 35).f == 3 * 70
    assert lseries.HeckeCharacter(1).f == 3


@pytest.mark.parametrize("N", [1, 2, 4, 5, 10, 14, 35, 49, 98, 245])
def test_coefficients_match_point_counts(N):
    model = curves.build_model(N)
    table = lseries.coefficient_table(N, 600)
    for p in primerange(2, 600):
        if (3 * N) % p:
            assert table[p] == curves.count_points_mod_p(model, p), p


def test_coefficients_multiplicative_and_bad_primes_vanish():
    table = lseries.coefficient_table(70, 2000)
    assert table[2] == table[5] == table[7] == table[3] == 0
    for m, n in ((11, 13), (19, 31), (13, 37)):
        assert table[m * n] == table[m] * table[n]
    # inert p: a_{p^2} = -p
    assert table[11 * 11] == -11


@pytest.mark.parametrize("N", [2, 14, 35, 4 * 49, 2 * 5 * 181])
def test_ideal_sum_backend_matches_sieve(N):
    n_max = 5000
    a = lseries.coefficient_table(N, n_max).a
    b = lseries.ideal_sum_coefficients(N, n_max)
    assert np.array_equal(a[: n_max + 1], b[: n_max + 1])


def test_base_l_values():
    for N, alg in ((1, mpmath.mpf(1) / 3), (2, mpmath.mpf(1) / 2), (4, mpmath.mpf(1))):
        lv = lseries.evaluate_l_value(N, 30)
        assert lv.backend == "table-fixed"
        assert abs(lv.value / period_omega_t(N, 30) - alg) < mpmath.mpf(10) ** -25


def test_float_and_fixed_backends_agree():
    a = lseries.evaluate_l_value(2 * 5 * 181, 15)
    b = lseries.evaluate_l_value(2 * 5 * 181, 25)
    assert a.backend == "table-float64" and b.backend == "table-fixed"
    assert abs(a.value - b.value) < 1e-11 * abs(b.value)


def test_odd_root_number_gives_zero():
    lv = lseries.evaluate_l_value(7, 20)
    assert lv.root_number == -1 and lv.value == 0


def test_precision_errors():
    with pytest.raises(ValueError):
        lseries.evaluate_l_value(5, 5)
    with pytest.raises(lseries.PrecisionError, match="precision unreachable"):
        lseries.evaluate_l_value(5, 30, max_terms=10)


def test_truncation_bound_grows_with_digits():
    assert lseries.truncation_bound(10**6, 30) > lseries.truncation_bound(10**6, 15)


@pytest.mark.parametrize("N", [7, 17, 20, 35, 49])
def test_functional_equation_odd(N):
    assert curves.global_root_number(N) == -1
    assert lseries.functional_equation_residual(N, digits=15) < 1e-11


def test_functional_equation_detects_wrong_conductor():
    cond = lseries.curve_conductor(7)
    assert lseries.functional_equation_residual(7, digits=15, conductor=3 * cond) > 1e-6


def test_removed_euler_factors_are_point_counts():
    # the factor at a removed prime p is #C(F_p) / p
    N_total = 2 * 5 * 7 * 13
    for alpha in ((0, 0, 0), (1, 0, 2), (0, 2, 0), (1, 1, 1)):
        sub = lseries.subtwist(N_total, alpha)
        model = curves.build_model(sub)
        want = Fraction(1)
        for p, e in zip((5, 7, 13), alpha):
            if e == 0:
                want *= Fraction(p + 1 - curves.count_points_mod_p(model, p), p)
        assert lseries.removed_euler_product(N_total, alpha) == want


def test_imprimitive_value_scales_primitive():
    got = lseries.l_value_imprimitive(2 * 5 * 7, (0, 1), 20)
    full = lseries.l_value(2 * 7, 20)
    # 5 is inert, so a_5 = 0 and the removed factor is 6/5
    assert abs(got - full * 6 / 5) < 1e-15


def test_subtwist_validates_alpha():
    assert lseries.subtwist(2 * 5 * 7, (2, 1)) == 2 * 25 * 7
    with pytest.raises(ValueError):
        lseries.subtwist(2 * 5 * 7, (1,))
