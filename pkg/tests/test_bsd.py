import math
from fractions import Fraction

import mpmath
import pytest
from sympy import factorint

from cubic_twists import bsd, curves, suites


def test_recognize():
    assert bsd.recognize(mpmath.mpf("2.3333333333333"))[0] == Fraction(7, 3)
    assert bsd.recognize(mpmath.mpf(81))[0] == 81
    with pytest.raises(bsd.AmbiguousValue, match="ambiguous value"):
        bsd.recognize(mpmath.mpf("0.123456789"))


def test_valuations_and_squares():
    assert bsd.ord_p(Fraction(18, 5), 3) == 2
    assert bsd.ord_p(Fraction(2, 9), 3) == -2
    assert bsd.ord_p(0, 3) == math.inf
    assert bsd.is_square(Fraction(9, 4)) and not bsd.is_square(Fraction(3))
    assert not bsd.is_square(Fraction(-4))


@pytest.mark.parametrize("N,alg", [(1, Fraction(1, 3)), (2, Fraction(1, 2)), (4, Fraction(1)),
                                   (5, Fraction(1)), (10, Fraction(3)), (14, Fraction(3)), (7, Fraction(0))])
def test_algebraic_values(N, alg):
    assert bsd.algebraic_lvalue(N, 30) == alg


def test_rank_two_is_ambiguous():
    # root number +1 and a central zero
    with pytest.raises(bsd.AmbiguousValue, match="near zero"):
        bsd.algebraic_lvalue(19, 30)


def test_twist_statistics():
    st = bsd.twist_statistics(2 * 5 * 7 * 13)
    assert (st.r, st.s, st.k) == (2, 2, 4)
    assert st.eps_tD == 0
    assert bsd.twist_statistics(5 * 7).eps_tD == 1
    assert bsd.twist_statistics(7 * 13).eps_tD == 0


def test_tamagawa_products_agree():
    for N in (2, 10, 14, 35, 98, 245, 490):
        assert bsd.tamagawa_product(N) == bsd.tate_tamagawa_product(N)


def test_s_invariant():
    s = bsd.s_invariant(10, 30)
    assert s.tamagawa_product == bsd.tamagawa_product(10)
    assert s.S == Fraction(3) / s.tamagawa_product
    with pytest.raises(ValueError):
        bsd.s_invariant(2)


def test_sha3_bound():
    # r = 4 inert primes 2, 5, 11, 17, N = 1870 = 7 mod 9 so t(N) = 0
    assert bsd.sha3_lower_bound(2 * 5 * 11 * 17) == 3
    assert bsd.sha3_lower_bound(2 * 5 * 11 * 17, rank=1) == 2
    assert bsd.sha3_lower_bound(5) == 0
    with pytest.raises(ValueError):
        bsd.sha3_lower_bound(5, rank=-1)


def test_bsd_report_assumptions():
    rep = bsd.bsd_report(14, 30)
    assert rep.rank == 0 and rep.L_alg == 3 and rep.assumptions
    odd = bsd.bsd_report(7, 30)
    assert odd.L_alg == 0 and odd.rank == 1 and odd.predicted_sha == "undefined (L=0)"
    assert bsd.bsd_report(7, 30, rank=3).sha3_bound == 0
    with pytest.raises(ValueError):
        bsd.bsd_report(1)


def test_lower_bound_forms_coincide():
    # the bound k(N) (split products) / k(N) - 1 (otherwise) equals n - eps_tD with n = k(D)
    for N in suites.valid_range(2, 3000):
        st = bsd.twist_statistics(N)
        _, D = curves.split_t(N)
        n = len(factorint(D))
        k_form = st.k if bsd.is_split_product(N) else st.k - 1
        assert k_form == n - st.eps_tD, N


def test_verify_theorems_small_range():
    for N in suites.valid_range(3, 120, minimum=3):
        v = bsd.verify_theorems(N, 30)
        assert v.passed, (N, v.failures())


def test_verify_theorems_records_ambiguity():
    v = bsd.verify_theorems(19, 30)
    assert v.ambiguous and v.L_alg is None
    assert {c.name for c in v.claims} == {"root_number_formula", "tamagawa_ord3", "tamagawa_ord2"}
