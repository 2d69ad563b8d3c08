import pytest
from sympy import primerange

from cubic_twists import curves, lseries


def test_validate_n():
    for bad in (0, 3, 6, 8, 24, 2**3 * 5):
        with pytest.raises(ValueError):
            curves.validate_n(bad)
    with pytest.raises(ValueError):
        curves.validate_n(1, allow_one=False)
    curves.validate_n(1)
    curves.validate_n(4 * 25)


def test_split_t():
    assert curves.split_t(4 * 35) == (4, 35)
    assert curves.split_t(2 * 7) == (2, 7)
    assert curves.split_t(5) == (1, 5)


@pytest.mark.parametrize("N,cond", [(1, 27), (2, 36), (4, 108), (5, 675), (7, 441)])
def test_known_conductors(N, cond):
    assert curves.conductor(curves.build_model(N)) == cond
    assert lseries.curve_conductor(N) == cond


@pytest.mark.parametrize("N", [2, 4, 5, 10, 14, 28, 49, 98, 175, 245, 259, 370, 485])
def test_tate_matches_closed_forms(N):
    model = curves.build_model(N)
    for p in curves.bad_primes(N):
        d = curves.tate_algorithm(model, p)
        assert d.c_p == curves.tamagawa_closed_form(N, p)
        if p != 2:
            assert d.kodaira == curves.expected_kodaira(N, p)
        assert d.f_p >= 1


def test_tate_good_reduction_at_other_primes():
    model = curves.build_model(10)
    assert curves.tate(model.ainvs, 7).f_p == 0


def test_closed_form_rejects_good_prime():
    with pytest.raises(ValueError):
        curves.tamagawa_closed_form(10, 7)


def test_root_numbers():
    assert curves.global_root_number(7) == -1
    assert curves.global_root_number(17) == -1
    assert curves.global_root_number(2) == 1
    for N in range(2, 200):
        if N % 3 and curves.is_cube_free(N):
            assert curves.global_root_number(N) == curves.parity_root_number(N)
    with pytest.raises(ValueError):
        curves.local_root_number(10, 7)


def test_t_of_n():
    assert curves.t_of_n(10) == 1 and curves.t_of_n(17) == 1
    assert curves.t_of_n(5) == 0
    assert curves.t_of_n(6) == -1


@pytest.mark.parametrize("N", [1, 2, 5, 14, 35])
def test_point_counts_match_hasse(N):
    model = curves.build_model(N)
    for p in primerange(5, 200):
        if (3 * N) % p:
            ap = curves.count_points_mod_p(model, p)
            assert ap * ap <= 4 * p
            if p % 3 == 2:
                # supersingular: CM by Z[w] and p inert
                assert ap == 0


def test_isogeny_maps_points():
    # (x, y) = (1, 1) on x^3 + y^3 = 2
    P = curves.curve_point_to_weierstrass(1, 1, 2)
    assert curves.on_e(P, 2)
    assert curves.on_e_prime(curves.isogeny_phi(P, 2), 2)
