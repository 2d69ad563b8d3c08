import mpmath
import pytest

from cubic_twists import lattice, suites


@pytest.fixture(autouse=True)
def working_precision():
    # arguments such as z + Omega_t must be formed at more than double precision
    with mpmath.workdps(45):
        yield


def test_periods():
    assert abs(lattice.fundamental_period(30) - mpmath.mpf("3.0599080741")) < 1e-9
    assert abs(lattice.period_omega_t(1, 30) - mpmath.mpf("1.7666387502")) < 1e-9
    with pytest.raises(ValueError):
        lattice.fundamental_period(5)


def test_wp_satisfies_differential_equation():
    # g2 = 0 on a hexagonal lattice, so wp'^2 - 4 wp^3 is the constant -g3
    for t in (1, 2, 4):
        ctx = lattice.LatticeContext(t, 30)
        vals = []
        for z in (mpmath.mpc(0.3, 0.1), mpmath.mpc(-0.2, 0.45), mpmath.mpc(0.7, -0.3)):
            vals.append(ctx.wp_prime(z) ** 2 - 4 * ctx.wp(z) ** 3)
        assert abs(vals[0] - vals[1]) < 1e-20 and abs(vals[1] - vals[2]) < 1e-20
        assert abs(vals[0].imag) < 1e-20


def test_wp_is_even_and_periodic():
    ctx = lattice.LatticeContext(2, 30)
    z = mpmath.mpc(0.31, 0.17)
    w = ctx.omega_t * mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
    assert abs(ctx.wp(z) - ctx.wp(-z)) < 1e-25
    assert abs(ctx.wp(z + ctx.omega_t) - ctx.wp(z)) < 1e-25
    assert abs(ctx.wp(z + w) - ctx.wp(z)) < 1e-25


def test_zeta_quasi_periodicity():
    ctx = lattice.LatticeContext(1, 30)
    z = mpmath.mpc(0.2, 0.1)
    eta = 2 * mpmath.pi / (mpmath.sqrt(3) * ctx.omega_t)
    assert abs(ctx.zeta_w(z + ctx.omega_t) - ctx.zeta_w(z) - eta) < 1e-25


def test_zeta_derivative_is_minus_wp():
    ctx = lattice.LatticeContext(4, 30)
    z = mpmath.mpc(0.21, 0.08)
    h = mpmath.mpf(10) ** -12
    d = (ctx.zeta_w(z + h) - ctx.zeta_w(z - h)) / (2 * h)
    assert abs(d + ctx.wp(z)) < 1e-20


def test_e1_star_is_periodic_and_matches_lattice_sum():
    ctx = lattice.LatticeContext(1, 30)
    z = mpmath.mpc(0.37, 0.21)
    w = ctx.omega_t * mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
    assert abs(ctx.e1_star(z + ctx.omega_t) - ctx.e1_star(z)) < 1e-25
    assert abs(ctx.e1_star(z + w) - ctx.e1_star(z)) < 1e-25
    with mpmath.workdps(20):
        brute = lattice.e1_star_lattice_sum(z, ctx.omega_t, radius=30)
    # the hexagonal truncation error decays like 1/radius^2
    assert abs(brute - ctx.e1_star(z)) < 1e-6


def test_pole_error():
    ctx = lattice.LatticeContext(1, 30)
    with pytest.raises(lattice.PoleError):
        ctx.wp(ctx.omega_t)


def test_three_torsion_values_with_signs():
    for c in suites.lattice_sign_checks(30):
        assert c.passed, (c.name, c.detail)


def test_theta_series_counts():
    # coefficients of theta: 1, 6, 0, 6, 6, 0, 0, 12 for the hexagonal lattice
    assert lattice._norm_counts(7) == [1, 6, 0, 6, 6, 0, 0, 12]
    z = mpmath.mpc(0, 1)
    q = mpmath.exp(-2 * mpmath.pi)
    want = mpmath.fsum(c * q**n for n, c in enumerate(lattice._norm_counts(40)))
    assert abs(lattice.theta_k(z, 30) - want) < 1e-28
    with pytest.raises(ValueError):
        lattice.theta_k(mpmath.mpc(0, -1))


def test_twist_sets():
    sets = lattice.build_sets(1, 5)
    assert sets.M == 5 and sets.f == 15
    assert len(sets.C) == 24
    assert all(b.norm() % 3 for b in sets.B)
    assert 0 < len(sets.V) < len(sets.C)
    # V^(chi) for the three characters partition C
    parts = [set(sets.v_chi([k])) for k in range(3)]
    assert sum(len(p) for p in parts) == len(sets.C)
    with pytest.raises(ValueError):
        lattice.build_sets(3, 5)


def test_twists():
    tw = lattice.all_twists(35)
    assert len(tw) == 9
    assert sorted(t.d_alpha for t in tw) == sorted(5**a * 7**b for a in range(3) for b in range(3))


@pytest.mark.parametrize("t,D", [(1, 5), (2, 7)])
def test_phi_two_sides_low_precision(t, D):
    e1 = lattice.phi_eisenstein(t, D, 30)
    wp = lattice.phi_eisenstein(t, D, 30, form="wp")
    ls = lattice.phi_from_lseries(t, D, 30)
    assert abs(e1 - ls) < 1e-15
    assert abs(e1 - wp) < 1e-15


def test_gs_average_matches_l_value():
    for tw in lattice.all_twists(7):
        avg = lattice.gs_average(2, 7, tw, 30)
        assert abs(avg - lattice.normalized_l_s(2, 7, tw, 30)) < 1e-15


def test_chi_identity():
    good, variant = suites.chi_identity_residual(2, 7, 30)
    assert good < 1e-15
