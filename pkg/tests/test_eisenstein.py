import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy import isprime

from cubic_twists.eisenstein import (
    OMEGA, ONE, EisensteinInt, CubicSymbol, cubic_residue_symbol, factor, norm, parse,
    primary_associate, rational_symbol, residue_system, splitting_type, unit_group_order,
)

ints = st.integers(-60, 60)
elements = st.builds(EisensteinInt, ints, ints)


def test_omega_is_cube_root_of_unity():
    assert OMEGA**3 == ONE
    assert OMEGA * OMEGA + OMEGA + ONE == EisensteinInt(0, 0)


def test_parse_roundtrip():
    assert parse("1+3w") == EisensteinInt(1, 3)
    assert parse("-5") == EisensteinInt(-5, 0)
    assert parse("2-w") == EisensteinInt(2, -1)
    with pytest.raises(ValueError):
        parse("1+x")


@given(elements, elements)
def test_norm_multiplicative(x, y):
    assert norm(x * y) == norm(x) * norm(y)


@given(elements)
def test_primary_associate(z):
    if norm(z) % 3 == 0:
        with pytest.raises(ValueError):
            primary_associate(z)
        return
    u, w = primary_associate(z)
    assert u.is_unit() and w == u * z and w.is_primary()


def test_splitting_types():
    assert splitting_type(5).is_inert
    st7 = splitting_type(7)
    assert st7.is_split and norm(st7.pi) == 7 and st7.pi.is_primary()
    assert splitting_type(3).kind == "ramified"
    with pytest.raises(ValueError):
        splitting_type(9)


@given(elements)
def test_factor_reconstructs(z):
    if not z:
        return
    unit, primes = factor(z)
    prod = unit
    for q, e in primes:
        prod = prod * q**e
    assert prod == z and unit.is_unit()


def test_symbol_examples():
    assert cubic_residue_symbol(2, 5) == CubicSymbol(0)
    assert str(cubic_residue_symbol(2, EisensteinInt(1, 3))) == "w2"
    # Euler criterion by hand: 2^((7-1)/3) = 4 mod 7 and the primary prime
    # above 7 sends w to the residue matched below
    pi = splitting_type(7).pi
    w = -pi.a * pow(pi.b, -1, 7) % 7
    k = [1, w, w * w % 7].index(pow(2, 2, 7))
    assert cubic_residue_symbol(2, pi).exponent == k


def test_symbol_rejects_bad_modulus():
    with pytest.raises(ValueError):
        cubic_residue_symbol(2, 3)
    with pytest.raises(ValueError):
        cubic_residue_symbol(5, 5)
    with pytest.raises(ValueError):
        cubic_residue_symbol(1, 0)


def _primary_primes(limit):
    out = []
    for p in range(5, limit):
        if not isprime(p):
            continue
        s = splitting_type(p)
        if s.is_inert:
            out.append(EisensteinInt(-p, 0))
        else:
            out += [s.pi, s.pibar]
    return out


PRIMES = _primary_primes(80)


@given(st.sampled_from(PRIMES), elements, elements)
def test_symbol_multiplicative_in_numerator(q, a, b):
    if q.divides(a) or q.divides(b):
        return
    assert cubic_residue_symbol(a * b, q) == cubic_residue_symbol(a, q) * cubic_residue_symbol(b, q)


@given(elements, st.sampled_from(PRIMES), st.sampled_from(PRIMES))
def test_symbol_multiplicative_in_modulus(a, q1, q2):
    if q1.divides(a) or q2.divides(a):
        return
    assert cubic_residue_symbol(a, q1 * q2) == cubic_residue_symbol(a, q1) * cubic_residue_symbol(a, q2)


@settings(max_examples=200)
@given(st.sampled_from(PRIMES), st.sampled_from(PRIMES), st.booleans(), st.booleans())
def test_cubic_reciprocity(p, q, neg_p, neg_q):
    # primary elements and their negatives, which are = -1 mod 3
    a = -p if neg_p else p
    b = -q if neg_q else q
    if math.gcd(norm(a), norm(b)) != 1:
        return
    assert cubic_residue_symbol(a, b) == cubic_residue_symbol(b, a)


def test_rational_symbols_trivial_exhaustive():
    for b in range(2, 200):
        if b % 3 == 0:
            continue
        for a in range(1, 200):
            if math.gcd(a, b) == 1:
                assert cubic_residue_symbol(a, b).exponent == 0, (a, b)


def test_rational_symbol_matches_general():
    for p in (7, 13, 19, 31, 37):
        pi = splitting_type(p).pi
        for n in (2, 3, 5, 10, 11):
            if n % p:
                assert rational_symbol(n, pi, p) == cubic_residue_symbol(n, pi)


@pytest.mark.parametrize("M", [1, 2, 4, 5, 7, 10, 14, 35])
def test_residue_system(M):
    reps = residue_system(M)
    assert len(reps) == unit_group_order(M)
    classes = {(c.a % M, c.b % M) for c in reps}
    assert len(classes) == len(reps)
    assert all(((-c.a) % M, (-c.b) % M) in classes for c in reps)
    assert all(math.gcd(norm(c), M) == 1 for c in reps)


def test_residue_system_rejects_multiple_of_three():
    with pytest.raises(ValueError):
        residue_system(6)
