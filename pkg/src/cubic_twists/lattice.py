"""Periods and Weierstrass functions on the hexagonal lattices L_t = Omega_t * Z[w],
the Eisenstein series E1*, the theta series of Z[w], and the two sides of the
Phi_{tD} identity.

All functions are evaluated on O = Z + Z*w via q-expansions at tau = w,
after reducing the argument into the parallelogram |x|, |y| <= 1/2 of the
basis (1, w), and then rescaled: f(z, c*O) = c^(-k) f(z/c, O) for weight k.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
from sympy import factorint

from . import lseries
from .curves import split_t, validate_n
from .eisenstein import EisensteinInt, cubic_residue_symbol, residue_system


class PoleError(ValueError):
    """Argument lies within tolerance of a lattice point."""


def fundamental_period(digits: int = 30) -> mpmath.mpf:
    """Real period of y^2 = 4x^3 - 1: Gamma(1/3)^3 / (2 pi)."""
    if digits < 10:
        raise ValueError("digits must be >= 10")
    with mpmath.workdps(digits + 10):
        val = mpmath.gamma(mpmath.mpf(1) / 3) ** 3 / (2 * mpmath.pi)
    return +val


def period_omega_t(t: int, digits: int = 30) -> mpmath.mpf:
    """Omega_t = Omega / (sqrt(3) * t^(1/3)); also valid for any N in place of t."""
    with mpmath.workdps(digits + 10):
        return fundamental_period(digits) / (mpmath.sqrt(3) * mpmath.cbrt(t))


@dataclass(frozen=True)
class LatticeContext:
    t: int
    digits: int = 30
    omega_t: mpmath.mpf = field(init=False, repr=False)
    n_terms: int = field(init=False)

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be positive")
        object.__setattr__(self, "omega_t", period_omega_t(self.t, self.digits))
        # after reduction |q^n w^(+-1)| <= exp(-pi sqrt3 (n - 1/2)); same rate for zeta
        rate = math.pi * math.sqrt(3) / 2
        object.__setattr__(self, "n_terms", int((self.digits + 12) * math.log(10) / rate) + 3)

    @property
    def dps(self) -> int:
        return self.digits + 15

    @property
    def tolerance(self):
        return mpmath.mpf(10) ** (-(self.digits // 2))

    def _reduce(self, z):
        """u = z/Omega_t written as u0 + m + n*w with u0 in the central parallelogram."""
        u = mpmath.mpc(z) / self.omega_t
        y = u.imag / (mpmath.sqrt(3) / 2)
        x = u.real + y / 2
        m, n = int(mpmath.nint(x)), int(mpmath.nint(y))
        u0 = u - m - n * _w()
        if abs(u0) < self.tolerance:
            raise PoleError(f"z = {mpmath.nstr(z, 10)} is a lattice point to within {mpmath.nstr(self.tolerance, 3)}")
        return u0, m, n

    def wp(self, z):
        with mpmath.workdps(self.dps):
            u, _, _ = self._reduce(z)
            val = _wp_o(u, self.n_terms) / self.omega_t**2
        return +val

    def wp_prime(self, z):
        with mpmath.workdps(self.dps):
            u, _, _ = self._reduce(z)
            val = _wp_prime_o(u, self.n_terms) / self.omega_t**3
        return +val

    def zeta_w(self, z):
        with mpmath.workdps(self.dps):
            u, m, n = self._reduce(z)
            eta = 2 * mpmath.pi / mpmath.sqrt(3)
            val = _zeta_o(u, self.n_terms) + m * eta + n * eta * mpmath.conj(_w())
            val = val / self.omega_t
        return +val

    def e1_star(self, z):
        """zeta(z) - 2 pi conj(z) / (sqrt3 Omega_t^2); s_2 vanishes on this lattice."""
        with mpmath.workdps(self.dps):
            z = mpmath.mpc(z)
            val = self.zeta_w(z) - 2 * mpmath.pi * mpmath.conj(z) / (mpmath.sqrt(3) * self.omega_t**2)
        return +val

    def area(self):
        """A(L_t) = sqrt3 Omega_t^2 / (2 pi)."""
        return mpmath.sqrt(3) * self.omega_t**2 / (2 * mpmath.pi)


def _w():
    return mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)


def _q():
    return mpmath.exp(2j * mpmath.pi * _w())


def _wp_o(u, n_terms):
    q = _q()
    w = mpmath.exp(2j * mpmath.pi * u)
    s = mpmath.mpf(1) / 12 + w / (1 - w) ** 2
    qn = mpmath.mpf(1)
    for _ in range(n_terms):
        qn *= q
        a, b = qn * w, qn / w
        s += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
    return (2j * mpmath.pi) ** 2 * s


def _wp_prime_o(u, n_terms):
    q = _q()
    w = mpmath.exp(2j * mpmath.pi * u)
    s = w * (1 + w) / (1 - w) ** 3
    qn = mpmath.mpf(1)
    for _ in range(n_terms):
        qn *= q
        a, b = qn * w, qn / w
        # X/(1-X)^2 is invariant under X -> 1/X, so the n < 0 terms flip sign in the derivative
        s += a * (1 + a) / (1 - a) ** 3 - b * (1 + b) / (1 - b) ** 3
    return (2j * mpmath.pi) ** 3 * s


def _zeta_o(u, n_terms):
    q = _q()
    eta = 2 * mpmath.pi / mpmath.sqrt(3)
    s = eta * u + mpmath.pi * mpmath.cot(mpmath.pi * u)
    qn = mpmath.mpf(1)
    for n in range(1, n_terms + 1):
        qn *= q
        s += 4 * mpmath.pi * qn / (1 - qn) * mpmath.sin(2 * mpmath.pi * n * u)
    return s


def e1_star_lattice_sum(z, omega, radius: int = 40):
    """Brute-force sum over |m|,|n| <= radius of 1/(z + w) with Eisenstein summation
    over hexagonal shells plus the A^-1 correction; a low-accuracy oracle only."""
    z = mpmath.mpc(z)
    total = mpmath.mpc(0)
    for m in range(-radius, radius + 1):
        for n in range(-radius, radius + 1):
            if max(abs(m), abs(n), abs(m - n)) > radius:
                continue
            w = omega * (m + n * _w())
            total += 1 / (z + w)
    # the hexagonal partial sums of 1/w^2 vanish by w-symmetry, so no s_2 correction;
    # the non-holomorphic term comes from the shape of the summation region
    area = mpmath.sqrt(3) * omega**2 / (2 * mpmath.pi)
    return total - mpmath.conj(z) / area


def theta_k(z, digits: int = 30):
    """Theta series sum over (a, b) of exp(2 pi i z (a^2 + b^2 - ab))."""
    z = mpmath.mpc(z)
    if z.imag <= 0:
        raise ValueError("theta_K needs Im z > 0")
    with mpmath.workdps(digits + 10):
        r = abs(mpmath.exp(2j * mpmath.pi * z))
        # the number of (a,b) of norm n is at most 6n, so the tail beyond R is
        # bounded by 6 R r^R / (1 - r)^2
        R = 1
        bound = mpmath.mpf(10) ** (-(digits + 2))
        while 6 * (R + 1) * r**R / (1 - r) ** 2 > bound:
            R += 1
        q = mpmath.exp(2j * mpmath.pi * z)
        counts = _norm_counts(R)
        total = mpmath.fsum(c * q**n for n, c in enumerate(counts))
    return +total


def _norm_counts(R: int) -> list[int]:
    counts = [0] * (R + 1)
    bmax = math.isqrt(4 * R // 3) + 1
    for b in range(-bmax, bmax + 1):
        for a in range(-2 * bmax, 2 * bmax + 1):
            n = a * a - a * b + b * b
            if n <= R:
                counts[n] += 1
    return counts


# -- the B / V machinery --

@dataclass(frozen=True)
class TwistIndex:
    primes: tuple[int, ...]
    alpha: tuple[int, ...]

    def __post_init__(self):
        if len(self.primes) != len(self.alpha):
            raise ValueError("alpha and primes differ in length")
        object.__setattr__(self, "alpha", tuple(a % 3 for a in self.alpha))

    @property
    def d_alpha(self) -> int:
        out = 1
        for p, a in zip(self.primes, self.alpha):
            out *= p**a
        return out


def all_twists(D: int) -> list[TwistIndex]:
    primes = tuple(sorted(factorint(D)))
    return [TwistIndex(primes, a) for a in itertools.product(range(3), repeat=len(primes))]


@dataclass(frozen=True)
class TwistSets:
    t: int
    D: int
    M: int
    eps: int
    C: tuple[EisensteinInt, ...]
    B: tuple[EisensteinInt, ...]
    # (p_i / b)_3 exponents per c, aligned with the sorted primes of D
    symbols: tuple[tuple[int, ...], ...]
    # (t / b)_3 exponent per c
    t_symbols: tuple[int, ...]

    @property
    def V(self) -> list[EisensteinInt]:
        return [c for c, s in zip(self.C, self.symbols) if not any(s)]

    def v_chi(self, chi: Sequence[int]) -> list[int]:
        """Indices of c with (p_i/b)_3 = chi(delta_i)^2 for all i."""
        target = tuple((2 * k) % 3 for k in chi)
        return [i for i, s in enumerate(self.symbols) if s == target]

    @property
    def f(self) -> int:
        return 3 * self.M


@lru_cache(maxsize=64)
def build_sets(t: int, D: int) -> TwistSets:
    if t not in (1, 2, 4):
        raise ValueError("t must be 1, 2 or 4")
    if D % 2 == 0:
        raise ValueError("D must be odd")
    validate_n(D)
    primes = sorted(factorint(D))
    M = (2 if t > 1 else 1) * math.prod(primes)
    eps = 1 if M % 3 == 1 else -1
    C = residue_system(M)
    B, symbols, t_symbols = [], [], []
    for c in C:
        b = 3 * c + eps * M
        B.append(b)
        symbols.append(tuple(cubic_residue_symbol(p, b).exponent for p in primes))
        t_symbols.append(cubic_residue_symbol(t, b).exponent if t > 1 else 0)
    return TwistSets(t, D, M, eps, tuple(C), tuple(B), tuple(symbols), tuple(t_symbols))


def _omega_pow(k: int):
    return [mpmath.mpc(1), _w(), mpmath.conj(_w())][k % 3]


def _e1_terms(sets: TwistSets, ctx: LatticeContext, indices) -> dict[int, mpmath.mpc]:
    out = {}
    with mpmath.workdps(ctx.dps):
        base = sets.eps * ctx.omega_t / 3
        for i in indices:
            c = sets.C[i]
            out[i] = ctx.e1_star(base + complex_of(c) * ctx.omega_t / sets.M)
    return out


def complex_of(c: EisensteinInt) -> mpmath.mpc:
    return c.a + c.b * _w()


def phi_eisenstein(t: int, D: int, digits: int = 30, form: str = "e1") -> mpmath.mpf:
    """(3^n / f) sum over c in V of (t/b)_3 E1*(eps Omega_t/3 + c Omega_t/M, L_t).

    form="e1" evaluates E1* directly; form="wp" uses the closed form in terms
    of wp(c Omega / M, L) for the lattice of y^2 = 4x^3 - 1.
    """
    sets = build_sets(t, D)
    n = len(sets.symbols[0]) if sets.symbols else 0
    V_idx = [i for i, s in enumerate(sets.symbols) if not any(s)]
    with mpmath.workdps(digits + 15):
        if form == "e1":
            ctx = LatticeContext(t, digits)
            terms = _e1_terms(sets, ctx, V_idx)
            total = mpmath.fsum(_omega_pow(sets.t_symbols[i]) * terms[i] for i in V_idx)
        elif form == "wp":
            total = _sum_wp_form(sets, V_idx, digits)
        else:
            raise ValueError(f"unknown form {form!r}")
        val = mpmath.mpf(3) ** n / sets.f * total
        if abs(val.imag) > mpmath.mpf(10) ** (-(digits // 2)) * max(1, abs(val)):
            raise ArithmeticError(f"Phi has imaginary part {mpmath.nstr(val.imag, 5)}")
        return +val.real


def _sum_wp_form(sets: TwistSets, V_idx, digits: int):
    """sum_{c in V} (t/b)_3 E1*(eps Omega_t/3 + c Omega_t/M, L_t) via the addition formula.

    With wp(Omega_t/3) = 3 t^(2/3) and wp'(Omega_t/3) = -9t on L_t the sum equals
        -t^(1/3) [ (1/2) sum (t/b)_3 3 eps / (1 - wp(c Omega/M, L)) - eps sum (t/b)_3 ].
    """
    ctx = LatticeContext(1, digits)
    big = fundamental_period(digits)
    # L = Omega * O is L_1 scaled by sqrt3: wp(z, L) = wp(z / sqrt3, L_1) / 3
    s = mpmath.mpc(0)
    wsum = mpmath.mpc(0)
    for i in V_idx:
        w = _omega_pow(sets.t_symbols[i])
        z = complex_of(sets.C[i]) * big / sets.M
        wp_l = ctx.wp(z / mpmath.sqrt(3)) / 3
        s += w * 3 * sets.eps / (1 - wp_l)
        wsum += w
    return -mpmath.cbrt(sets.t) * (s / 2 - sets.eps * wsum)


def normalized_l_s(t: int, D: int, twist: TwistIndex, digits: int = 30) -> mpmath.mpf:
    """L_S(conj psi_{t D_alpha}, 1) / Omega_t, with S the primes above 3 rad(tD)."""
    with mpmath.workdps(digits + 10):
        val = lseries.l_value_imprimitive(t * D, twist.alpha, digits)
        return val / period_omega_t(t, digits)


def phi_from_lseries(t: int, D: int, digits: int = 30) -> mpmath.mpf:
    return phi_chi(t, D, [0] * len(factorint(D)), digits).real


def phi_chi(t: int, D: int, chi: Sequence[int], digits: int = 30) -> mpmath.mpc:
    """sum over alpha of chi(alpha) L_S(conj psi_{t D_alpha}, 1) / Omega_t, with
    chi(delta_i) = w^chi[i]."""
    twists = all_twists(D)
    if len(chi) != len(twists[0].primes):
        raise ValueError("chi needs one exponent per prime of D")
    with mpmath.workdps(digits + 10):
        total = mpmath.mpc(0)
        for tw in twists:
            k = sum(c * a for c, a in zip(chi, tw.alpha))
            total += _omega_pow(k) * normalized_l_s(t, D, tw, digits)
        return +total


def phi_chi_eisenstein(t: int, D: int, chi: Sequence[int], digits: int = 30) -> mpmath.mpc:
    """Eisenstein side of phi_chi: (3^n / f) sum over V^(chi) of (t/b)_3 E1*(...)."""
    sets = build_sets(t, D)
    idx = sets.v_chi(chi)
    ctx = LatticeContext(t, digits)
    with mpmath.workdps(ctx.dps):
        terms = _e1_terms(sets, ctx, idx)
        total = mpmath.fsum(_omega_pow(sets.t_symbols[i]) * terms[i] for i in idx)
        return +(mpmath.mpf(3) ** len(chi) / sets.f * total)


def gs_average(t: int, D: int, twist: TwistIndex, digits: int = 30) -> mpmath.mpc:
    """(1/f) sum over all b in B of (D_alpha/b)_3 (t/b)_3 E1*(eps Omega_t/3 + c Omega_t/M, L_t),
    which should equal L_S(conj psi_{t D_alpha}, 1) / Omega_t."""
    sets = build_sets(t, D)
    ctx = LatticeContext(t, digits)
    with mpmath.workdps(ctx.dps):
        terms = _e1_terms(sets, ctx, range(len(sets.C)))
        total = mpmath.mpc(0)
        for i, e in terms.items():
            k = sets.t_symbols[i] + sum(a * s for a, s in zip(twist.alpha, sets.symbols[i]))
            total += _omega_pow(k) * e
        return +(total / sets.f)
