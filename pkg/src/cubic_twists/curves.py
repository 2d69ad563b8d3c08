"""Weierstrass models of x^3 + y^3 = N, Tate's algorithm and local invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import factorint, isprime

INFINITY = math.inf  # place token for the archimedean place

_A6_BY_T = {1: -(2**4) * 3**3, 2: -(3**3), 4: -(2**2) * 3**3}


def is_cube_free(n: int) -> bool:
    return all(e < 3 for e in factorint(n).values())


def validate_n(N: int, allow_one: bool = True) -> None:
    """Raise ValueError naming the violated precondition on N."""
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool):
        raise ValueError(f"N must be an integer, got {N!r}")
    if N < 1 or (N == 1 and not allow_one):
        raise ValueError(f"N must be > 1, got {N}")
    if N % 3 == 0:
        raise ValueError(f"3 divides N={N}")
    if not is_cube_free(N):
        raise ValueError(f"N={N} is not cube-free")


def split_t(N: int) -> tuple[int, int]:
    """Write N = t*D with t in {1, 2, 4} and D odd."""
    t = 1
    while N % 2 == 0:
        N //= 2
        t *= 2
    return t, N


@dataclass(frozen=True)
class CurveModel:
    N: int
    t: int
    D: int
    ainvs: tuple[int, int, int, int, int]
    discriminant: int

    @property
    def a6(self) -> int:
        return self.ainvs[4]


def build_model(N: int) -> CurveModel:
    """Model E_{tD} of C_N: y^2 = x^3 + a6 with a6 = -432 D^2, -27 D^2, -108 D^2.

    N = 1 (the Fermat cubic) is accepted; it is the base curve of every twist
    family.
    """
    validate_n(N)
    t, D = split_t(N)
    ainvs = (0, 0, 0, 0, _A6_BY_T[t] * D * D)
    return CurveModel(N, t, D, ainvs, discriminant(ainvs))


def b_invariants(ainvs):
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(ainvs):
    b2, b4, b6, _ = b_invariants(ainvs)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
    return c4, c6


def discriminant(ainvs) -> int:
    b2, b4, b6, b8 = b_invariants(ainvs)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def transform(ainvs, r=0, s=0, t=0):
    """Apply x = x' + r, y = y' + s x' + t (u = 1)."""
    a1, a2, a3, a4, a6 = ainvs
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def val(p: int, n: int) -> int | float:
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- small polynomial helpers over F_p (coefficients low degree first) --

def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _polymod(f, g, p):
    f = [c % p for c in f]
    g = _trim([c % p for c in g])
    inv = pow(g[-1], -1, p)
    while len(_trim(f)) >= len(g):
        f = _trim(f)
        k = f[-1] * inv % p
        shift = len(f) - len(g)
        for i, c in enumerate(g):
            f[shift + i] = (f[shift + i] - k * c) % p
    return _trim(f)


def _polymul(f, g, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return out


def _polygcd(f, g, p):
    f, g = _trim([c % p for c in f]), _trim([c % p for c in g])
    while g:
        f, g = g, _polymod(f, g, p)
    return f


def _count_distinct_roots(coeffs, p) -> int:
    """Number of distinct roots in F_p of a polynomial (low degree first)."""
    f = _trim([c % p for c in coeffs])
    if len(f) <= 1:
        return 0
    if p < 64:
        return sum(1 for x in range(p) if sum(c * pow(x, i, p) for i, c in enumerate(f)) % p == 0)
    # gcd(f, x^p - x)
    result, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            result = _polymod(_polymul(result, base, p), f, p)
        base = _polymod(_polymul(base, base, p), f, p)
        e >>= 1
    xp = result + [0] * (2 - len(result)) if len(result) < 2 else list(result)
    xp[1] = (xp[1] - 1) % p
    return len(_polygcd(f, xp, p)) - 1


def _quad_has_roots(a, b, c, p) -> bool:
    if p == 2:
        return any((a * x * x + b * x + c) % 2 == 0 for x in (0, 1))
    return _count_distinct_roots([c, b, a], p) > 0


def _quad_distinct(a, b, c, p) -> bool:
    if p == 2:
        return b % 2 != 0
    return (b * b - 4 * a * c) % p != 0


def _repeated_root(coeffs, p) -> int:
    """A repeated root in F_p of a monic cubic known to have one."""
    f = [c % p for c in coeffs]
    if p <= 3:
        for x in range(p):
            fx = sum(c * pow(x, i, p) for i, c in enumerate(f)) % p
            dfx = sum(i * c * pow(x, i - 1, p) for i, c in enumerate(f) if i) % p
            if fx == 0 and dfx == 0:
                return x
        raise ValueError("no repeated root")
    df = [(i * c) % p for i, c in enumerate(f)][1:]
    g = _polygcd(f, df, p)
    if len(g) == 2:
        return -g[0] * pow(g[1], -1, p) % p
    if len(g) == 3:  # (x - r)^2 divides f' as well: triple root
        return -f[2] * pow(3, -1, p) % p
    raise ValueError("no repeated root")


def _singular_point(ainvs, p) -> tuple[int, int]:
    a1, a2, a3, a4, a6 = ainvs
    if p <= 3:
        for x in range(p):
            for y in range(p):
                F = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6
                Fx = a1 * y - 3 * x * x - 2 * a2 * x - a4
                Fy = 2 * y + a1 * x + a3
                if F % p == 0 and Fx % p == 0 and Fy % p == 0:
                    return x, y
        raise ValueError("reduction is nonsingular")
    b2, _, _, _ = b_invariants(ainvs)
    c4, c6 = c_invariants(ainvs)
    if c4 % p == 0:
        x = -b2 * pow(12, -1, p) % p
    else:
        x = -(c6 + b2 * c4) * pow(12 * c4, -1, p) % p
    y = -(a1 * x + a3) * pow(2, -1, p) % p
    return x, y


@dataclass(frozen=True)
class LocalReductionData:
    p: int
    kodaira: str
    c_p: int
    f_p: int
    eps_p: int = 1
    minimal_ainvs: tuple = field(default=(), compare=False, repr=False)

    @property
    def good(self) -> bool:
        return self.f_p == 0


def tate(ainvs, p: int) -> LocalReductionData:
    """Tate's algorithm for an integral long Weierstrass model at the prime p."""
    ainvs = tuple(int(a) for a in ainvs)
    half = pow(2, -1, p) if p != 2 else None
    while True:
        delta = discriminant(ainvs)
        if delta == 0:
            raise ValueError("singular curve")
        vD = val(p, delta)
        if vD == 0:
            return LocalReductionData(p, "I0", 1, 0, minimal_ainvs=ainvs)

        x0, y0 = _singular_point(ainvs, p)
        ainvs = transform(ainvs, r=x0, t=y0)
        a1, a2, a3, a4, a6 = ainvs
        b2, b4, b6, b8 = b_invariants(ainvs)

        if b2 % p != 0:
            split = _quad_has_roots(1, a1, -a2, p)
            if split:
                c = vD
            else:
                c = 2 if vD % 2 == 0 else 1
            return LocalReductionData(p, f"I{vD}", c, 1, minimal_ainvs=ainvs)
        if a6 % (p * p) != 0:
            return LocalReductionData(p, "II", 1, vD, minimal_ainvs=ainvs)
        if b8 % p**3 != 0:
            return LocalReductionData(p, "III", 2, vD - 1, minimal_ainvs=ainvs)
        if b6 % p**3 != 0:
            c = 3 if _quad_has_roots(1, a3 // p, -(a6 // (p * p)), p) else 1
            return LocalReductionData(p, "IV", c, vD - 2, minimal_ainvs=ainvs)

        if p == 2:
            s, t = a2 % 2, 2 * ((a6 // 4) % 2)
        else:
            s, t = -a1 * half % p, -a3 * half % (p * p)
        ainvs = transform(ainvs, s=s, t=t)
        a1, a2, a3, a4, a6 = ainvs
        assert a1 % p == 0 and a2 % p == 0 and a3 % p**2 == 0
        assert a4 % p**2 == 0 and a6 % p**3 == 0

        # P(T) = T^3 + a2/p T^2 + a4/p^2 T + a6/p^3
        P = [a6 // p**3, a4 // p**2, a2 // p, 1]
        pa, pb, pc = P[2], P[1], P[0]
        disc = pa * pa * pb * pb - 4 * pb**3 - 4 * pa**3 * pc - 27 * pc * pc + 18 * pa * pb * pc
        if disc % p != 0:
            c = 1 + _count_distinct_roots(P, p)
            return LocalReductionData(p, "I0*", c, vD - 4, minimal_ainvs=ainvs)

        root = _repeated_root(P, p)
        triple = all(
            (coef - expect) % p == 0
            for coef, expect in zip(P, [-root**3, 3 * root * root, -3 * root, 1])
        )
        ainvs = transform(ainvs, r=p * root)
        a1, a2, a3, a4, a6 = ainvs

        if not triple:
            ix = iy = 3
            mx = my = p * p
            cp = 0
            while not cp:
                xa2, xa3 = a2 // p, a3 // my
                xa4, xa6 = a4 // (p * mx), a6 // (mx * my)
                if _quad_distinct(1, xa3, -xa6, p):
                    cp = 4 if _quad_has_roots(1, xa3, -xa6, p) else 2
                    continue
                if p == 2:
                    t = my * (xa6 % 2)
                else:
                    t = my * (-xa3 * half % p)
                ainvs = transform(ainvs, t=t)
                a1, a2, a3, a4, a6 = ainvs
                my *= p
                iy += 1
                xa2, xa3 = a2 // p, a3 // my
                xa4, xa6 = a4 // (p * mx), a6 // (mx * my)
                if _quad_distinct(xa2, xa4, xa6, p):
                    cp = 4 if _quad_has_roots(xa2, xa4, xa6, p) else 2
                    continue
                if p == 2:
                    r = mx * ((xa6 * xa2) % 2)
                else:
                    r = mx * (-xa4 * pow(2 * xa2, -1, p) % p)
                ainvs = transform(ainvs, r=r)
                a1, a2, a3, a4, a6 = ainvs
                mx *= p
                ix += 1
            n = ix + iy - 5
            return LocalReductionData(p, f"I{n}*", cp, vD - ix - iy + 1, minimal_ainvs=ainvs)

        a3t, a6t = a3 // p**2, a6 // p**4
        if _quad_distinct(1, a3t, -a6t, p):
            c = 3 if _quad_has_roots(1, a3t, -a6t, p) else 1
            return LocalReductionData(p, "IV*", c, vD - 6, minimal_ainvs=ainvs)
        if p == 2:
            t = p * p * (a6t % 2)
        else:
            t = p * p * (-a3t * half % p)
        ainvs = transform(ainvs, t=t)
        a1, a2, a3, a4, a6 = ainvs
        if a4 % p**4 != 0:
            return LocalReductionData(p, "III*", 2, vD - 7, minimal_ainvs=ainvs)
        if a6 % p**6 != 0:
            return LocalReductionData(p, "II*", 1, vD - 8, minimal_ainvs=ainvs)
        # non-minimal at p: scale by u = p
        ainvs = (a1 // p, a2 // p**2, a3 // p**3, a4 // p**4, a6 // p**6)


def tate_algorithm(model: CurveModel, p: int) -> LocalReductionData:
    """Tate's algorithm on the model of C_N, with the local root number attached."""
    data = tate(model.ainvs, p)
    eps = local_root_number(model.N, p) if (3 * model.N) % p == 0 else 1
    return LocalReductionData(data.p, data.kodaira, data.c_p, data.f_p, eps, data.minimal_ainvs)


def bad_primes(N: int) -> list[int]:
    return sorted(set(factorint(3 * N)) | ({2} if N % 2 == 0 else set()))


def local_data(model: CurveModel) -> list[LocalReductionData]:
    return [tate_algorithm(model, p) for p in bad_primes(model.N)]


def conductor(model: CurveModel) -> int:
    out = 1
    for p in sorted(factorint(abs(model.discriminant))):
        out *= p ** tate(model.ainvs, p).f_p
    return out


def tamagawa_closed_form(N: int, p: int) -> int:
    """Tamagawa number c_p of C_N from the closed-form table."""
    if (3 * N) % p != 0 or not isprime(p):
        raise ValueError(f"p={p} does not divide 3N={3 * N}")
    if p == 2:
        return 1
    if p == 3:
        r = N % 9
        if r in (4, 5):
            return 1
        if r in (2, 7):
            return 2
        return 3
    return 1 if p % 3 == 2 else 3


def expected_kodaira(N: int, p: int) -> str:
    """Kodaira type at p | 3N predicted by the case analysis for C_N."""
    if p == 3:
        return "III*" if N % 9 in (2, 7) else "IV*"
    if N % (p * p) == 0:
        return "IV*"
    return "IV"


def legendre_array(values: np.ndarray, p: int) -> np.ndarray:
    is_sq = np.zeros(p, dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    is_sq[(xs * xs) % p] = 1
    v = np.mod(values, p)
    out = np.where(is_sq[v] == 1, 1, -1)
    out[v == 0] = 0
    return out


def count_points_mod_p(model: CurveModel, p: int) -> int:
    """a_p = p + 1 - #E(F_p) by enumeration on a model with good reduction at p."""
    if (6 * model.N) % p == 0 and not (p == 2 and model.N % 2 == 1):
        raise ValueError(f"p={p} is a bad prime for C_{model.N}")
    if p == 2:
        ainvs = tate(model.ainvs, 2).minimal_ainvs
        a1, a2, a3, a4, a6 = ainvs
        count = 1 + sum(
            1
            for x in range(2)
            for y in range(2)
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0
        )
        return p + 1 - count
    xs = np.arange(p, dtype=np.int64)
    rhs = (xs * xs % p * xs + model.a6 % p) % p
    return int(-legendre_array(rhs, p).sum())


def jacobi_minus3(p: int) -> int:
    """(-3/p) for a prime p != 3."""
    if p == 2:
        return -1
    return 1 if p % 3 == 1 else -1


def local_root_number(N: int, q) -> int:
    """Local root number of C_N at q | 3N or at INFINITY."""
    if q == INFINITY:
        return -1
    if (3 * N) % q != 0:
        raise ValueError(f"q={q} does not divide 3N={3 * N}")
    if q == 2:
        return -1
    if q == 3:
        return -1 if N % 9 in (1, 8) else 1
    return jacobi_minus3(q)


def global_root_number(N: int) -> int:
    eps = local_root_number(N, INFINITY)
    for q in bad_primes(N):
        eps *= local_root_number(N, q)
    return eps


def inert_split_counts(N: int) -> tuple[int, int]:
    """(r, s): distinct prime factors of N inert / split in Q(sqrt(-3))."""
    r = s = 0
    for p in factorint(N):
        if p % 3 == 2:
            r += 1
        elif p % 3 == 1:
            s += 1
    return r, s


def t_of_n(N: int) -> int:
    if N % 3 == 0:
        return -1 if N % 9 != 0 else 0
    return 1 if N % 9 in (1, 8) else 0


def parity_root_number(N: int) -> int:
    r, _ = inert_split_counts(N)
    return -((-1) ** t_of_n(N)) * (-1) ** r


# -- the 3-isogeny E_N -> E'_N --

def on_e(point, N: int) -> bool:
    x, y, z = point
    return _is_zero(y * y * z - (x**3 - 2**4 * 3**3 * N * N * z**3))


def on_e_prime(point, N: int) -> bool:
    x, y, z = point
    return _is_zero(y * y * z - (x**3 + 2**4 * N * N * z**3))


def _is_zero(expr) -> bool:
    if hasattr(expr, "expand"):
        return expr.expand() == 0
    return expr == 0


def _normalise(point):
    x, y, z = point
    if not _is_zero(z):
        return (_simplify(x / z), _simplify(y / z), 1)
    if not _is_zero(y):
        return (_simplify(x / y), 1, 0)
    raise ValueError("degenerate projective point")


def _simplify(v):
    if hasattr(v, "expand"):
        from sympy import radsimp

        return radsimp(v).expand()
    return v


def isogeny_phi(point, N: int):
    """Image of a projective point of E_N: y^2 z = x^3 - 432 N^2 z^3 on E'_N."""
    x, y, z = (Fraction(c) if isinstance(c, int) else c for c in point)
    if not on_e((x, y, z), N):
        raise ValueError(f"{point} is not on E_{N}")
    if _is_zero(x) and _is_zero(z):
        return (0, 1, 0)
    X = (x**4 - 2**6 * 3**3 * N * N * x * z**3) / 9
    Y = y * (x**3 + 2**7 * 3**3 * N * N * z**3) / 27
    Z = x**3 * z
    if all(_is_zero(c) for c in (X, Y, Z)):
        raise AssertionError("isogeny formula degenerated")
    if _is_zero(Z) and _is_zero(X):
        return (0, 1, 0)
    return _normalise((X, Y, Z))


def curve_point_to_weierstrass(x, y, N: int):
    """Map (x, y) on x^3 + y^3 = N to a projective point on E_N."""
    x, y = Fraction(x), Fraction(y)
    s = x + y
    if s == 0:
        return (0, 1, 0)
    return (12 * N / s, 36 * N * (x - y) / s, 1)
