"""Hecke L-series of C_N: the Grossencharacter, Dirichlet coefficients, central values.

L(C_N, s) = L(conj(psi_N), s) with psi_N((a)) = conj((N/a)_3) * a for a primary
generator a.  Central values use the rapidly convergent series

    L(1) = 2 * sum_{n >= 1} a_n / n * exp(-2 pi n / sqrt(cond))

valid when the global root number is +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np
from sympy import factorint

from . import curves
from .eisenstein import (
    EisensteinInt,
    cubic_residue_symbol,
    norm,
    primary_associate,
    splitting_type,
)

# Above this many terms the coefficient table is not materialised and the
# central value is summed over ideals in blocks instead.
TABLE_CEILING = 12_000_000
# Hard ceiling on the truncation point for any backend.
MAX_TERMS = 400_000_000
# Float64 sums are trusted to this many significant digits.
FLOAT_DIGITS = 15


class PrecisionError(RuntimeError):
    """Requested precision is unreachable within the configured term ceiling."""


def rad(n: int) -> int:
    out = 1
    for p in factorint(n):
        out *= p
    return out


@dataclass(frozen=True)
class HeckeCharacter:
    N: int

    @property
    def f(self) -> int:
        """Generator of an ideal divisible by the conductor: 3 * rad(tD)."""
        return 3 * rad(self.N) if self.N > 1 else 3


def psi_value(char: HeckeCharacter, q) -> EisensteinInt:
    """psi_N at the prime ideal generated by q."""
    q = EisensteinInt.coerce(q)
    n = norm(q)
    if math.gcd(n, 3 * char.N) != 1:
        raise ValueError(f"{q} divides 3N = {3 * char.N}")
    _, q = primary_associate(q)
    return cubic_residue_symbol(char.N, q).conj().element() * q


# -- vectorised number theory on int64 arrays --

def prime_sieve(n: int) -> np.ndarray:
    """All primes <= n."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    s[4::2] = False
    for i in range(3, math.isqrt(n) + 1, 2):
        if s[i]:
            s[i * i :: 2 * i] = False
    return np.nonzero(s)[0].astype(np.int64)


def powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base**exp % mod; needs mod < 2**31."""
    base = np.mod(base, mod).astype(np.int64)
    exp = np.asarray(exp, dtype=np.int64).copy()
    result = np.ones_like(base)
    while np.any(exp > 0):
        odd = (exp & 1) == 1
        result = np.where(odd, result * base % mod, result)
        base = base * base % mod
        exp >>= 1
    return result


def split_prime_coefficients(N: int, X: int) -> tuple[np.ndarray, np.ndarray]:
    """(p, a_p) for split primes p <= X not dividing N.

    Each p = x^2 + 3y^2; pi = (x + y) + 2y*w has norm p and is rotated to its
    primary associate, then a_p = trace(conj((N/pi)_3) * pi).
    """
    if X < 7:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    is_prime = np.zeros(X + 1, dtype=bool)
    is_prime[prime_sieve(X)] = True
    ys = np.arange(1, math.isqrt(X // 3) + 1, dtype=np.int64)
    xs_all, ys_all = [], []
    for y in ys:
        xmax = math.isqrt(X - 3 * int(y) * int(y))
        if xmax < 1:
            continue
        x = np.arange(1, xmax + 1, dtype=np.int64)
        xs_all.append(x)
        ys_all.append(np.full_like(x, y))
    x = np.concatenate(xs_all)
    y = np.concatenate(ys_all)
    p = x * x + 3 * y * y
    keep = is_prime[p] & (p % 3 == 1)
    x, y, p = x[keep], y[keep], p[keep]
    keep = np.array([N % int(q) != 0 for q in p.tolist()], dtype=bool)
    x, y, p = x[keep], y[keep], p[keep]
    a = x + y
    b = 2 * y
    # rotate by w until primary: (a, b) -> (-b, a - b); allow sign flip
    pa, pb = np.zeros_like(a), np.zeros_like(b)
    done = np.zeros(a.shape, dtype=bool)
    ca, cb = a.copy(), b.copy()
    for _ in range(3):
        for sgn in (1, -1):
            sa, sb = sgn * ca, sgn * cb
            ok = (~done) & (np.mod(sa, 3) == 1) & (np.mod(sb, 3) == 0)
            pa[ok], pb[ok] = sa[ok], sb[ok]
            done |= ok
        ca, cb = -cb, ca - cb
    assert done.all()
    # w = -a / b mod p
    binv = powmod(pb, p - 2, p)
    w = np.mod(-pa, p) * binv % p
    r = powmod(np.array([N % q for q in p.tolist()], dtype=np.int64), (p - 1) // 3, p)
    k = np.full(p.shape, -1, dtype=np.int64)
    k[r == 1] = 0
    k[r == w] = 1
    k[r == w * w % p] = 2
    assert (k >= 0).all()
    # trace(w^(-k) * pi): k=0 -> 2a-b, k=1 -> 2b-a, k=2 -> -a-b
    ap = np.where(k == 0, 2 * pa - pb, np.where(k == 1, 2 * pb - pa, -pa - pb))
    order = np.argsort(p)
    return p[order], ap[order]


def prime_power_coefficients(ap: int, p: int, kmax: int, good: bool = True) -> list[int]:
    """[a_1, a_p, a_{p^2}, ...] from a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}}."""
    if not good:
        return [1] + [0] * kmax
    out = [1, ap]
    while len(out) <= kmax:
        out.append(ap * out[-1] - p * out[-2])
    return out[: kmax + 1]


@dataclass
class CoefficientTable:
    N: int
    n_max: int
    a: np.ndarray = field(repr=False)
    conductor: int

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise IndexError(n)
        return int(self.a[n])

    def items(self):
        nz = np.nonzero(self.a)[0]
        return ((int(n), int(self.a[n])) for n in nz)


def coefficient_table(N: int, n_max: int) -> CoefficientTable:
    """Dirichlet coefficients a_n of L(C_N, s) for n <= n_max."""
    curves.validate_n(N)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    X = n_max
    a = np.ones(X + 1, dtype=np.int64)
    a[0] = 0
    root = math.isqrt(X)
    primes = prime_sieve(X)

    def apply(p: int, values: list[int]):
        if p > root:
            if values[1] != 1:
                a[p::p] *= values[1]
            return
        fac = np.full(len(range(p, X + 1, p)), values[1], dtype=np.int64)
        pk, k = p * p, 2
        while pk <= X:
            step = pk // p
            fac[step - 1 :: step] = values[k]
            pk *= p
            k += 1
        a[p::p] *= fac

    def kmax(p: int) -> int:
        k, q = 0, 1
        while q * p <= X:
            q *= p
            k += 1
        return max(k, 1)

    for p in primes.tolist():
        if p == 3 or N % p == 0:
            a[p::p] = 0
        elif p % 3 == 2:
            if p > root:
                a[p::p] = 0
            else:
                vals = [1] + [0 if k % 2 else (-p) ** (k // 2) for k in range(1, kmax(p) + 1)]
                apply(p, vals)
    sp, sap = split_prime_coefficients(N, X)
    for p, ap in zip(sp.tolist(), sap.tolist()):
        if p > root:
            if ap != 1:
                a[p::p] *= ap
        else:
            apply(p, prime_power_coefficients(ap, p, kmax(p)))
    return CoefficientTable(N, X, a, curve_conductor(N))


@lru_cache(maxsize=4096)
def curve_conductor(N: int) -> int:
    return curves.conductor(curves.build_model(N))


def truncation_bound(conductor: int, digits: int) -> int:
    return math.ceil(math.sqrt(conductor) * digits * math.log(10) / (2 * math.pi)) + 64


@dataclass(frozen=True)
class LValue:
    N: int
    value: mpmath.mpf
    conductor: int
    root_number: int
    n_max: int
    digits: int
    backend: str


def evaluate_l_value(N: int, digits: int = 30, max_terms: int = MAX_TERMS) -> LValue:
    """L(C_N, 1) to the requested number of significant digits, with metadata."""
    curves.validate_n(N)
    if digits < 10:
        raise ValueError("digits must be >= 10")
    eps = curves.global_root_number(N)
    cond = curve_conductor(N)
    n_max = truncation_bound(cond, digits)
    if eps == -1:
        return LValue(N, mpmath.mpf(0), cond, eps, 0, digits, "root-number")
    if n_max > max_terms:
        raise PrecisionError(
            f"precision unreachable: {n_max} terms needed for conductor {cond}, ceiling {max_terms}"
        )
    if n_max <= TABLE_CEILING:
        table = coefficient_table(N, n_max)
        if digits <= FLOAT_DIGITS:
            value, backend = _sum_float(table), "table-float64"
        else:
            value, backend = _sum_fixed(table, digits), "table-fixed"
    elif digits <= FLOAT_DIGITS:
        value, backend = _sum_ideals(N, cond, n_max), "ideal-sum-float64"
    else:
        raise PrecisionError(
            f"precision unreachable: {digits} digits needs {n_max} terms beyond the table ceiling"
        )
    return LValue(N, value, cond, eps, n_max, digits, backend)


def l_value(N: int, digits: int = 30) -> mpmath.mpf:
    return evaluate_l_value(N, digits).value


def _sum_float(table: CoefficientTable) -> mpmath.mpf:
    scale = 2 * math.pi / math.sqrt(table.conductor)
    n = np.nonzero(table.a)[0]
    terms = table.a[n] * np.exp(-scale * n) / n
    return mpmath.mpf(2 * math.fsum(terms.tolist()))


def _sum_fixed(table: CoefficientTable, digits: int) -> mpmath.mpf:
    """Fixed-point binary sum with ``digits`` significant decimals plus guard bits."""
    total_abs = int(np.abs(table.a).sum())
    guard = total_abs.bit_length() + table.n_max.bit_length() + 16
    P = math.ceil(digits * math.log2(10)) + guard
    with mpmath.workprec(P + 32):
        R = int(mpmath.floor(mpmath.exp(-2 * mpmath.pi / mpmath.sqrt(table.conductor)) * 2**P))
    # walk the nonzero coefficients, advancing x^n by cached powers of the gap
    powers = {1: R}
    acc = 0
    E, last = 1 << P, 0
    nz = np.nonzero(table.a)[0]
    for n, an in zip(nz.tolist(), table.a[nz].tolist()):
        gap = n - last
        step = powers.get(gap)
        if step is None:
            step = _fixed_pow(R, gap, P)
            powers[gap] = step
        E = (E * step) >> P
        last = n
        acc += an * (E // n)
    with mpmath.workprec(P + 32):
        return mpmath.mpf(2 * acc) / 2**P


def _fixed_pow(R: int, e: int, P: int) -> int:
    out, base = 1 << P, R
    while e:
        if e & 1:
            out = (out * base) >> P
        base = (base * base) >> P
        e >>= 1
    return out


# -- ideal-sum backend: sum over primary generators alpha of conj(psi)(alpha) --

def _cubic_char_table_split(p: int, w: int) -> np.ndarray:
    """Exponent k of x^((p-1)/3) = w^k for x in F_p (entry -1 at x = 0)."""
    xs = np.arange(p, dtype=np.int64)
    r = powmod(xs, np.full_like(xs, (p - 1) // 3), np.full_like(xs, p))
    k = np.full(p, -1, dtype=np.int64)
    k[r == 1] = 0
    k[r == w] = 1
    k[r == w * w % p] = 2
    k[0] = -1
    return k


def _f_p2_pow(xa, xb, e, p):
    """(xa + xb*w)^e in F_{p^2} = F_p[w], elementwise."""
    ra, rb = np.ones_like(xa), np.zeros_like(xb)
    while e:
        if e & 1:
            ra, rb = (ra * xa - rb * xb) % p, (ra * xb + rb * xa - rb * xb) % p
        xa, xb = (xa * xa - xb * xb) % p, (2 * xa * xb - xb * xb) % p
        e >>= 1
    return ra, rb


def _cubic_char_table_inert(p: int) -> np.ndarray:
    """Exponent of (x + w)^((p^2-1)/3) for x in F_p; index p holds the rational class."""
    xs = np.arange(p, dtype=np.int64)
    ra, rb = _f_p2_pow(xs, np.ones_like(xs), (p * p - 1) // 3, p)
    k = np.full(p + 1, -1, dtype=np.int64)
    k[:p][(ra == 1) & (rb == 0)] = 0
    k[:p][(ra == 0) & (rb == 1)] = 1
    k[:p][(ra == p - 1) & (rb == p - 1)] = 2
    k[p] = 0
    assert (k >= 0).all()
    return k


def _character_factors(N: int):
    """Per prime p | N a closure alpha -> exponent of (alpha/p)_3 (or -1 if not coprime)."""
    out = []
    for p, e in factorint(N).items():
        st = splitting_type(p)
        if st.is_split:
            for pi in (st.pi, st.pibar):
                w = -pi.a * pow(pi.b, -1, p) % p
                table = _cubic_char_table_split(p, w)

                def f(a, b, p=p, w=w, table=table):
                    return table[(a + b * w) % p]

                out.append((f, e))
        else:
            table = _cubic_char_table_inert(p)
            inv = np.zeros(p, dtype=np.int64)
            if p > 2:
                xs = np.arange(1, p, dtype=np.int64)
                inv[1:] = powmod(xs, np.full_like(xs, p - 2), np.full_like(xs, p))
            else:
                inv[1] = 1

            def f(a, b, p=p, table=table, inv=inv):
                am, bm = a % p, b % p
                idx = np.where(bm == 0, p, am * inv[bm] % p)
                k = table[idx]
                return np.where((am == 0) & (bm == 0), -1, k)

            out.append((f, e))
    return out


def primary_lattice_points(X: int, block: int = 2_000_000):
    """Yield (a, b) arrays of primary a + b*w with 0 < norm <= X, in blocks."""
    bmax = math.isqrt(4 * X // 3) + 1
    bs = np.arange(-(bmax - bmax % 3), bmax + 1, 3, dtype=np.int64)
    disc = 4 * X - 3 * bs * bs
    ok = disc >= 0
    bs, disc = bs[ok], disc[ok]
    sq = np.sqrt(disc.astype(np.float64))
    lo = np.ceil((bs - sq) / 2).astype(np.int64) - 1
    hi = np.floor((bs + sq) / 2).astype(np.int64) + 1
    # first a >= lo with a = 1 mod 3
    lo = lo + np.mod(1 - lo, 3)
    counts = np.maximum((hi - lo) // 3 + 1, 0)
    start = 0
    while start < len(bs):
        csum = np.cumsum(counts[start:])
        stop = start + max(1, int(np.searchsorted(csum, block, side="right")))
        cnt = counts[start:stop]
        bb = np.repeat(bs[start:stop], cnt)
        base = np.repeat(lo[start:stop], cnt)
        offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        aa = base + 3 * offs
        nrm = aa * aa - aa * bb + bb * bb
        keep = (nrm > 0) & (nrm <= X)
        yield aa[keep], bb[keep]
        start = stop


def _sum_ideals(N: int, cond: int, X: int) -> mpmath.mpf:
    factors = _character_factors(N)
    scale = 2 * math.pi / math.sqrt(cond)
    partial = []
    for a, b in primary_lattice_points(X):
        k = np.zeros(a.shape, dtype=np.int64)
        alive = np.ones(a.shape, dtype=bool)
        for f, e in factors:
            kk = f(a, b)
            alive &= kk >= 0
            k += e * np.where(kk >= 0, kk, 0)
        a, b, k = a[alive], b[alive], np.mod(k[alive], 3)
        # conj(psi)(alpha) = (N/alpha)_3 * conj(alpha); conj(alpha) = (a - b) - b w
        ca, cb = a - b, -b
        # real part of w^k * (ca + cb w): k=0: ca - cb/2; k=1: -cb - (ca - cb)/2 ... via trace/2
        tr = np.where(k == 0, 2 * ca - cb, np.where(k == 1, -ca - cb, 2 * cb - ca))
        n = a * a - a * b + b * b
        partial.append(math.fsum((0.5 * tr * np.exp(-scale * n) / n).tolist()))
    return mpmath.mpf(2 * math.fsum(partial))


def ideal_sum_coefficients(N: int, n_max: int) -> np.ndarray:
    """a_n for n <= n_max by summing conj(psi_N) over primary generators of norm n."""
    factors = _character_factors(N)
    out = np.zeros(n_max + 1, dtype=np.int64)
    for a, b in primary_lattice_points(n_max):
        k = np.zeros(a.shape, dtype=np.int64)
        alive = np.ones(a.shape, dtype=bool)
        for f, e in factors:
            kk = f(a, b)
            alive &= kk >= 0
            k += e * np.where(kk >= 0, kk, 0)
        a, b, k = a[alive], b[alive], np.mod(k[alive], 3)
        ca, cb = a - b, -b
        tr = np.where(k == 0, 2 * ca - cb, np.where(k == 1, -ca - cb, 2 * cb - ca))
        n = a * a - a * b + b * b
        np.add.at(out, n, tr)
    # each a_n is the sum of real parts: trace / 2
    assert (out % 2 == 0).all()
    out //= 2
    out[0] = 0
    return out


# -- imprimitive values --

def local_euler_at_one(N: int, p: int) -> Fraction:
    """Local factor (1 - a_p/p + 1/p) of L(C_N, s) at s = 1 for a good prime p."""
    if (3 * N) % p == 0:
        raise ValueError(f"p={p} is bad for C_{N}")
    if p % 3 == 2:
        ap = 0
    else:
        pi = splitting_type(p).pi
        ap = psi_value(HeckeCharacter(N), pi)
        ap = 2 * ap.a - ap.b
    return Fraction(p - ap + 1, p)


def twist_primes(N: int) -> list[int]:
    """Distinct odd primes of N, i.e. of D in N = tD."""
    _, D = curves.split_t(N)
    return sorted(factorint(D))


def subtwist(N_total: int, alpha: Sequence[int]) -> int:
    """t * D_alpha for alpha indexed by the sorted odd primes of N_total."""
    t, _ = curves.split_t(N_total)
    primes = twist_primes(N_total)
    if len(alpha) != len(primes):
        raise ValueError(f"alpha needs {len(primes)} entries, got {len(alpha)}")
    out = t
    for p, e in zip(primes, alpha):
        out *= p ** (e % 3)
    return out


def removed_euler_product(N_total: int, alpha: Sequence[int]) -> Fraction:
    """prod over p | D with alpha_p = 0 of the local factor of C_{t D_alpha} at s = 1."""
    sub = subtwist(N_total, alpha)
    out = Fraction(1)
    for p, e in zip(twist_primes(N_total), alpha):
        if e % 3 == 0:
            out *= local_euler_at_one(sub, p)
    return out


def l_value_imprimitive(N_total: int, alpha: Sequence[int], digits: int = 30) -> mpmath.mpf:
    """L_S(conj psi_{t D_alpha}, 1) with S the primes above 3 rad(tD)."""
    sub = subtwist(N_total, alpha)
    value = l_value(sub, digits)
    factor = removed_euler_product(N_total, alpha)
    return value * mpmath.mpf(factor.numerator) / factor.denominator


# -- functional equation check --

def completed_l(table: CoefficientTable, s, eps: int, split: float = 1.0):
    """Lambda(s) = cond^(s/2) (2 pi)^(-s) Gamma(s) L(s) from the incomplete-gamma
    expansion cut at t = split; independent of ``split`` exactly when the
    conductor and sign are right."""
    s = mpmath.mpf(s)
    A = mpmath.sqrt(table.conductor) / (2 * mpmath.pi)
    total = mpmath.mpf(0)
    for n, an in table.items():
        x = n / A
        total += an * (
            (A / n) ** s * mpmath.gammainc(s, x * split)
            + eps * (A / n) ** (2 - s) * mpmath.gammainc(2 - s, x / split)
        )
    return total


def functional_equation_residual(N: int, h: float = 0.1, digits: int = 20, conductor: int | None = None) -> mpmath.mpf:
    """|Lambda(1+h) - eps * Lambda(1-h)| with the two sides cut at different points."""
    cond = conductor or curve_conductor(N)
    eps = curves.global_root_number(N)
    with mpmath.workdps(digits + 10):
        n_max = math.ceil(math.sqrt(cond) * 1.5 * (digits + 5) * math.log(10) / (2 * math.pi)) + 64
        table = coefficient_table(N, n_max)
        table = CoefficientTable(N, n_max, table.a, cond)
        lhs = completed_l(table, 1 + h, eps, split=1.0)
        rhs = completed_l(table, 1 - h, eps, split=1.3)
        return abs(lhs - eps * rhs)
