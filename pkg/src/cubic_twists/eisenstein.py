"""Exact arithmetic in the Eisenstein integers Z[w], w = (-1 + sqrt(-3))/2.

Elements are stored as ``a + b*w``.  Congruences mod 3 are then integral:
``a + b*w = 1 (mod 3)`` iff ``a = 1 (mod 3)`` and ``b = 0 (mod 3)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod


@dataclass(frozen=True)
class EisensteinInt:
    a: int
    b: int

    @classmethod
    def coerce(cls, x) -> "EisensteinInt":
        if isinstance(x, EisensteinInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        if isinstance(x, tuple) and len(x) == 2:
            return cls(int(x[0]), int(x[1]))
        raise TypeError(f"cannot interpret {x!r} as an Eisenstein integer")

    def __add__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = EisensteinInt.coerce(other)
        return EisensteinInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return EisensteinInt.coerce(other) - self

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other):
        o = EisensteinInt.coerce(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        # w^2 = -1 - w
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "EisensteinInt":
        # conj(w) = w^2 = -1 - w
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return norm(self)

    def __bool__(self):
        return bool(self.a or self.b)

    def __complex__(self):
        return complex(self.a - self.b / 2, self.b * math.sqrt(3) / 2)

    def divides(self, other) -> bool:
        """True if ``self`` divides ``other`` in Z[w]."""
        o = EisensteinInt.coerce(other)
        n = norm(self)
        if n == 0:
            return not o
        p = o * self.conj()
        return p.a % n == 0 and p.b % n == 0

    def exact_div(self, other) -> "EisensteinInt":
        d = EisensteinInt.coerce(other)
        n = norm(d)
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        p = self * d.conj()
        if p.a % n or p.b % n:
            raise ValueError(f"{d} does not divide {self}")
        return EisensteinInt(p.a // n, p.b // n)

    def __divmod__(self, other):
        d = EisensteinInt.coerce(other)
        n = norm(d)
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        p = self * d.conj()
        q = EisensteinInt(_round_div(p.a, n), _round_div(p.b, n))
        return q, self - q * d

    def mod_int(self, m: int) -> "EisensteinInt":
        return EisensteinInt(self.a % m, self.b % m)

    def is_unit(self) -> bool:
        return norm(self) == 1

    def is_primary(self) -> bool:
        """Congruent to 1 mod 3O."""
        return self.a % 3 == 1 and self.b % 3 == 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*w"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*w"


def _round_div(x: int, n: int) -> int:
    return (2 * x + n) // (2 * n)


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
OMEGA2 = EisensteinInt(-1, -1)
LAMBDA = EisensteinInt(1, -1)  # 1 - w, the prime above 3
UNITS = (ONE, OMEGA, OMEGA2, -ONE, -OMEGA, -OMEGA2)

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(w2|w\^2|w|)$")


def parse(text: str) -> EisensteinInt:
    """Parse ``"x+y*w"``, ``"3w"``, ``"-5"`` or ``"2-w2"`` into an element."""
    s = text.replace(" ", "").lower()
    if not s:
        raise ValueError("empty Eisenstein integer")
    parts = re.findall(r"[+-]?[^+-]+", s)
    if "".join(parts) != s:
        raise ValueError(f"cannot parse Eisenstein integer {text!r}")
    total = ZERO
    for part in parts:
        m = _TERM.match(part)
        if not m or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse Eisenstein integer {text!r}")
        coef = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            coef = -coef
        unit = {"": ONE, "w": OMEGA, "w2": OMEGA2, "w^2": OMEGA2}[m.group(3)]
        total = total + unit * coef
    return total


def norm(z: EisensteinInt) -> int:
    return z.a * z.a - z.a * z.b + z.b * z.b


def gcd(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    while y:
        _, r = divmod(x, y)
        x, y = y, r
    return x


def primary_associate(z: EisensteinInt) -> tuple[EisensteinInt, EisensteinInt]:
    """Return ``(u, u*z)`` with ``u`` a unit and ``u*z = 1 mod 3O``."""
    z = EisensteinInt.coerce(z)
    if norm(z) % 3 == 0:
        raise ValueError(f"{z} has norm divisible by 3; no primary associate exists")
    for u in UNITS:
        w = u * z
        if w.is_primary():
            return u, w
    raise AssertionError("unreachable: every element prime to 3 has a primary associate")


@dataclass(frozen=True)
class SplittingType:
    kind: str  # "inert", "split" or "ramified"
    pi: EisensteinInt | None = None
    pibar: EisensteinInt | None = None

    @property
    def is_split(self) -> bool:
        return self.kind == "split"

    @property
    def is_inert(self) -> bool:
        return self.kind == "inert"


def cube_root_of_unity_mod(p: int) -> int:
    """A primitive cube root of unity modulo a prime p = 1 mod 3."""
    s = sqrt_mod(p - 3, p)
    return (-1 + s) * pow(2, -1, p) % p


@lru_cache(maxsize=None)
def splitting_type(p: int) -> SplittingType:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 3:
        return SplittingType("ramified", LAMBDA, LAMBDA.conj())
    if p % 3 == 2:
        return SplittingType("inert")
    r = cube_root_of_unity_mod(p)
    g = gcd(EisensteinInt(p, 0), EisensteinInt(r, -1))
    _, pi = primary_associate(g)
    if norm(pi) != p:
        raise AssertionError(f"gcd failed to split {p}")
    if pi.b < 0:
        pi = pi.conj()
    return SplittingType("split", pi, pi.conj())


def factor(z: EisensteinInt) -> tuple[EisensteinInt, list[tuple[EisensteinInt, int]]]:
    """Factor ``z = unit * prod(q**e)``.

    Primes coprime to 3 are returned in primary form; the prime above 3 is
    returned as ``1 - w``.
    """
    z = EisensteinInt.coerce(z)
    if not z:
        raise ValueError("cannot factor zero")
    rest = z
    out: list[tuple[EisensteinInt, int]] = []
    for p, e in sorted(factorint(norm(z)).items()):
        st = splitting_type(p)
        if st.kind == "inert":
            q = EisensteinInt(-p, 0)
            out.append((q, e // 2))
            rest = rest.exact_div(q ** (e // 2))
            continue
        cands = [st.pi] if st.kind == "ramified" else [st.pi, st.pibar]
        for q in cands:
            k = 0
            while q.divides(rest):
                rest = rest.exact_div(q)
                k += 1
            if k:
                out.append((q, k))
    if not rest.is_unit():
        raise AssertionError(f"factorisation of {z} left non-unit {rest}")
    return rest, out


@dataclass(frozen=True)
class CubicSymbol:
    """The cube root of unity ``w**exponent``."""

    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % 3)

    def __mul__(self, other: "CubicSymbol") -> "CubicSymbol":
        return CubicSymbol(self.exponent + other.exponent)

    def conj(self) -> "CubicSymbol":
        return CubicSymbol(-self.exponent)

    def __pow__(self, e: int) -> "CubicSymbol":
        return CubicSymbol(self.exponent * e)

    def element(self) -> EisensteinInt:
        return (ONE, OMEGA, OMEGA2)[self.exponent]

    def __complex__(self):
        return complex(self.element())

    def __str__(self):
        return ("1", "w", "w2")[self.exponent]


def _symbol_at_prime(a: EisensteinInt, q: EisensteinInt, p: int, inert: bool) -> int:
    if inert:
        m = p
        v = a.mod_int(m)
        r = ONE
        e = (p * p - 1) // 3
        while e:
            if e & 1:
                r = (r * v).mod_int(m)
            v = (v * v).mod_int(m)
            e >>= 1
        for k, u in enumerate((ONE, OMEGA, OMEGA2)):
            if r == u.mod_int(m):
                return k
        raise ValueError(f"{a} is not coprime to {q}")
    # residue field F_p: w maps to -q.a / q.b
    w = -q.a * pow(q.b, -1, p) % p
    x = (a.a + a.b * w) % p
    if x == 0:
        raise ValueError(f"{a} is not coprime to {q}")
    r = pow(x, (p - 1) // 3, p)
    for k, u in enumerate((1, w, w * w % p)):
        if r == u:
            return k
    raise AssertionError("Euler criterion returned a non-root of unity")


def cubic_residue_symbol(a, b) -> CubicSymbol:
    """Cubic residue symbol (a/b)_3 via Euler's criterion at each prime of b."""
    a = EisensteinInt.coerce(a)
    b = EisensteinInt.coerce(b)
    if not b:
        raise ValueError("modulus must be nonzero")
    if norm(b) % 3 == 0:
        raise ValueError(f"modulus {b} is not coprime to 3")
    _, primes = factor(b)
    k = 0
    for q, e in primes:
        n = norm(q)
        inert = q.b == 0
        p = -q.a if inert else n
        k += e * _symbol_at_prime(a, q, p, inert)
    return CubicSymbol(k)


def rational_symbol(n: int, pi: EisensteinInt, p: int) -> CubicSymbol:
    """(n/pi)_3 for a rational integer n and a split prime pi of norm p."""
    w = -pi.a * pow(pi.b, -1, p) % p
    r = pow(n % p, (p - 1) // 3, p)
    if r == 1:
        return CubicSymbol(0)
    if r == w:
        return CubicSymbol(1)
    if r == w * w % p:
        return CubicSymbol(2)
    raise ValueError(f"{n} is not coprime to {pi}")


def residue_system(M: int) -> list[EisensteinInt]:
    """Representatives of (O/MO)^x, closed under negation.

    For each pair of classes {x, -x} the representative with the
    lexicographically smaller reduced coordinates ``(a, b)`` in [0, M)^2 is
    kept together with its negative.  Classes with x = -x (only for M <= 2)
    get a single representative.
    """
    if M <= 0:
        raise ValueError("M must be positive")
    if M % 3 == 0:
        raise ValueError(f"M={M} is divisible by 3")
    out: list[EisensteinInt] = []
    for a in range(M):
        for b in range(M):
            if math.gcd(a * a - a * b + b * b, M) != 1:
                continue
            na, nb = (-a) % M, (-b) % M
            if (na, nb) == (a, b):
                out.append(EisensteinInt(a, b))
            elif (a, b) < (na, nb):
                c = EisensteinInt(a, b)
                out.append(c)
                out.append(-c)
    return out


def unit_group_order(M: int) -> int:
    """#(O/MO)^x computed from the factorisation of M."""
    total = 1
    for p, e in factorint(M).items():
        if p == 3:
            total *= 2 * 3 ** (2 * e - 1)
        elif p % 3 == 2:
            total *= (p * p - 1) * p ** (2 * (e - 1))
        else:
            total *= ((p - 1) * p ** (e - 1)) ** 2
    return total
