"""Integer and rational utilities plus local-global solvability over Q.

Everything here works on Python ints and ``fractions.Fraction``; nothing
silently overflows.  Factorization and primality are delegated to sympy.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Union

import numpy as np
from sympy import factorint, isprime, primerange
from sympy.ntheory.primetest import is_square as _is_square

from .errors import InvalidArgument

Rational = Union[int, Fraction]
INF = "inf"


def is_perfect_kth_power(n: int, k: int) -> Optional[int]:
    """Return ``r`` with ``r**k == n`` (non-negative for even ``k``), else None."""
    if k < 2:
        raise InvalidArgument(f"exponent must be >= 2, got {k}")
    n = int(n)
    if n < 0:
        if k % 2 == 0:
            return None
        r = is_perfect_kth_power(-n, k)
        return None if r is None else -r
    if n < 2:
        return n
    if k == 2:
        r = isqrt(n)
        return r if r * r == n else None
    # integer k-th root by Newton iteration from an upper bound
    r = 1 << -(-n.bit_length() // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    return r if r ** k == n else None


def is_square(n: int) -> bool:
    return n >= 0 and _is_square(n)


def rational_sqrt(x: Rational) -> Optional[Fraction]:
    """Square root of a non-negative rational if it is a rational square."""
    x = Fraction(x)
    if x < 0:
        return None
    a, b = x.numerator, x.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def squarefree_part(n: int) -> int:
    """Squarefree ``d`` with ``n = d * m**2``; the sign of ``n`` is kept."""
    if n == 0:
        raise InvalidArgument("squarefree part of 0 is undefined")
    d = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            d *= p
    return d


def squarefree_class(x: Rational) -> int:
    """Canonical squarefree integer in the square class of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise InvalidArgument("zero has no square class")
    return squarefree_part(x.numerator * x.denominator)


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes ``p`` with ``lo < p <= hi``."""
    if lo < 2 or hi < lo:
        raise InvalidArgument(f"need 2 <= lo <= hi, got ({lo}, {hi})")
    return list(primerange(lo + 1, hi + 1))


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    return sorted(factorint(n)) if n > 1 else []


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise InvalidArgument("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre_symbol(a: int, p: int) -> int:
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise InvalidArgument(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _as_integer_class(x: Rational) -> int:
    x = Fraction(x)
    if x == 0:
        raise InvalidArgument("Hilbert symbol needs nonzero arguments")
    # n/d and n*d differ by the square d**2
    return x.numerator * x.denominator


def hilbert_symbol(a: Rational, b: Rational, place) -> int:
    """Local Hilbert symbol ``(a, b)_v`` at a prime ``v`` or ``"inf"``."""
    a, b = _as_integer_class(a), _as_integer_class(b)
    if place == INF or place == float("inf"):
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    alpha, beta = valuation(a, p), valuation(b, p)
    u, v = a // p ** alpha, b // p ** beta
    if p == 2:
        def eps(t):
            return ((t - 1) // 2) % 2

        def omega(t):
            return ((t * t - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = 1
    if (alpha * beta * ((p - 1) // 2)) % 2:
        s = -s
    if beta % 2:
        s *= legendre_symbol(u, p)
    if alpha % 2:
        s *= legendre_symbol(v, p)
    return s


def relevant_places(*values: Rational) -> list:
    primes = {2}
    for x in values:
        x = Fraction(x)
        primes.update(prime_factors(x.numerator))
        primes.update(prime_factors(x.denominator))
    return [INF] + sorted(primes)


@dataclass(frozen=True)
class ConicForm:
    """The diagonal ternary form ``a X^2 + b Y^2 + c Z^2``."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a * self.b * self.c == 0:
            raise InvalidArgument("conic coefficients must be nonzero")

    def __call__(self, x, y, z):
        return self.a * x * x + self.b * y * y + self.c * z * z


@dataclass(frozen=True)
class ConicVerdict:
    solvable: bool
    witness: Optional[tuple[int, int, int]]
    symbols: dict
    note: str = ""


def conic_local_symbols(f: ConicForm) -> dict:
    # aX^2 + bY^2 + cZ^2 = 0  <=>  Z^2 = (-a/c) X^2 + (-b/c) Y^2
    s, t = -f.a * f.c, -f.b * f.c
    return {v: hilbert_symbol(s, t, v) for v in relevant_places(f.a, f.b, f.c)}


def _find_conic_witness(f: ConicForm, bound: int):
    big = max(abs(f.a), abs(f.b), abs(f.c)) * bound * bound >= 2 ** 62
    ys = np.arange(bound + 1, dtype=np.int64)
    for x in range(bound + 1):
        if big:
            for y in range(bound + 1):
                num = -(f.a * x * x + f.b * y * y)
                if num % f.c == 0:
                    z2 = num // f.c
                    if z2 >= 0 and is_square(z2) and (x, y, z2) != (0, 0, 0):
                        z = isqrt(z2)
                        if z <= bound:
                            return _primitive((x, y, z))
            continue
        num = -(f.a * x * x + f.b * ys * ys)
        ok = (num % f.c) == 0
        z2 = np.where(ok, num // f.c, -1)
        ok &= z2 >= 0
        z = np.rint(np.sqrt(np.where(ok, z2, 0).astype(np.float64))).astype(np.int64)
        ok &= z * z == z2
        ok &= z <= bound
        if x == 0:
            ok &= (ys != 0) | (z != 0)
        hits = np.nonzero(ok)[0]
        if hits.size:
            y = int(ys[hits[0]])
            return _primitive((x, y, int(z[hits[0]])))
    return None


def _primitive(v):
    g = 0
    for t in v:
        g = gcd(g, t)
    return tuple(t // g for t in v)


def conic_has_rational_point(f: ConicForm, witness_bound: int = 10 ** 4) -> ConicVerdict:
    """Decide solvability of ``aX^2+bY^2+cZ^2 = 0`` over Q by Hilbert symbols.

    When solvable, a primitive witness with entries bounded by
    ``witness_bound`` is attached if the bounded search finds one.
    """
    symbols = conic_local_symbols(f)
    if any(s != 1 for s in symbols.values()):
        return ConicVerdict(False, None, symbols)
    w = _find_conic_witness(f, witness_bound)
    if w is None:
        return ConicVerdict(True, None, symbols, "witness: none (bound exceeded)")
    if f(*w) != 0:
        raise AssertionError(f"conic witness {w} does not satisfy {f}")
    return ConicVerdict(True, w, symbols)


class RationalField:
    """The field Q, callable to coerce ints and Fractions."""

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()
