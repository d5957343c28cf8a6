"""Exact arithmetic in Q(sqrt D), squareness tests and residue reduction."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from sympy import nextprime

from .errors import InvalidArgument, NotReducible
from .exactnum import Rational, legendre_symbol, rational_sqrt, squarefree_part


@dataclass(frozen=True)
class QuadraticField:
    """Q(sqrt D) for a squarefree ``D`` other than 0 and 1."""

    D: int

    def __post_init__(self):
        if self.D in (0, 1) or squarefree_part(self.D) != self.D:
            raise InvalidArgument(f"D={self.D} must be squarefree and not 0 or 1")

    @classmethod
    def of(cls, n: int) -> QuadraticField:
        return cls(squarefree_part(n))

    def __call__(self, x, v: Rational = 0) -> QuadFieldElem:
        if isinstance(x, QuadFieldElem):
            if x.D != self.D:
                raise InvalidArgument("element belongs to a different field")
            return x
        return QuadFieldElem(self.D, Fraction(x), Fraction(v))

    @property
    def sqrt(self) -> QuadFieldElem:
        return QuadFieldElem(self.D, Fraction(0), Fraction(1))

    def __str__(self):
        return f"Q(sqrt({self.D}))"


@dataclass(frozen=True, slots=True)
class QuadFieldElem:
    """The number ``u + v*sqrt(D)``."""

    D: int
    u: Fraction
    v: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    def _co(self, other) -> QuadFieldElem:
        if isinstance(other, QuadFieldElem):
            if other.D != self.D:
                raise InvalidArgument(f"mixing Q(sqrt {self.D}) and Q(sqrt {other.D})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadFieldElem(self.D, Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.D, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem(self.D, -self.u, -self.v)

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.D, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return QuadFieldElem(
            self.D, self.u * o.u + self.D * self.v * o.v, self.u * o.v + self.v * o.u
        )

    __rmul__ = __mul__

    def conj(self) -> QuadFieldElem:
        return QuadFieldElem(self.D, self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u - self.D * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def inverse(self) -> QuadFieldElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadFieldElem(self.D, self.u / n, -self.v / n)

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QuadFieldElem(self.D, Fraction(other)) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = QuadFieldElem(self.D, Fraction(1)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadFieldElem):
            return self.D == other.D and self.u == other.u and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.D, self.u, self.v))

    def __bool__(self):
        return bool(self.u or self.v)

    @property
    def is_rational(self) -> bool:
        return self.v == 0

    def __repr__(self):
        if self.v == 0:
            return f"{self.u}"
        if self.u == 0:
            return f"{self.v}*sqrt({self.D})"
        sign = "+" if self.v > 0 else "-"
        return f"{self.u}{sign}{abs(self.v)}*sqrt({self.D})"


def qf_arithmetic(x: QuadFieldElem, y, op: str) -> QuadFieldElem:
    ops = {
        "add": lambda: x + y,
        "sub": lambda: x - y,
        "mul": lambda: x * y,
        "div": lambda: x / y,
        "pow": lambda: x ** int(y),
    }
    if op not in ops:
        raise InvalidArgument(f"unknown operation {op!r}")
    return ops[op]()


def conj(x: QuadFieldElem) -> QuadFieldElem:
    return x.conj()


def norm(x: QuadFieldElem) -> Fraction:
    return x.norm()


def qf_is_square(z: QuadFieldElem) -> Optional[QuadFieldElem]:
    """A square root of ``z`` inside Q(sqrt D), or None."""
    D = z.D
    if z.v == 0:
        r = rational_sqrt(z.u)
        if r is not None:
            return QuadFieldElem(D, r)
        r = rational_sqrt(z.u / D)
        if r is not None:
            return QuadFieldElem(D, Fraction(0), r)
        return None
    # (x + y sqrt D)^2 = z  =>  x^2 + D y^2 = u, 2xy = v, x^2 - D y^2 = +-sqrt(N(z))
    w0 = rational_sqrt(z.norm())
    if w0 is None:
        return None
    for s in (w0, -w0):
        x = rational_sqrt((z.u + s) / 2)
        if x is None or x == 0:
            continue
        y = z.v / (2 * x)
        root = QuadFieldElem(D, x, y)
        if root * root == z:
            return root
    return None


def is_square_in_field(x: Rational, D: int) -> bool:
    """Whether a rational number is a square in Q(sqrt D); D = 1 means Q."""
    x = Fraction(x)
    if rational_sqrt(x) is not None:
        return True
    return D != 1 and rational_sqrt(x / D) is not None


def least_sqrt_mod(a: int, p: int) -> Optional[int]:
    a %= p
    for s in range(p):
        if s * s % p == a:
            return s
    return None


def residue_reduction(z, p: int) -> Optional[int]:
    """Image of ``z`` in the residue field F_p of a degree-1 prime above p.

    ``sqrt(D)`` maps to the least square root of D mod p.  Returns None
    when p is inert (no degree-1 prime above it).
    """
    if p < 3 or p % 2 == 0:
        raise InvalidArgument("residue reduction needs an odd prime")
    if isinstance(z, QuadFieldElem):
        u, v, D = z.u, z.v, z.D
    else:
        u, v, D = Fraction(z), Fraction(0), 1
    for c in (u, v):
        if c.denominator % p == 0:
            raise NotReducible(f"denominator of {z} is divisible by {p}")

    def red(c: Fraction) -> int:
        return c.numerator * pow(c.denominator, -1, p) % p

    if v == 0 or D % p == 0:
        return red(u)
    s = least_sqrt_mod(D, p)
    if s is None:
        return None
    return (red(u) + red(v) * s) % p


@dataclass(frozen=True)
class NonsquareWitness:
    p: int
    n: int
    bound: int


def nonsquare_witness(a: Rational, r: Rational, D: int = 1) -> NonsquareWitness:
    """Find a prime p and index n with ``a + n*r`` provably non-square in K.

    Reducing at a degree-1 prime of K above p where the progression stays
    non-constant, some term among the first (p+3)/2 reduces to a
    non-residue; that term cannot be a square in K.
    """
    a, r = Fraction(a), Fraction(r)
    if r == 0:
        raise InvalidArgument("progression must be non-constant")
    if D != 1:
        D = squarefree_part(D)
    den = a.denominator * r.denominator
    p = 2
    while True:
        p = nextprime(p)
        if den % p == 0:
            continue
        if D != 1 and D % p and legendre_symbol(D, p) != 1:
            continue
        rp = r.numerator * pow(r.denominator, -1, p) % p
        if rp == 0:
            continue
        ap = a.numerator * pow(a.denominator, -1, p) % p
        bound = (p + 3) // 2
        for n in range(bound + 1):
            if legendre_symbol((ap + n * rp) % p, p) == -1:
                return NonsquareWitness(p, n, bound)
        raise AssertionError("non-constant progression mod p must hit a non-residue")
