"""Exact arithmetic in F_p and F_{p^2}, and k-th power residue tables.

Elements of F_{p^2} = F_p[t]/(t^2 - s) are pairs ``(c0, c1)`` meaning
``c0 + c1*t``; ``s`` is the least quadratic non-residue mod p, so the
modulus is fixed and every table is reproducible.  Elements are encoded
as ``c0 + c1*p`` whenever dense arrays are needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np
from sympy import isprime

from .errors import InvalidArgument, ResourceLimit

MAX_TABLE_SIZE = 2 ** 26


def least_nonresidue(p: int) -> int:
    for s in range(2, p):
        if pow(s, (p - 1) // 2, p) == p - 1:
            return s
    raise InvalidArgument(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    m: int = 1
    nonresidue: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.m not in (1, 2):
            raise InvalidArgument(f"only degrees 1 and 2 are supported, got {self.m}")
        if not isprime(self.p):
            raise InvalidArgument(f"{self.p} is not prime")
        if self.p == 2:
            raise InvalidArgument("characteristic 2 is not supported")
        if self.m == 2:
            object.__setattr__(self, "nonresidue", least_nonresidue(self.p))

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def modulus(self) -> str:
        return "" if self.m == 1 else f"t^2 - {self.nonresidue}"

    def __str__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^2)[t^2={self.nonresidue}]"

    def __call__(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field != self:
                raise InvalidArgument("element belongs to a different field")
            return x
        if isinstance(x, tuple):
            c0, c1 = x
            if self.m == 1 and c1 % self.p:
                raise InvalidArgument("degree-1 field has no t-coordinate")
            return FieldElement(self, c0 % self.p, c1 % self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} is not p-integral for p={self.p}")
            return FieldElement(self, x.numerator * pow(x.denominator, -1, self.p) % self.p, 0)
        return FieldElement(self, int(x) % self.p, 0)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1, 0)

    @property
    def gen(self) -> FieldElement:
        if self.m == 1:
            raise InvalidArgument("prime field has no adjoined generator")
        return FieldElement(self, 0, 1)

    def decode(self, code: int) -> FieldElement:
        return FieldElement(self, code % self.p, code // self.p)

    def elements(self):
        return (self.decode(c) for c in range(self.q))

    # -- vectorized helpers over encoded arrays ---------------------------

    def vec_mul(self, x, y):
        p = self.p
        x0, x1 = x % p, x // p
        y0, y1 = y % p, y // p
        if self.m == 1:
            return (x0 * y0) % p
        c0 = (x0 * y0 + (x1 * y1 % p) * self.nonresidue) % p
        c1 = (x0 * y1 + x1 * y0) % p
        return c0 + c1 * p

    def vec_pow(self, x, k: int):
        x = np.asarray(x, dtype=np.int64)
        result = np.ones_like(x)
        base = x.copy()
        while k:
            if k & 1:
                result = self.vec_mul(result, base)
            k >>= 1
            if k:
                base = self.vec_mul(base, base)
        return result

    def power_table(self, k: int) -> np.ndarray:
        """``table[code] = code**k`` for every element."""
        if self.q > MAX_TABLE_SIZE:
            raise ResourceLimit(f"field of size {self.q} exceeds table guard {MAX_TABLE_SIZE}")
        return self.vec_pow(np.arange(self.q, dtype=np.int64), k)


def field_make(p: int, m: int = 1) -> FieldDescriptor:
    return FieldDescriptor(p, m)


@dataclass(frozen=True, slots=True)
class FieldElement:
    field: FieldDescriptor
    c0: int
    c1: int = 0

    @property
    def code(self) -> int:
        return self.c0 + self.c1 * self.field.p

    def _co(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InvalidArgument("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FieldElement(self.field, (self.c0 + o.c0) % p, (self.c1 + o.c1) % p)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, -self.c0 % p, -self.c1 % p)

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        p, s = self.field.p, self.field.nonresidue
        c0 = (self.c0 * o.c0 + self.c1 * o.c1 * s) % p
        c1 = (self.c0 * o.c1 + self.c1 * o.c0) % p
        return FieldElement(self.field, c0, c1)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        p, s = self.field.p, self.field.nonresidue
        norm = (self.c0 * self.c0 - s * self.c1 * self.c1) % p
        if norm == 0:
            raise ZeroDivisionError("division by zero in finite field")
        inv = pow(norm, -1, p)
        return FieldElement(self.field, self.c0 * inv % p, -self.c1 * inv % p)

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.c0 == other.c0 and self.c1 == other.c1
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.field(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.c0, self.c1))

    def __bool__(self):
        return bool(self.c0 or self.c1)

    def __repr__(self):
        if self.field.m == 1:
            return f"{self.c0}"
        if self.c1 == 0:
            return f"{self.c0}"
        return f"{self.c0}+{self.c1}t"

    def frobenius(self) -> FieldElement:
        return self ** self.field.p


def field_arithmetic(x: FieldElement, y, op: str) -> FieldElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "pow":
        return x ** int(y)
    raise InvalidArgument(f"unknown field operation {op!r}")


@dataclass(frozen=True)
class ResidueTable:
    """Dense table ``counts[code] = #{x in F_q : x**k == element(code)}``."""

    field: FieldDescriptor
    k: int
    counts: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def g(self) -> int:
        return gcd(self.k, self.q - 1)

    def __getitem__(self, t) -> int:
        code = t.code if isinstance(t, FieldElement) else self.field(t).code
        return int(self.counts[code])


def residue_table(F: FieldDescriptor, k: int) -> ResidueTable:
    if k < 2:
        raise InvalidArgument("k must be >= 2")
    counts = np.bincount(F.power_table(k), minlength=F.q).astype(np.int64)
    counts.setflags(write=False)
    return ResidueTable(F, k, counts)


def kth_roots(t: FieldElement, k: int) -> list[FieldElement]:
    """All ``x`` with ``x**k == t``, ordered by encoding."""
    F = t.field
    table = F.power_table(k)
    return [F.decode(int(c)) for c in np.nonzero(table == t.code)[0]]


def sqrt_all(t: FieldElement) -> list[FieldElement]:
    return kth_roots(t, 2)
