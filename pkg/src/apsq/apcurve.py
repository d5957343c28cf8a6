"""The curves C_{n,k} in P^n whose points are progressions of k-th powers.

C_{n,k} is cut out by ``x_i^k - 2 x_{i+1}^k + x_{i+2}^k = 0`` for
``i = 0..n-2``; a point ``[x_0 : ... : x_n]`` corresponds to the
progression ``a + i*r = x_i^k``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgument, InvariantViolation, UnsupportedCharacteristic
from .exactnum import QQ, RationalField
from .finitefield import FieldDescriptor, FieldElement, kth_roots
from .linalg import canonical, det, rank
from .qfield import QuadraticField


@dataclass(frozen=True)
class CurveFamily:
    n: int
    k: int = 2

    def __post_init__(self):
        if self.n < 2 or self.k < 2:
            raise InvalidArgument(f"need n >= 2 and k >= 2, got n={self.n}, k={self.k}")

    def equations(self, P):
        k = self.k
        pw = [x ** k for x in P]
        return [pw[i] - 2 * pw[i + 1] + pw[i + 2] for i in range(self.n - 1)]


@dataclass(frozen=True)
class APClass:
    """A progression ``a + i*r`` up to common scaling, stored canonically."""

    a: object
    r: object

    @classmethod
    def of(cls, a, r) -> APClass:
        if a == 0 and r == 0:
            raise InvalidArgument("(a, r) = (0, 0) is not a progression class")
        a, r = canonical((a, r))
        return cls(a, r)

    @property
    def is_constant(self) -> bool:
        return self.r == 0

    @property
    def is_rational(self) -> bool:
        return isinstance(self.a, int)

    def __iter__(self):
        return iter((self.a, self.r))


def _check_dim(C: CurveFamily, P):
    if len(P) != C.n + 1:
        raise InvalidArgument(f"C_{{{C.n},{C.k}}} lives in P^{C.n}; got {len(P)} coordinates")
    if all(x == 0 for x in P):
        raise InvalidArgument("the zero vector is not a projective point")


def is_on_curve(C: CurveFamily, P) -> bool:
    _check_dim(C, P)
    return all(e == 0 for e in C.equations(P))


def roots_of_unity(k: int, F) -> list:
    """The k-th roots of unity in F (Q, a quadratic field, or a finite field)."""
    if isinstance(F, FieldDescriptor):
        return kth_roots(F.one, k)
    if isinstance(F, RationalField) or F is None:
        return [Fraction(1), Fraction(-1)] if k % 2 == 0 else [Fraction(1)]
    if isinstance(F, QuadraticField):
        cands = [F(1), F(-1)]
        if F.D == -1:
            cands += [F(0, 1), F(0, -1)]
        elif F.D == -3:
            h = Fraction(1, 2)
            cands += [F(s * h, t * h) for s in (1, -1) for t in (1, -1)]
        return [z for z in cands if z ** k == 1]
    raise InvalidArgument(f"unsupported field {F!r}")


def trivial_points(C: CurveFamily, F=QQ) -> list[tuple]:
    """Points all of whose coordinates are k-th roots of unity (up to scaling)."""
    mu = roots_of_unity(C.k, F)
    one = mu[0] ** 0
    pts = [(one,) + tuple(rest) for rest in itertools.product(mu, repeat=C.n)]
    return [canonical(P) for P in pts]


def genus(n: int) -> int:
    """Genus of C_{n,2}: ``(n-3) 2^(n-2) + 1``."""
    if n < 2:
        raise InvalidArgument("genus needs n >= 2")
    return (n - 3) * 2 ** (n - 2) + 1


def phi(C: CurveFamily, P) -> APClass:
    """The progression class ``[x_0^k : x_1^k - x_0^k]`` of a curve point."""
    if not is_on_curve(C, P):
        raise InvalidArgument(f"{P} is not on C_{{{C.n},{C.k}}}")
    a = P[0] ** C.k
    return APClass.of(a, P[1] ** C.k - a)


def ramification_index_of(C: CurveFamily, P):
    """Index i with ``x_i = 0`` (a ramification point of phi), else None."""
    zeros = [i for i, x in enumerate(P) if x == 0]
    if len(zeros) > 1:
        raise InvariantViolation(f"{P} has more than one vanishing coordinate")
    return zeros[0] if zeros else None


def jacobian(C: CurveFamily, P) -> list[list]:
    k = C.k
    zero = P[0] * 0
    rows = []
    for i in range(C.n - 1):
        row = [zero] * (C.n + 1)
        row[i] = k * P[i] ** (k - 1)
        row[i + 1] = -2 * k * P[i + 1] ** (k - 1)
        row[i + 2] = k * P[i + 2] ** (k - 1)
        rows.append(row)
    return rows


def _check_characteristic(C: CurveFamily, P):
    if not isinstance(P[0], FieldElement):
        return
    p = P[0].field.p
    if p <= C.n or C.k % p == 0:
        raise UnsupportedCharacteristic(f"need p > n and p not dividing k; p={p}, n={C.n}, k={C.k}")


@dataclass(frozen=True)
class RankCheck:
    rank: int
    smooth: bool


def jacobian_rank_check(C: CurveFamily, P) -> RankCheck:
    _check_dim(C, P)
    _check_characteristic(C, P)
    if not is_on_curve(C, P):
        raise InvalidArgument(f"{P} is not on the curve")
    r = rank(jacobian(C, P))
    return RankCheck(r, r == C.n - 1)


@dataclass(frozen=True)
class MinorCheck:
    direct: object
    closed_form: object
    sign: int


def jacobian_minor_closed_form(C: CurveFamily, P, j1: int, j2: int) -> MinorCheck:
    """Compare the minor deleting columns j1 < j2 with ``2^(n-1) prod x_i (j2-j1)``.

    ``sign`` records the orientation with ``direct == sign * closed_form``.
    """
    if C.k != 2:
        raise InvalidArgument("the closed form is only available for k = 2")
    _check_dim(C, P)
    if not 0 <= j1 < j2 <= C.n:
        raise InvalidArgument(f"need 0 <= j1 < j2 <= n, got ({j1}, {j2})")
    J = jacobian(C, P)
    keep = [j for j in range(C.n + 1) if j not in (j1, j2)]
    direct = det([[row[j] for j in keep] for row in J])
    closed = P[0] ** 0 * 2 ** (C.n - 1) * (j2 - j1)
    for j in keep:
        closed = closed * P[j]
    if direct == closed:
        sign = 1
    elif direct == -closed:
        sign = -1
    else:
        raise InvariantViolation(f"minor {direct} differs from closed form +-{closed}")
    return MinorCheck(direct, closed, sign)


def progression_of(P, k: int = 2):
    """The terms ``x_i^k`` of a point as a list."""
    return [x ** k for x in P]
