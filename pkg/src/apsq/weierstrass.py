"""Elliptic curves y^2 = (x - e1)(x - e2)(x - e3) with integer roots.

Group law, j-invariant, reduction counts, torsion, naive point search and
a complete 2-descent (full rational 2-torsion) giving a rank upper bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional

from sympy import divisors, primerange

from .errors import InvalidArgument, InvalidCurve, InvariantViolation
from .exactnum import INF, is_square, legendre_symbol, prime_factors, squarefree_class, valuation

WPoint = Optional[tuple[Fraction, Fraction]]
INFINITY: WPoint = None


@dataclass(frozen=True)
class WeierstrassCurve:
    e1: int
    e2: int
    e3: int

    def __post_init__(self):
        if len({self.e1, self.e2, self.e3}) < 3:
            raise InvalidCurve(f"roots {self.roots} are not distinct")

    @property
    def roots(self) -> tuple[int, int, int]:
        return (self.e1, self.e2, self.e3)

    @property
    def a2(self) -> int:
        return -(self.e1 + self.e2 + self.e3)

    @property
    def a4(self) -> int:
        return self.e1 * self.e2 + self.e1 * self.e3 + self.e2 * self.e3

    @property
    def a6(self) -> int:
        return -self.e1 * self.e2 * self.e3

    @property
    def root_discriminant(self) -> int:
        """``prod (e_i - e_j)^2``, the discriminant of the cubic."""
        e1, e2, e3 = self.roots
        return ((e1 - e2) * (e1 - e3) * (e2 - e3)) ** 2

    @property
    def discriminant(self) -> int:
        return 16 * self.root_discriminant

    def f(self, x):
        return (x - self.e1) * (x - self.e2) * (x - self.e3)

    def contains(self, P: WPoint) -> bool:
        if P is None:
            return True
        x, y = P
        return y * y == self.f(x)

    def __str__(self):
        def term(e):
            if e == 0:
                return "x"
            return f"(x{'-' if e > 0 else '+'}{abs(e)})"

        return "y^2=" + "".join(term(e) for e in self.roots)


def _pt(P) -> WPoint:
    if P is None:
        return None
    return (Fraction(P[0]), Fraction(P[1]))


def _require(E: WeierstrassCurve, P) -> WPoint:
    P = _pt(P)
    if not E.contains(P):
        raise InvalidArgument(f"{P} is not on {E}")
    return P


def w_neg(E: WeierstrassCurve, P) -> WPoint:
    P = _require(E, P)
    if P is None:
        return None
    return (P[0], -P[1])


def w_add(E: WeierstrassCurve, P, Q) -> WPoint:
    P, Q = _require(E, P), _require(E, Q)
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * E.a2 * x1 + E.a4) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - E.a2 - x1 - x2
    y3 = -(lam * (x3 - x1) + y1)
    return (x3, y3)


def w_mul(E: WeierstrassCurve, m: int, P) -> WPoint:
    P = _require(E, P)
    if m < 0:
        return w_mul(E, -m, w_neg(E, P))
    result = None
    while m:
        if m & 1:
            result = w_add(E, result, P)
        m >>= 1
        if m:
            P = w_add(E, P, P)
    return result


def w_order(E: WeierstrassCurve, P, bound: int = 12) -> Optional[int]:
    R = _require(E, P)
    for m in range(1, bound + 1):
        if R is None:
            return m
        R = w_add(E, R, P)
    return None


def j_invariant(E: WeierstrassCurve) -> Fraction:
    c4 = 16 * (E.a2 ** 2 - 3 * E.a4)
    return Fraction(c4 ** 3, E.discriminant)


def count_mod_p(E: WeierstrassCurve, p: int) -> int:
    """#E(F_p) including the point at infinity."""
    if p < 3 or p % 2 == 0:
        raise InvalidArgument("count_mod_p needs an odd prime")
    if E.discriminant % p == 0:
        raise InvalidArgument(f"{E} has bad reduction at {p}")
    return p + 1 + sum(legendre_symbol(E.f(x), p) for x in range(p))


def good_primes(E: WeierstrassCurve, lo: int = 3, hi: int = 50) -> list[int]:
    return [p for p in primerange(lo, hi + 1) if p > 2 and E.discriminant % p]


def _integer_roots_monic_cubic(c2: int, c1: int, c0: int) -> list[int]:
    """Integer roots of ``x^3 + c2 x^2 + c1 x + c0``."""
    if c0 == 0:
        roots = {0}
        disc = c2 * c2 - 4 * c1
        if is_square(disc):
            s = math.isqrt(disc)
            for r in ((-c2 + s), (-c2 - s)):
                if r % 2 == 0:
                    roots.add(r // 2)
        return sorted(roots)
    return sorted(
        {r for d in divisors(abs(c0)) for r in (d, -d) if r ** 3 + c2 * r * r + c1 * r + c0 == 0}
    )


@dataclass(frozen=True)
class TorsionReport:
    order: int
    structure: tuple[int, int]
    points: list
    reduction_bound: int


def torsion_subgroup(E: WeierstrassCurve) -> TorsionReport:
    """Rational torsion via integral candidates with ``y = 0`` or ``y^2 | disc``."""
    disc = E.root_discriminant
    candidates = [(Fraction(e), Fraction(0)) for e in E.roots]
    for y in range(1, math.isqrt(disc) + 1):
        if disc % (y * y):
            continue
        for x in _integer_roots_monic_cubic(E.a2, E.a4, E.a6 - y * y):
            candidates += [(Fraction(x), Fraction(y)), (Fraction(x), Fraction(-y))]
    points = [None] + [P for P in candidates if w_order(E, P, 12) is not None]
    points = sorted(set(points) - {None}, key=lambda P: (P[0], P[1]))
    points = [None] + points
    order = len(points)
    bound = reduce(math.gcd, (count_mod_p(E, p) for p in good_primes(E)), 0)
    if bound % order:
        raise InvariantViolation(f"torsion order {order} does not divide reduction gcd {bound}")
    two_torsion = 1 + sum(1 for P in points[1:] if P[1] == 0)
    structure = (2, order // 2) if two_torsion == 4 else (1, order)
    return TorsionReport(order, structure, points, bound)


def naive_point_search(E: WeierstrassCurve, H: int) -> list:
    """Affine rational points with ``x = u/v^2``, ``|u|, v <= H``."""
    if H < 1:
        raise InvalidArgument("height bound must be >= 1")
    found = set()
    for v in range(1, H + 1):
        v2 = v * v
        for u in range(-H, H + 1):
            if math.gcd(u, v) != 1:
                continue
            s2 = (u - E.e1 * v2) * (u - E.e2 * v2) * (u - E.e3 * v2)
            if s2 < 0 or not is_square(s2):
                continue
            s = math.isqrt(s2)
            x = Fraction(u, v2)
            for y in {Fraction(s, v2 * v), Fraction(-s, v2 * v)}:
                found.add((x, y))
    return sorted(found)


# -- 2-descent -----------------------------------------------------------------


def descent_image(E: WeierstrassCurve, P) -> tuple[int, int]:
    """Square classes of ``(x - e1, x - e2)``, with the 2-torsion convention."""
    P = _require(E, P)
    if P is None:
        return (1, 1)
    x = P[0]
    e1, e2, e3 = E.roots
    first = (e1 - e2) * (e1 - e3) if x == e1 else x - e1
    second = (e2 - e1) * (e2 - e3) if x == e2 else x - e2
    return (squarefree_class(first), squarefree_class(second))


def _squarefree_divisors(n: int) -> list[int]:
    primes = prime_factors(n)
    out = []
    for r in range(len(primes) + 1):
        for combo in itertools.combinations(primes, r):
            d = math.prod(combo)
            out += [d, -d]
    return sorted(out)


def _padic_class(n: int, p: int) -> tuple[int, int]:
    """Square class of a nonzero integer in Q_p: valuation parity and unit class."""
    v = valuation(n, p)
    u = n // p ** v
    if p == 2:
        return (v % 2, u % 8)
    return (v % 2, legendre_symbol(u, p))


def _local_solvable_p(targets, roots, p: int) -> bool:
    """Is there x in Q_p with ``x - roots[i]`` in ``targets[i] * Q_p^2`` (or zero)?

    The point at infinity needs targets[0], targets[1] to be local squares;
    finite x with v(x) <= -3 force the same condition.  Otherwise scale
    by p^2 and search X in Z_p ball by ball.
    """
    want = [_padic_class(t, p) for t in targets]
    square = (0, 1)
    if want[0] == square and want[1] == square:
        return True
    R = [p * p * e for e in roots]
    # unit digits needed to read off a square class
    unit_prec = 3 if p == 2 else 1
    stack = [(0, 0)]
    while stack:
        c, k = stack.pop()
        free, undecided, failed = 0, False, False
        for e, target in zip(R, want):
            diff = c - e
            if diff % p ** k == 0:
                free += 1
                continue
            v = valuation(diff, p)
            if k - v < unit_prec:
                undecided = True
                continue
            if _padic_class(diff, p) != target:
                failed = True
                break
        if failed:
            continue
        if not undecided and free <= 1:
            return True
        stack.extend((c + j * p ** k, k + 1) for j in range(p))
    return False


def _local_solvable_real(targets, roots) -> bool:
    if targets[0] > 0 and targets[1] > 0:
        return True
    xs = sorted(Fraction(e) for e in roots)
    tests = [xs[0] - 1, xs[-1] + 1] + [(a + b) / 2 for a, b in zip(xs, xs[1:])] + xs
    return any(
        all(x == e or (x - e > 0) == (t > 0) for e, t in zip(roots, targets)) for x in tests
    )


def locally_solvable(E: WeierstrassCurve, d1: int, d2: int, place) -> bool:
    """Local solvability of ``x - e1 = d1 u^2, x - e2 = d2 v^2, x - e3 = d1 d2 w^2``."""
    targets = (d1, d2, d1 * d2)
    if place == INF:
        return _local_solvable_real(targets, E.roots)
    return _local_solvable_p(targets, E.roots, int(place))


@dataclass(frozen=True)
class DescentReport:
    selmer_pairs: frozenset
    rank_upper_bound: int
    image_of_known_points: frozenset
    rank_lower_bound: int
    places: list = field(default_factory=list)

    @property
    def certified_rank(self) -> Optional[int]:
        if self.rank_lower_bound == self.rank_upper_bound:
            return self.rank_upper_bound
        return None


def generated_subgroup(classes) -> set:
    """Subgroup of square-class pairs generated by ``classes``."""
    group = {(1, 1)}
    for d1, d2 in classes:
        group |= {(squarefree_class(a * d1), squarefree_class(b * d2)) for a, b in group}
    return group


def two_descent_rank_bound(E: WeierstrassCurve, known_points=()) -> DescentReport:
    """2-Selmer group of E via everywhere-local solvability, with rank bounds.

    The lower bound comes from the images of the torsion points and
    ``known_points``; since E(Q)/2E(Q) has order 2^(rank+2), the rank is
    at least log2 of the generated subgroup minus 2.
    """
    e1, e2, e3 = E.roots
    d1_cands = _squarefree_divisors((e1 - e2) * (e1 - e3))
    d2_cands = _squarefree_divisors((e2 - e1) * (e2 - e3))
    bad = {2} | set(prime_factors((e1 - e2) * (e1 - e3) * (e2 - e3)))
    places = [INF] + sorted(bad)
    selmer = frozenset(
        (d1, d2)
        for d1 in d1_cands
        for d2 in d2_cands
        if all(locally_solvable(E, d1, d2, v) for v in places)
    )
    size = len(selmer)
    if size & (size - 1) or size < 4:
        raise InvariantViolation(f"Selmer set of size {size} is not a group containing E[2]")
    points = torsion_subgroup(E).points + list(known_points)
    image = frozenset(descent_image(E, P) for P in points)
    if not image <= selmer:
        raise InvariantViolation(f"known points map outside the Selmer set: {sorted(image - selmer)}")
    lower = len(generated_subgroup(image)).bit_length() - 1 - 2
    upper = size.bit_length() - 1 - 2
    return DescentReport(selmer, upper, image, lower, places)


# -- named curves ---------------------------------------------------------------

JACOBIAN_C3 = WeierstrassCurve(0, 1, -3)
JACOBIAN_F1 = WeierstrassCurve(0, 1, -8)
JACOBIAN_F2 = WeierstrassCurve(0, 4, -5)
FIVE_SQUARE_CURVE = WeierstrassCurve(0, -2, -6)
NAMED_CURVES = {
    "C3": JACOBIAN_C3,
    "F1": JACOBIAN_F1,
    "F2": JACOBIAN_F2,
    "E4": FIVE_SQUARE_CURVE,
}
