"""Group law on a genus-one curve cut out by two diagonal quadrics in P^3.

With a base point O fixed, the plane meeting the curve at O with
multiplicity at least three meets it once more at O'.  Three points sum
to zero exactly when they lie on a plane through O'.  Every plane section
is computed exactly: restrict a nonsingular member of the pencil to the
plane, parametrize that conic from a known point, pull the other quadric
back to a binary quartic and divide out the known roots.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import DegenerateConfiguration, InvalidArgument, InvalidCurve, InvariantViolation
from .exactnum import QQ
from .finitefield import FieldDescriptor, FieldElement
from .linalg import canonical, det, normalize, nullspace, proj_equal, rank, solve
from .qfield import QuadFieldElem, QuadraticField


@dataclass(frozen=True)
class OsculationData:
    plane: tuple
    point: tuple
    flex: bool


class QuadricCurve:
    """``sum a_i x_i^2 = 0 = sum b_i x_i^2`` in P^3 with base point ``O``."""

    def __init__(self, a, b, O, field=QQ):
        self.field = field
        self.a = tuple(field(c) for c in a)
        self.b = tuple(field(c) for c in b)
        if len(self.a) != 4 or len(self.b) != 4:
            raise InvalidCurve("two quadrics in four variables are required")
        if rank([self.a, self.b]) < 2:
            raise InvalidCurve("the two quadrics are proportional")
        if isinstance(field, FieldDescriptor) and field.p <= 3:
            raise InvalidCurve("characteristic must be 0 or greater than 3")
        self.O = self.point(O)
        if not self.contains(self.O):
            raise InvalidCurve(f"base point {O} is not on the curve")
        if rank(self.gradient(self.O)) < 2:
            raise InvalidCurve(f"base point {O} is singular")

    def __repr__(self):
        return f"QuadricCurve(a={self.a}, b={self.b}, O={canonical(self.O)}, field={self.field})"

    def point(self, P) -> tuple:
        if len(P) != 4:
            raise InvalidArgument("points of P^3 have four coordinates")
        P = tuple(self.field(x) for x in P)
        if all(x == 0 for x in P):
            raise InvalidArgument("the zero vector is not a projective point")
        return P

    # -- evaluation --------------------------------------------------------

    @staticmethod
    def _form(c, P):
        return sum((ci * x * x for ci, x in zip(c, P)), P[0] * 0)

    @staticmethod
    def _bilinear(c, P, Q):
        return sum((ci * x * y for ci, x, y in zip(c, P, Q)), P[0] * 0)

    def contains(self, P) -> bool:
        return self._form(self.a, P) == 0 and self._form(self.b, P) == 0

    def gradient(self, P) -> list[list]:
        return [[2 * c * x for c, x in zip(self.a, P)], [2 * c * x for c, x in zip(self.b, P)]]

    def _require(self, P) -> tuple:
        P = self.point(P)
        if not self.contains(P):
            raise InvalidArgument(f"{canonical(P)} is not on the curve")
        return P

    # -- local geometry ----------------------------------------------------

    def jet(self, P, order: int = 3) -> list:
        """Coefficients ``[P, T, V]`` of an arc ``P + tT + t^2 V`` on the curve to order 2."""
        grad = self.gradient(P)
        if rank(grad) < 2:
            raise InvalidCurve(f"{canonical(P)} is a singular point")
        jets = [P]
        if order == 1:
            return jets
        kernel = nullspace(grad, 4)
        T = next(v for v in kernel if rank([P, v]) == 2)
        jets.append(T)
        if order == 2:
            return jets
        rhs = [-self._form(self.a, T), -self._form(self.b, T)]
        V = solve(grad, rhs)
        if V is None:
            raise InvariantViolation("second-order jet equations are inconsistent")
        jets.append(V)
        return jets

    def _multiset(self, points) -> list[tuple[tuple, int]]:
        merged: list[list] = []
        for P in points:
            for entry in merged:
                if proj_equal(entry[0], P):
                    entry[1] += 1
                    break
            else:
                merged.append([P, 1])
        return [(P, m) for P, m in merged]

    def plane_through(self, points) -> tuple:
        """The plane meeting the curve at the given points with multiplicity."""
        rows = []
        for P, m in self._multiset(points):
            if m > 3:
                raise DegenerateConfiguration("multiplicity above three does not fix a plane")
            rows.extend(self.jet(P, m))
        basis = nullspace(rows, 4)
        if len(basis) != 1:
            raise DegenerateConfiguration("points do not determine a unique plane (collinear?)")
        return _normalize_plane(basis[0])

    # -- plane sections ----------------------------------------------------

    def fourth_intersection(self, plane, known) -> tuple:
        """The remaining point of ``plane`` meeting the curve, given three known ones."""
        plane = tuple(self.field(h) for h in plane)
        known = [self.point(P) for P in known]
        if len(known) != 3:
            raise InvalidArgument("exactly three known intersection points are required")
        for P in known:
            if not self.contains(P) or _dot(plane, P) != 0:
                raise DegenerateConfiguration(f"{canonical(P)} is not on the plane section")
        basis = nullspace([list(plane)], 4)
        # Gram matrices of the two quadrics restricted to the plane
        M1 = [[self._bilinear(self.a, u, v) for v in basis] for u in basis]
        M2 = [[self._bilinear(self.b, u, v) for v in basis] for u in basis]
        q, q_other = _nonsingular_member(M1, M2, self.field)
        coords = [_plane_coords(basis, P) for P in known]
        y0 = coords[0]
        w1, w2 = _complement(y0)
        A, Bc, C = _bil(q, w1, w1), _bil(q, w1, w2), _bil(q, w2, w2)
        b1, b2 = _bil(q, y0, w1), _bil(q, y0, w2)
        # y(s,u) = q(w) y0 - 2 B(y0, w) w with w = s w1 + u w2
        quad = [
            [A * y0[i] - 2 * b1 * w1[i], 2 * Bc * y0[i] - 2 * b1 * w2[i] - 2 * b2 * w1[i], C * y0[i] - 2 * b2 * w2[i]]
            for i in range(3)
        ]
        quartic = [self.field(0)] * 5
        for i in range(3):
            for j in range(3):
                if q_other[i][j] == 0:
                    continue
                prod = _mul_forms(quad[i], quad[j])
                quartic = [c + q_other[i][j] * t for c, t in zip(quartic, prod)]
        if all(c == 0 for c in quartic):
            raise DegenerateConfiguration("plane section is not a finite set of points")
        for P, m in self._multiset(known):
            y = _plane_coords(basis, P)
            if proj_equal(y, y0):
                s, u = b2, -b1
            else:
                _, s, u = solve([[y0[i], w1[i], w2[i]] for i in range(3)], y)
            for _ in range(m):
                quartic = _divide_linear(quartic, u, -s)
        e0, e1 = quartic
        if e0 == 0 and e1 == 0:
            raise DegenerateConfiguration("residual factor vanished")
        s, u = e1, -e0
        y = [quad[i][0] * s * s + quad[i][1] * s * u + quad[i][2] * u * u for i in range(3)]
        X = tuple(sum((y[j] * basis[j][i] for j in range(3)), self.field(0)) for i in range(4))
        if not self.contains(X) or _dot(plane, X) != 0:
            raise InvariantViolation("fourth intersection is off the curve")
        return canonical(X)

    # -- group law ---------------------------------------------------------

    @cached_property
    def osculation(self) -> OsculationData:
        plane = self.plane_through([self.O] * 3)
        Op = self.fourth_intersection(plane, [self.O] * 3)
        return OsculationData(plane, Op, proj_equal(Op, self.O))

    def _third(self, P, Q) -> tuple:
        Op = self.point(self.osculation.point)
        plane = self.plane_through([P, Q, Op])
        return self.point(self.fourth_intersection(plane, [P, Q, Op]))

    def neg(self, P) -> tuple:
        P = self._require(P)
        return canonical(self._third(P, self.O))

    def add(self, P, Q) -> tuple:
        P, Q = self._require(P), self._require(Q)
        R = self._third(P, Q)
        return canonical(self._third(R, self.O))

    def scalar_mul(self, m: int, P) -> tuple:
        P = self._require(P)
        if m < 0:
            return self.scalar_mul(-m, self.neg(P))
        result = self.O
        base = P
        while m:
            if m & 1:
                result = self.point(self.add(result, base))
            m >>= 1
            if m:
                base = self.point(self.add(base, base))
        return canonical(result)

    def point_order(self, P, bound: int = 12) -> Optional[int]:
        if bound < 1:
            raise InvalidArgument("bound must be >= 1")
        P = self._require(P)
        R = P
        for m in range(1, bound + 1):
            if proj_equal(R, self.O):
                return m
            R = self.point(self.add(R, P))
        return None

    def is_identity(self, P) -> bool:
        return proj_equal(P, self.O)

    def points(self) -> list[tuple]:
        """Every point over a finite prime field, by exhaustive search."""
        F = self.field
        if not isinstance(F, FieldDescriptor) or F.m != 1:
            raise InvalidArgument("point enumeration needs a prime field")
        p = F.p
        a = [x.c0 for x in self.a]
        b = [x.c0 for x in self.b]
        found = []
        for lead in range(4):
            for rest in itertools.product(range(p), repeat=3 - lead):
                P = (0,) * lead + (1,) + rest
                if sum(c * x * x for c, x in zip(a, P)) % p == 0 and sum(c * x * x for c, x in zip(b, P)) % p == 0:
                    found.append(tuple(F(x) for x in P))
        return found


def _dot(h, P):
    return sum((x * y for x, y in zip(h, P)), P[0] * 0)


def _normalize_plane(h) -> tuple:
    """Canonical plane coefficients with the last nonzero entry positive (or one)."""
    rev = canonical(tuple(reversed(h)))
    return tuple(reversed(rev))


def _bil(M, x, y):
    return sum((M[i][j] * x[i] * y[j] for i in range(3) for j in range(3)), x[0] * 0)


def _plane_coords(basis, P) -> list:
    y = solve([[basis[j][i] for j in range(3)] for i in range(4)], list(P))
    if y is None:
        raise DegenerateConfiguration("point does not lie on the plane")
    return y


def _complement(y0) -> tuple[list, list]:
    one, zero = y0[0] ** 0, y0[0] * 0
    units = [[one if i == j else zero for i in range(3)] for j in range(3)]
    for w1, w2 in itertools.combinations(units, 2):
        if det([list(y0), w1, w2]) != 0:
            return w1, w2
    raise DegenerateConfiguration("zero plane coordinates")


def _nonsingular_member(M1, M2, field):
    """A pencil member with nonsingular restriction, and an independent partner."""
    lambdas = [0, 1, -1, 2, -2, 3, -3, 4]
    if isinstance(field, FieldDescriptor):
        lambdas = list(range(min(field.p, 8)))
    for lam in lambdas:
        M = [[M1[i][j] + lam * M2[i][j] for j in range(3)] for i in range(3)]
        if det(M) != 0:
            return M, M2
    if det(M2) != 0:
        return M2, M1
    raise DegenerateConfiguration("every quadric of the pencil restricts to a singular conic")


def _mul_forms(f, g):
    """Product of two binary forms given as coefficient lists (s^d first)."""
    out = [f[0] * 0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def _divide_linear(f, alpha, beta):
    """Exact quotient of a binary form by ``alpha*s + beta*u``."""
    if alpha == 0:
        if beta == 0:
            raise DegenerateConfiguration("zero linear factor")
        if f[0] != 0:
            raise DegenerateConfiguration("known point is not a root of the section")
        return [c / beta for c in f[1:]]
    quot = []
    rem = f[0] * 0
    for c in f:
        rem = rem + c
        t = rem / alpha
        quot.append(t)
        rem = -t * beta
    if quot[-1] != 0:
        raise DegenerateConfiguration("known point is not a root of the section")
    return quot[:-1]


# -- named curves ---------------------------------------------------------------

C3_FORMS = ((1, -2, 1, 0), (0, 1, -2, 1))
F1_FORMS = ((2, -3, 1, 0), (0, 1, -3, 2))
F2_FORMS = ((1, -3, 2, 0), (0, 2, -3, 1))
VARIANT_FORMS = {"C3": C3_FORMS, "F1": F1_FORMS, "F2": F2_FORMS}


def named_curve(name: str, field=QQ) -> QuadricCurve:
    try:
        a, b = VARIANT_FORMS[name]
    except KeyError:
        raise InvalidArgument(f"unknown curve {name!r}; choose from {sorted(VARIANT_FORMS)}") from None
    return QuadricCurve(a, b, (1, 1, 1, 1), field)


def osculation_data(C: QuadricCurve) -> OsculationData:
    return C.osculation


def fourth_intersection(C: QuadricCurve, plane, known) -> tuple:
    return C.fourth_intersection(plane, known)


def neg(C: QuadricCurve, P) -> tuple:
    return C.neg(P)


def add(C: QuadricCurve, P, Q) -> tuple:
    return C.add(P, Q)


def scalar_mul(C: QuadricCurve, m: int, P) -> tuple:
    return C.scalar_mul(m, P)


def point_order(C: QuadricCurve, P, bound: int = 12) -> Optional[int]:
    return C.point_order(P, bound)


@dataclass(frozen=True)
class GaloisReport:
    case: str
    conjugate: tuple
    signs: Optional[tuple]
    phi: Optional[tuple]
    phi_rational: Optional[bool]


def galois_case(P) -> GaloisReport:
    """Classify a point of C_3 over Q(sqrt D) by how conjugation acts on it.

    ``Case1``: the conjugate is a signed reversal; ``Case2``: a signed copy
    (and then the progression class is rational); ``Rational``: P is fixed.
    """
    P = tuple(P)
    if not all(isinstance(x, (QuadFieldElem, int)) for x in P):
        raise InvalidArgument("galois_case expects coordinates in a quadratic field")
    D = next((x.D for x in P if isinstance(x, QuadFieldElem)), None)
    if D is None:
        raise InvalidArgument("galois_case expects at least one coordinate in Q(sqrt D)")
    K = QuadraticField(D)
    P = normalize(tuple(K(x) for x in P))
    C = named_curve("C3", K)
    if not C.contains(P):
        raise InvalidArgument("point is not on C_3")
    sigma = tuple(x.conj() for x in P)
    if all(x.is_rational for x in P):
        return GaloisReport("Rational", canonical(sigma), None, None, None)
    for signs in itertools.product((1, -1), repeat=3):
        s = signs + (1,)
        if proj_equal(sigma, tuple(si * x for si, x in zip(s, reversed(P)))):
            return GaloisReport("Case1", canonical(sigma), s, None, None)
    for signs in itertools.product((1, -1), repeat=3):
        s = (1,) + signs
        if proj_equal(sigma, tuple(si * x for si, x in zip(s, P))):
            a = P[0] * P[0]
            image = canonical((a, P[1] * P[1] - a))
            rational = all(isinstance(t, int) for t in image)
            if not rational:
                raise InvariantViolation(f"Case 2 point {P} has irrational progression class")
            return GaloisReport("Case2", canonical(sigma), s, image, rational)
    raise InvariantViolation(f"conjugate of {P} matches neither Galois pattern")


__all__ = [
    "FieldElement",
    "GaloisReport",
    "OsculationData",
    "QuadricCurve",
    "add",
    "fourth_intersection",
    "galois_case",
    "named_curve",
    "neg",
    "osculation_data",
    "point_order",
    "scalar_mul",
]
