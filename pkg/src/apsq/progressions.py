"""Searches for arithmetic progressions of squares over Q and Q(sqrt D).

A rational number is a square in Q(sqrt D) exactly when it is a square or
D times a square, so every search here runs over the set
``S_D = {s^2} | {D s^2}`` instead of over raw (a, r) pairs: a progression
with run length at least 2 is fixed by its first two terms, both in S_D.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import factorint

from .errors import InvalidArgument, InvariantViolation
from .exactnum import ConicForm, conic_has_rational_point, is_square, squarefree_part
from .linalg import canonical
from .qfield import QuadraticField, is_square_in_field, nonsquare_witness, qf_is_square
from .weierstrass import NAMED_CURVES, torsion_subgroup, two_descent_rank_bound

Q_SQUARE = "Q-square"
D_SQUARE = "D-square"
K_SQUARE = "K-square"
NON_SQUARE = "non-square"


@dataclass(frozen=True, order=True)
class APSpec:
    """A progression ``a + i*r`` with coprime integers and ``r > 0``."""

    a: int
    r: int

    @classmethod
    def normalized(cls, a, r) -> APSpec:
        """Scale by a rational square so that (a, r) is coprime with r > 0.

        Only square factors are removed, so squareness of every term is
        preserved.  A negative r is handled by the caller (it reverses
        the progression, which changes which terms come first).
        """
        a, r = Fraction(a), Fraction(r)
        if r == 0:
            raise InvalidArgument("constant progressions have r = 0")
        den = math.lcm(a.denominator, r.denominator)
        a, r = int(a * den * den), int(r * den * den)
        g = math.gcd(a, r)
        s = 1
        for p, e in _factor(g).items():
            s *= p ** (e // 2)
        a, r = a // (s * s), r // (s * s)
        if math.gcd(a, r) != 1:
            raise InvalidArgument(f"({a}, {r}) has a non-square common factor")
        if r < 0:
            raise InvalidArgument("r must be positive after normalization")
        return cls(a, r)

    def term(self, i: int) -> int:
        return self.a + i * self.r

    def terms(self, length: int) -> list[int]:
        return [self.term(i) for i in range(length)]


def _factor(n: int) -> dict:
    return factorint(abs(n)) if n else {}


def _check_D(D: int) -> int:
    if D == 0:
        raise InvalidArgument("D must be nonzero")
    if D != 1 and squarefree_part(D) != D:
        raise InvalidArgument(f"D = {D} is not squarefree")
    return D


def square_run_length(a: int, r: int, D: int = 1) -> int:
    """Largest L with ``a + i*r`` a square in Q(sqrt D) for all ``0 <= i < L``."""
    if r == 0:
        raise InvalidArgument("r = 0: constant progressions are excluded")
    _check_D(D)
    # the witness index bounds the loop, so this always terminates
    limit = nonsquare_witness(a, r, D).n
    for i in range(limit + 1):
        if not is_square_in_field(a + i * r, D):
            return i
    raise InvariantViolation(f"term {limit} of ({a}, {r}) should be a non-square in Q(sqrt {D})")


def square_set(D: int, lo: int, hi: int) -> list[int]:
    """Integers in [lo, hi] that are squares in Q(sqrt D), sorted."""
    out = {s * s for s in range(math.isqrt(max(hi, 0)) + 1) if s * s >= lo}
    if D != 1:
        if D > 0:
            top = math.isqrt(max(hi, 0) // D)
            out |= {D * s * s for s in range(top + 1) if D * s * s >= lo}
        else:
            top = math.isqrt(max(-lo, 0) // -D)
            out |= {D * s * s for s in range(top + 1) if D * s * s <= hi}
    return sorted(out)


def _candidate_specs(D: int, A: int, R: int):
    """Coprime (a, r), ``|a| <= A``, ``0 < r <= R``, with a and a+r in S_D."""
    S = square_set(D, -A, A + R)
    for i, a in enumerate(S):
        if a > A:
            break
        if a < -A:
            continue
        for b in S[i + 1:]:
            r = b - a
            if r > R:
                break
            if math.gcd(a, r) == 1:
                yield APSpec(a, r)


@dataclass(frozen=True)
class SearchResult:
    best: int
    witnesses: list
    scanned: int


def max_square_run_search(A: int, R: int, D: int = 1) -> SearchResult:
    """Longest square run over coprime (a, r) with ``|a| <= A``, ``0 < r <= R``."""
    if A < 1 or R < 1:
        raise InvalidArgument("bounds must be >= 1")
    _check_D(D)
    best, witnesses, scanned = 0, [], 0
    for spec in _candidate_specs(D, A, R):
        scanned += 1
        L = square_run_length(spec.a, spec.r, D)
        if L > best:
            best, witnesses = L, [spec]
        elif L == best:
            witnesses.append(spec)
    if best < 2:
        # (0, 1) always starts with two squares, so this is unreachable
        raise InvariantViolation("search found no two-term run")
    return SearchResult(best, sorted(witnesses), scanned)


def six_square_witness_search(D: int, A: int, R: int) -> Optional[APSpec]:
    """A coprime progression with six leading squares in Q(sqrt D), if any."""
    if A < 1 or R < 1:
        raise InvalidArgument("bounds must be >= 1")
    _check_D(D)
    S = set(square_set(D, -A, A + 5 * R))
    for spec in _candidate_specs(D, A, R):
        if all(spec.term(i) in S for i in range(2, 6)):
            return spec
    return None


# -- the five-square generator -------------------------------------------------


def quartic(m: int, n: int) -> int:
    return m ** 4 - 12 * m ** 3 * n + 2 * m * m * n * n + 12 * m * n ** 3 + n ** 4


def conic_point(m: int, n: int) -> tuple[int, int, int]:
    """A point of ``x0^2 + x2^2 = 2 x1^2`` from the line of slope n/m."""
    return (m * m + 2 * m * n - n * n, m * m + n * n, m * m - 2 * m * n - n * n)


@dataclass(frozen=True)
class GeneratorRow:
    m: int
    n: int
    x: tuple[int, int, int]
    z: int
    progression: tuple[int, ...]
    spec: APSpec
    D: int
    run_length: int


def five_square_field_generator(B: int) -> list[GeneratorRow]:
    """Quadratic fields carrying five squares in progression, from (m, n) up to B.

    Each accepted (m, n) gives terms ``x0^2 + i (x1^2 - x0^2)`` with
    ``a_2 = x2^2`` and ``a_4 = z^2``; the field is generated by the
    square root of ``a_3``.
    """
    if B < 1:
        raise InvalidArgument("bound must be >= 1")
    rows = []
    for m in range(0, B + 1):
        for n in range(-B, B + 1):
            if (m == 0 and n <= 0) or math.gcd(m, n) != 1:
                continue
            x0, x1, x2 = conic_point(m, n)
            Qv = quartic(m, n)
            if 4 * x1 * x1 - 3 * x0 * x0 != Qv:
                raise InvariantViolation(f"quartic identity fails at ({m}, {n})")
            if Qv < 0 or not is_square(Qv):
                continue
            r = x1 * x1 - x0 * x0
            if r == 0:
                continue
            prog = tuple(x0 * x0 + i * r for i in range(5))
            D = squarefree_part(prog[3])
            if D == 1:
                raise InvariantViolation(f"({m}, {n}) gives five rational squares in progression")
            if r > 0:
                spec = APSpec.normalized(prog[0], r)
            else:
                spec = APSpec.normalized(prog[4], -r)
            L = square_run_length(spec.a, spec.r, D)
            if L < 5:
                raise InvariantViolation(f"({m}, {n}) yields run length {L} < 5")
            K = QuadraticField(D)
            for t in spec.terms(5):
                root = qf_is_square(K(t))
                if root is None or root * root != K(t):
                    raise InvariantViolation(f"{t} is not a square in {K}")
            rows.append(GeneratorRow(m, n, (x0, x1, x2), math.isqrt(Qv), prog, spec, D, L))
    return rows


def fields_by_D(rows) -> dict:
    """Deduplicate generator output by field, keeping every (m, n)."""
    out: dict = {}
    for row in rows:
        out.setdefault(row.D, []).append((row.m, row.n))
    return dict(sorted(out.items()))


# -- classification over a quadratic field -------------------------------------


def square_tag(t, D: int) -> str:
    t = Fraction(t)
    if is_square_in_field(t, 1):
        return Q_SQUARE
    if D != 1 and is_square_in_field(t / D, 1):
        return D_SQUARE
    if D != 1 and qf_is_square(QuadraticField(D)(t)) is not None:
        return K_SQUARE
    return NON_SQUARE


@dataclass(frozen=True)
class ConicConstraint:
    indices: tuple[int, int, int]
    form: tuple[int, int, int]
    solvable: bool


@dataclass(frozen=True)
class ProgressionReport:
    spec: APSpec
    D: int
    tags: list
    run_length: int
    rule: str
    conics: list = field(default_factory=list)

    @property
    def impossible(self) -> bool:
        return any(not c.solvable for c in self.conics)


def _reduce_form(c) -> tuple[int, int, int]:
    g = math.gcd(*c)
    c = [x // g for x in c]
    if sum(1 for x in c if x < 0) >= 2:
        c = [-x for x in c]
    return tuple(c)


def tag_constraints(tags, D: int) -> list[ConicConstraint]:
    """Conics forced by three terms tagged as rational or D-times squares.

    Terms ``c_i y_i^2`` at indices i < j < l of a progression satisfy
    ``(l-j) c_i y_i^2 - (l-i) c_j y_j^2 + (j-i) c_l y_l^2 = 0``; the
    progression can only exist if each such conic has a rational point.
    """
    coeff = {Q_SQUARE: 1, D_SQUARE: D}
    idx = [i for i, t in enumerate(tags) if t in coeff]
    out = []
    for i, j, l in itertools.combinations(idx, 3):
        ci, cj, cl = (coeff[tags[s]] for s in (i, j, l))
        form = _reduce_form(((l - j) * ci, -(l - i) * cj, (j - i) * cl))
        verdict = conic_has_rational_point(ConicForm(*form), witness_bound=200)
        out.append(ConicConstraint((i, j, l), form, verdict.solvable))
    return out


def classify_ap_over_quadratic(a: int, r: int, D: int, length: int = 6, conics: bool = True) -> ProgressionReport:
    """Tag each of the first ``length`` terms and report the applicable rule.

    For squarefree ``|D| > 5`` a prime of D dividing two terms of a coprime
    progression would have to divide their index gap, so at most one term
    among the first six can be tagged ``D-square``; this is asserted.
    Small D go through the three-term conic constraints instead.
    """
    if length < 1:
        raise InvalidArgument("length must be >= 1")
    _check_D(D)
    spec = APSpec(a, r)
    if math.gcd(a, r) != 1:
        raise InvalidArgument(f"({a}, {r}) is not coprime")
    tags = [square_tag(t, D) for t in spec.terms(length)]
    run = next((i for i, t in enumerate(tags) if t == NON_SQUARE), length)
    if D != 1 and abs(D) > 5:
        rule = "two-index"
        d_idx = [i for i, t in enumerate(tags[:6]) if t == D_SQUARE]
        if len(d_idx) > 1:
            raise InvariantViolation(f"D = {D} divides terms {d_idx} of coprime ({a}, {r})")
    elif D != 1:
        rule = "conic"
    else:
        rule = "rational"
    cons = tag_constraints(tags, D) if conics and rule == "conic" else []
    return ProgressionReport(spec, D, tags, run, rule, cons)


# -- the index patterns of the genus-one curves ---------------------------------

FERMAT_PATTERNS = {
    "C3": (0, 1, 2, 3),
    "F1": (0, 1, 3, 4),
    "F2": (0, 2, 3, 5),
}


@dataclass(frozen=True)
class FermatReport:
    variant: str
    pattern: tuple
    holds: bool
    found: list
    rank_bound: int
    torsion_order: int
    scanned: int


def fermat_lemma_report(variant: str, bound: int = 10 ** 4) -> FermatReport:
    """Search for non-constant progressions that are squares on the pattern.

    The patterns are symmetric under reversal, so only r > 0 is scanned.
    The associated elliptic curve must have rank 0 and torsion of order 8
    for the search result to be explained.
    """
    if variant not in FERMAT_PATTERNS:
        raise InvalidArgument(f"unknown variant {variant!r}; choose from {sorted(FERMAT_PATTERNS)}")
    if bound < 1:
        raise InvalidArgument("bound must be >= 1")
    pattern = FERMAT_PATTERNS[variant]
    i1 = pattern[1]
    rest = pattern[2:]
    found, scanned = [], 0
    for u in range(math.isqrt(bound) + 1):
        a = u * u
        for v in range(u + 1, math.isqrt(a + i1 * bound) + 1):
            diff = v * v - a
            if diff % i1:
                continue
            r = diff // i1
            if r > bound or math.gcd(a, r) != 1:
                continue
            scanned += 1
            if all(is_square(a + i * r) for i in rest):
                found.append(APSpec(a, r))
    E = NAMED_CURVES[variant]
    descent = two_descent_rank_bound(E)
    torsion = torsion_subgroup(E).order
    if descent.rank_upper_bound != 0 or torsion != 8:
        raise InvariantViolation(
            f"{variant}: expected rank 0 and torsion 8, got {descent.rank_upper_bound} and {torsion}"
        )
    return FermatReport(variant, pattern, not found, found, descent.rank_upper_bound, torsion, scanned)


def fermat_lemma_check(variant: str, indices=None, bound: int = 10 ** 4) -> bool:
    """True when no non-constant progression up to ``bound`` is square on the variant's indices.

    ``indices`` may be passed to confirm the pattern; it must match the variant.
    """
    if indices is not None and variant in FERMAT_PATTERNS and tuple(sorted(indices)) != FERMAT_PATTERNS[variant]:
        raise InvalidArgument(f"{variant} uses indices {FERMAT_PATTERNS[variant]}, got {tuple(indices)}")
    return fermat_lemma_report(variant, bound).holds


# -- quadratic points of C_4 ----------------------------------------------------


@dataclass(frozen=True)
class C4Point:
    D: int
    coords: tuple
    phi: tuple
    phi_rational: bool


@dataclass(frozen=True)
class C4SearchResult:
    points: list
    candidates: int
    irrational_candidates: int

    @property
    def all_rational(self) -> bool:
        return all(P.phi_rational for P in self.points)


def c4_quadratic_point_search(Ds, U: int = 30, V: int = 6, W: int = 12) -> C4SearchResult:
    """Non-trivial points ``[1 : x1 : ... : x4]`` of C_4 over Q(sqrt D).

    ``x1`` runs over ``(u + v sqrt D)/w`` with ``|u| <= U``, ``0 <= v <= V``,
    ``1 <= w <= W``; the point exists when ``2 x1^2 - 1``, ``3 x1^2 - 2`` and
    ``4 x1^2 - 3`` are squares in the field.  Reports the class ``[1 : x1^2 - 1]``.
    """
    points, total, irr = [], 0, 0
    for D in Ds:
        _check_D(D)
        K = QuadraticField(D)
        seen = set()
        for w in range(1, W + 1):
            for v in range(0, V + 1):
                for u in range(-U, U + 1):
                    if math.gcd(math.gcd(u, v), w) != 1:
                        continue
                    x1 = K(Fraction(u, w), Fraction(v, w))
                    alpha = x1 * x1
                    if alpha == 1 or alpha in seen:
                        continue
                    seen.add(alpha)
                    total += 1
                    if not alpha.is_rational:
                        irr += 1
                    roots = []
                    for i in (2, 3, 4):
                        s = qf_is_square(i * alpha - (i - 1))
                        if s is None:
                            break
                        roots.append(s)
                    else:
                        r = alpha - 1
                        cls = canonical((K(1), r))
                        rational = alpha.is_rational
                        points.append(C4Point(D, (K(1), x1, *roots), cls, rational))
    return C4SearchResult(points, total, irr)
