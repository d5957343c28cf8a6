"""Exact linear algebra and projective helpers over any exact field.

Scalars may be ``Fraction``, ``FieldElement`` or ``QuadFieldElem``; the
only requirements are field operators, ``== 0`` and mixing with ints.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import InvalidArgument


def _lift(x):
    return Fraction(x) if isinstance(x, int) else x


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    M = [[_lift(x) for x in row] for row in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows, ncols: int | None = None) -> list[list]:
    """Basis of ``{x : rows @ x = 0}``."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = row_reduce(rows)
    zero = R[0][0] * 0
    one = zero + 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def solve(rows, rhs) -> list | None:
    """One solution of ``rows @ x = rhs`` or None if inconsistent."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = row_reduce(aug)
    if n in pivots:
        return None
    zero = R[0][0] * 0
    x = [zero] * n
    for i, c in enumerate(pivots):
        x[c] = R[i][n]
    return x


def det(rows) -> object:
    M = [[_lift(x) for x in row] for row in rows]
    n = len(M)
    if n == 0:
        return Fraction(1)
    d = M[0][0] * 0 + 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return d * 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d = d * M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


# -- projective points -----------------------------------------------------


def is_zero_vector(P) -> bool:
    return all(x == 0 for x in P)


def proj_equal(P, Q) -> bool:
    if len(P) != len(Q):
        return False
    return all(P[i] * Q[j] == P[j] * Q[i] for i in range(len(P)) for j in range(i + 1, len(P))) and (
        is_zero_vector(P) == is_zero_vector(Q)
    )


def normalize(P) -> tuple:
    """Scale so the first nonzero coordinate is 1."""
    P = [_lift(x) for x in P]
    lead = next((x for x in P if x != 0), None)
    if lead is None:
        raise InvalidArgument("the zero vector is not a projective point")
    inv = 1 / lead
    return tuple(x * inv for x in P)


def primitive_integer_vector(P) -> tuple[int, ...]:
    """Primitive integer representative with positive first nonzero entry."""
    fr = [Fraction(x) for x in P]
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise InvalidArgument("the zero vector is not a projective point")
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def as_rational(x):
    """Return ``x`` as a Fraction if it is a rational scalar, else None."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if getattr(x, "v", None) == 0 and hasattr(x, "u"):
        return x.u
    return None


def canonical(P) -> tuple:
    """Canonical representative: primitive integers over Q, leading one otherwise."""
    N = normalize(P)
    rat = [as_rational(x) for x in N]
    if all(r is not None for r in rat):
        return primitive_integer_vector(rat)
    return N
