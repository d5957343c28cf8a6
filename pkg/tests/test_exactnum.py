import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from apsq.errors import InvalidArgument
from apsq.exactnum import (
    INF,
    QQ,
    ConicForm,
    conic_has_rational_point,
    hilbert_symbol,
    is_perfect_kth_power,
    legendre_symbol,
    primes_in_range,
    rational_sqrt,
    relevant_places,
    squarefree_part,
)

nonzero = st.integers(-10 ** 4, 10 ** 4).filter(bool)


def _hilbert_brute(a, b, p, depth=3):
    """Primitive solutions of z^2 = a x^2 + b y^2 modulo p^depth (odd p only)."""
    mod = p ** depth
    for x, y, z in itertools.product(range(mod), repeat=3):
        if (x % p, y % p, z % p) == (0, 0, 0):
            continue
        if (a * x * x + b * y * y - z * z) % mod == 0:
            return 1
    return -1


@pytest.mark.parametrize("n,k,want", [(529, 2, 23), (0, 5, 0), (648, 3, None), (-27, 3, -3), (-4, 2, None), (1, 7, 1)])
def test_perfect_power(n, k, want):
    assert is_perfect_kth_power(n, k) == want


def test_perfect_power_rejects_small_k():
    with pytest.raises(InvalidArgument):
        is_perfect_kth_power(4, 1)


@given(st.integers(0, 10 ** 6), st.integers(2, 5))
def test_perfect_power_roundtrip(r, k):
    assert is_perfect_kth_power(r ** k, k) == r
    if r > 1:
        assert is_perfect_kth_power(r ** k + 1, k) is None


@pytest.mark.parametrize("n,want", [(409, 409), (12, 3), (1636, 409), (-12, -3), (1, 1), (-1, -1), (72, 2)])
def test_squarefree_part(n, want):
    assert squarefree_part(n) == want


def test_squarefree_part_zero():
    with pytest.raises(InvalidArgument):
        squarefree_part(0)


@given(nonzero)
def test_squarefree_part_invariant(n):
    d = squarefree_part(n)
    assert n % d == 0
    m2 = n // d
    assert m2 > 0 and math.isqrt(m2) ** 2 == m2
    assert all(d % (p * p) for p in range(2, 101))


@pytest.mark.parametrize("lo,hi,want", [(5, 10, [7]), (4, 8, [5, 7]), (13, 26, [17, 19, 23]), (7, 7, [])])
def test_primes_in_range(lo, hi, want):
    assert primes_in_range(lo, hi) == want


def test_primes_in_range_sieve_oracle():
    sieve = [p for p in range(2, 200) if all(p % d for d in range(2, p))]
    assert primes_in_range(2, 199) == [p for p in sieve if p > 2]


@pytest.mark.parametrize("a,p,want", [(2, 7, 1), (0, 5, 0), (3, 5, -1), (-1, 13, 1), (-1, 7, -1)])
def test_legendre(a, p, want):
    assert legendre_symbol(a, p) == want


@pytest.mark.parametrize("p", [2, 9, 1])
def test_legendre_rejects(p):
    with pytest.raises(InvalidArgument):
        legendre_symbol(3, p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_legendre_exhaustive(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(p):
        assert legendre_symbol(a, p) == (0 if a == 0 else (1 if a in squares else -1))


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6), st.sampled_from([3, 5, 7, 11, 13, 101, 409]))
def test_legendre_multiplicative(a, b, p):
    if a % p == 0 or b % p == 0:
        return
    assert legendre_symbol(a * b, p) == legendre_symbol(a, p) * legendre_symbol(b, p)


@pytest.mark.parametrize("a,b,v,want", [(-1, -1, INF, -1), (-1, -1, 3, 1), (-1, -3, 3, -1), (-1, -1, 2, -1), (2, 5, 5, -1)])
def test_hilbert_examples(a, b, v, want):
    assert hilbert_symbol(a, b, v) == want


@pytest.mark.parametrize("p", [3, 5])
def test_hilbert_odd_matches_brute_force(p):
    for a, b in itertools.product([1, -1, 2, p, -p, 2 * p, 3 * p if p != 3 else 5], repeat=2):
        assert hilbert_symbol(a, b, p) == _hilbert_brute(a, b, p), (a, b)


@given(nonzero, nonzero)
def test_hilbert_reciprocity(a, b):
    prod = 1
    for v in relevant_places(a, b):
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1


@given(nonzero, nonzero, st.sampled_from([INF, 2, 3, 5, 7]))
def test_hilbert_symmetric_and_square_invariant(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
    assert hilbert_symbol(a, b, v) == hilbert_symbol(a * 9, b * 4, v)
    assert hilbert_symbol(a, -a, v) == 1


def test_hilbert_rational_arguments():
    assert hilbert_symbol(Fraction(-1, 4), Fraction(-1, 9), INF) == -1
    assert hilbert_symbol(Fraction(1, 3), Fraction(-1, 3), 3) == hilbert_symbol(3, -3, 3)


@pytest.mark.parametrize("form,want", [((1, 1, -3), False), ((4, 1, -3), False), ((1, -2, 1), True), ((1, 1, -2), True), ((1, 1, 1), False)])
def test_conic_examples(form, want):
    v = conic_has_rational_point(ConicForm(*form))
    assert v.solvable is want
    if want:
        assert v.witness is not None and ConicForm(*form)(*v.witness) == 0


def test_conic_trivial_point_witness():
    assert conic_has_rational_point(ConicForm(1, -2, 1)).witness == (1, 1, 1)


def test_conic_rejects_zero():
    with pytest.raises(InvalidArgument):
        ConicForm(0, 1, 1)


def _conic_brute(a, b, c, bound=30):
    for x, y, z in itertools.product(range(bound + 1), repeat=3):
        if (x, y, z) != (0, 0, 0) and a * x * x + b * y * y + c * z * z == 0:
            return True
    return False


@given(st.integers(-12, 12).filter(bool), st.integers(-12, 12).filter(bool), st.integers(-12, 12).filter(bool))
def test_conic_witness_and_brute_force_agree(a, b, c):
    v = conic_has_rational_point(ConicForm(a, b, c), witness_bound=200)
    if v.witness is not None:
        assert ConicForm(a, b, c)(*v.witness) == 0
    if _conic_brute(a, b, c):
        assert v.solvable
    if not v.solvable:
        assert v.witness is None


def test_bound_exceeded_note():
    # 1*X^2 + 1*Y^2 - 10009*Z^2: 10009 = 100^2 + 3^2 is prime, p = 1 mod 4, so solvable
    v = conic_has_rational_point(ConicForm(1, 1, -10009), witness_bound=50)
    assert v.solvable and v.witness is None and "bound exceeded" in v.note


def test_rational_sqrt_and_qq():
    assert rational_sqrt(Fraction(49, 4)) == Fraction(7, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(-1) is None
    assert QQ(3) == Fraction(3)
