import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from apsq.errors import InvalidArgument, ResourceLimit
from apsq.finitefield import field_arithmetic, field_make, kth_roots, residue_table


def test_field_make_examples():
    F = field_make(7, 1)
    assert F.q == 7
    F49 = field_make(7, 2)
    assert F49.q == 49 and F49.nonresidue == 3


@pytest.mark.parametrize("p,m", [(2, 2), (2, 1), (9, 1), (15, 2), (7, 3)])
def test_field_make_rejects(p, m):
    with pytest.raises(InvalidArgument):
        field_make(p, m)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
def test_modulus_irreducible(p):
    F = field_make(p, 2)
    s = F.nonresidue
    assert all((x * x - s) % p for x in range(p))
    assert all(pow(t, (p - 1) // 2, p) == 1 for t in range(1, s))


def test_arithmetic_examples():
    F5 = field_make(5)
    assert field_arithmetic(F5(3), F5(4), "mul") == F5(2)
    F49 = field_make(7, 2)
    t = F49.gen
    assert field_arithmetic(t, t, "mul") == F49(3)
    F7 = field_make(7)
    assert field_arithmetic(F7(3), 6, "pow") == F7(1)
    with pytest.raises(ZeroDivisionError):
        field_arithmetic(F7(3), F7(0), "div")


@given(st.integers(0, 48), st.integers(0, 48), st.integers(0, 48))
def test_field_axioms_f49(a, b, c):
    F = field_make(7, 2)
    x, y, z = F.decode(a), F.decode(b), F.decode(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == F.zero
    if x:
        assert x * x.inverse() == F.one
        assert (y / x) * x == y


@pytest.mark.parametrize("p", [5, 7, 11])
def test_frobenius_additive_multiplicative(p):
    F = field_make(p, 2)
    rng = random.Random(p)
    for _ in range(1000):
        x, y = F.decode(rng.randrange(F.q)), F.decode(rng.randrange(F.q))
        assert (x + y).frobenius() == x.frobenius() + y.frobenius()
        assert (x * y).frobenius() == x.frobenius() * y.frobenius()
        assert x.frobenius() == x ** p


def test_residue_table_examples():
    F5 = field_make(5)
    r = residue_table(F5, 2)
    assert [r[t] for t in range(5)] == [1, 2, 0, 0, 2]
    F7 = field_make(7)
    r = residue_table(F7, 3)
    assert [r[t] for t in range(7)] == [1, 3, 0, 0, 0, 0, 3]
    assert [residue_table(F5, 3)[t] for t in range(5)] == [1] * 5


@pytest.mark.parametrize("p,m", [(5, 1), (7, 1), (11, 1), (5, 2), (7, 2)])
@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_residue_table_invariants(p, m, k):
    F = field_make(p, m)
    tab = residue_table(F, k)
    counts = np.asarray(tab.counts)
    assert counts.sum() == F.q
    assert counts[0] == 1
    assert set(counts[1:].tolist()) <= {0, tab.g}
    for t in F.elements():
        assert len(kth_roots(t, k)) == tab[t]
        assert all(x ** k == t for x in kth_roots(t, k))


def test_kth_roots_examples():
    F5, F7 = field_make(5), field_make(7)
    assert kth_roots(F5(4), 2) == [F5(2), F5(3)]
    assert kth_roots(F5(2), 2) == []
    assert kth_roots(F7(1), 3) == [F7(1), F7(2), F7(4)]


def test_power_table_guard():
    F = field_make(8209, 2)  # q = 67 387 681 > 2^26
    with pytest.raises(ResourceLimit):
        residue_table(F, 2)


def test_residue_table_rejects_k():
    with pytest.raises(InvalidArgument):
        residue_table(field_make(5), 1)
