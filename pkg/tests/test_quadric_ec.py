import itertools
import random

import pytest
import sympy

from apsq.errors import DegenerateConfiguration, InvalidArgument, InvalidCurve, InvariantViolation
from apsq.finitefield import field_make
from apsq.linalg import proj_equal
from apsq.qfield import QuadraticField
from apsq.quadric_ec import QuadricCurve, galois_case, named_curve, osculation_data

K13 = QuadraticField(13)
K73 = QuadraticField(73)
TRIVIAL = [s + (1,) for s in itertools.product((1, -1), repeat=3)]


def _rev(P):
    return tuple(reversed(P))


# translations P -> P + Q as (permutation, signs): result_i = sign_i * x_{perm_i}
QUOTED = {
    (-1, 1, 1, 1): ((3, 2, 1, 0), (-1, 1, 1, 1)),
    (1, -1, 1, 1): ((3, 2, 1, 0), (1, -1, 1, 1)),
    (1, 1, -1, 1): ((3, 2, 1, 0), (1, 1, -1, 1)),
    (-1, 1, -1, 1): ((0, 1, 2, 3), (1, -1, 1, -1)),
}
# printed with an extra sign on x2; the construction gives [x3:x2:x1:-x0]
CORRECTED = {(1, 1, 1, -1): ((3, 2, 1, 0), (1, 1, 1, -1))}


def _apply(t, P):
    perm, signs = t
    return tuple(s * P[i] for i, s in zip(perm, signs))


def _compose(t1, t2):
    """The map P -> t1(t2(P))."""
    perm1, s1 = t1
    perm2, s2 = t2
    return tuple(perm2[i] for i in perm1), tuple(a * s2[i] for a, i in zip(s1, perm1))


def _random_points(C, n, seed):
    pts = C.points()
    rng = random.Random(seed)
    return [rng.choice(pts) for _ in range(n)]


def test_osculation_c3():
    o = osculation_data(named_curve("C3"))
    assert o.plane == (-1, 3, -3, 1)
    assert proj_equal(o.point, (1, -1, -1, 1))
    assert not o.flex


@pytest.mark.parametrize("name,plane", [("F1", (-1, 2, -2, 1)), ("F2", (-1, 5, -5, 1))])
def test_osculation_baselines(name, plane):
    C = named_curve(name)
    o = C.osculation
    assert o.plane == plane
    assert sum(h for h in o.plane) == 0  # passes through O = [1:1:1:1]
    assert C.contains(o.point) and sum(h * x for h, x in zip(o.plane, o.point)) == 0


@pytest.mark.parametrize("name", ["C3", "F1", "F2"])
def test_osculation_multiplicity_by_resultant(name):
    """Eliminate on the plane with sympy: x1 = 1 must be a root of multiplicity >= 3."""
    C = named_curve(name)
    h = C.osculation.plane
    x1, x2 = sympy.symbols("x1 x2")
    x3 = -(h[0] + h[1] * x1 + h[2] * x2) / sympy.Integer(h[3])
    X = (1, x1, x2, x3)
    q1 = sum(int(c.numerator) * x * x for c, x in zip(C.a, X))
    q2 = sum(int(c.numerator) * x * x for c, x in zip(C.b, X))
    res = sympy.Poly(sympy.resultant(sympy.numer(sympy.together(q1)), sympy.numer(sympy.together(q2)), x2), x1)
    roots = sympy.roots(res)
    assert roots.get(1, 0) >= 3
    Op = C.osculation.point
    other = [r for r, m in roots.items() if r != 1] or [1]
    assert sympy.Rational(str(Op[1] / Op[0])) in other


def test_fourth_intersection_osculation_point():
    C = named_curve("C3")
    O = (1, 1, 1, 1)
    assert proj_equal(C.fourth_intersection((-1, 3, -3, 1), [O, O, O]), (1, -1, -1, 1))


def test_degenerate_configurations():
    C = named_curve("C3")
    with pytest.raises(DegenerateConfiguration):
        C.plane_through([(1, 1, 1, 1)] * 4)
    with pytest.raises((DegenerateConfiguration, InvalidArgument)):
        C.fourth_intersection((-1, 3, -3, 1), [(1, 1, 1, 1), (1, -1, 1, 1), (1, 1, -1, 1)])


def test_invalid_curves():
    with pytest.raises(InvalidCurve):
        QuadricCurve((1, -2, 1, 0), (0, 1, -2, 1), (0, 0, 0, 1))
    with pytest.raises(InvalidCurve):
        QuadricCurve((1, -2, 1, 0), (2, -4, 2, 0), (1, 1, 1, 1))
    with pytest.raises(InvalidCurve):
        named_curve("C3", field_make(3))
    with pytest.raises(InvalidArgument):
        named_curve("nope")


def test_quoted_identities():
    C = named_curve("C3")
    assert proj_equal(C.add((-1, 1, 1, 1), (1, -1, 1, 1)), (-1, 1, -1, 1))
    assert proj_equal(C.scalar_mul(2, (-1, 1, 1, 1)), (1, -1, -1, 1))
    assert C.is_identity(C.scalar_mul(4, (-1, 1, 1, 1)))
    assert C.is_identity(C.scalar_mul(0, (-1, 1, 1, 1)))
    P = (1, 1, 1, -1)
    assert proj_equal(C.add(P, C.O), P)
    with pytest.raises(InvalidArgument):
        C.add((1, 2, 3, 4), P)


@pytest.mark.parametrize("name", ["C3", "F1", "F2"])
def test_trivial_point_orders(name):
    C = named_curve(name)
    for P in TRIVIAL:
        minus = P.count(-1)
        want = 1 if minus == 0 else (2 if minus % 2 == 0 else 4)
        assert C.point_order(P) == want, P


def test_negation_is_reversal():
    C = named_curve("C3")
    for P in TRIVIAL:
        assert proj_equal(C.neg(P), _rev(P))
    for p in (11, 13):
        Cp = named_curve("C3", field_make(p))
        for P in _random_points(Cp, 30, p):
            assert proj_equal(Cp.neg(P), _rev(P))
    for K, P in ((K13, (1, K13(10, 3), K13(15, 4), K13(18, 5))), (K73, (1, 5, 7, K73(0, 1)))):
        CK = named_curve("C3", K)
        assert proj_equal(CK.neg(P), _rev(CK.point(P)))


def test_sqrt73_negation_example():
    CK = named_curve("C3", K73)
    assert proj_equal(CK.neg((1, 5, 7, K73(0, 1))), (K73(0, 1), 7, 5, 1))


def test_translation_formulas():
    C = named_curve("C3")
    table = {**QUOTED, **CORRECTED}
    Cp = named_curve("C3", field_make(13))
    samples = TRIVIAL + [tuple(int(x.c0) for x in P) for P in _random_points(Cp, 100, 1)]
    for Q, t in table.items():
        for P in samples:
            got = Cp.add(Cp.point(P), Cp.point(Q))
            assert proj_equal(got, Cp.point(_apply(t, P))), (Q, P)
    # the printed form for [1:1:1:-1] fails already at P = O
    assert not proj_equal(C.add(C.O, (1, 1, 1, -1)), (1, -1, 1, -1))
    # composites cover all eight trivial points
    basic = {**CORRECTED, **{k: v for k, v in QUOTED.items() if k != (-1, 1, -1, 1)}}
    derived = dict(basic)
    derived[(1, 1, 1, 1)] = ((0, 1, 2, 3), (1, 1, 1, 1))
    for (Q1, t1), (Q2, t2) in itertools.product(basic.items(), repeat=2):
        Q = C.add(Q1, Q2)
        derived.setdefault(tuple(int(x) for x in Q), _compose(t1, t2))
    assert len({tuple(int(x) for x in C.point(Q)) for Q in derived}) == 8
    for Q, t in derived.items():
        for P in samples:
            assert proj_equal(Cp.add(Cp.point(P), Cp.point(Q)), Cp.point(_apply(t, P))), (Q, P)
        # even count of -1: signed copy; odd: signed reversal
        Qn = tuple(int(x) for x in C.point(Q))
        identity_perm = t[0] == (0, 1, 2, 3)
        assert identity_perm == (Qn.count(-1) % 2 == 0)


@pytest.mark.parametrize("p", [11, 13, 17, 19])
def test_group_axioms_random(p):
    C = named_curve("C3", field_make(p))
    pts = C.points()
    rng = random.Random(p * 101)
    for _ in range(50):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert proj_equal(C.add(P, Q), C.add(Q, P))
        assert proj_equal(C.add(C.add(P, Q), R), C.add(P, C.add(Q, R)))
        assert proj_equal(C.add(P, C.O), P)
        assert C.is_identity(C.add(P, C.neg(P)))
        assert C.contains(C.add(P, Q))


@pytest.mark.parametrize("name", ["F1", "F2"])
def test_group_axioms_variants(name):
    C = named_curve(name, field_make(17))
    pts = C.points()
    rng = random.Random(5)
    for _ in range(20):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert proj_equal(C.add(C.add(P, Q), R), C.add(P, C.add(Q, R)))
        assert C.is_identity(C.add(P, C.neg(P)))


def test_group_order_matches_point_count():
    # every point order divides the group order
    C = named_curve("C3", field_make(13))
    pts = C.points()
    for P in pts:
        assert C.is_identity(C.scalar_mul(len(pts), P))


def test_galois_cases():
    x = (K13(1), K13(10, 3), K13(15, 4), K13(18, 5))
    g = galois_case(x)
    assert g.case == "Case1"
    sigma = tuple(t.conj() for t in x)
    assert proj_equal(sigma, (-x[3], x[2], -x[1], x[0]))
    g = galois_case((K73(1), K73(5), K73(7), K73(0, 1)))
    assert g.case == "Case2" and g.phi == (1, 24) and g.phi_rational
    assert galois_case((K13(1), K13(1), K13(1), K13(1))).case == "Rational"
    with pytest.raises(InvalidArgument):
        galois_case((K13(1), K13(2), K13(1), K13(1)))


def test_galois_case_requires_quadratic_coordinates():
    with pytest.raises(InvalidArgument):
        galois_case((1, 1, 1, 1))


def test_point_order_bound():
    C = named_curve("C3", K73)
    P = (1, 5, 7, K73(0, 1))
    assert C.point_order(P, bound=6) is None
    assert C.point_order(C.O) == 1
