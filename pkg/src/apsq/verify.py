"""Acceptance checks shared by the ``verify-paper`` command and the test suite.

Each ``criterion_N`` returns a list of :class:`Check` rows.  Expected
values are either literal published numbers or recomputed by an
independent route (brute force, a second model, an enumeration).
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .apcurve import CurveFamily, genus, jacobian_minor_closed_form, jacobian_rank_check, trivial_points
from .counting import (
    corollary_closed_form,
    count_points,
    count_points_bruteforce,
    enumerate_points,
    frey_threshold,
    gonality_lower_bound,
    hasse_weil_check,
)
from .exactnum import ConicForm, conic_has_rational_point, hilbert_symbol, primes_in_range, relevant_places
from .finitefield import field_make
from .linalg import canonical, proj_equal
from .progressions import (
    c4_quadratic_point_search,
    five_square_field_generator,
    max_square_run_search,
    six_square_witness_search,
    square_run_length,
)
from .qfield import QuadraticField
from .quadric_ec import galois_case, named_curve
from .weierstrass import (
    NAMED_CURVES,
    count_mod_p,
    j_invariant,
    naive_point_search,
    torsion_subgroup,
    two_descent_rank_bound,
)


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    passed: bool
    detail: str = ""


def _eq(criterion: int, name: str, got, want) -> Check:
    return Check(criterion, name, got == want, f"got {got!r}, expected {want!r}")


def criterion_1() -> list[Check]:
    out = []
    mismatches = []
    cases = 0
    for n, k, (p, m) in itertools.product((2, 3, 4), (2, 3), ((5, 1), (7, 1), (11, 1), (5, 2), (7, 2))):
        if p <= n or k % p == 0:
            continue
        F = field_make(p, m)
        fast = count_points(n, k, F).count
        brute = count_points_bruteforce(n, k, F).count
        trivial = len(set(trivial_points(CurveFamily(n, k), F)))
        cases += 1
        if fast != brute or fast < trivial:
            mismatches.append((n, k, p ** m, fast, brute, trivial))
    out.append(Check(1, "fiber count = brute force on the full grid", not mismatches,
                     f"{cases} cases, mismatches {mismatches}"))
    for n, k, p, want in ((3, 2, 5, 8), (4, 2, 7, 16), (5, 2, 7, 32), (2, 3, 5, 6), (2, 3, 7, 12)):
        F = field_make(p)
        got = count_points(n, k, F).count
        # the larger cases fall outside the brute-force guard; use the enumerator there
        oracle = count_points_bruteforce(n, k, F).count if p ** n <= 10 ** 8 else len(enumerate_points(n, k, F))
        out.append(Check(1, f"#C_{{{n},{k}}}(F_{p}) = {want}", got == want == oracle,
                         f"fiber {got}, oracle {oracle}, expected {want}"))
    return out


def criterion_2() -> list[Check]:
    out = [_eq(2, "genus(3..6)", [genus(n) for n in range(3, 7)], [1, 5, 17, 49])]
    failures = []
    for n in range(2, 7):
        for p in primes_in_range(n, 31):
            if p == 2:
                continue
            if not hasse_weil_check(n, p):
                failures.append((n, p))
    out.append(Check(2, "Hasse-Weil for n <= 6, n < p <= 31", not failures, f"failures {failures}"))
    return out


def criterion_3() -> list[Check]:
    bad_rank, bad_minor, points = [], [], 0
    for n in range(2, 6):
        C = CurveFamily(n, 2)
        for p in primes_in_range(n, 11):
            if p == 2:
                continue
            for P in enumerate_points(n, 2, field_make(p)):
                points += 1
                if not jacobian_rank_check(C, P).smooth:
                    bad_rank.append((n, p, P))
                for j1, j2 in itertools.combinations(range(n + 1), 2):
                    try:
                        jacobian_minor_closed_form(C, P, j1, j2)
                    except AssertionError as exc:
                        bad_minor.append((n, p, j1, j2, str(exc)))
    return [
        Check(3, "Jacobian rank n-1 at every F_p point", not bad_rank, f"{points} points, failures {bad_rank[:3]}"),
        Check(3, "closed-form minors match determinants", not bad_minor, f"failures {bad_minor[:3]}"),
    ]


def criterion_4() -> list[Check]:
    g = gonality_lower_bound(5, 2, 1)
    forms = [corollary_closed_form(n) for n in range(3, 11)]
    want_forms = [Fraction(2 ** (n - 1), n) for n in range(3, 11)]
    return [
        Check(4, "gonality_lower_bound(5,2,1) = 4 via (7,1)", g.lower_bound == 4 and g.witness[:2] == (7, 1),
              f"got {g.lower_bound} via {g.witness}"),
        _eq(4, "corollary bound 2^(n-1)/n", forms, want_forms),
        _eq(4, "frey threshold d=1 (closed form)", frey_threshold(1, 2, m_values=()).closed_form_n, 5),
        _eq(4, "frey threshold d=2 (closed form)", frey_threshold(2, 2, m_values=()).closed_form_n, 6),
    ]


def _random_group_triples(p: int, count: int, rng: random.Random) -> list:
    C = named_curve("C3", field_make(p))
    pts = C.points()
    bad = []
    for _ in range(count):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        if not proj_equal(C.add(P, Q), C.add(Q, P)):
            bad.append(("comm", P, Q))
        if not proj_equal(C.add(C.add(P, Q), R), C.add(P, C.add(Q, R))):
            bad.append(("assoc", P, Q, R))
        if not proj_equal(C.add(P, C.O), P) or not C.is_identity(C.add(P, C.neg(P))):
            bad.append(("ident/inv", P))
    return bad


def criterion_5() -> list[Check]:
    C = named_curve("C3")
    osc = C.osculation
    out = [
        _eq(5, "C3 osculating plane", osc.plane, (-1, 3, -3, 1)),
        Check(5, "C3 osculation point O'", proj_equal(osc.point, (1, -1, -1, 1)), f"got {osc.point}"),
        Check(5, "[-1:1:1:1] + [1:-1:1:1] = [-1:1:-1:1]",
              proj_equal(C.add((-1, 1, 1, 1), (1, -1, 1, 1)), (-1, 1, -1, 1)),
              f"got {C.add((-1, 1, 1, 1), (1, -1, 1, 1))}"),
        Check(5, "2*[-1:1:1:1] = [1:-1:-1:1]", proj_equal(C.scalar_mul(2, (-1, 1, 1, 1)), (1, -1, -1, 1)),
              f"got {C.scalar_mul(2, (-1, 1, 1, 1))}"),
    ]
    bad = []
    for name in ("C3", "F1", "F2"):
        Cv = named_curve(name)
        for s in itertools.product((1, -1), repeat=3):
            P = s + (1,)
            minus = s.count(-1)
            want = 1 if minus == 0 else (2 if minus % 2 == 0 else 4)
            got = Cv.point_order(P)
            if got != want:
                bad.append((name, P, got, want))
    out.append(Check(5, "trivial-point orders follow the parity rule", not bad, f"failures {bad}"))
    rng = random.Random(20240501)
    bad = []
    for p in (11, 13, 17, 19):
        bad += _random_group_triples(p, 50, rng)
    out.append(Check(5, "group axioms on 200 random F_p triples", not bad, f"failures {bad[:3]}"))
    return out


def criterion_6() -> list[Check]:
    out = [_eq(6, "j(y^2=x(x-1)(x+3)) = 2^4*13^3/3^2", j_invariant(NAMED_CURVES["C3"]), Fraction(2 ** 4 * 13 ** 3, 9))]
    torsion, ranks = [], []
    for name in ("C3", "F1", "F2", "E4"):
        E = NAMED_CURVES[name]
        torsion.append(torsion_subgroup(E).order)
        ranks.append(two_descent_rank_bound(E).rank_upper_bound)
    out.append(_eq(6, "torsion orders", torsion, [8, 8, 8, 4]))
    out.append(_eq(6, "2-descent rank bounds", ranks, [0, 0, 0, 1]))
    E4 = NAMED_CURVES["E4"]
    found = naive_point_search(E4, 10)
    hit = (Fraction(2), Fraction(8)) in found
    out.append(Check(6, "naive search finds (2,8) on y^2=x(x+2)(x+6)", hit, f"{len(found)} points"))
    cert = two_descent_rank_bound(E4, found).certified_rank
    out.append(_eq(6, "rank of y^2=x(x+2)(x+6) certified", cert, 1))
    return out


def criterion_7() -> list[Check]:
    E = NAMED_CURVES["C3"]
    got = {p: count_points(3, 2, field_make(p)).count for p in (5, 7, 11, 13)}
    want = {p: count_mod_p(E, p) for p in (5, 7, 11, 13)}
    return [_eq(7, "#C_3(F_p) = #E(F_p), p in {5,7,11,13}", got, want)]


def criterion_8() -> list[Check]:
    out = [_eq(8, "square_run_length(49,120,409)", square_run_length(49, 120, 409), 5)]
    terms = [49 + 120 * i for i in range(5)]
    out.append(_eq(8, "terms 49,169,289,409,529", terms, [49, 169, 289, 409, 529]))
    res = max_square_run_search(10 ** 4, 10 ** 4, 1)
    out.append(Check(8, "max run over Q within 10^4 is 3", res.best == 3,
                     f"best {res.best}, {len(res.witnesses)} witnesses"))
    hits = {D: six_square_witness_search(D, 10 ** 4, 10 ** 4) for D in (2, 3, 5, 13, 73, 409)}
    found = {D: w for D, w in hits.items() if w is not None}
    out.append(Check(8, "no six squares for D in {2,3,5,13,73,409}", not found, f"found {found}"))
    rows = five_square_field_generator(10)
    ok = any(r.m == 2 and r.n == 3 and r.D == 409 for r in rows)
    out.append(Check(8, "generator(10) emits D=409 from (2,3)", ok, f"fields {sorted({r.D for r in rows})}"))
    return out


def criterion_9() -> list[Check]:
    out = []
    for form, want in (((1, 1, -3), False), ((4, 1, -3), False), ((1, -2, 1), True)):
        got = conic_has_rational_point(ConicForm(*form)).solvable
        out.append(_eq(9, f"conic {form} solvable", got, want))
    rng = random.Random(7)
    bad = []
    for _ in range(1000):
        a = rng.choice((-1, 1)) * rng.randint(1, 10 ** 4)
        b = rng.choice((-1, 1)) * rng.randint(1, 10 ** 4)
        prod = 1
        for v in relevant_places(a, b):
            prod *= hilbert_symbol(a, b, v)
        if prod != 1:
            bad.append((a, b))
    out.append(Check(9, "Hilbert reciprocity on 1000 random pairs", not bad, f"failures {bad[:3]}"))
    return out


def criterion_10() -> list[Check]:
    K13 = QuadraticField(13)
    P13 = (K13(1), K13(10, 3), K13(15, 4), K13(18, 5))
    g13 = galois_case(P13)
    x = P13
    want13 = (-x[3], x[2], -x[1], x[0])
    sigma = tuple(t.conj() for t in x)
    K73 = QuadraticField(73)
    g73 = galois_case((K73(1), K73(5), K73(7), K73(0, 1)))
    out = [
        Check(10, "sqrt13 point is Case1 with conjugate [-x3:x2:-x1:x0]",
              g13.case == "Case1" and proj_equal(sigma, want13), f"case {g13.case}, signs {g13.signs}"),
        Check(10, "sqrt73 point is Case2 with class [1:24]", g73.case == "Case2" and g73.phi == (1, 24),
              f"case {g73.case}, phi {g73.phi}"),
    ]
    res = c4_quadratic_point_search((2, 3, 5, 6, 7, 10, 11, 13, 73, 409, -1, -2, -3))
    out.append(Check(10, "C_4 quadratic points have rational class",
                     bool(res.points) and res.all_rational,
                     f"{len(res.points)} points from {res.candidates} candidates; classes "
                     f"{sorted({(p.D, tuple(map(str, p.phi))) for p in res.points})}"))
    return out


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_criterion(n: int) -> list[Check]:
    try:
        return CRITERIA[n]()
    except Exception as exc:  # surfaced as a failing row, never swallowed silently
        return [Check(n, "criterion raised", False, f"{type(exc).__name__}: {exc}")]


def run_all(selected=None) -> tuple[list[Check], dict]:
    rows, timings = [], {}
    for n in selected or sorted(CRITERIA):
        t0 = time.perf_counter()
        rows += run_criterion(n)
        timings[n] = round(time.perf_counter() - t0, 3)
    return rows, timings


def format_table(rows) -> str:
    lines = []
    for c in rows:
        lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.criterion:>2}  {c.name}  ({c.detail})")
    return "\n".join(lines)
