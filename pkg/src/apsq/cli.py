"""Command-line interface: one subcommand per library operation, JSON on stdout.

Exit codes: 0 ok, 2 usage or invalid argument, 3 invariant violation,
4 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
import time
from fractions import Fraction

from . import counting, progressions, verify
from .apcurve import CurveFamily, genus, jacobian_minor_closed_form, jacobian_rank_check
from .errors import ApsqError, InvalidArgument, InvariantViolation, ResourceLimit
from .exactnum import QQ, ConicForm, conic_has_rational_point, primes_in_range
from .finitefield import FieldElement, field_make
from .linalg import canonical
from .qfield import QuadFieldElem, QuadraticField, qf_is_square
from .quadric_ec import VARIANT_FORMS, galois_case, named_curve
from .weierstrass import (
    NAMED_CURVES,
    WeierstrassCurve,
    count_mod_p,
    j_invariant,
    naive_point_search,
    torsion_subgroup,
    two_descent_rank_bound,
    w_add,
    w_mul,
    w_order,
)

SAFE_INT = 2 ** 53


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def to_json(x):
    """Plain JSON value; big ints and exact numbers become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= SAFE_INT else x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return to_json(x.numerator) if x.denominator == 1 else str(x)
    if isinstance(x, (FieldElement, QuadFieldElem)):
        return repr(x)
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: to_json(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [to_json(v) for v in x]
        if isinstance(x, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v, sort_keys=True))
        return items
    return str(x)


# -- argument parsing helpers ---------------------------------------------------

def parse_coord(text: str) -> tuple[Fraction, Fraction]:
    """``u``, ``u/w``, or ``u+vs`` where ``s`` stands for sqrt(D)."""
    t = text.strip().replace(" ", "").replace("*", "")
    if not t.endswith("s"):
        return Fraction(t), Fraction(0)
    body = t[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    u, v = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
    v = {"": "1", "+": "1", "-": "-1"}.get(v, v)
    return Fraction(u), Fraction(v)


def parse_point(text: str, field):
    body = text.strip().strip("[]()")
    parts = body.split(":") if ":" in body else body.split(",")
    coords = [parse_coord(t) for t in parts]
    if isinstance(field, QuadraticField):
        return tuple(field(u, v) for u, v in coords)
    if any(v for _, v in coords):
        raise InvalidArgument("sqrt(D) coordinates need --D")
    return tuple(field(u) if field is not None else u for u, _ in coords)


def parse_wpoint(text: str):
    body = text.strip().strip("()[]")
    if body.lower() in ("inf", "o", "infinity"):
        return None
    parts = body.split(",")
    if len(parts) != 2:
        raise InvalidArgument(f"affine points are written (x,y); got {text!r}")
    return tuple(Fraction(t.strip()) for t in parts)


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InvalidArgument(f"expected comma-separated integers, got {text!r}") from exc


def _field(args):
    if getattr(args, "D", None) is not None and getattr(args, "p", None) is not None:
        raise InvalidArgument("give at most one of --D and --p")
    if getattr(args, "D", None) is not None:
        return QuadraticField(args.D)
    if getattr(args, "p", None) is not None:
        return field_make(args.p)
    return QQ


def _weierstrass(args) -> WeierstrassCurve:
    if args.roots:
        r = parse_int_list(args.roots)
        if len(r) != 3:
            raise InvalidArgument("--roots needs three integers")
        return WeierstrassCurve(*r)
    name = args.curve or "C3"
    if name not in NAMED_CURVES:
        raise InvalidArgument(f"unknown curve {name!r}; choose from {sorted(NAMED_CURVES)}")
    return NAMED_CURVES[name]


# -- command implementations -----------------------------------------------------


def cmd_count(args):
    F = field_make(args.p, args.m)
    fn = {
        "fiber": lambda: counting.count_points(args.n, args.k, F, threads=args.threads),
        "reference": lambda: counting.count_points_reference(args.n, args.k, F),
        "brute": lambda: counting.count_points_bruteforce(args.n, args.k, F),
    }[args.method]
    res = fn()
    return {"count": res.count, "n": res.n, "k": res.k, "q": res.q, "method": res.method}


def cmd_count_sweep(args):
    ns = parse_int_list(args.n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "p", "m", "count", "genus", "hw_ok"])
    for n in ns:
        for p in primes_in_range(max(n, 2), args.p_max):
            if p == 2 or args.k % p == 0:
                continue
            for m in range(1, args.m_max + 1):
                F = field_make(p, m)
                c = counting.count_points(n, args.k, F, threads=args.threads).count
                g = genus(n) if args.k == 2 else ""
                hw = ""
                if args.k == 2:
                    hw = str((c - (F.q + 1)) ** 2 <= 4 * genus(n) ** 2 * F.q).lower()
                w.writerow([n, args.k, p, m, c, g, hw])
    return buf.getvalue()


def cmd_gonality(args):
    rep = counting.gonality_lower_bound(args.n, args.k, args.m_max)
    out = to_json(rep)
    out["candidates"] = [dict(zip(("p", "m", "count", "bound"), c)) for c in rep.candidates]
    return out


def cmd_frey(args):
    rep = counting.frey_threshold(args.d, args.k, tuple(range(1, args.m_max + 1)), args.n_max)
    return {"d": rep.d, "k": rep.k, "closed_form_n": rep.closed_form_n,
            "computed_n": {f"m_max={m}": v for m, v in rep.computed_n.items()}}


def cmd_genus(args):
    return {"n": args.n, "genus": genus(args.n)}


def cmd_smooth_check(args):
    C = CurveFamily(args.n, 2)
    F = field_make(args.p)
    pts = counting.enumerate_points(args.n, 2, F)
    singular = [P for P in pts if not jacobian_rank_check(C, P).smooth]
    signs = set()
    for P in pts:
        for j1 in range(args.n + 1):
            for j2 in range(j1 + 1, args.n + 1):
                signs.add(jacobian_minor_closed_form(C, P, j1, j2).sign)
    return {"n": args.n, "p": args.p, "points": len(pts), "singular": singular,
            "smooth": not singular, "minor_signs": sorted(signs)}


def cmd_ec(args):
    F = _field(args)
    if args.curve not in VARIANT_FORMS:
        raise InvalidArgument(f"unknown curve {args.curve!r}; choose from {sorted(VARIANT_FORMS)}")
    C = named_curve(args.curve, F)
    pts = [parse_point(t, F) for t in args.points]
    op = args.op
    if op == "osculation":
        o = C.osculation
        return {"plane": o.plane, "point": canonical(o.point), "flex": o.flex}
    if op == "galois":
        if len(pts) != 1:
            raise InvalidArgument("galois takes one point")
        return galois_case(pts[0])
    need = {"neg": 1, "order": 1, "add": 2, "mul": 1}[op]
    if len(pts) != need:
        raise InvalidArgument(f"{op} takes {need} point(s)")
    if op == "neg":
        return {"point": canonical(C.neg(pts[0]))}
    if op == "add":
        return {"point": canonical(C.add(*pts))}
    if op == "mul":
        return {"m": args.m, "point": canonical(C.scalar_mul(args.m, pts[0]))}
    return {"order": C.point_order(pts[0], args.bound)}


def _wpt(P):
    return "O" if P is None else list(P)


def cmd_weierstrass(args):
    E = _weierstrass(args)
    out = {"curve": str(E), "roots": E.roots, "discriminant": E.discriminant, "j": j_invariant(E)}
    if args.add:
        P, Q = (parse_wpoint(t) for t in args.add)
        out["sum"] = _wpt(w_add(E, P, Q))
    if args.mul:
        m, P = int(args.mul[0]), parse_wpoint(args.mul[1])
        out["multiple"] = _wpt(w_mul(E, m, P))
        out["order"] = w_order(E, P)
    if args.count_p:
        out["counts"] = {p: count_mod_p(E, p) for p in parse_int_list(args.count_p)}
    if args.search:
        out["points"] = [_wpt(P) for P in naive_point_search(E, args.search)]
    return out


def cmd_descent(args):
    E = _weierstrass(args)
    known = naive_point_search(E, args.search) if args.search else []
    rep = two_descent_rank_bound(E, known)
    return {
        "curve": str(E),
        "selmer": sorted(rep.selmer_pairs),
        "rank_upper_bound": rep.rank_upper_bound,
        "rank_lower_bound": rep.rank_lower_bound,
        "certified_rank": rep.certified_rank,
        "image": sorted(rep.image_of_known_points),
        "places": rep.places,
    }


def cmd_torsion(args):
    E = _weierstrass(args)
    t = torsion_subgroup(E)
    return {"curve": str(E), "order": t.order, "structure": t.structure,
            "points": [_wpt(P) for P in t.points], "reduction_gcd": t.reduction_bound}


def cmd_search_run(args):
    res = progressions.max_square_run_search(args.A, args.R, args.D)
    return {"best": res.best, "witnesses": [(s.a, s.r) for s in res.witnesses], "scanned": res.scanned}


def cmd_five_square_fields(args):
    rows = progressions.five_square_field_generator(args.bound)
    return {
        "rows": [{"m": r.m, "n": r.n, "x": r.x, "z": r.z, "progression": r.progression,
                  "normalized": (r.spec.a, r.spec.r), "D": r.D, "run_length": r.run_length} for r in rows],
        "fields": progressions.fields_by_D(rows),
    }


def cmd_six_square_check(args):
    out = {}
    for D in parse_int_list(args.D):
        w = progressions.six_square_witness_search(D, args.A, args.R)
        out[D] = None if w is None else (w.a, w.r)
    return {"witnesses": out, "none_found": all(v is None for v in out.values())}


def cmd_classify(args):
    rep = progressions.classify_ap_over_quadratic(args.a, args.r, args.D, args.length)
    return {"a": rep.spec.a, "r": rep.spec.r, "D": rep.D, "tags": rep.tags, "run_length": rep.run_length,
            "rule": rep.rule, "conics": rep.conics, "impossible": rep.impossible}


def cmd_conic(args):
    v = conic_has_rational_point(ConicForm(args.a, args.b, args.c), args.witness_bound)
    return {"form": (args.a, args.b, args.c), "solvable": v.solvable, "witness": v.witness,
            "symbols": v.symbols, "note": v.note}


def cmd_qf_is_square(args):
    K = QuadraticField(args.D)
    z = K(Fraction(args.u), Fraction(args.v))
    root = qf_is_square(z)
    return {"z": z, "square": root is not None, "root": root}


def cmd_verify_paper(args):
    sel = parse_int_list(args.criteria) if args.criteria else None
    if sel and any(c not in verify.CRITERIA for c in sel):
        raise InvalidArgument(f"criteria must be among {sorted(verify.CRITERIA)}")
    rows, timings = verify.run_all(sel)
    return {"rows": rows, "timings_s": timings, "all_passed": all(r.passed for r in rows)}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="apsq", description="Squares in arithmetic progression: counts, curves, searches.")
    p.add_argument("--stable", action="store_true", help="omit elapsed_ms for byte-comparable output")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: APSQ_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("count", help="#C_{n,k}(F_q)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--method", choices=("fiber", "reference", "brute"), default="fiber")
    s.set_defaults(fn=cmd_count)

    s = sub.add_parser("count-sweep", help="CSV of counts over primes")
    s.add_argument("--n", default="3,4,5", help="comma-separated n values")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--p-max", type=int, default=31)
    s.add_argument("--m-max", type=int, default=1, choices=(1, 2))
    s.set_defaults(fn=cmd_count_sweep)

    s = sub.add_parser("gonality", help="gonality lower bound from point counts")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--m-max", type=int, default=1, choices=(1, 2))
    s.set_defaults(fn=cmd_gonality)

    s = sub.add_parser("frey", help="smallest n with gonality bound above 2d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--m-max", type=int, default=2, choices=(1, 2))
    s.add_argument("--n-max", type=int, default=40)
    s.set_defaults(fn=cmd_frey)

    s = sub.add_parser("genus", help="genus of C_n")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=cmd_genus)

    s = sub.add_parser("smooth-check", help="Jacobian rank at every point of C_n(F_p)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(fn=cmd_smooth_check)

    s = sub.add_parser("ec", help="group law on the quadric models C3, F1, F2")
    s.add_argument("op", choices=("osculation", "neg", "add", "mul", "order", "galois"))
    s.add_argument("points", nargs="*", help="points like [1:5:7:s] (s = sqrt D)")
    s.add_argument("--curve", default="C3")
    s.add_argument("--D", type=int, default=None)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--m", type=int, default=2, help="multiplier for mul")
    s.add_argument("--bound", type=int, default=12, help="order search bound")
    s.set_defaults(fn=cmd_ec)

    for name, fn, help_ in (
        ("weierstrass", cmd_weierstrass, "curve data and chord-tangent arithmetic"),
        ("descent", cmd_descent, "2-descent rank bounds"),
        ("torsion", cmd_torsion, "rational torsion subgroup"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--curve", default=None, help=f"one of {sorted(NAMED_CURVES)} (default C3)")
        s.add_argument("--roots", default=None, help="e1,e2,e3 for y^2=(x-e1)(x-e2)(x-e3)")
        if name == "weierstrass":
            s.add_argument("--add", nargs=2, metavar="P")
            s.add_argument("--mul", nargs=2, metavar=("M", "P"))
            s.add_argument("--count-p", default=None, help="comma-separated primes")
            s.add_argument("--search", type=int, default=0, help="naive height bound")
        if name == "descent":
            s.add_argument("--search", type=int, default=10, help="height bound for known points")
        s.set_defaults(fn=fn)

    s = sub.add_parser("search-run", help="longest square run over coprime (a, r)")
    s.add_argument("--A", type=int, required=True)
    s.add_argument("--R", type=int, required=True)
    s.add_argument("--D", type=int, default=1)
    s.set_defaults(fn=cmd_search_run)

    s = sub.add_parser("five-square-fields", help="quadratic fields with five squares in progression")
    s.add_argument("--bound", type=int, required=True)
    s.set_defaults(fn=cmd_five_square_fields)

    s = sub.add_parser("six-square-check", help="search for six squares in progression")
    s.add_argument("--D", required=True, help="comma-separated squarefree D")
    s.add_argument("--A", type=int, default=10 ** 4)
    s.add_argument("--R", type=int, default=10 ** 4)
    s.set_defaults(fn=cmd_six_square_check)

    s = sub.add_parser("classify", help="tag the terms of a progression over Q(sqrt D)")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--length", type=int, default=6)
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("conic", help="rational points on aX^2 + bY^2 + cZ^2 = 0")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("c", type=int)
    s.add_argument("--witness-bound", type=int, default=10 ** 3)
    s.set_defaults(fn=cmd_conic)

    s = sub.add_parser("qf-is-square", help="square root of u + v sqrt(D)")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--u", required=True)
    s.add_argument("--v", default="0")
    s.set_defaults(fn=cmd_qf_is_square)

    s = sub.add_parser("verify-paper", help="run every acceptance check and print a table")
    s.add_argument("--criteria", default=None, help="comma-separated subset, e.g. 1,8")
    s.add_argument("--json", action="store_true", help="JSON instead of a table")
    s.set_defaults(fn=cmd_verify_paper)
    return p


def _inputs(args) -> dict:
    skip = {"fn", "command", "stable", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.threads is not None and args.threads < 1:
            raise InvalidArgument("--threads must be >= 1")
        t0 = time.perf_counter()
        result = args.fn(args)
        elapsed = int((time.perf_counter() - t0) * 1000)
    except UsageError as exc:
        err.write(str(exc))
        return 2
    except InvariantViolation as exc:
        err.write(json.dumps({"error": "invariant-violation", "message": str(exc)}) + "\n")
        return 3
    except ResourceLimit as exc:
        err.write(json.dumps({"error": "resource-limit", "message": str(exc)}) + "\n")
        return 4
    except (ApsqError, ValueError, ZeroDivisionError) as exc:
        err.write(json.dumps({"error": "invalid-argument", "message": str(exc)}) + "\n")
        return 2

    if args.command == "count-sweep":
        out.write(result)
        return 0
    if args.command == "verify-paper" and not args.json:
        out.write(verify.format_table(result["rows"]) + "\n")
        passed = sum(r.passed for r in result["rows"])
        out.write(f"{passed}/{len(result['rows'])} checks passed\n")
        return 0 if result["all_passed"] else 3
    doc = {"command": args.command, "inputs": to_json(_inputs(args)), "result": to_json(result)}
    if not args.stable:
        doc["elapsed_ms"] = elapsed
    out.write(json.dumps(doc, sort_keys=True) + "\n")
    if args.command == "verify-paper" and not result["all_passed"]:
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
