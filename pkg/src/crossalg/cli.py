"""Command-line front end: ``crossalg validate | construct | homotopy | compare | freequad``.

Inputs are JSON bundles, or ``fixture:KIND`` for a generated fixture
(reproducible from ``--seed`` and ``--p``).  Exit codes: 0 when every check
passes, 1 on a check failure, 2 on an input error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

from .algebra import AlgebraError, NotAssociative, NotCommutative, NotPrime
from .crossed import CrossedModule, Nil2Module, PreCrossedModule, check_crossed, check_nil2, check_precrossed
from .freeconstruct import (
    ConstructionData,
    DegreeCapTooSmall,
    InvalidConstructionData,
    check_psi,
    compare_X_Y,
    ellis_route_quadratic,
    thm_vs_ellis,
    totally_free_quadratic,
)
from .io import MAX_PRIME, KindMismatch, ParseError, UnknownKind, dumps, from_json, load, save, to_json
from .linalg import image_of, is_prime, kernel_of
from .quadratic import (
    QuadraticModule,
    check_prop_ho2,
    check_prop_ho3,
    check_quadratic,
    homotopy_quadratic,
    quadratic_from_2crossed,
    quadratic_from_simplicial,
    quadratic_from_square,
)
from .report import HomotopyProfile, Report
from .simplicial import TruncatedSimplicialAlgebra, check_simplicial, m_functor_2, moore_homotopy
from .square import CrossedSquare, WrongShape, check_square, ellis_free_quadratic, square_homology
from .twocrossed import InvalidStructure, TwoCrossedModule, check_2crossed, homotopy_2crossed, two_crossed_from_square

INPUT_ERRORS = (ParseError, UnknownKind, KindMismatch, NotPrime, WrongShape, DegreeCapTooSmall, InvalidConstructionData)


def kind_of(obj):
    if isinstance(obj, ConstructionData):
        return "construction_data"
    return to_json(obj)["kind"] if not isinstance(obj, dict) else obj.get("kind")


# ----------------------------------------------------------------------
# loading


def load_input(path, seed=0, p=3, degree_cap=None):
    """``(structure, bundle dict)`` for a file path or ``fixture:KIND``."""
    if path.startswith("fixture:"):
        from .fixtures import random_fixture

        kind = path.split(":", 1)[1]
        if not is_prime(p) or p > MAX_PRIME:
            raise NotPrime("--p %r must be a prime <= %d" % (p, MAX_PRIME))
        try:
            obj = random_fixture(kind, seed, p)
        except KeyError:
            raise UnknownKind("no fixture generator for kind %r" % kind) from None
        bundle = to_json(obj)
    else:
        bundle = load(path)
        obj = from_json(bundle)
    if degree_cap is not None:
        if not isinstance(obj, ConstructionData):
            raise KindMismatch("--degree-cap applies to construction data only")
        obj = obj.with_cap(degree_cap)
        bundle = to_json(obj)
    return obj, bundle


def digest(bundle):
    return hashlib.sha256(dumps(bundle).encode()).hexdigest()


def _require(obj, *classes, what=""):
    if not isinstance(obj, classes):
        raise KindMismatch("%s expects %s, got %s" % (what, " or ".join(c.__name__ for c in classes), type(obj).__name__))


# ----------------------------------------------------------------------
# dispatch tables


def algebras_of(obj):
    if isinstance(obj, QuadraticModule):
        return [("L", obj.L), ("M", obj.M), ("N", obj.N), ("C", obj.C)]
    if isinstance(obj, CrossedSquare):
        return [("L", obj.L), ("M", obj.M), ("N", obj.N), ("R", obj.R)]
    if isinstance(obj, TwoCrossedModule):
        return [("C2", obj.C2), ("C1", obj.C1), ("C0", obj.C0)]
    if isinstance(obj, TruncatedSimplicialAlgebra):
        return [("E%d" % n, A) for n, A in enumerate(obj.levels)]
    if isinstance(obj, PreCrossedModule):
        return [("C", obj.C), ("R", obj.R)]
    if isinstance(obj, ConstructionData):
        return [("R", obj.R)]
    return []


def certify_algebras(obj, rep):
    """Commutativity and associativity of every component, as report lines."""
    ok = True
    for name, A in algebras_of(obj):
        try:
            A.certify()
            rep.add("algebra-%s" % name, True)
        except (NotCommutative, NotAssociative) as e:
            rep.add("algebra-%s" % name, False, (type(e).__name__,) + tuple(e.witness))
            ok = False
    return ok


def check_structure(obj):
    rep = Report(kind_of(obj))
    if not certify_algebras(obj, rep):
        return rep
    if isinstance(obj, QuadraticModule):
        return check_quadratic(obj, rep)
    if isinstance(obj, CrossedSquare):
        return check_square(obj, rep)
    if isinstance(obj, TwoCrossedModule):
        return check_2crossed(obj, rep)
    if isinstance(obj, TruncatedSimplicialAlgebra):
        return check_simplicial(obj, rep)
    if isinstance(obj, CrossedModule):
        return check_crossed(obj, rep)
    if isinstance(obj, Nil2Module):
        return check_nil2(obj, rep)
    if isinstance(obj, PreCrossedModule):
        return check_precrossed(obj, rep)
    if isinstance(obj, ConstructionData):
        try:
            check_psi(obj)
            rep.add("psi-cycles", True)
        except InvalidConstructionData as e:
            rep.add("psi-cycles", False, str(e))
        return rep
    raise UnknownKind(type(obj).__name__)


def _precrossed_profile(X):
    p = X.p
    im = image_of(X.boundary.matrix, p)
    ker = kernel_of(X.boundary.matrix, p)
    return HomotopyProfile((0, X.R.dim - im.dim, ker.dim, 0))


def homotopy_of(obj):
    if isinstance(obj, QuadraticModule):
        return homotopy_quadratic(obj)
    if isinstance(obj, CrossedSquare):
        return square_homology(obj)
    if isinstance(obj, TwoCrossedModule):
        return homotopy_2crossed(obj)
    if isinstance(obj, TruncatedSimplicialAlgebra):
        return moore_homotopy(obj)
    if isinstance(obj, PreCrossedModule):
        rep = check_structure(obj)
        if not rep.ok:
            raise InvalidStructure(rep)
        return _precrossed_profile(obj)
    if isinstance(obj, ConstructionData):
        return homotopy_quadratic(totally_free_quadratic(obj))
    raise UnknownKind(type(obj).__name__)


def _ellis(obj):
    _require(obj, CrossedSquare, TruncatedSimplicialAlgebra, what="ellis")
    if isinstance(obj, TruncatedSimplicialAlgebra):
        obj = m_functor_2(obj)
    return ellis_free_quadratic(obj)


FUNCTORS = {
    "two-to-quadratic": ((TwoCrossedModule,), quadratic_from_2crossed),
    "simp-to-quadratic": ((TruncatedSimplicialAlgebra,), quadratic_from_simplicial),
    "square-to-quadratic": ((CrossedSquare,), quadratic_from_square),
    "square-to-two": ((CrossedSquare,), two_crossed_from_square),
    "m2": ((TruncatedSimplicialAlgebra,), m_functor_2),
    "ellis": ((CrossedSquare, TruncatedSimplicialAlgebra), _ellis),
    "freequad": ((ConstructionData,), totally_free_quadratic),
    "ellis-route": ((ConstructionData,), ellis_route_quadratic),
}

PROPS = {
    "ho2": ((TwoCrossedModule,), check_prop_ho2),
    "ho3": ((TruncatedSimplicialAlgebra,), check_prop_ho3),
    "xy": ((ConstructionData,), compare_X_Y),
    "thm-vs-ellis": ((ConstructionData,), thm_vs_ellis),
}


# ----------------------------------------------------------------------
# commands (each returns the report dict)


def _report(command, bundles, rep, profiles=None):
    out = {
        "command": command,
        "input_digest": digest(bundles[0]) if len(bundles) == 1 else [digest(b) for b in bundles],
        "pass": rep.ok,
        "results": [c.to_dict() for c in rep.checks],
        "notes": list(rep.notes),
    }
    if profiles:
        out["profiles"] = {k: v.to_dict() for k, v in profiles.items()}
    return out


def cmd_validate(path, seed=0, p=3, degree_cap=None):
    obj, bundle = load_input(path, seed, p, degree_cap)
    return _report("validate", [bundle], check_structure(obj))


def cmd_construct(functor, path, out=None, seed=0, p=3, degree_cap=None):
    if functor not in FUNCTORS:
        raise UnknownKind("unknown functor %r (known: %s)" % (functor, ", ".join(sorted(FUNCTORS))))
    classes, fn = FUNCTORS[functor]
    obj, bundle = load_input(path, seed, p, degree_cap)
    _require(obj, *classes, what=functor)
    pre = check_structure(obj)
    if not pre.ok:
        raise InvalidStructure(pre)
    result = fn(obj)
    rep = Report("construct " + functor)
    rep.merge(check_structure(result), prefix="output:")
    d = _report("construct " + functor, [bundle], rep)
    d["output_kind"] = kind_of(result)
    d["output_digest"] = digest(to_json(result))
    if out:
        save(result, out)
        d["output"] = out
    return d


def cmd_homotopy(path, seed=0, p=3, degree_cap=None):
    obj, bundle = load_input(path, seed, p, degree_cap)
    prof = homotopy_of(obj)
    rep = Report("homotopy")
    rep.add("structure-valid", True)
    return _report("homotopy", [bundle], rep, {"input": prof})


def cmd_compare(paths, prop=None, seed=0, p=3, degree_cap=None):
    if prop is not None:
        if prop not in PROPS:
            raise UnknownKind("unknown proposition %r" % prop)
        if len(paths) != 1:
            raise KindMismatch("--prop takes exactly one input")
        classes, fn = PROPS[prop]
        obj, bundle = load_input(paths[0], seed, p, degree_cap)
        _require(obj, *classes, what="--prop " + prop)
        rep = fn(obj)
        return _report("compare --prop " + prop, [bundle], rep)
    if len(paths) != 2:
        raise KindMismatch("compare needs two inputs or --prop")
    (a, ba), (b, bb) = (load_input(q, seed, p, degree_cap) for q in paths)
    pa, pb = homotopy_of(a), homotopy_of(b)
    rep = Report("compare")
    for i in range(4):
        rep.add("pi%d" % i, pa.dims[i] == pb.dims[i], (pa.dims[i], pb.dims[i]))
    return _report("compare", [ba, bb], rep, {"A": pa, "B": pb})


def cmd_freequad(path, out=None, seed=0, p=3, degree_cap=None):
    obj, bundle = load_input(path, seed, p, degree_cap)
    _require(obj, ConstructionData, what="freequad")
    Q = totally_free_quadratic(obj)
    rep = check_quadratic(Q)
    d = _report("freequad", [bundle], rep, {"output": homotopy_quadratic(Q, check=False)} if rep.ok else None)
    d["dims"] = {"L": Q.L.dim, "M": Q.M.dim, "N": Q.N.dim, "C": Q.C.dim}
    d["output_digest"] = digest(to_json(Q))
    if out:
        save(Q, out)
        d["output"] = out
    return d


# ----------------------------------------------------------------------
# entry point


def build_parser():
    ap = argparse.ArgumentParser(prog="crossalg", description="Crossed, 2-crossed and quadratic modules of commutative algebras over Z/p.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the full report as JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for fixture:KIND inputs")
    common.add_argument("--p", type=int, default=3, help="prime for fixture:KIND inputs")
    common.add_argument("--degree-cap", type=int, default=None, help="override the degree cap of construction data")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", parents=[common], help="run the checker matching the bundle kind")
    v.add_argument("path")
    c = sub.add_parser("construct", parents=[common], help="apply a functor and validate its output")
    c.add_argument("functor", choices=sorted(FUNCTORS))
    c.add_argument("path")
    c.add_argument("--out", default=None)
    h = sub.add_parser("homotopy", parents=[common], help="homotopy dimensions (pi0, pi1, pi2, pi3)")
    h.add_argument("path")
    m = sub.add_parser("compare", parents=[common], help="compare two profiles or check a named proposition")
    m.add_argument("paths", nargs="+")
    m.add_argument("--prop", choices=sorted(PROPS), default=None)
    f = sub.add_parser("freequad", parents=[common], help="totally free quadratic module of construction data")
    f.add_argument("path")
    f.add_argument("--out", default=None)
    return ap


def human(d):
    lines = ["%s: %s" % (d["command"], "PASS" if d["pass"] else "FAIL")]
    for r in d["results"]:
        if r["pass"]:
            lines.append("  [ok  ] %s" % r["check"])
        else:
            lines.append("  [FAIL] %s  witness=%s" % (r["check"], r["witness"]))
    for name, prof in sorted(d.get("profiles", {}).items()):
        lines.append("  %s: pi = %s" % (name, tuple(prof["dims"])))
    if "output" in d:
        lines.append("  wrote %s" % d["output"])
    return "\n".join(lines)


def run(argv=None):
    """``(exit code, report dict or None, message, json flag)`` without printing."""
    args = build_parser().parse_args(argv)
    kw = dict(seed=args.seed, p=args.p, degree_cap=args.degree_cap)
    try:
        if args.command == "validate":
            d = cmd_validate(args.path, **kw)
        elif args.command == "construct":
            d = cmd_construct(args.functor, args.path, args.out, **kw)
        elif args.command == "homotopy":
            d = cmd_homotopy(args.path, **kw)
        elif args.command == "compare":
            d = cmd_compare(args.paths, args.prop, **kw)
        else:
            d = cmd_freequad(args.path, args.out, **kw)
    except INPUT_ERRORS as e:
        return 2, None, "input error (%s): %s" % (type(e).__name__, e), args.json
    except InvalidStructure as e:
        d = {"command": args.command, "pass": False, "results": [c.to_dict() for c in e.report.checks], "notes": list(e.report.notes)}
        return 1, d, "invalid structure: %s" % e, args.json
    except AlgebraError as e:
        return 1, None, "check failure (%s): %s" % (type(e).__name__, e), args.json
    return (0 if d["pass"] else 1), d, "", args.json


def main(argv=None):
    code, d, msg, as_json = run(argv)
    if d is not None:
        sys.stdout.write(dumps(d) if as_json else human(d) + "\n")
    if msg:
        sys.stderr.write(msg + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
