"""JSON bundles for every structure.

Algebras are ``{"p", "dim", "label", "structconst": [[i, j, k, v], ...]}``;
morphisms ``{"matrix": rows}`` (rows indexed by the codomain); actions and
bilinear maps are sparse ``[a, b, c, v]`` quadruples.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import ActionTensor, AlgebraError, AlgebraMorphism, BilinearMap, FiniteAlgebra, NotPrime
from .crossed import CrossedModule, Nil2Module, PreCrossedModule
from .linalg import is_prime

MAX_PRIME = 97


class ParseError(AlgebraError):
    pass


class UnknownKind(AlgebraError):
    pass


class KindMismatch(AlgebraError):
    pass


def _sparse(t):
    t = np.asarray(t)
    idx = np.argwhere(t != 0)
    return [[int(a) for a in i] + [int(t[tuple(i)])] for i in idx]


def _dense(entries, shape, p, what):
    t = np.zeros(shape, dtype=np.int64)
    for e in entries:
        if len(e) != len(shape) + 1:
            raise ParseError("%s entry %r has the wrong length" % (what, e))
        *i, v = (int(x) for x in e)
        if any(not 0 <= a < s for a, s in zip(i, shape)):
            raise ParseError("%s entry %r is out of range for shape %r" % (what, e, shape))
        t[tuple(i)] = (t[tuple(i)] + v) % p
    return t


# ----------------------------------------------------------------------
# pieces


def algebra_to_json(A):
    return {"p": A.p, "dim": A.dim, "label": A.label, "structconst": [list(e) for e in A.entries()]}


def algebra_from_json(d):
    try:
        p, n = int(d["p"]), int(d["dim"])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError("algebra needs integer 'p' and 'dim'") from e
    if not is_prime(p) or p > MAX_PRIME:
        raise NotPrime("modulus %r must be a prime <= %d" % (p, MAX_PRIME))
    if n < 0:
        raise ParseError("negative dimension")
    ent = d.get("structconst", [])
    c = _dense(ent, (n, n, n), p, "structconst")
    A = FiniteAlgebra.from_dense(p, c, label=str(d.get("label", ""))) if n else FiniteAlgebra(p, 0, label=str(d.get("label", "")))
    return A


def morphism_to_json(f):
    return {"matrix": np.asarray(f.matrix % f.codomain.p).tolist()}


def morphism_from_json(d, A, B):
    try:
        M = np.asarray(d["matrix"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError("morphism needs a numeric 'matrix'") from e
    if M.size == 0:
        M = np.zeros((B.dim, A.dim), dtype=np.int64)
    if M.shape != (B.dim, A.dim):
        raise ParseError("morphism matrix has shape %r, expected %r" % (M.shape, (B.dim, A.dim)))
    return AlgebraMorphism(A, B, M % B.p)


def action_to_json(a):
    return _sparse(a.tensor % a.actor.p)


def action_from_json(entries, R, C):
    return ActionTensor(R, C, _dense(entries, (R.dim, C.dim, C.dim), R.p, "action"))


def bilinear_to_json(b):
    return _sparse(b.tensor % b.target.p)


def bilinear_from_json(entries, U, V, W):
    return BilinearMap(U, V, W, _dense(entries, (U.dim, V.dim, W.dim), W.p, "bilinear"))


# ----------------------------------------------------------------------
# bundles


def to_json(obj):
    """Bundle any supported structure as a JSON-ready dict."""
    from .freeconstruct import ConstructionData, format_monomial
    from .quadratic import QuadraticModule
    from .simplicial import TruncatedSimplicialAlgebra
    from .square import CrossedSquare
    from .twocrossed import TwoCrossedModule

    if isinstance(obj, QuadraticModule):
        return {
            "kind": "quadratic", "label": obj.label,
            "L": algebra_to_json(obj.L), "M": algebra_to_json(obj.M), "N": algebra_to_json(obj.N), "C": algebra_to_json(obj.C),
            "delta": morphism_to_json(obj.delta), "boundary": morphism_to_json(obj.boundary), "quotC": morphism_to_json(obj.quotC),
            "actNL": action_to_json(obj.actNL), "actNM": action_to_json(obj.actNM),
            "omega": bilinear_to_json(obj.omega), "w": bilinear_to_json(obj.w),
        }
    if isinstance(obj, CrossedSquare):
        return {
            "kind": "square", "label": obj.label,
            "L": algebra_to_json(obj.L), "M": algebra_to_json(obj.M), "N": algebra_to_json(obj.N), "R": algebra_to_json(obj.R),
            "lambda": morphism_to_json(obj.lam), "lambdap": morphism_to_json(obj.lamp), "mu": morphism_to_json(obj.mu), "nu": morphism_to_json(obj.nu),
            "actRL": action_to_json(obj.actRL), "actRM": action_to_json(obj.actRM), "actRN": action_to_json(obj.actRN),
            "h": bilinear_to_json(obj.h),
        }
    if isinstance(obj, TwoCrossedModule):
        return {
            "kind": "2crossed", "label": obj.label,
            "C2": algebra_to_json(obj.C2), "C1": algebra_to_json(obj.C1), "C0": algebra_to_json(obj.C0),
            "d2": morphism_to_json(obj.d2), "d1": morphism_to_json(obj.d1),
            "act0on1": action_to_json(obj.act0on1), "act0on2": action_to_json(obj.act0on2),
            "lifting": bilinear_to_json(obj.lifting),
        }
    if isinstance(obj, TruncatedSimplicialAlgebra):
        return {
            "kind": "simplicial", "label": obj.label,
            "levels": [algebra_to_json(A) for A in obj.levels],
            "faces": [[morphism_to_json(f) for f in row] for row in obj.faces],
            "degeneracies": [[morphism_to_json(s) for s in row] for row in obj.degens],
        }
    if isinstance(obj, PreCrossedModule):
        kind = "crossed" if isinstance(obj, CrossedModule) else "nil2" if isinstance(obj, Nil2Module) else "precrossed"
        return {
            "kind": kind, "label": obj.label,
            "C": algebra_to_json(obj.C), "R": algebra_to_json(obj.R),
            "boundary": morphism_to_json(obj.boundary), "action": action_to_json(obj.action),
        }
    if isinstance(obj, ConstructionData):
        return {
            "kind": "construction_data", "label": obj.label,
            "R": algebra_to_json(obj.R),
            "weights": list(obj.weights),
            "X": [{"name": x, "vartheta": [int(v) for v in row]} for x, row in zip(obj.X, obj.vartheta)],
            "Y": [{"name": y, "psi": {format_monomial(e, obj.X): [int(v) for v in row] for e, row in sorted(poly.items())}} for y, poly in zip(obj.Y, obj.psi)],
            "degree_cap": obj.degree_cap,
        }
    raise UnknownKind("cannot serialise %r" % type(obj).__name__)


def _need(d, *keys):
    missing = [k for k in keys if k not in d]
    if missing:
        raise ParseError("bundle of kind %r lacks %s" % (d.get("kind"), ", ".join(missing)))


def from_json(d):
    """Rebuild a structure from a bundle dict (no axiom checks)."""
    from .freeconstruct import make_data
    from .quadratic import QuadraticModule
    from .simplicial import TruncatedSimplicialAlgebra
    from .square import CrossedSquare
    from .twocrossed import TwoCrossedModule

    if not isinstance(d, dict):
        raise ParseError("bundle must be a JSON object")
    kind = d.get("kind")
    label = str(d.get("label", ""))
    try:
        if kind in ("precrossed", "crossed", "nil2"):
            _need(d, "C", "R", "boundary", "action")
            C, R = algebra_from_json(d["C"]), algebra_from_json(d["R"])
            _same_p(C, R)
            cls = {"precrossed": PreCrossedModule, "crossed": CrossedModule, "nil2": Nil2Module}[kind]
            return cls(C, R, morphism_from_json(d["boundary"], C, R), action_from_json(d["action"], R, C), label)
        if kind == "2crossed":
            _need(d, "C2", "C1", "C0", "d2", "d1", "act0on1", "act0on2", "lifting")
            C2, C1, C0 = (algebra_from_json(d[k]) for k in ("C2", "C1", "C0"))
            _same_p(C2, C1, C0)
            return TwoCrossedModule(
                C2, C1, C0, morphism_from_json(d["d2"], C2, C1), morphism_from_json(d["d1"], C1, C0),
                action_from_json(d["act0on1"], C0, C1), action_from_json(d["act0on2"], C0, C2),
                bilinear_from_json(d["lifting"], C1, C1, C2), label=label,
            )
        if kind == "square":
            _need(d, "L", "M", "N", "R", "lambda", "lambdap", "mu", "nu", "actRL", "actRM", "actRN", "h")
            L, M, N, R = (algebra_from_json(d[k]) for k in ("L", "M", "N", "R"))
            _same_p(L, M, N, R)
            return CrossedSquare(
                L, M, N, R,
                morphism_from_json(d["lambda"], L, M), morphism_from_json(d["lambdap"], L, N),
                morphism_from_json(d["mu"], M, R), morphism_from_json(d["nu"], N, R),
                action_from_json(d["actRL"], R, L), action_from_json(d["actRM"], R, M), action_from_json(d["actRN"], R, N),
                bilinear_from_json(d["h"], M, N, L), label=label,
            )
        if kind == "quadratic":
            _need(d, "L", "M", "N", "C", "delta", "boundary", "quotC", "actNL", "actNM", "omega", "w")
            L, M, N, C = (algebra_from_json(d[k]) for k in ("L", "M", "N", "C"))
            _same_p(L, M, N, C)
            quotC = morphism_from_json(d["quotC"], M, C)
            from .linalg import solve

            sec = solve(quotC.matrix, np.eye(C.dim, dtype=np.int64), C.p) if C.dim else np.zeros((M.dim, 0), dtype=np.int64)
            if sec is None:
                raise ParseError("quotC is not surjective")
            quotC.section = sec
            return QuadraticModule(
                L, M, N, morphism_from_json(d["delta"], L, M), morphism_from_json(d["boundary"], M, N),
                action_from_json(d["actNL"], N, L), action_from_json(d["actNM"], N, M),
                C, quotC, bilinear_from_json(d["omega"], C, C, L), bilinear_from_json(d["w"], C, C, M), label=label,
            )
        if kind == "simplicial":
            _need(d, "levels", "faces", "degeneracies")
            levels = [algebra_from_json(a) for a in d["levels"]]
            if len(levels) != 4:
                raise ParseError("a simplicial bundle needs 4 levels")
            _same_p(*levels)
            fr = d["faces"]
            if len(fr) == 3:
                fr = [[]] + list(fr)
            if len(fr) != 4 or any(len(fr[n]) != n + 1 for n in range(1, 4)):
                raise ParseError("faces must list d_0..d_n for n = 1, 2, 3")
            faces = [[]] + [[morphism_from_json(fr[n][i], levels[n], levels[n - 1]) for i in range(n + 1)] for n in range(1, 4)]
            dg = d["degeneracies"]
            if len(dg) != 3 or any(len(dg[n]) != n + 1 for n in range(3)):
                raise ParseError("degeneracies must list s_0..s_n for n = 0, 1, 2")
            degens = [[morphism_from_json(dg[n][i], levels[n], levels[n + 1]) for i in range(n + 1)] for n in range(3)]
            return TruncatedSimplicialAlgebra(levels, faces, degens, label=label)
        if kind == "construction_data":
            _need(d, "R", "X")
            R = algebra_from_json(d["R"])
            xs = [(x["name"], x.get("vartheta", [0] * R.dim)) for x in d["X"]]
            ys = [(y["name"], y.get("psi", {})) for y in d.get("Y", [])]
            return make_data(R, xs, ys, degree_cap=int(d.get("degree_cap", 3)), weights=d.get("weights"), label=label)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, AlgebraError):
            raise
        raise ParseError("malformed %r bundle: %s" % (kind, e)) from e
    raise UnknownKind("unknown kind %r" % (kind,))


def _same_p(*algs):
    ps = {A.p for A in algs}
    if len(ps) > 1:
        raise ParseError("algebras over different primes %r" % sorted(ps))


def load(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e)) from e
    if not text.strip():
        raise ParseError("%s is empty" % path)
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("%s is not valid JSON: %s" % (path, e)) from e
    return d


def dumps(d):
    """Canonical JSON text (sorted keys) so equal inputs give equal bytes."""
    from .report import plain

    return json.dumps(plain(d), sort_keys=True, indent=1) + "\n"


def save(obj, path):
    d = obj if isinstance(obj, dict) else to_json(obj)
    with open(path, "w") as fh:
        fh.write(dumps(d))
