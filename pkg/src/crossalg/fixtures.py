"""Constructive generators of valid structures for tests and the CLI.

Everything here is built from pieces that are valid by construction
(monomial algebras, ideals, quotients, semidirect products, skeleta), so
no rejection sampling over raw tensors is ever needed.
"""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import (
    ActionTensor,
    AlgebraMorphism,
    BilinearMap,
    FiniteAlgebra,
    direct_product,
    ideal_generated,
    quotient_algebra,
    restricted_action,
    subalgebra,
)
from .crossed import CrossedModule, PreCrossedModule
from .linalg import Subspace
from .square import CrossedSquare

PRIMES = (2, 3, 5)


def monomials(nvars, lo, hi):
    """Exponent tuples of total degree ``lo..hi`` in graded-lex order."""
    out = []
    for deg in range(lo, hi + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def monomial_algebra(p, nvars, degree, unital=False, killed=(), label=""):
    """``k[x_1..x_n]`` modulo monomials of degree > ``degree`` and ``killed``.

    Non-unital when ``unital`` is false (positive part only).  ``killed``
    lists exponent tuples; their multiples are removed as well.
    """
    killed = [tuple(k) for k in killed]

    def dead(e):
        return any(all(a >= b for a, b in zip(e, k)) for k in killed)

    basis = [e for e in monomials(nvars, 0 if unital else 1, degree) if not dead(e)]
    index = {e: i for i, e in enumerate(basis)}
    ent = []
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            c = tuple(x + y for x, y in zip(a, b))
            if c in index:
                ent.append((i, j, index[c], 1))
    A = FiniteAlgebra.from_entries(p, len(basis), ent, label=label or "mono(%d,%d%s)" % (nvars, degree, ",1" if unital else ""))
    A.certificate = "monomial algebra"
    A.monomial_basis = basis
    return A


def random_algebra(rng, p, max_dim=6, unital=None):
    """A small certified commutative algebra drawn from several families."""
    while True:
        kind = int(rng.integers(0, 5))
        u = bool(rng.integers(0, 2)) if unital is None else unital
        if kind == 0:
            A = monomial_algebra(p, 1, int(rng.integers(1, max_dim + 1)), unital=u)
        elif kind == 1:
            A = monomial_algebra(p, 2, int(rng.integers(1, 3)), unital=u)
        elif kind == 2:
            A = monomial_algebra(p, 2, 3, unital=u, killed=[(2, 0), (0, 2)])
        elif kind == 3:
            A = FiniteAlgebra.zero_mult(p, int(rng.integers(1, 4)))
            if u:
                A = direct_product(monomial_algebra(p, 1, 0, unital=True), A)
        else:
            B = monomial_algebra(p, 2, 2, unital=u)
            g = rng.integers(0, p, size=(1, B.dim))
            I = ideal_generated(B, g)
            if I.dim == B.dim:
                continue
            A, _ = quotient_algebra(B, I)
        if 0 < A.dim <= max_dim:
            return A


def random_ideal(rng, A, ngens=1):
    g = rng.integers(0, A.p, size=(ngens, A.dim))
    return ideal_generated(A, g)


# ----------------------------------------------------------------------
# crossed modules


def ideal_crossed_module(R, I):
    """Inclusion ``I -> R`` of an ideal with the multiplication action."""
    B, inc = subalgebra(R, I)
    act = restricted_action(ActionTensor.by_multiplication(R), inc)
    return CrossedModule(B, R, inc, act, label="%s<%s" % (B.label, R.label))


def module_crossed_module(R, J=None):
    """``R/J`` (or ``R``) as a zero-multiplication module, zero boundary."""
    if J is None:
        J = Subspace(R.p, R.dim)
    Q, q = quotient_algebra(R, J)
    Z = FiniteAlgebra.zero_mult(R.p, Q.dim, label="(%s)0" % Q.label)
    t = np.einsum("rck,qk,cb->rbq", R.dense, q.matrix, q.section) % R.p if R.dim else np.zeros((0, 0, 0))
    act = ActionTensor(R, Z, t)
    return CrossedModule(Z, R, AlgebraMorphism.zero(Z, R), act, label="mod(%s)" % Q.label)


def truncated_precrossed(p, degree):
    """``k[x]^+/(x^degree) -> k`` with zero boundary and trivial action."""
    A = monomial_algebra(p, 1, degree - 1)
    k = monomial_algebra(p, 1, 0, unital=True, label="k")
    return PreCrossedModule(A, k, AlgebraMorphism.zero(A, k), ActionTensor.trivial(k, A), label="k[x]+/(x^%d)" % degree)


def random_crossed_module(rng, p, max_dim=6):
    R = random_algebra(rng, p, max_dim)
    if rng.integers(0, 2):
        return ideal_crossed_module(R, random_ideal(rng, R))
    J = random_ideal(rng, R) if rng.integers(0, 2) else None
    return module_crossed_module(R, J)


# ----------------------------------------------------------------------
# crossed squares


def ideal_square(R, M, N):
    """``(M /\\ N, M, N, R)`` for ideals ``M``, ``N`` with ``h(m, n) = mn``."""
    p = R.p
    L = M.intersect(N)
    mult = ActionTensor.by_multiplication(R)
    Ma, incM = subalgebra(R, M)
    Na, incN = subalgebra(R, N)
    La, incL = subalgebra(R, L)
    # lam, lamp: coordinates of L's basis inside M and N
    lam = AlgebraMorphism(La, Ma, M.coords(L.basis).T if L.dim else np.zeros((Ma.dim, 0)))
    lamp = AlgebraMorphism(La, Na, N.coords(L.basis).T if L.dim else np.zeros((Na.dim, 0)))
    H = np.zeros((Ma.dim, Na.dim, La.dim), dtype=np.int64)
    for i, m in enumerate(M.basis):
        prods = (N.basis @ R.left_matrix(m).T) % p
        if La.dim:
            H[i] = L.coords(prods)
    S = CrossedSquare(
        La, Ma, Na, R, lam, lamp, incM, incN,
        restricted_action(mult, incL), restricted_action(mult, incM), restricted_action(mult, incN),
        BilinearMap(Ma, Na, La, H), label="ideals(%s)" % R.label,
    )
    return S


def crossed_module_square(cm):
    """``(M, M, R, R)`` with ``lam = id``, ``lamp = mu``, ``nu = id``, ``h(m, r) = r.m``."""
    M, R = cm.C, cm.R
    H = cm.action.tensor.transpose(1, 0, 2)  # (m, r, k)
    S = CrossedSquare(
        M, M, R, R,
        AlgebraMorphism.identity(M), cm.boundary, cm.boundary, AlgebraMorphism.identity(R),
        cm.action, cm.action, ActionTensor.by_multiplication(R),
        BilinearMap(M, R, M, H), label="sq(%s)" % cm.label,
    )
    return S


def random_square(rng, p, max_dim=6):
    kind = int(rng.integers(0, 2))
    if kind == 0:
        R = random_algebra(rng, p, max_dim)
        return ideal_square(R, random_ideal(rng, R), random_ideal(rng, R))
    return crossed_module_square(random_crossed_module(rng, p, max_dim))


# ----------------------------------------------------------------------
# pre-crossed and nil(2)-modules


def free_precrossed(E):
    """``d1: ker d0 -> E0`` with ``E0`` acting through ``s0``."""
    from .algebra import ActionTensor as _A
    from .linalg import kernel_of

    p = E.p
    E0, E1 = E.levels[0], E.levels[1]
    Mspace = kernel_of(E.faces[1][0].matrix, p)
    M, inc = subalgebra(E1, Mspace, label="ker d0")
    d = AlgebraMorphism(M, E0, E.faces[1][1].matrix @ inc.matrix)
    s0 = E.degens[0][0]
    t = np.zeros((E0.dim, M.dim, M.dim), dtype=np.int64)
    for r in range(E0.dim):
        er = np.zeros(E0.dim, dtype=np.int64)
        er[r] = 1
        if M.dim:
            t[r] = Mspace.coords((Mspace.basis @ E1.left_matrix(s0(er)).T) % p)
    return PreCrossedModule(M, E0, d, _A(E0, M, t), label="free(%s)" % E.label)


def random_precrossed(rng, p, max_dim=6):
    from .crossed import semidirect_precrossed

    kind = int(rng.integers(0, 3))
    if kind == 0:
        return truncated_precrossed(p, int(rng.integers(2, 6)))
    if kind == 1:
        return free_precrossed(random_skeleton(rng, p, level=1, max_cap=3))
    a = random_crossed_module(rng, p, max_dim=3)
    b = ideal_crossed_module(a.R, random_ideal(rng, a.R))
    X, _, _ = semidirect_precrossed(a, b)
    return X


def random_nil2(rng, p, max_dim=6):
    from .crossed import nil2_quotient

    return nil2_quotient(random_precrossed(rng, p, max_dim))


# ----------------------------------------------------------------------
# construction data and skeleta


def random_base(rng, p):
    """A unital graded base ``k`` or ``k[t]/(t^m)`` with its weights."""
    m = int(rng.integers(1, 4))
    R = monomial_algebra(p, 1, m - 1, unital=True, label="k" if m == 1 else "k[t]/(t^%d)" % m)
    return R, tuple(range(m))


def random_construction_data(rng, p, nx=None, ny=None, degree_cap=None):
    """``|X| <= 2``, ``|Y| <= 1``; ``psi`` is drawn among cycles that fit the cap."""
    from .freeconstruct import ConstructionData, InvalidConstructionData, DegreeCapTooSmall, check_psi

    R, w = random_base(rng, p)
    nx = int(rng.integers(0, 3)) if nx is None else nx
    ny = int(rng.integers(0, 2)) if ny is None else ny
    d = int(rng.integers(3, 5)) if degree_cap is None else degree_cap
    vt = np.zeros((nx, R.dim), dtype=np.int64)
    for g in range(nx):
        if R.dim > 1 and rng.integers(0, 2):
            vt[g, 1:] = rng.integers(0, p, size=R.dim - 1)
    names = ["x%d" % (g + 1) for g in range(nx)]
    base = ConstructionData(R, names, vt, degree_cap=d, weights=w, label="rnd")
    if ny == 0 or nx == 0:
        return base
    one = np.zeros(R.dim, dtype=np.int64)
    one[0] = 1
    cands = []
    for g in range(nx):
        e = [0] * nx
        for k in (2, 3):
            e2 = list(e)
            e2[g] = k
            cands.append({tuple(e2): one})
        e1 = list(e)
        e1[g] = 1
        for b in range(1, R.dim):
            row = np.zeros(R.dim, dtype=np.int64)
            row[b] = 1
            cands.append({tuple(e1): row})
    if nx == 2:
        # Koszul cycle vartheta(x2) x1 - vartheta(x1) x2
        cands.append({(1, 0): vt[1], (0, 1): (-vt[0]) % p})
        cands.append({(1, 1): one})
    rng.shuffle(cands)
    for psi in cands:
        if not any(np.any(v) for v in psi.values()):
            continue
        data = ConstructionData(R, names, vt, ["y"], [psi], d, w, label="rnd")
        try:
            check_psi(data)
        except (InvalidConstructionData, DegreeCapTooSmall):
            continue
        return data
    return base


def random_skeleton(rng, p, level=None, max_cap=3):
    from .freeconstruct import build_skeleton

    level = int(rng.integers(0, 3)) if level is None else level
    data = random_construction_data(rng, p, degree_cap=int(rng.integers(2, max_cap + 1)) if max_cap > 2 else 2)
    if level < 2:
        data = data.without_Y()
    return build_skeleton(data, level)


def vertex_functions(R):
    """``E_n = R^{n+1}`` (functions on the vertices of ``[n]``); ``d_i`` drops
    coordinate ``i`` and ``s_i`` repeats it. Contractible: ``d_1`` is onto
    from ``NE_1`` and all homotopy vanishes.
    """
    from .simplicial import TOP, TruncatedSimplicialAlgebra

    levels = [R]
    for n in range(1, TOP + 1):
        levels.append(direct_product(levels[-1], R, label="%s^%d" % (R.label, n + 1)))
    m = R.dim
    eye = np.eye(m, dtype=np.int64)

    def reindex(src_n, tgt_n, pick):
        # coordinate j of the target is coordinate pick(j) of the source
        M = np.zeros(((tgt_n + 1) * m, (src_n + 1) * m), dtype=np.int64)
        for j in range(tgt_n + 1):
            k = pick(j)
            M[j * m : (j + 1) * m, k * m : (k + 1) * m] = eye
        return AlgebraMorphism(levels[src_n], levels[tgt_n], M)

    faces = [[]] + [[reindex(n, n - 1, lambda j, i=i: j if j < i else j + 1) for i in range(n + 1)] for n in range(1, TOP + 1)]
    degens = [[reindex(n, n + 1, lambda j, i=i: j if j <= i else j - 1) for i in range(n + 1)] for n in range(TOP)]
    return TruncatedSimplicialAlgebra(levels, faces, degens, label="vert(%s)" % R.label)


# ----------------------------------------------------------------------
# 2-crossed and quadratic modules


def random_2crossed(rng, p, max_dim=6):
    from .simplicial import two_crossed_from_simplicial
    from .twocrossed import from_crossed_module, two_crossed_from_square

    kind = int(rng.integers(0, 3))
    if kind == 0:
        return two_crossed_from_square(random_square(rng, p, max_dim))
    if kind == 1:
        return from_crossed_module(random_crossed_module(rng, p, max_dim))
    E = random_skeleton(rng, p, level=int(rng.integers(1, 3)))
    return two_crossed_from_simplicial(E, use_degenerate=bool(rng.integers(0, 2)))


def random_quadratic(rng, p, max_dim=6):
    from .quadratic import quadratic_from_2crossed, quadratic_from_nil2

    if rng.integers(0, 4) == 0:
        # L = 0 needs w = 0, i.e. a crossed base
        return quadratic_from_nil2(random_crossed_module(rng, p, max_dim))
    return quadratic_from_2crossed(random_2crossed(rng, p, max_dim))


def random_fixture(kind, seed=0, p=3):
    """One fixture of the named bundle kind, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    makers = {
        "crossed": random_crossed_module,
        "precrossed": random_precrossed,
        "nil2": random_nil2,
        "2crossed": random_2crossed,
        "square": random_square,
        "quadratic": random_quadratic,
        "simplicial": lambda r, q: random_skeleton(r, q),
        "construction_data": lambda r, q: random_construction_data(r, q),
    }
    if kind not in makers:
        raise KeyError(kind)
    return makers[kind](rng, p)


# ----------------------------------------------------------------------
# mutations (serialised bundles with one entry perturbed)

_COMPONENTS = {
    "precrossed": [("boundary", "map", ("C", "R")), ("action", "tensor", ("R", "C", "C"))],
    "2crossed": [
        ("d2", "map", ("C2", "C1")), ("d1", "map", ("C1", "C0")),
        ("act0on1", "tensor", ("C0", "C1", "C1")), ("act0on2", "tensor", ("C0", "C2", "C2")),
        ("lifting", "tensor", ("C1", "C1", "C2")),
    ],
    "square": [
        ("lambda", "map", ("L", "M")), ("lambdap", "map", ("L", "N")), ("mu", "map", ("M", "R")), ("nu", "map", ("N", "R")),
        ("actRL", "tensor", ("R", "L", "L")), ("actRM", "tensor", ("R", "M", "M")), ("actRN", "tensor", ("R", "N", "N")),
        ("h", "tensor", ("M", "N", "L")),
    ],
    "quadratic": [
        ("delta", "map", ("L", "M")), ("boundary", "map", ("M", "N")),
        ("actNL", "tensor", ("N", "L", "L")), ("actNM", "tensor", ("N", "M", "M")), ("omega", "tensor", ("C", "C", "L")),
    ],
}
_COMPONENTS["crossed"] = _COMPONENTS["nil2"] = _COMPONENTS["precrossed"]


def _simplicial_components(d):
    dims = [a["dim"] for a in d["levels"]]
    faces = d["faces"][1:] if len(d["faces"]) == 4 else d["faces"]
    out = []
    for n, row in enumerate(faces, start=1):
        out += [(("faces", n if len(d["faces"]) == 4 else n - 1, i), (dims[n], dims[n - 1])) for i in range(len(row))]
    for n, row in enumerate(d["degeneracies"]):
        out += [(("degeneracies", n, i), (dims[n], dims[n + 1])) for i in range(len(row))]
    return out


def mutate_bundle(d, rng):
    """Copy of bundle ``d`` with one entry of one structure map or tensor raised by 1.

    Returns ``(component name, mutated dict)``; algebras are left untouched.
    """
    import copy

    d = copy.deepcopy(d)
    kind = d["kind"]
    if kind == "simplicial":
        comps = [(path, shape) for path, shape in _simplicial_components(d) if shape[0] * shape[1]]
        path, (src, tgt) = comps[int(rng.integers(len(comps)))]
        m = d[path[0]][path[1]][path[2]]["matrix"]
        i, j = int(rng.integers(tgt)), int(rng.integers(src))
        m[i][j] += 1
        return "%s[%d][%d]" % path, d
    dims = {k: v["dim"] for k, v in d.items() if isinstance(v, dict) and "dim" in v}
    comps = []
    for key, form, algs in _COMPONENTS[kind]:
        shape = tuple(dims[a] for a in algs)
        if all(shape):
            comps.append((key, form, shape))
    key, form, shape = comps[int(rng.integers(len(comps)))]
    if form == "map":
        src, tgt = shape
        i, j = int(rng.integers(tgt)), int(rng.integers(src))
        d[key]["matrix"][i][j] += 1
    else:
        d[key].append([int(rng.integers(s)) for s in shape] + [1])
    return key, d
