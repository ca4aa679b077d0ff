"""3-truncated simplicial algebras and their Moore complexes.

``faces[n][i]`` is ``d_i: E_n -> E_{n-1}`` for ``1 <= n <= 3`` and
``degens[n][i]`` is ``s_i: E_n -> E_{n+1}`` for ``0 <= n <= 2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    ActionTensor,
    AlgebraError,
    AlgebraIdeal,
    AlgebraMorphism,
    BilinearMap,
    FiniteAlgebra,
    ideal_generated,
    quotient_algebra,
    subalgebra,
)
from .linalg import Subspace, image_of, intersect_all, kernel_of
from .report import HomotopyProfile, Report, first_nonzero, subquotient

TOP = 3


class SimplicialInvalid(AlgebraError):
    def __init__(self, report):
        fails = report.failures()
        super().__init__("simplicial identities fail: %s" % (fails[0].name if fails else "?"))
        self.report = report


class HypothesisFailed(AlgebraError):
    pass


class TruncatedSimplicialAlgebra:
    kind = "simplicial"

    def __init__(self, levels, faces, degens, label=""):
        self.levels = list(levels)
        self.faces = [list(f) for f in faces]
        self.degens = [list(s) for s in degens]
        self.p = self.levels[0].p
        self.label = label

    def __repr__(self):
        return "TruncatedSimplicialAlgebra(%s: %s)" % (self.label or "?", [E.dim for E in self.levels])

    def d(self, n, i):
        return self.faces[n][i]

    def s(self, n, i):
        return self.degens[n][i]

    @classmethod
    def constant(cls, R, label=""):
        ident = AlgebraMorphism.identity(R)
        faces = [[]] + [[ident] * (n + 1) for n in range(1, TOP + 1)]
        degens = [[ident] * (n + 1) for n in range(TOP)]
        return cls([R] * (TOP + 1), faces, degens, label=label or "const(%s)" % R.label)


def _eq(A, B, p):
    return first_nonzero((A - B) % p)


def check_simplicial(E, report=None):
    rep = report or Report("simplicial")
    p = E.p
    ok_shape = len(E.levels) == TOP + 1 and all(len(E.faces[n]) == n + 1 for n in range(1, TOP + 1)) and all(
        len(E.degens[n]) == n + 1 for n in range(TOP)
    )
    rep.add("shape", ok_shape, (len(E.levels), [len(r) for r in E.faces], [len(r) for r in E.degens]))
    if not ok_shape:
        return rep
    bad = None
    for n in range(1, TOP + 1):
        for i, f in enumerate(E.faces[n]):
            v = f.multiplicativity_violation()
            if v is not None:
                bad = ("d", n, i, v)
                break
        if bad:
            break
    if bad is None:
        for n in range(TOP):
            for i, f in enumerate(E.degens[n]):
                v = f.multiplicativity_violation()
                if v is not None:
                    bad = ("s", n, i, v)
                    break
            if bad:
                break
    rep.add("multiplicative", bad is None, bad)

    D = lambda n, i: E.faces[n][i].matrix
    S = lambda n, i: E.degens[n][i].matrix
    # d_i d_j = d_{j-1} d_i, i < j, on E_n
    bad = None
    for n in range(2, TOP + 1):
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                w = _eq(D(n - 1, i) @ D(n, j), D(n - 1, j - 1) @ D(n, i), p)
                if w is not None:
                    bad = ("n=%d" % n, i, j, w[1])
                    break
            if bad:
                break
        if bad:
            break
    rep.add("face-face", bad is None, bad)
    # s_i s_j = s_{j+1} s_i, i <= j, on E_n
    bad = None
    for n in range(0, TOP - 1):
        for i in range(n + 1):
            for j in range(i, n + 1):
                w = _eq(S(n + 1, i) @ S(n, j), S(n + 1, j + 1) @ S(n, i), p)
                if w is not None:
                    bad = ("n=%d" % n, i, j, w[1])
                    break
            if bad:
                break
        if bad:
            break
    rep.add("degeneracy-degeneracy", bad is None, bad)
    # d_i s_j on E_n, with s_j: E_n -> E_{n+1}
    bad = None
    for n in range(0, TOP):
        eye = np.eye(E.levels[n].dim, dtype=np.int64)
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = D(n + 1, i) @ S(n, j)
                if i < j:
                    rhs = S(n - 1, j - 1) @ D(n, i)
                elif i in (j, j + 1):
                    rhs = eye
                else:
                    rhs = S(n - 1, j) @ D(n, i - 1)
                w = _eq(lhs, rhs, p)
                if w is not None:
                    bad = ("n=%d" % n, i, j, w[1])
                    break
            if bad:
                break
        if bad:
            break
    rep.add("face-degeneracy", bad is None, bad)
    return rep


def validate(E):
    rep = check_simplicial(E)
    if not rep.ok:
        raise SimplicialInvalid(rep)
    return E


# ----------------------------------------------------------------------
# Moore complex


class MooreComplex:
    """``NE_n = /\\_{i<n} ker d_i`` with boundaries induced by ``d_n``.

    ``spaces[n]`` are subspaces of ``E_n``; ``algebras[n]`` the induced
    algebras (basis = RREF basis of the subspace); ``inclusions[n]``
    ``NE_n -> E_n``; ``boundaries[n]`` ``NE_n -> NE_{n-1}`` in coordinates.
    """

    def __init__(self, E):
        self.E = E
        p = E.p
        self.spaces = [Subspace.full(p, E.levels[0].dim)]
        for n in range(1, TOP + 1):
            ks = [kernel_of(E.faces[n][i].matrix, p) for i in range(n)]
            self.spaces.append(intersect_all(ks, p, E.levels[n].dim))
        self.algebras = []
        self.inclusions = []
        for n, V in enumerate(self.spaces):
            A, inc = subalgebra(E.levels[n], V, label="NE%d" % n)
            self.algebras.append(A)
            self.inclusions.append(inc)
        self.boundaries = [None]
        for n in range(1, TOP + 1):
            img = E.faces[n][n](self.spaces[n].basis)  # rows in E_{n-1}
            if not self.spaces[n - 1].contains(img):
                raise AlgebraError("d_%d does not map NE_%d into NE_%d" % (n, n, n - 1))
            M = self.spaces[n - 1].coords(img).T
            self.boundaries.append(AlgebraMorphism(self.algebras[n], self.algebras[n - 1], M))

    def image(self, n):
        """``d_n(NE_n)`` as a subspace of ``E_{n-1}``."""
        return Subspace(self.E.p, self.E.levels[n - 1].dim, self.E.faces[n][n](self.spaces[n].basis))

    def check(self, report=None):
        rep = report or Report("moore")
        p = self.E.p
        for n in range(2, TOP + 1):
            comp = (self.boundaries[n - 1].matrix @ self.boundaries[n].matrix) % p
            rep.add("dd=0@%d" % n, not comp.any(), first_nonzero(comp))
        return rep


def moore(E, check=True):
    if check:
        validate(E)
    return MooreComplex(E)


def moore_homotopy(E, check=True):
    """``(0, NE0/dNE1, ker d1/dNE2, ker d2/dNE3)``; raw ``pi0`` kept in ``extra``."""
    N = moore(E, check)
    p = E.p
    ims, kers = [None], [None]
    for n in range(1, TOP + 1):
        ims.append(image_of(N.boundaries[n].matrix, p))
        kers.append(kernel_of(N.boundaries[n].matrix, p))
    full0 = Subspace.full(p, N.algebras[0].dim)
    h0 = full0.dim - ims[1].dim
    h1 = kers[1].dim - ims[2].dim
    h2 = kers[2].dim - ims[3].dim
    wit = {1: subquotient(full0, ims[1]), 2: subquotient(kers[1], ims[2]), 3: subquotient(kers[2], ims[3])}
    return HomotopyProfile((0, h0, h1, h2), wit, extra={"raw_pi0": h0, "truncation_relative": [3]})


# ----------------------------------------------------------------------
# degenerate ideals and the Peiffer pairing inclusion


def degenerate_ideal(E, n):
    """Ideal ``D_n`` of ``E_n`` generated by all degenerate elements; ``.is_everything``."""
    if not 1 <= n <= TOP:
        raise ValueError("degenerate_ideal needs 1 <= n <= %d" % TOP)
    rows = [E.degens[n - 1][i].matrix.T for i in range(n)]
    I = ideal_generated(E.levels[n], np.vstack(rows))
    I.is_everything = I.dim == E.levels[n].dim
    return I


def vertex_map(E, n, j):
    """``E_n -> E_0`` induced by the vertex ``j`` of ``[n]``."""
    f = AlgebraMorphism.identity(E.levels[n])
    while n > 0:
        i = n if j < n else 0
        f = E.faces[n][i].compose(f)
        j = j if j < n else j - 1
        n -= 1
    return f


def sub_simplicial(E, spaces, label=""):
    """Sub-simplicial algebra on subalgebras ``spaces[n]`` stable under all operators."""
    p = E.p
    subs = [subalgebra(E.levels[n], V, label="%s_%d" % (label or "sub", n)) for n, V in enumerate(spaces)]

    def restrict(f, src, tgt):
        img = f(spaces[src].basis).reshape(spaces[src].dim, E.levels[tgt].dim)
        if not spaces[tgt].contains(img):
            raise AlgebraError("operator does not preserve the subalgebras")
        return AlgebraMorphism(subs[src][0], subs[tgt][0], spaces[tgt].coords(img).T % p)

    faces = [[]] + [[restrict(f, n, n - 1) for f in E.faces[n]] for n in range(1, TOP + 1)]
    degens = [[restrict(s, n, n + 1) for s in E.degens[n]] for n in range(TOP)]
    return TruncatedSimplicialAlgebra([B for B, _ in subs], faces, degens, label=label)


def augmentation(E, J=None):
    """Levelwise ``{e : v(e) in J for every vertex map v}`` with ``J`` an ideal of ``E_0`` (default 0).

    The result is a non-unital sub-simplicial algebra, so ``D_n = E_n`` can
    fail for it (a generator that is not degenerate stays outside ``D_n``).
    """
    p = E.p
    J = J if J is not None else Subspace(p, E.levels[0].dim)
    spaces = []
    for n in range(TOP + 1):
        V = Subspace.full(p, E.levels[n].dim)
        for j in range(n + 1):
            M = vertex_map(E, n, j).matrix
            V = V.intersect(_preimage(M, J, p))
        spaces.append(V)
    return sub_simplicial(E, spaces, label="aug(%s)" % (E.label or "E"))


def _preimage(M, J, p):
    """``{v : M v in J}`` for a matrix ``M`` (codomain x domain)."""
    n_out, n_in = M.shape
    # stack [M | -J^T] and take the kernel, projecting to the first block
    big = np.hstack([M, (-J.basis.T) % p]) if J.dim else M
    K = kernel_of(big % p, p)
    return Subspace(p, n_in, K.basis[:, :n_in])


def product_space(A, U, W):
    """Span of all products ``u w`` for ``u`` in ``U`` and ``w`` in ``W``."""
    S = Subspace(A.p, A.dim)
    if U.dim == 0 or W.dim == 0:
        return S
    for u in U.basis:
        S = S + Subspace(A.p, A.dim, (W.basis @ A.left_matrix(u).T) % A.p)
    return S


def check_peiffer_inclusion(E, n, report=None):
    rep = report or Report("peiffer-inclusion n=%d" % n)
    D = degenerate_ideal(E, n)
    if not D.is_everything:
        raise HypothesisFailed("D_%d != E_%d (dim %d < %d)" % (n, n, D.dim, E.levels[n].dim))
    p = E.p
    A = E.levels[n - 1]
    ks = [kernel_of(E.faces[n - 1][i].matrix, p) for i in range(n)]
    idx = list(range(n))
    subsets = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(idx, r)]
    K = {I: intersect_all([ks[i] for i in I], p, A.dim) for I in subsets}
    total = Subspace(p, A.dim)
    pairs = []
    for I in subsets:
        for J in subsets:
            if I | J == frozenset(idx) and sorted(I) <= sorted(J):
                pairs.append((sorted(I), sorted(J)))
                total = total + product_space(A, K[I], K[J])
    target = moore(E, check=False).image(n)
    rep.add("sum K_I K_J <= d_%d(NE_%d)" % (n, n), total <= target, None if total <= target else target.reduce(total.basis)[0])
    rep.note("pairs=%d dim(sum)=%d dim(image)=%d" % (len(pairs), total.dim, target.dim))
    return rep


# ----------------------------------------------------------------------
# 2-crossed module and crossed square of a simplicial algebra


def _cross_terms(E, N, X, Y):
    """Rows ``s1 x (s1 y - s0 y)`` in ``E_2`` for rows ``x, y`` of ``E_1``."""
    p = E.p
    E2 = E.levels[2]
    s0, s1 = E.degens[1][0], E.degens[1][1]
    out = np.zeros((X.shape[0], Y.shape[0], E2.dim), dtype=np.int64)
    diffs = (s1(Y) - s0(Y)) % p
    for a, x in enumerate(X):
        out[a] = (diffs @ E2.left_matrix(s1(x)).T) % p
    return out


def two_crossed_from_simplicial(E, use_degenerate=True, check=True):
    """``NE2/d3(NE3 /\\ D3) -> NE1 -> NE0`` with ``{x (x) y} = s1x(s1y - s0y)``.

    With ``use_degenerate=False`` the top is ``NE2/d3(NE3)`` instead.
    """
    from .twocrossed import TwoCrossedModule

    N = moore(E, check)
    p = E.p
    E1, E2 = E.levels[1], E.levels[2]
    NE2 = N.spaces[2]
    if use_degenerate:
        D3 = degenerate_ideal(E, 3)
        top = N.spaces[3].intersect(D3)
    else:
        top = N.spaces[3]
    img = Subspace(p, E2.dim, E.faces[3][3](top.basis))
    ideal = AlgebraIdeal(N.algebras[2], NE2.coords(img.basis))
    if not ideal.closed:
        raise AlgebraError("image of the top Moore term is not an ideal of NE2")
    C2, q2 = quotient_algebra(N.algebras[2], ideal, label="C2")
    C1, C0 = N.algebras[1], N.algebras[0]
    d2 = AlgebraMorphism(C2, C1, N.boundaries[2].matrix @ q2.section)
    d1 = N.boundaries[1]
    act1 = _degeneracy_action(C0, C1, N.inclusions[1], N.spaces[1], E.degens[0][0], E1)
    s00 = E.degens[1][0].compose(E.degens[0][0])
    act2_pre = _degeneracy_action(C0, N.algebras[2], N.inclusions[2], NE2, s00, E2)
    act2 = ActionTensor(C0, C2, np.einsum("rck,qk,cb->rbq", act2_pre.tensor, q2.matrix, q2.section) % p)
    X1 = N.spaces[1].basis
    T = _cross_terms(E, N, X1, X1)  # in E2, lies in NE2
    T = T.reshape(-1, E2.dim)
    Tc = q2(NE2.coords(T)).reshape(C1.dim, C1.dim, C2.dim)
    lift = BilinearMap(C1, C1, C2, Tc)
    X = TwoCrossedModule(C2, C1, C0, d2, d1, act1, act2, lift, label="2x(%s)" % E.label)
    X.moore = N
    X.top_projection = q2
    return X


def _degeneracy_action(R, C, inc, space, s, ambient):
    """``r.c = s(r) c`` for ``c`` in a subspace stable under ``s(R)``-multiplication."""
    p = R.p
    t = np.zeros((R.dim, C.dim, C.dim), dtype=np.int64)
    for r in range(R.dim):
        er = np.zeros(R.dim, dtype=np.int64)
        er[r] = 1
        prods = (space.basis @ ambient.left_matrix(s(er)).T) % p
        if C.dim:
            t[r] = space.coords(prods)
    return ActionTensor(R, C, t)


@dataclass
class FreeShape:
    """How a square ``M(E, 2)`` sits over ``E_0``.

    ``boundary``: the pre-crossed module ``d1: M = NE1 -> E0``;
    ``action``: ``E0`` acting on ``M`` through ``s0``;
    ``lift_R0``: ``s0: E0 -> E1 = R``; ``base_proj``: ``d1: E1 -> E0``; ``bar``: ``M -> N``, ``m -> m - s0 d1 m``;
    ``unbar``: its inverse ``N -> M``, ``n -> n - s0 d0 n``.
    """

    base: FiniteAlgebra
    boundary: AlgebraMorphism
    action: ActionTensor
    lift_R0: AlgebraMorphism
    base_proj: AlgebraMorphism
    bar: AlgebraMorphism
    unbar: AlgebraMorphism


def m_functor_2(E, check=True):
    """The crossed square ``M(E, 2)``.

    ``L = NE2/d3 NE3``, ``M = ker d0``, ``N = ker d1``, ``R = E1``; ``R`` acts
    on ``M`` and ``N`` by multiplication and on ``L`` through ``s1``;
    ``h(x, n) = s1 x (s1 y - s0 y)`` with ``y = n - s0 d0 n``.
    """
    from .square import CrossedSquare

    Nm = moore(E, check)
    p = E.p
    E0, E1, E2 = E.levels[0], E.levels[1], E.levels[2]
    d0, d1 = E.faces[1][0], E.faces[1][1]
    s0 = E.degens[0][0]
    Mspace = kernel_of(d0.matrix, p)
    Nspace = kernel_of(d1.matrix, p)
    Ma, incM = subalgebra(E1, Mspace, label="NE1")
    Na, incN = subalgebra(E1, Nspace, label="NbarE1")
    NE2 = Nm.spaces[2]
    img = Nm.image(3)
    ideal = AlgebraIdeal(Nm.algebras[2], NE2.coords(img.basis))
    if not ideal.closed:
        raise AlgebraError("d3(NE3) is not an ideal of NE2")
    L, q = quotient_algebra(Nm.algebras[2], ideal, label="L")
    # lam = lamp = d2 on NE2 (coordinates: NE2 -> E1 -> M or N)
    d2_rows = E.faces[2][2](NE2.basis)  # rows in E1
    d2_L = (q.section.T @ d2_rows) % p
    lam = AlgebraMorphism(L, Ma, Mspace.coords(d2_L).T if L.dim else np.zeros((Ma.dim, 0)))
    lamp = AlgebraMorphism(L, Na, Nspace.coords(d2_L).T if L.dim else np.zeros((Na.dim, 0)))
    mult = ActionTensor.by_multiplication(E1)
    from .algebra import restricted_action

    actRM = restricted_action(mult, incM)
    actRN = restricted_action(mult, incN)
    s1 = E.degens[1][1]
    pre = _degeneracy_action(E1, Nm.algebras[2], Nm.inclusions[2], NE2, s1, E2)
    actRL = ActionTensor(E1, L, np.einsum("rck,qk,cb->rbq", pre.tensor, q.matrix, q.section) % p)
    # h on basis pairs: x in M, n in N, y = n - s0 d0 n
    Xrows = Mspace.basis
    nrows = Nspace.basis
    Yrows = (nrows - s0(d0(nrows))) % p
    T = _cross_terms(E, Nm, Xrows, Yrows).reshape(-1, E2.dim)
    H = q(NE2.coords(T)).reshape(Ma.dim, Na.dim, L.dim) if L.dim else np.zeros((Ma.dim, Na.dim, 0), dtype=np.int64)
    S = CrossedSquare(L, Ma, Na, E1, lam, lamp, incM, incN, actRL, actRM, actRN, BilinearMap(Ma, Na, L, H), label="M(%s,2)" % E.label)
    # free-shape data
    dM = AlgebraMorphism(Ma, E0, d1.matrix @ incM.matrix)
    actM = _degeneracy_action(E0, Ma, incM, Mspace, s0, E1)
    bar_rows = (Xrows - s0(d1(Xrows))) % p
    unbar_rows = Yrows
    bar = AlgebraMorphism(Ma, Na, Nspace.coords(bar_rows).T if Na.dim else np.zeros((0, Ma.dim)))
    unbar = AlgebraMorphism(Na, Ma, Mspace.coords(unbar_rows).T if Ma.dim else np.zeros((0, Na.dim)))
    S.free_shape = FreeShape(E0, dM, actM, s0, AlgebraMorphism(E1, E0, d1.matrix), bar, unbar)
    S.moore = Nm
    S.top_projection = q
    return S
