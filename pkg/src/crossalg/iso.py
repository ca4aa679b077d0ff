"""Generator-first morphism and isomorphism search.

A morphism ``f: S -> T`` fixed on generators is recovered as the graph
``{(v, f v)}``: the smallest subspace of ``S x T`` containing the pairs
``(g, f g)`` that is closed under componentwise products and under paired
operators ``(A, B)`` (actions that ``f`` must intertwine).  ``f`` exists
iff the graph meets ``0 x T`` trivially; it is determined iff the graph
projects onto ``S``.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraError, AlgebraMorphism, direct_product
from .linalg import Subspace, kernel_of, rank, solve
from .report import Report, first_nonzero


class Inconsistent(AlgebraError):
    pass


class Underdetermined(AlgebraError):
    pass


def subalgebra_generated(A, gens, operators=()):
    """Smallest subspace containing ``gens`` closed under products and ``operators``."""
    p, n = A.p, A.dim
    gens = np.asarray(gens, dtype=np.int64).reshape(len(gens), n) % p
    S = Subspace(p, n, gens)
    frontier = S.basis
    ops = [np.asarray(o, dtype=np.int64) for o in operators]
    while frontier.shape[0]:
        imgs = []
        for v in frontier:
            if A.nnz:
                imgs.append((S.basis @ A.left_matrix(v).T) % p)
            for o in ops:
                imgs.append(((o @ v) % p).reshape(1, n))
        if not imgs:
            break
        new = S.reduce(np.vstack(imgs))
        new = new[np.any(new, axis=1)]
        if not new.shape[0]:
            break
        fresh = Subspace(p, n, new)
        S = S + fresh
        frontier = fresh.basis
    return S


def extend_by_words(S, T, gens, images, op_pairs=(), extra_pairs=()):
    """The unique multiplicative, intertwining linear map with ``gens -> images``.

    ``extra_pairs`` are ``(v, u)`` pairs to add to the graph without being
    generators of products (they are closed under products too).  Raises
    :class:`Inconsistent` if no such map exists and
    :class:`Underdetermined` if the words do not span ``S``.
    Returns an :class:`AlgebraMorphism`.
    """
    p = S.p
    P = direct_product(S, T)
    rows = []
    for g, u in zip(gens, images):
        rows.append(np.concatenate([np.asarray(g, dtype=np.int64), np.asarray(u, dtype=np.int64)]))
    for g, u in extra_pairs:
        rows.append(np.concatenate([np.asarray(g, dtype=np.int64), np.asarray(u, dtype=np.int64)]))
    rows = np.array(rows, dtype=np.int64).reshape(len(rows), S.dim + T.dim)
    ops = []
    for A, B in op_pairs:
        M = np.zeros((S.dim + T.dim, S.dim + T.dim), dtype=np.int64)
        M[: S.dim, : S.dim] = A
        M[S.dim :, S.dim :] = B
        ops.append(M)
    G = subalgebra_generated(P, rows, ops)
    left = G.basis[:, : S.dim] % p
    right = G.basis[:, S.dim :] % p
    # graph meets 0 x T trivially iff left has full row rank
    if rank(left, p) < G.dim:
        k = kernel_of(left.T, p)  # combinations c with c.left = 0
        bad = (k.basis[0] @ right) % p
        raise Inconsistent("a relation among words is not respected: witness %r" % (first_nonzero(bad),))
    if G.dim < S.dim:
        raise Underdetermined("words span %d of %d dimensions" % (G.dim, S.dim))
    F = solve(left, right, p)  # left @ F = right, F: S.dim x T.dim
    return AlgebraMorphism(S, T, F.T % p)


def is_bijective(f):
    return f.matrix.shape[0] == f.matrix.shape[1] and rank(f.matrix, f.domain.p) == f.matrix.shape[0]


def _unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def check_quadratic_morphism(Q1, Q2, fL, fM, fN, report=None):
    """Componentwise multiplicative maps commuting with ``delta``, ``d``, actions and ``omega``."""
    rep = report or Report("quadratic-morphism")
    p = Q1.p
    for name, f in (("L", fL), ("M", fM), ("N", fN)):
        v = f.multiplicativity_violation()
        rep.add("multiplicative-" + name, v is None, v)
    d1 = (Q2.delta.matrix @ fL.matrix - fM.matrix @ Q1.delta.matrix) % p
    rep.add("commutes-delta", not d1.any(), first_nonzero(d1))
    d2 = (Q2.boundary.matrix @ fM.matrix - fN.matrix @ Q1.boundary.matrix) % p
    rep.add("commutes-boundary", not d2.any(), first_nonzero(d2))
    bad = None
    for r in range(Q1.N.dim):
        er = _unit(Q1.N.dim, r)
        fr = fN(er)
        for tag, a1, a2, f in (("L", Q1.actNL, Q2.actNL, fL), ("M", Q1.actNM, Q2.actNM, fM)):
            diff = (f.matrix @ a1.matrix(er) - a2.matrix(fr) @ f.matrix) % p
            w = first_nonzero(diff)
            if w is not None:
                bad = (tag, r) + w
                break
        if bad:
            break
    rep.add("intertwines-actions", bad is None, bad)
    fC = induced_on_C(Q1, Q2, fM)
    lhs = (Q1.omega.tensor @ fL.matrix.T) % p
    rhs = np.einsum("ia,jb,ijl->abl", fC, fC, Q2.omega.tensor) % p
    rep.add("transports-omega", np.array_equal(lhs, rhs), first_nonzero(lhs - rhs))
    rep.fC = fC
    return rep


def induced_on_C(Q1, Q2, fM):
    """Matrix ``C1 -> C2`` (columns) of the map induced by ``fM``; checks it descends."""
    p = Q1.p
    F = (Q2.quotC.matrix @ fM.matrix @ Q1.quotC.section) % p
    K = kernel_of(Q1.quotC.matrix, p)
    if K.dim and ((Q2.quotC.matrix @ fM.matrix @ K.basis.T) % p).any():
        raise Inconsistent("fM does not descend to the singularisations")
    return F


def find_quadratic_isomorphism(Q1, Q2, gens_M, gens_L, fN=None, report=None):
    """Isomorphism ``Q1 -> Q2`` sending named generators to named generators.

    ``gens_M`` / ``gens_L``: lists of ``(vector in Q1, vector in Q2)``.  The
    ``M`` part closes over products and the ``N``-action; the ``L`` part over
    products, the ``N``-action and the ``omega`` values (which it must
    transport).  Returns ``(report, (fL, fM, fN))``.
    """
    rep = report or Report("isomorphism")
    p = Q1.p
    if fN is None:
        if Q1.N.dim != Q2.N.dim:
            rep.add("N-dims", False, (Q1.N.dim, Q2.N.dim))
            return rep, None
        fN = AlgebraMorphism.identity(Q1.N)
    pairs_M = [(Q1.actNM.matrix(_unit(Q1.N.dim, r)), Q2.actNM.matrix(fN(_unit(Q1.N.dim, r)))) for r in range(Q1.N.dim)]
    try:
        fM = extend_by_words(Q1.M, Q2.M, [a for a, _ in gens_M], [b for _, b in gens_M], pairs_M)
    except (Inconsistent, Underdetermined) as e:
        rep.add("extend-M", False, str(e))
        return rep, None
    rep.add("extend-M", True)
    try:
        fC = induced_on_C(Q1, Q2, fM)
    except Inconsistent as e:
        rep.add("descend-C", False, str(e))
        return rep, None
    pairs_L = [(Q1.actNL.matrix(_unit(Q1.N.dim, r)), Q2.actNL.matrix(fN(_unit(Q1.N.dim, r)))) for r in range(Q1.N.dim)]
    om1 = Q1.omega.tensor.reshape(Q1.C.dim ** 2, Q1.L.dim)
    om2 = np.einsum("ia,jb,ijl->abl", fC, fC, Q2.omega.tensor).reshape(Q1.C.dim ** 2, Q2.L.dim) % p
    extra = list(zip(om1, om2))
    try:
        fL = extend_by_words(Q1.L, Q2.L, [a for a, _ in gens_L], [b for _, b in gens_L], pairs_L, extra)
    except (Inconsistent, Underdetermined) as e:
        rep.add("extend-L", False, str(e))
        return rep, None
    rep.add("extend-L", True)
    for name, f in (("L", fL), ("M", fM), ("N", fN)):
        rep.add("bijective-" + name, is_bijective(f), f.matrix.shape)
    rep.merge(check_quadratic_morphism(Q1, Q2, fL, fM, fN))
    return rep, (fL, fM, fN)
