"""Quadratic modules ``(omega, delta, d)`` of algebras.

::

                 C (x) C
               omega /  \\ w
                    v    v
               L --delta--> M --d--> N

``d: M -> N`` is a nil(2)-module, ``C = M^cr / (M^cr)^2`` its
singularisation (zero multiplication), ``w([x] (x) [y]) = <x, y>`` and
``omega`` lifts ``w`` through ``delta``.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    ActionTensor,
    AlgebraError,
    AlgebraIdeal,
    AlgebraMorphism,
    BilinearMap,
    FiniteAlgebra,
    ideal_generated,
    induced_action,
    quotient_algebra,
)
from .crossed import (
    CrossedModule,
    PreCrossedModule,
    check_crossed,
    check_nil2,
    peiffer_ideal_P2,
    quotient_precrossed,
)
from .linalg import Subspace, image_of, kernel_of, solve
from .report import HomotopyProfile, Report, first_nonzero, subquotient
from .twocrossed import InvalidStructure, check_2crossed, homotopy_2crossed


class OmegaNotWellDefined(AlgebraError):
    pass


class P3PrimeImageMismatch(AlgebraError):
    pass


class OmegaNotZero(AlgebraError):
    pass


class QuadraticModule:
    kind = "quadratic"

    def __init__(self, L, M, N, delta, boundary, actNL, actNM, C, quotC, omega, w, label=""):
        self.L, self.M, self.N = L, M, N
        self.delta, self.boundary = delta, boundary
        self.actNL, self.actNM = actNL, actNM
        self.C, self.quotC = C, quotC
        self.omega, self.w = omega, w
        self.p = N.p
        self.label = label

    def __repr__(self):
        return "QuadraticModule(%s: %d -> %d -> %d, C%d)" % (self.label or "?", self.L.dim, self.M.dim, self.N.dim, self.C.dim)

    @property
    def base(self):
        return PreCrossedModule(self.M, self.N, self.boundary, self.actNM)

    def actNC(self):
        return induced_action(self.actNM, proj=self.quotC)


def singularisation_ideal(X):
    """Kernel of ``M -> M^cr/(M^cr)^2``: Peiffer ideal plus ``M^2``."""
    sq = X.C.square_space()
    gens = np.vstack([X.peiffer_span().basis, sq.basis])
    return ideal_generated(X.C, gens, operators=X.action_matrices())


def build_quadratic(L, M, N, delta, boundary, actNL, actNM, omega_M, label="", check_descent=True):
    """Assemble a quadratic module from ``omega`` given on ``M x M``.

    ``omega_M[i, j]`` is the ``L``-vector assigned to ``e_i (x) e_j``; it must
    vanish whenever either argument lies in the singularisation ideal.
    """
    X = PreCrossedModule(M, N, boundary, actNM)
    K = singularisation_ideal(X)
    Cq, q = quotient_algebra(M, K, label="C")
    C = FiniteAlgebra.zero_mult(M.p, Cq.dim, label="C")
    quotC = AlgebraMorphism(M, C, q.matrix, section=q.section)
    p = M.p
    omega_M = np.asarray(omega_M, dtype=np.int64).reshape(M.dim, M.dim, L.dim) % p
    if check_descent and K.dim:
        left = np.einsum("ki,ijl->kjl", K.basis, omega_M) % p
        right = np.einsum("kj,ijl->ikl", K.basis, omega_M) % p
        if left.any() or right.any():
            w = first_nonzero(left) if left.any() else first_nonzero(right)
            raise OmegaNotWellDefined("omega does not vanish on the singularisation ideal at %r" % (w,))
    S = q.section
    omega = np.einsum("ia,jb,ijl->abl", S, S, omega_M) % p
    wt = np.zeros((C.dim, C.dim, M.dim), dtype=np.int64)
    for a in range(C.dim):
        x = S[:, a]
        for b in range(C.dim):
            wt[a, b] = X.peiffer(x, S[:, b])
    Q = QuadraticModule(L, M, N, delta, boundary, actNL, actNM, C, quotC, BilinearMap(C, C, L, omega), BilinearMap(C, C, M, wt), label=label)
    Q.singular_ideal = K
    return Q


def _unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def check_quadratic(Q, report=None):
    rep = report or Report("quadratic")
    p = Q.p
    L, M, N, C = Q.L, Q.M, Q.N, Q.C
    D, B = Q.delta.matrix, Q.boundary.matrix
    for name, f in (("delta-multiplicative", Q.delta), ("boundary-multiplicative", Q.boundary)):
        v = f.multiplicativity_violation()
        rep.add(name, v is None, v)
    for name, a in (("action-N-on-L", Q.actNL), ("action-N-on-M", Q.actNM)):
        v = a.violation()
        rep.add(name, v is None, v)
    rep.add("C-singular", C.is_zero_mult(), C.entries()[0][:3] if C.nnz else None)

    # QM1: nil(2) and w = Peiffer map, constant on classes
    X = Q.base
    nil = check_nil2(X)
    fails = nil.failures()
    rep.add("QM1-nil2", not fails, (fails[0].name, fails[0].witness) if fails else None)
    K = Subspace(p, M.dim, Q.quotC.matrix).complement_columns()  # noqa: F841 (C basis sanity)
    ker_q = kernel_of(Q.quotC.matrix, p)
    w_ok = None
    S = Q.quotC.section
    for a in range(C.dim):
        for b in range(C.dim):
            want = X.peiffer(S[:, a], S[:, b])
            if not np.array_equal(want, Q.w.tensor[a, b]):
                w_ok = ("value", a, b)
                break
            # perturb each representative by the kernel basis
            for k in ker_q.basis:
                if X.peiffer((S[:, a] + k) % p, S[:, b]).tolist() != want.tolist() or X.peiffer(S[:, a], (S[:, b] + k) % p).tolist() != want.tolist():
                    w_ok = ("coset", a, b)
                    break
            if w_ok:
                break
        if w_ok:
            break
    rep.add("QM1-w-well-defined", w_ok is None, w_ok)

    # QM2: d delta = 0 and delta omega = w
    comp = (B @ D) % p
    rep.add("QM2-complex", not comp.any(), first_nonzero(comp))
    dw = (Q.omega.tensor @ D.T) % p
    rep.add("QM2-lift", np.array_equal(dw, Q.w.tensor), first_nonzero(dw - Q.w.tensor))

    # QM3: equivariance of delta, d, omega, w; d(x).a = omega([x](x)[da]) - omega([da](x)[x])
    actC = Q.actNC()
    bad = None
    for r in range(N.dim):
        er = _unit(N.dim, r)
        AL, AM, AC = Q.actNL.matrix(er), Q.actNM.matrix(er), actC.matrix(er)
        checks = (
            ("delta", (D @ AL - AM @ D) % p),
            ("boundary", (B @ AM - N.left_matrix(er) @ B) % p),
            ("omega-left", ((Q.omega.tensor @ AL.T) - np.einsum("ja,jbl->abl", AC, Q.omega.tensor)) % p),
            ("omega-right", ((Q.omega.tensor @ AL.T) - np.einsum("jb,ajl->abl", AC, Q.omega.tensor)) % p),
            ("w-left", ((Q.w.tensor @ AM.T) - np.einsum("ja,jbl->abl", AC, Q.w.tensor)) % p),
        )
        for tag, arr in checks:
            w = first_nonzero(arr)
            if w is not None:
                bad = (tag, r) + w
                break
        if bad:
            break
    rep.add("QM3-equivariance", bad is None, bad)
    bad = None
    qd = (Q.quotC.matrix @ D) % p  # L -> C, a -> [delta a]
    for a in range(L.dim):
        da = qd[:, a]
        # rows over x in M: [x] (x) [delta a] and [delta a] (x) [x]
        qx = Q.quotC.matrix  # C x M
        right = np.einsum("cx,d,cdl->xl", qx, da, Q.omega.tensor)
        left = np.einsum("d,cx,dcl->xl", da, qx, Q.omega.tensor)
        want = (right - left) % p
        got = np.einsum("rx,rl->xl", B, Q.actNL.tensor[:, a, :]) % p
        w = first_nonzero(got - want)
        if w is not None:
            bad = (a, w[0])
            break
    rep.add("QM3-action", bad is None, bad)

    # QM4: omega([delta a] (x) [delta b]) = ab
    lhs = np.einsum("ca,db,cdl->abl", qd, qd, Q.omega.tensor) % p
    rhs = L.dense if L.dim else np.zeros((0, 0, 0), dtype=np.int64)
    rep.add("QM4", np.array_equal(lhs, rhs), first_nonzero(lhs - rhs))
    return rep


def qm3_literal_violation(Q):
    """First ``(a, x)`` where ``d(x).a != omega([da](x)[x] + [x](x)[da])``, or ``None``."""
    p = Q.p
    D, B = Q.delta.matrix, Q.boundary.matrix
    qd = (Q.quotC.matrix @ D) % p
    qx = Q.quotC.matrix
    for a in range(Q.L.dim):
        da = qd[:, a]
        right = np.einsum("cx,d,cdl->xl", qx, da, Q.omega.tensor)
        left = np.einsum("d,cx,dcl->xl", da, qx, Q.omega.tensor)
        got = np.einsum("rx,rl->xl", B, Q.actNL.tensor[:, a, :]) % p
        w = first_nonzero(got - (right + left) % p)
        if w is not None:
            return (a, w[0])
    return None


def homotopy_quadratic(Q, check=True):
    if check:
        rep = check_quadratic(Q)
        if not rep.ok:
            raise InvalidStructure(rep)
    p = Q.p
    im1 = image_of(Q.boundary.matrix, p)
    ker1 = kernel_of(Q.boundary.matrix, p)
    im2 = image_of(Q.delta.matrix, p)
    ker2 = kernel_of(Q.delta.matrix, p)
    full = Subspace.full(p, Q.N.dim)
    dims = (0, Q.N.dim - im1.dim, ker1.dim - im2.dim, ker2.dim)
    return HomotopyProfile(dims, {1: subquotient(full, im1), 2: subquotient(ker1, im2), 3: ker2.basis})


# ----------------------------------------------------------------------
# from 2-crossed modules


def p3prime_generators(X, G=None):
    """Rows ``{x (x) <y,z>}`` and ``{<x,y> (x) z}`` over a Peiffer basis."""
    base = X.base
    if G is None:
        G = base.peiffer_span().basis
    T = X.lifting.tensor
    rows = []
    for g in G:
        rows.append(np.einsum("b,abk->ak", g, T))
        rows.append(np.einsum("a,abk->bk", g, T))
    if not rows:
        return np.zeros((0, X.C2.dim), dtype=np.int64)
    return np.vstack(rows) % X.p


def quadratic_from_2crossed(X, check=True):
    """``L = C2/P3' -> M = C1/P3 -> N = C0`` with ``omega`` induced by the lifting."""
    from .crossed import triple_peiffer_ideal

    if check:
        rep = check_2crossed(X)
        if not rep.ok:
            raise InvalidStructure(rep)
    p = X.p
    base = X.base
    P3 = triple_peiffer_ideal(base)
    act2 = [X.act0on2.matrix(_unit(X.C0.dim, r)) for r in range(X.C0.dim)]
    P3p = ideal_generated(X.C2, p3prime_generators(X), operators=act2)
    img = Subspace(p, X.C1.dim, X.d2(P3p.basis)) if P3p.dim else Subspace(p, X.C1.dim)
    if not img == Subspace(p, X.C1.dim, P3.basis):
        raise P3PrimeImageMismatch("d2(P3') has dim %d, P3 has dim %d" % (img.dim, P3.dim))
    Mq = quotient_precrossed(base, P3, label="M")
    M, q1 = Mq.C, Mq.projection
    L, q2 = quotient_algebra(X.C2, P3p, label="L")
    delta = AlgebraMorphism(L, M, q1.matrix @ X.d2.matrix @ q2.section)
    actNL = induced_action(X.act0on2, proj=q2)
    # omega on M x M from the lifting, through sections
    T = X.lifting.tensor
    S1 = q1.section
    omega_M = np.einsum("ia,jb,ijk,lk->abl", S1, S1, T, q2.matrix) % p
    # lifting must descend through P3 in each slot
    if P3.dim:
        lt = np.einsum("ki,ijm,lm->kjl", P3.basis, T, q2.matrix) % p
        rt = np.einsum("kj,ijm,lm->ikl", P3.basis, T, q2.matrix) % p
        if lt.any() or rt.any():
            raise OmegaNotWellDefined("lifting does not vanish on P3 modulo P3'")
    Q = build_quadratic(L, M, X.C0, delta, Mq.boundary, actNL, Mq.action, omega_M, label="Q(%s)" % X.label)
    Q.P3, Q.P3prime, Q.q1, Q.q2 = P3, P3p, q1, q2
    Q.source = X
    return Q


def check_prop_ho2(X, report=None):
    """Homotopy of ``X`` and of its quadratic module agree; explicit pi3 maps."""
    rep = report or Report("prop-ho2")
    Q = quadratic_from_2crossed(X)
    a = homotopy_2crossed(X)
    b = homotopy_quadratic(Q)
    for i in range(4):
        rep.add("pi%d" % i, a.dims[i] == b.dims[i], (a.dims[i], b.dims[i]))
    rep.merge(pi3_witness_check(X, Q))
    rep.extra = {"source": a.dims, "quadratic": b.dims}
    return rep


def pi3_witness_check(X, Q, report=None):
    """``mu: ker d2 -> ker delta``, ``x -> q2 x``; ``nu: [x] -> x - w`` with ``d2 w = d2 x``, ``w`` in ``P3'``."""
    rep = report or Report("pi3-witness")
    p = X.p
    D2 = X.d2.matrix
    q2 = Q.q2
    P3p = Q.P3prime
    ker2 = kernel_of(D2, p)
    kerd = kernel_of(Q.delta.matrix, p)
    inter = P3p.intersect(ker2)
    rep.add("P3'-meets-ker-d2-trivially", inter.dim == 0, None if inter.dim == 0 else inter.basis[0])
    if inter.dim:
        return rep

    def nu(cls_rows):
        xs = (cls_rows @ q2.section.T) % p  # representatives in C2
        if P3p.dim == 0:
            return xs
        # solve d2(P3p^T c) = d2 x
        A = (D2 @ P3p.basis.T) % p
        sol = solve(A, (D2 @ xs.T) % p, p)
        if sol is None:
            raise AlgebraError("d2 x not in d2(P3')")
        return (xs - (sol.T @ P3p.basis)) % p

    mu_rows = q2(ker2.basis) if ker2.dim else np.zeros((0, Q.L.dim), dtype=np.int64)
    out = kerd.reduce(mu_rows) if mu_rows.shape[0] else mu_rows
    rep.add("mu-lands-in-ker-delta", not out.any(), first_nonzero(out))
    back = nu(mu_rows) if ker2.dim else np.zeros((0, X.C2.dim), dtype=np.int64)
    rep.add("nu.mu=id", np.array_equal(back % p, ker2.basis % p), first_nonzero(back - ker2.basis))
    if kerd.dim:
        up = nu(kerd.basis)
        out = ker2.reduce(up)
        rep.add("nu-lands-in-ker-d2", not out.any(), first_nonzero(out))
        again = q2(up)
        rep.add("mu.nu=id", np.array_equal(again, kerd.basis), first_nonzero(again - kerd.basis))
    else:
        rep.add("nu-lands-in-ker-d2", True)
        rep.add("mu.nu=id", True)
    return rep


# ----------------------------------------------------------------------
# from simplicial algebras and crossed squares


def quadratic_from_simplicial(E, check=True):
    """``(NE2/d3 NE3)/P3' -> NE1/P3 -> NE0`` with ``omega'(x, y) = s1x(s1y - s0y)``."""
    from .simplicial import two_crossed_from_simplicial

    X = two_crossed_from_simplicial(E, use_degenerate=False, check=check)
    Q = quadratic_from_2crossed(X, check=check)
    Q.label = "Q(%s)" % E.label
    return Q


def check_prop_ho3(E, report=None):
    from .simplicial import moore_homotopy

    rep = report or Report("prop-ho3")
    a = moore_homotopy(E)
    Q = quadratic_from_simplicial(E)
    b = homotopy_quadratic(Q)
    for i in range(4):
        rep.add("pi%d" % i, a.dims[i] == b.dims[i], (a.dims[i], b.dims[i]))
    rep.extra = {"moore": a.dims, "quadratic": b.dims}
    return rep


def check_factorization(E, report=None):
    """``omega = i omega'`` and ``delta' = delta i`` for ``i: L' -> L``.

    ``L'`` comes from the top term ``NE2/d3(NE3 /\\ D3)``, ``L`` from
    ``NE2/d3 NE3``; both are quotients of ``NE2``.
    """
    from .simplicial import two_crossed_from_simplicial

    rep = report or Report("factorization")
    p = E.p
    Xd = two_crossed_from_simplicial(E, use_degenerate=True)
    Xp = two_crossed_from_simplicial(E, use_degenerate=False)
    Qd = quadratic_from_2crossed(Xd)
    Qp = quadratic_from_2crossed(Xp)
    # NE2 -> L' and NE2 -> L
    to_Ld = Qd.q2.matrix @ Xd.top_projection.matrix
    to_L = Qp.q2.matrix @ Xp.top_projection.matrix
    ker_d = kernel_of(to_Ld, p)
    ker_p = kernel_of(to_L, p)
    out = ker_p.reduce(ker_d.basis) if ker_d.dim else ker_d.basis
    rep.add("i-well-defined", not out.any(), first_nonzero(out))
    sec = Xd.top_projection.section @ Qd.q2.section  # L' -> NE2
    i = AlgebraMorphism(Qd.L, Qp.L, to_L @ sec)
    v = i.multiplicativity_violation()
    rep.add("i-multiplicative", v is None, v)
    same_M = np.array_equal(Qd.q1.matrix, Qp.q1.matrix) and np.array_equal(Qd.quotC.matrix, Qp.quotC.matrix)
    rep.add("same-M-and-C", same_M, None if same_M else (Qd.M.dim, Qp.M.dim, Qd.C.dim, Qp.C.dim))
    iw = (Qd.omega.tensor @ i.matrix.T) % p
    rep.add("omega=i.omega'", np.array_equal(iw, Qp.omega.tensor), first_nonzero(iw - Qp.omega.tensor))
    di = (Qp.delta.matrix @ i.matrix) % p
    rep.add("delta'=delta.i", np.array_equal(di, Qd.delta.matrix), first_nonzero(di - Qd.delta.matrix))
    rep.i = i
    return rep


def quadratic_from_square(S, check=True):
    from .square import check_square
    from .twocrossed import two_crossed_from_square

    if check:
        rep = check_square(S)
        if not rep.ok:
            raise InvalidStructure(rep)
    X = two_crossed_from_square(S)
    Q = quadratic_from_2crossed(X, check=check)
    Q.label = "Q(%s)" % S.label
    return Q


# ----------------------------------------------------------------------
# examples


def quadratic_from_nil2(X):
    """``0 -> M -> N`` with ``omega = 0``; QM2 then forces ``w = 0``, so ``M`` must be crossed."""
    Z = FiniteAlgebra.zero_mult(X.p, 0, label="0")
    delta = AlgebraMorphism(Z, X.C, np.zeros((X.C.dim, 0), dtype=np.int64))
    return build_quadratic(Z, X.C, X.R, delta, X.boundary, ActionTensor.trivial(X.R, Z), X.action, np.zeros((X.C.dim, X.C.dim, 0)), label="nil2(%s)" % X.label)


def quadratic_from_crossed_complex(L, cm, delta, actNL):
    """``L -> M -> N`` with ``M -> N`` crossed, ``L`` singular, ``omega = 0``."""
    return build_quadratic(L, cm.C, cm.R, delta, cm.boundary, actNL, cm.action, np.zeros((cm.C.dim, cm.C.dim, L.dim)), label="cx(%s)" % cm.label)


def induced_crossed_from_quadratic(Q):
    """``M / <delta omega(C (x) C)> -> N``; always crossed."""
    p = Q.p
    gens = (Q.omega.tensor.reshape(Q.C.dim ** 2, Q.L.dim) @ Q.delta.matrix.T) % p
    X = Q.base
    I = ideal_generated(Q.M, gens, operators=X.action_matrices())
    return quotient_precrossed(X, I, CrossedModule, label="ind(%s)" % Q.label)


def trivial_omega_report(Q, report=None):
    rep = report or Report("trivial-omega")
    if Q.omega.tensor.any():
        raise OmegaNotZero("omega is not identically zero")
    X = Q.base
    cr = check_crossed(X)
    P2 = peiffer_ideal_P2(X)
    rep.add("(i) M crossed, P2 = 0", cr.ok and P2.dim == 0, None if cr.ok else cr.failures()[0].name)
    p = Q.p
    prod = np.einsum("rx,rak->xak", Q.boundary.matrix, Q.actNL.tensor) % p
    rep.add("(ii) d(M).L = 0", not prod.any(), first_nonzero(prod))
    LL = Q.L.nnz == 0
    rep.add("(iii) L.L = 0", LL, None if LL else Q.L.entries()[0][:2])
    return rep
