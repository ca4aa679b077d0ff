"""2-crossed modules ``C2 -> C1 -> C0`` with a Peiffer lifting.

All actions are left actions.  The action of ``C1`` on ``C2`` is not part
of the data: it is *defined* by ``y.x = {y (x) d2 x}`` and the checker
verifies that this rule really is an action.
"""

from __future__ import annotations

import numpy as np

from .algebra import ActionTensor, AlgebraError, AlgebraMorphism, BilinearMap
from .crossed import PreCrossedModule, semidirect_precrossed, CrossedModule
from .linalg import Subspace, kernel_of, image_of
from .report import HomotopyProfile, Report, first_nonzero, subquotient


class InvalidStructure(AlgebraError):
    def __init__(self, report):
        fails = report.failures()
        name = fails[0].name if fails else "?"
        super().__init__("structure fails %s" % name)
        self.report = report


class NoConsistentSign(AlgebraError):
    pass


class TwoCrossedModule:
    kind = "2crossed"

    def __init__(self, C2, C1, C0, d2, d1, act0on1, act0on2, lifting, label=""):
        self.C2, self.C1, self.C0 = C2, C1, C0
        self.d2, self.d1 = d2, d1
        self.act0on1, self.act0on2 = act0on1, act0on2
        self.lifting = lifting
        self.p = C0.p
        self.label = label

    def __repr__(self):
        return "TwoCrossedModule(%s: %d -> %d -> %d)" % (self.label or "?", self.C2.dim, self.C1.dim, self.C0.dim)

    @property
    def base(self):
        """The pre-crossed module ``d1: C1 -> C0``."""
        return PreCrossedModule(self.C1, self.C0, self.d1, self.act0on1)

    def lift(self, y0, y1):
        return self.lifting(y0, y1)

    def act1on2_tensor(self):
        """``t[b, x, :] = {e_b (x) d2 e_x}``: the induced action of C1 on C2."""
        T = self.lifting.tensor
        return np.einsum("xj,bjk->bxk", self.d2.matrix.T, T) % self.p


def _unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def check_2crossed(X, report=None):
    rep = report or Report("2crossed")
    p = X.p
    C2, C1, C0 = X.C2, X.C1, X.C0
    n2, n1, n0 = C2.dim, C1.dim, C0.dim
    T = X.lifting.tensor
    D2, D1 = X.d2.matrix, X.d1.matrix

    comp = (D1 @ D2) % p
    rep.add("complex", not comp.any(), first_nonzero(comp))
    for name, f in (("d2-multiplicative", X.d2), ("d1-multiplicative", X.d1)):
        v = f.multiplicativity_violation()
        rep.add(name, v is None, v)
    for name, a in (("action-C0-on-C1", X.act0on1), ("action-C0-on-C2", X.act0on2)):
        v = a.violation()
        rep.add(name, v is None, v)
    bad1 = bad2 = None
    for r in range(n0):
        er = _unit(n0, r)
        A1 = X.act0on1.matrix(er)
        A2 = X.act0on2.matrix(er)
        if bad1 is None:
            w = first_nonzero((D1 @ A1 - C0.left_matrix(er) @ D1) % p)
            if w is not None:
                bad1 = (r, w[1])
        if bad2 is None:
            diff = (D2 @ A2 - A1 @ D2) % p
            w = first_nonzero(diff)
            if w is not None:
                bad2 = (r, w[1])
    rep.add("d1-equivariant", bad1 is None, bad1)
    rep.add("d2-equivariant", bad2 is None, bad2)

    # 2CM1: d2{y0 (x) y1} = <y0, y1>
    base = X.base
    w1 = None
    for a in range(n1):
        lhs = (T[a] @ D2.T) % p
        rhs = base.peiffer_rows(a)
        w = first_nonzero(lhs - rhs)
        if w is not None:
            w1 = (a, w[0])
            break
    rep.add("2CM1", w1 is None, w1)

    # 2CM2: {d2 x1 (x) d2 x2} = x1 x2
    w2 = None
    for i in range(n2):
        lhs = np.einsum("a,bj,abk->jk", D2[:, i], D2, T) % p
        rhs = C2.left_matrix(_unit(n2, i)).T
        w = first_nonzero(lhs - rhs)
        if w is not None:
            w2 = (i, w[0])
            break
    rep.add("2CM2", w2 is None, w2)

    # 2CM3: {y0 (x) y1 y2} = {y0 y1 (x) y2} + d1(y2).{y0 (x) y1}
    w3 = None
    act2 = X.act0on2.tensor
    # Lm[b] = matrix of e_b * (-) on C1 (columns = input)
    Lm = [C1.left_matrix(_unit(n1, b)) for b in range(n1)]
    for a in range(n1):
        for b in range(n1):
            lhs = (Lm[b].T @ T[a]) % p  # row c: {e_a (x) e_b e_c}
            ab = C1.mul(_unit(n1, a), _unit(n1, b))
            first = np.einsum("j,jck->ck", ab, T) % p
            second = np.einsum("rc,k,rkm->cm", D1, T[a, b], act2) % p
            w = first_nonzero((lhs - first - second) % p)
            if w is not None:
                w3 = (a, b, w[0])
                break
        if w3 is not None:
            break
    rep.add("2CM3", w3 is None, w3)

    # 2CM4b defines y.x = {y (x) d2 x}; it must be an action compatible with C2
    act12 = X.act1on2_tensor() if n2 and n1 else np.zeros((n1, n2, n2), dtype=np.int64)
    v = ActionTensor(C1, C2, act12).violation() if n1 and n2 else None
    rep.add("2CM4b-action", v is None, v)

    # 2CM4a: {d2 x (x) y} = y.x - d1(y).x
    w4 = None
    for x in range(n2):
        lhs = np.einsum("a,abk->bk", D2[:, x], T) % p
        rhs = (act12[:, x, :] - np.einsum("rb,rk->bk", D1, act2[:, x, :])) % p
        w = first_nonzero(lhs - rhs)
        if w is not None:
            w4 = (x, w[0])
            break
    rep.add("2CM4a", w4 is None, w4)

    # 2CM5: z.{y0 (x) y1} = {z.y0 (x) y1} = {y0 (x) z.y1}
    w5 = None
    for r in range(n0):
        A1 = X.act0on1.matrix(_unit(n0, r))
        A2 = X.act0on2.matrix(_unit(n0, r))
        zT = (T @ A2.T) % p
        left = np.einsum("ja,jbk->abk", A1, T) % p
        right = np.einsum("jb,ajk->abk", A1, T) % p
        for cand, tag in ((left, "left"), (right, "right")):
            w = first_nonzero(zT - cand)
            if w is not None:
                w5 = (r, tag) + w[:2]
                break
        if w5 is not None:
            break
    rep.add("2CM5", w5 is None, w5)
    return rep


def homotopy_2crossed(X, check=True):
    if check:
        rep = check_2crossed(X)
        if not rep.ok:
            raise InvalidStructure(rep)
    p = X.p
    im1 = image_of(X.d1.matrix, p)
    ker1 = kernel_of(X.d1.matrix, p)
    im2 = image_of(X.d2.matrix, p)
    ker2 = kernel_of(X.d2.matrix, p)
    full0 = Subspace.full(p, X.C0.dim)
    w1 = subquotient(full0, im1)
    w2 = subquotient(ker1, im2)
    dims = (0, X.C0.dim - im1.dim, ker1.dim - im2.dim, ker2.dim)
    return HomotopyProfile(dims, {1: w1, 2: w2, 3: ker2.basis})


# ----------------------------------------------------------------------
# degenerate cases


def from_crossed_module(cm):
    """``0 -> C -> R`` with zero lifting."""
    from .algebra import FiniteAlgebra

    Z = FiniteAlgebra.zero_mult(cm.p, 0, label="0")
    d2 = AlgebraMorphism(Z, cm.C, np.zeros((cm.C.dim, 0), dtype=np.int64))
    act2 = ActionTensor.trivial(cm.R, Z)
    lift = BilinearMap.zero(cm.C, cm.C, Z)
    return TwoCrossedModule(Z, cm.C, cm.R, d2, cm.boundary, cm.action, act2, lift, label=cm.label)


# ----------------------------------------------------------------------
# crossed squares


def peiffer_in_semidirect(S, mn, ca):
    """``<(m, n), (c, a)> = (nu(n).c, -mu(c).n)`` in ``M x| N``."""
    m, n = mn
    c, a = ca
    nu_n = S.nu(np.asarray(n))
    mu_c = S.mu(np.asarray(c))
    first = S.actRM(nu_n, np.asarray(c))
    second = (-S.actRN(mu_c, np.asarray(n))) % S.p
    return first, second


def _mapping_cone_data(S):
    mu = CrossedModule(S.M, S.R, S.mu, S.actRM)
    nu = CrossedModule(S.N, S.R, S.nu, S.actRN)
    base, i_m, i_n = semidirect_precrossed(mu, nu, label="%s x| %s" % (S.M.label or "M", S.N.label or "N"))
    d2 = AlgebraMorphism(S.L, base.C, np.vstack([-S.lam.matrix, S.lamp.matrix]))
    return base, d2


def lifting_from_h(S, coef_cn=-1, coef_ma=0):
    """Lifting ``{(m,n) (x) (c,a)} = coef_cn h(c, n) + coef_ma h(m, a)``."""
    m, n, l = S.M.dim, S.N.dim, S.L.dim
    H = S.h.tensor  # (m, n, l)
    T = np.zeros((m + n, m + n, l), dtype=np.int64)
    # y0 = e_(n-part j), y1 = e_(m-part c): h(c, n_j)
    T[m:, :m, :] += coef_cn * H.transpose(1, 0, 2)
    # y0 = e_(m-part i), y1 = e_(n-part a): h(m_i, a)
    T[:m, m:, :] += coef_ma * H
    return T % S.p


def two_crossed_from_square(S, coef_cn=-1, coef_ma=0):
    base, d2 = _mapping_cone_data(S)
    T = lifting_from_h(S, coef_cn, coef_ma)
    lift = BilinearMap(base.C, base.C, S.L, T)
    return TwoCrossedModule(S.L, base.C, S.R, d2, base.boundary, base.action, S.actRL, lift, label=S.label + " cone" if S.label else "cone")


def lifting_sign_search(S):
    """All coefficient pairs in ``{-1, 0, 1}^2`` giving a valid 2-crossed module."""
    good = []
    for a in (-1, 0, 1):
        for b in (-1, 0, 1):
            if check_2crossed(two_crossed_from_square(S, a, b)).ok:
                good.append((a, b))
    return good
