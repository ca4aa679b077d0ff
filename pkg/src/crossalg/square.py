"""Crossed squares of commutative algebras.

::

    L --lam--> M
    |          |
   lamp        mu
    v          v
    N --nu---> R

``R`` acts on ``L``, ``M`` and ``N``; ``M`` and ``N`` act on ``L`` (and on
each other) through ``R``.  The h-map ``h: M x N -> L`` is stored as a
bilinear tensor.
"""

from __future__ import annotations

import numpy as np

from .algebra import ActionTensor, AlgebraError, AlgebraMorphism, BilinearMap, FiniteAlgebra
from .crossed import CrossedModule, check_crossed
from .linalg import Subspace, image_of, kernel_of
from .report import HomotopyProfile, Report, first_nonzero, subquotient
from .twocrossed import InvalidStructure, two_crossed_from_square


class WrongShape(AlgebraError):
    pass


class CrossedSquare:
    kind = "square"

    def __init__(self, L, M, N, R, lam, lamp, mu, nu, actRL, actRM, actRN, h, label=""):
        self.L, self.M, self.N, self.R = L, M, N, R
        self.lam, self.lamp, self.mu, self.nu = lam, lamp, mu, nu
        self.actRL, self.actRM, self.actRN = actRL, actRM, actRN
        self.h = h
        self.p = R.p
        self.label = label
        # set by m_functor_2: data identifying the (M, Mbar, M x| R0) shape
        self.free_shape = None

    def __repr__(self):
        return "CrossedSquare(%s: L%d M%d N%d R%d)" % (self.label or "?", self.L.dim, self.M.dim, self.N.dim, self.R.dim)

    @property
    def dims(self):
        return (self.L.dim, self.M.dim, self.N.dim, self.R.dim)

    def crossed_mu(self):
        return CrossedModule(self.M, self.R, self.mu, self.actRM)

    def crossed_nu(self):
        return CrossedModule(self.N, self.R, self.nu, self.actRN)

    def crossed_diag(self):
        return CrossedModule(self.L, self.R, self.mu.compose(self.lam), self.actRL)

    def crossed_lam(self):
        act = ActionTensor.via_morphism(self.mu, self.L, self.actRL)
        return CrossedModule(self.L, self.M, self.lam, act)

    def crossed_lamp(self):
        act = ActionTensor.via_morphism(self.nu, self.L, self.actRL)
        return CrossedModule(self.L, self.N, self.lamp, act)


def _unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def check_square(S, report=None):
    rep = report or Report("square")
    p = S.p
    L, M, N, R = S.L, S.M, S.N, S.R
    shapes_ok = (
        S.lam.matrix.shape == (M.dim, L.dim)
        and S.lamp.matrix.shape == (N.dim, L.dim)
        and S.mu.matrix.shape == (R.dim, M.dim)
        and S.nu.matrix.shape == (R.dim, N.dim)
        and S.h.tensor.shape == (M.dim, N.dim, L.dim)
    )
    rep.add("shape", shapes_ok, S.dims)
    if not shapes_ok:
        return rep
    diff = (S.mu.matrix @ S.lam.matrix - S.nu.matrix @ S.lamp.matrix) % p
    rep.add("commutative", not diff.any(), first_nonzero(diff))

    # axiom 1: the five crossed modules
    for name, cm in (
        ("lam", S.crossed_lam()),
        ("lamp", S.crossed_lamp()),
        ("mu", S.crossed_mu()),
        ("nu", S.crossed_nu()),
        ("mu.lam", S.crossed_diag()),
    ):
        sub = check_crossed(cm)
        fails = sub.failures()
        rep.add("axiom1-" + name, not fails, (fails[0].name, fails[0].witness) if fails else None)

    # axiom 2: lam, lamp preserve the R-action
    for name, f, act in (("lam", S.lam, S.actRM), ("lamp", S.lamp, S.actRN)):
        bad = None
        for r in range(R.dim):
            er = _unit(R.dim, r)
            d = (f.matrix @ S.actRL.matrix(er) - act.matrix(er) @ f.matrix) % p
            w = first_nonzero(d)
            if w is not None:
                bad = (r, w[1])
                break
        rep.add("axiom2-" + name, bad is None, bad)

    # axioms 3-5 hold by the tensor representation of h
    rep.add("axiom3-5-bilinear", True)

    H = S.h.tensor
    # axiom 6: r.h(m,n) = h(r.m, n) = h(m, r.n)
    bad = None
    for r in range(R.dim):
        er = _unit(R.dim, r)
        AL, AM, AN = S.actRL.matrix(er), S.actRM.matrix(er), S.actRN.matrix(er)
        rh = (H @ AL.T) % p
        hm = np.einsum("jm,jnk->mnk", AM, H) % p
        hn = np.einsum("jn,mjk->mnk", AN, H) % p
        for tag, other in (("left", hm), ("right", hn)):
            w = first_nonzero(rh - other)
            if w is not None:
                bad = (r, tag) + w[:2]
                break
        if bad:
            break
    rep.add("axiom6", bad is None, bad)

    # axiom 7: lam h(m,n) = nu(n).m ; axiom 8: lamp h(m,n) = mu(m).n
    lhs7 = (H @ S.lam.matrix.T) % p
    rhs7 = np.einsum("rn,rmk->mnk", S.nu.matrix, S.actRM.tensor) % p
    rep.add("axiom7", np.array_equal(lhs7, rhs7), first_nonzero(lhs7 - rhs7))
    lhs8 = (H @ S.lamp.matrix.T) % p
    rhs8 = np.einsum("rm,rnk->mnk", S.mu.matrix, S.actRN.tensor) % p
    rep.add("axiom8", np.array_equal(lhs8, rhs8), first_nonzero(lhs8 - rhs8))

    # axiom 9: h(m, lamp l) = mu(m).l ; axiom 10: h(lam l, n) = nu(n).l
    lhs9 = np.einsum("nl,mnk->mlk", S.lamp.matrix, H) % p
    rhs9 = np.einsum("rm,rlk->mlk", S.mu.matrix, S.actRL.tensor) % p
    rep.add("axiom9", np.array_equal(lhs9, rhs9), first_nonzero(lhs9 - rhs9))
    lhs10 = np.einsum("ml,mnk->lnk", S.lam.matrix, H) % p
    rhs10 = np.einsum("rn,rlk->lnk", S.nu.matrix, S.actRL.tensor) % p
    rep.add("axiom10", np.array_equal(lhs10, rhs10), first_nonzero(lhs10 - rhs10))
    return rep


def square_homology(S, check=True):
    """Homology of the mapping cone ``L -> M (+) N -> R``.

    ``pi1 = R / (mu M + nu N)``, ``pi2 = ker(mu + nu) / im(-lam, lamp)``,
    ``pi3 = ker lam  /\\ ker lamp``.
    """
    if check:
        rep = check_square(S)
        if not rep.ok:
            raise InvalidStructure(rep)
    p = S.p
    d1 = np.hstack([S.mu.matrix, S.nu.matrix])
    d2 = np.vstack([-S.lam.matrix, S.lamp.matrix]) % p
    im1 = image_of(d1, p)
    ker1 = kernel_of(d1, p)
    im2 = image_of(d2, p)
    ker2 = kernel_of(d2, p)
    dims = (0, S.R.dim - im1.dim, ker1.dim - im2.dim, ker2.dim)
    return HomotopyProfile(dims, {1: subquotient(Subspace.full(p, S.R.dim), im1), 2: subquotient(ker1, im2), 3: ker2.basis})


def square_homology_free(S):
    """Homology of ``L -> M -> R0`` for a square of the free shape.

    Only defined for squares carrying ``free_shape`` (built by
    :func:`crossalg.simplicial.m_functor_2`): there ``R = M x| R0`` and
    the complex uses the pre-crossed boundary ``M -> R0``.
    """
    fs = S.free_shape
    if fs is None:
        raise WrongShape("square is not of the (M, Mbar, M x| R0) shape")
    p = S.p
    dM = fs.boundary.matrix
    im1 = image_of(dM, p)
    ker1 = kernel_of(dM, p)
    im2 = image_of(S.lam.matrix, p)
    ker2 = kernel_of(S.lam.matrix, p)
    dims = (0, fs.base.dim - im1.dim, ker1.dim - im2.dim, ker2.dim)
    return HomotopyProfile(dims, {1: subquotient(Subspace.full(p, fs.base.dim), im1), 2: subquotient(ker1, im2), 3: ker2.basis})


def mapping_cone(S):
    return two_crossed_from_square(S)


# ----------------------------------------------------------------------
# small constructions


def trivial_square(R):
    Z = FiniteAlgebra.zero_mult(R.p, 0, label="0")
    z = AlgebraMorphism.zero(Z, R)
    zz = AlgebraMorphism.zero(Z, Z)
    t = ActionTensor.trivial(R, Z)
    return CrossedSquare(Z, Z, Z, R, zz, zz, z, z, t, t, t, BilinearMap.zero(Z, Z, Z), label="trivial(%s)" % R.label)


def ellis_free_quadratic(S, check=True):
    """``L/h(M,M,M) -> M/<M,M,M> -> R0`` with ``omega([m] (x) [m']) = h(m, bar m')``.

    Needs the free shape: ``N`` is the bar copy of ``M`` inside ``M x| R0``
    and ``<M,M,M>`` is taken in the pre-crossed module ``M -> R0``.
    """
    from .algebra import ideal_generated, induced_action, quotient_algebra
    from .crossed import PreCrossedModule, triple_peiffer_ideal, quotient_precrossed
    from .quadratic import build_quadratic

    fs = S.free_shape
    if fs is None:
        raise WrongShape("square is not of the (M, Mbar, M x| R0) shape")
    if check:
        rep = check_square(S)
        if not rep.ok:
            raise InvalidStructure(rep)
    p = S.p
    M, L, R0 = S.M, S.L, fs.base
    X = PreCrossedModule(M, R0, fs.boundary, fs.action, label="pre(%s)" % S.label)
    P3 = triple_peiffer_ideal(X)
    H = S.h.tensor
    Bm = fs.bar.matrix  # N x M
    # Peiffer elements <e_i, e_j> as rows of M
    peif = np.array([X.peiffer_rows(i) for i in range(M.dim)], dtype=np.int64).reshape(M.dim, M.dim, M.dim) if M.dim else np.zeros((0, 0, 0), dtype=np.int64)
    gens = []
    if M.dim and L.dim:
        P = peif.reshape(-1, M.dim)
        barP = (P @ Bm.T) % p  # rows in N
        # h(m, bar<m', m''>) and h(<m, m'>, bar m'')
        gens.append(np.einsum("kn,mnl->mkl", barP, H).reshape(-1, L.dim))
        hb = np.einsum("nj,mnl->mjl", Bm, H)  # h(m, bar e_j)
        gens.append(np.einsum("km,mjl->kjl", P, hb).reshape(-1, L.dim))
    gens = np.vstack(gens) % p if gens else np.zeros((0, L.dim), dtype=np.int64)
    actL0 = ActionTensor.via_morphism(fs.lift_R0, L, S.actRL)
    ops = [actL0.matrix(_unit(R0.dim, r)) for r in range(R0.dim)]
    hMMM = ideal_generated(L, gens, operators=ops)
    Lq, q2 = quotient_algebra(L, hMMM, label="L/h(M,M,M)")
    Mq = quotient_precrossed(X, P3, label="M/<M,M,M>")
    q1 = Mq.projection
    lam_bar = AlgebraMorphism(Lq, Mq.C, q1.matrix @ S.lam.matrix @ q2.section)
    if hMMM.dim and ((q1.matrix @ S.lam.matrix @ hMMM.basis.T) % p).any():
        raise AlgebraError("lam(h(M,M,M)) is not inside <M,M,M>")
    actL = induced_action(actL0, proj=q2)
    omega_M = np.einsum("nj,mnl->mjl", Bm, H)  # h(e_m, bar e_j) in L
    omega_M = (omega_M @ q2.matrix.T) % p
    omega_M = np.einsum("ia,jb,ijl->abl", q1.section, q1.section, omega_M) % p
    Q = build_quadratic(Lq, Mq.C, R0, lam_bar, Mq.boundary, actL, Mq.action, omega_M, label="ellis(%s)" % S.label)
    Q.P3, Q.hMMM, Q.q1, Q.q2 = P3, hMMM, q1, q2
    Q.source = S
    return Q
