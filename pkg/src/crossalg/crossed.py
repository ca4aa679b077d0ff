"""Pre-crossed modules, crossed modules and nil(2)-modules.

A pre-crossed module is a morphism ``d: C -> R`` with an action of ``R`` on
``C`` such that ``d(r.c) = r d(c)``.  The Peiffer element
``<x, y> = xy - d(y).x`` measures the failure of the Peiffer identity.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    ActionTensor,
    AlgebraError,
    AlgebraMorphism,
    AlgElement,
    ParentMismatch,
    ideal_generated,
    induced_action,
    quotient_algebra,
    semidirect_product,
)
from .linalg import Subspace
from .report import Report, first_nonzero


class BoundaryNotVanishingOnP3(AlgebraError):
    pass


class CodomainMismatch(AlgebraError):
    pass


class PreCrossedModule:
    kind = "precrossed"

    def __init__(self, C, R, boundary, action, label=""):
        self.C = C
        self.R = R
        self.boundary = boundary
        self.action = action
        self.p = C.p
        self.label = label

    def retag(self, cls):
        return cls(self.C, self.R, self.boundary, self.action, self.label)

    def __repr__(self):
        return "%s(%s: dim %d -> dim %d)" % (type(self).__name__, self.label or "?", self.C.dim, self.R.dim)

    def act(self, r, c):
        return self.action(r, c)

    def peiffer(self, x, y):
        """``<x, y> = xy - d(y).x`` on coordinate vectors."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return (self.C.mul(x, y) - self.action(self.boundary(y), x)) % self.p

    def peiffer_rows(self, a):
        """Matrix whose row ``b`` is ``<e_a, e_b>``."""
        C, p = self.C, self.p
        ea = np.zeros(C.dim, dtype=np.int64)
        ea[a] = 1
        prod = C.left_matrix(ea).T
        # d(e_b) . e_a for every b
        acts = (self.boundary.matrix.T @ self.action.tensor[:, a, :]) % p
        return (prod - acts) % p

    def peiffer_tensor(self):
        n = self.C.dim
        out = np.zeros((n, n, n), dtype=np.int64)
        for a in range(n):
            out[a] = self.peiffer_rows(a)
        return out

    def peiffer_span(self):
        """Subspace spanned by all Peiffer elements of basis pairs."""
        n = self.C.dim
        S = Subspace(self.p, n)
        for a in range(n):
            S = S + Subspace(self.p, n, self.peiffer_rows(a))
        return S

    def action_matrices(self):
        return [self.action.matrix(np.eye(self.R.dim, dtype=np.int64)[r]) for r in range(self.R.dim)]


class CrossedModule(PreCrossedModule):
    kind = "crossed"


class Nil2Module(PreCrossedModule):
    kind = "nil2"


def peiffer_element(X, x, y):
    if isinstance(x, AlgElement) or isinstance(y, AlgElement):
        if x.parent is not X.C or y.parent is not X.C:
            raise ParentMismatch("Peiffer element of elements outside C")
        return AlgElement(X.C, X.peiffer(x.coords, y.coords))
    return X.peiffer(x, y)


# ----------------------------------------------------------------------
# checkers


def check_precrossed(X, report=None):
    rep = report or Report("precrossed")
    C, R, d, p = X.C, X.R, X.boundary, X.p
    rep.add("boundary-shape", d.matrix.shape == (R.dim, C.dim), d.matrix.shape)
    viol = d.multiplicativity_violation()
    rep.add("boundary-multiplicative", viol is None, viol)
    viol = X.action.violation()
    rep.add("action", viol is None, viol)
    bad = None
    for r in range(R.dim):
        er = np.zeros(R.dim, dtype=np.int64)
        er[r] = 1
        lhs = (d.matrix @ X.action.matrix(er)) % p
        rhs = (R.left_matrix(er) @ d.matrix) % p
        w = first_nonzero(lhs - rhs)
        if w is not None:
            bad = (r, w[1])
            break
    rep.add("equivariance", bad is None, bad)
    return rep


def _peiffer_identity_witness(X):
    for a in range(X.C.dim):
        w = first_nonzero(X.peiffer_rows(a))
        if w is not None:
            return (a, w[0])
    return None


def check_crossed(X, report=None):
    rep = check_precrossed(X, report or Report("crossed"))
    w = _peiffer_identity_witness(X)
    rep.add("peiffer-identity", w is None, w)
    return rep


def check_nil2(X, report=None):
    rep = check_precrossed(X, report or Report("nil2"))
    P3 = triple_peiffer_ideal(X)
    rep.add("P3-vanishes", P3.dim == 0, None if P3.dim == 0 else P3.basis[0])
    return rep


# ----------------------------------------------------------------------
# Peiffer ideals


def peiffer_ideal_P2(X):
    gens = X.peiffer_span().basis
    return ideal_generated(X.C, gens, operators=X.action_matrices())


def triple_generators(X, G=None):
    """Rows ``<<g, e_c>>`` and ``<e_c, g>`` for ``g`` in a basis of Peiffer elements."""
    n = X.C.dim
    if G is None:
        G = X.peiffer_span().basis
    if G.shape[0] == 0 or n == 0:
        return np.zeros((0, n), dtype=np.int64)
    rows = []
    for g in G:
        # <g, e_c> = g e_c - d(e_c).g
        acts = X.boundary.matrix.T @ np.einsum("a,rak->rk", g, X.action.tensor) % X.p
        left = (X.C.left_matrix(g).T - acts) % X.p
        # <e_c, g> = e_c g - d(g).e_c
        dg = X.boundary(g)
        right = (X.C.left_matrix(g).T - X.action.matrix(dg).T) % X.p
        rows.append(left)
        rows.append(right)
    return np.vstack(rows) % X.p


def triple_peiffer_ideal(X):
    gens = triple_generators(X)
    return ideal_generated(X.C, gens, operators=X.action_matrices())


def quotient_precrossed(X, ideal, cls=None, label=""):
    """Quotient ``C/I -> R`` for an ``R``-stable ideal with ``d(I) = 0``."""
    if ideal.dim and np.any(X.boundary(ideal.basis)):
        raise BoundaryNotVanishingOnP3("boundary does not vanish on the ideal")
    Q, q = quotient_algebra(X.C, ideal, label=label or (X.C.label + "/I"))
    d = AlgebraMorphism(Q, X.R, X.boundary.matrix @ q.section)
    act = induced_action(X.action, proj=q)
    out = (cls or type(X))(Q, X.R, d, act, label or X.label)
    out.projection = q
    return out


def associated_crossed(X):
    P2 = peiffer_ideal_P2(X)
    return quotient_precrossed(X, P2, CrossedModule, label=(X.label + "^cr") if X.label else "")


def nil2_quotient(X):
    P3 = triple_peiffer_ideal(X)
    return quotient_precrossed(X, P3, Nil2Module, label=(X.label + "/P3") if X.label else "")


# ----------------------------------------------------------------------
# semidirect products and coproducts


def semidirect_precrossed(mu, nu, label=""):
    """``M x| N -> R, (m, n) -> mu(m) + nu(n)`` with ``N`` acting on ``M`` through ``R``.

    ``R`` acts componentwise.  Returns the pre-crossed module together
    with the two inclusions.
    """
    if mu.R is not nu.R and (mu.R.dim != nu.R.dim or mu.R.digest() != nu.R.digest()):
        raise CodomainMismatch("crossed modules over different bases")
    M, N, R = mu.C, nu.C, mu.R
    actNM = ActionTensor.via_morphism(nu.boundary, M, mu.action)
    sd = semidirect_product(M, N, actNM, label=label or "%s x| %s" % (M.label, N.label))
    S = sd.algebra
    d = AlgebraMorphism(S, R, np.hstack([mu.boundary.matrix, nu.boundary.matrix]))
    t = np.zeros((R.dim, S.dim, S.dim), dtype=np.int64)
    m = M.dim
    t[:, :m, :m] = mu.action.tensor
    t[:, m:, m:] = nu.action.tensor
    act = ActionTensor(R, S, t)
    X = PreCrossedModule(S, R, d, act, label=label)
    return X, sd.inc_left, sd.inc_right


def coproduct_crossed(mu, nu):
    """``M u N = (M x| N)^cr`` with the canonical maps ``i`` and ``j``."""
    X, i1, j1 = semidirect_precrossed(mu, nu)
    out = associated_crossed(X)
    q = out.projection
    out.i = q.compose(i1)
    out.j = q.compose(j1)
    return out


def check_morphism_of_precrossed(f_top, f_base, X, Y, report=None, prefix=""):
    """``(f_top, f_base): X -> Y`` commutes with boundaries and actions."""
    rep = report or Report("precrossed-morphism")
    p = X.p
    lhs = (Y.boundary.matrix @ f_top.matrix) % p
    rhs = (f_base.matrix @ X.boundary.matrix) % p
    rep.add(prefix + "boundary-commutes", np.array_equal(lhs, rhs), first_nonzero(lhs - rhs))
    bad = None
    for r in range(X.R.dim):
        er = np.zeros(X.R.dim, dtype=np.int64)
        er[r] = 1
        a = (f_top.matrix @ X.action.matrix(er)) % p
        b = (Y.action.matrix(f_base(er)) @ f_top.matrix) % p
        w = first_nonzero(a - b)
        if w is not None:
            bad = (r, w[1])
            break
    rep.add(prefix + "equivariant", bad is None, bad)
    return rep
