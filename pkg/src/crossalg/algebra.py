"""Finite-dimensional commutative algebras over Z/p.

An algebra is a basis ``e_0 .. e_{n-1}`` and structure constants
``e_i e_j = sum_k c[i, j, k] e_k``.  The constants are kept sparse
(coordinate lists) because the polynomial algebras built by
:mod:`crossalg.freeconstruct` run to several hundred dimensions; a dense
``n x n x n`` view is produced on demand for small algebras.

No identity element is assumed anywhere.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import Subspace, image_of, is_prime, kernel_of, nullspace, rref

# dense associativity check costs n**4 entries
DENSE_CERTIFY_LIMIT = 64


class AlgebraError(ValueError):
    pass


class NotPrime(AlgebraError):
    pass


class NotCommutative(AlgebraError):
    def __init__(self, i, j, k):
        super().__init__("e%d*e%d != e%d*e%d in coordinate %d" % (i, j, j, i, k))
        self.witness = (i, j, k)


class NotAssociative(AlgebraError):
    def __init__(self, i, j, l):
        super().__init__("(e%d*e%d)*e%d != e%d*(e%d*e%d)" % (i, j, l, i, j, l))
        self.witness = (i, j, l)


class ParentMismatch(AlgebraError):
    pass


class ModulusMismatch(AlgebraError):
    pass


class IdealNotClosed(AlgebraError):
    pass


class InvalidAction(AlgebraError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


def _coo_join(A, B):
    """Index pairs ``(a, b)`` with ``A[a] == B[b]``."""
    order = np.argsort(B, kind="stable")
    Bs = B[order]
    lo = np.searchsorted(Bs, A, side="left")
    hi = np.searchsorted(Bs, A, side="right")
    counts = hi - lo
    a = np.repeat(np.arange(A.size), counts)
    offs = np.arange(a.size) - np.repeat(np.cumsum(counts) - counts, counts)
    return a, order[np.repeat(lo, counts) + offs]


class FiniteAlgebra:
    """Commutative, associative, possibly non-unital algebra over Z/p."""

    def __init__(self, p, dim, coo=None, label="", certificate=None, generators=None):
        self.p = int(p)
        self.dim = int(dim)
        if coo is None:
            coo = (np.zeros(0, np.int64),) * 4
        I, J, K, V = (np.asarray(a, dtype=np.int64) for a in coo)
        V = V % self.p
        keep = V != 0
        I, J, K, V = I[keep], J[keep], K[keep], V[keep]
        if I.size:
            # merge duplicates, canonical order
            key = (I * self.dim + J) * self.dim + K
            order = np.argsort(key, kind="stable")
            key, V = key[order], V[order]
            uniq, start = np.unique(key, return_index=True)
            V = np.add.reduceat(V, start) % self.p
            keep = V != 0
            uniq, V = uniq[keep], V[keep]
            K = uniq % self.dim
            J = (uniq // self.dim) % self.dim
            I = uniq // (self.dim * self.dim)
        self.I, self.J, self.K, self.V = I, J, K, V
        self.label = label
        self.certificate = certificate
        # rows generating the algebra; enables cheap multiplicativity checks
        self.generators = generators

    # -- construction -------------------------------------------------
    @classmethod
    def from_dense(cls, p, c, label="", **kw):
        c = np.asarray(c, dtype=np.int64) % p
        n = c.shape[0] if c.ndim == 3 else 0
        if n == 0:
            return cls(p, 0, label=label, **kw)
        I, J, K = np.nonzero(c)
        return cls(p, n, (I, J, K, c[I, J, K]), label=label, **kw)

    @classmethod
    def from_entries(cls, p, dim, entries, label="", **kw):
        entries = list(entries)
        if not entries:
            return cls(p, dim, label=label, **kw)
        arr = np.asarray(entries, dtype=np.int64).reshape(-1, 4)
        return cls(p, dim, (arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]), label=label, **kw)

    @classmethod
    def zero_mult(cls, p, dim, label=""):
        return cls(p, dim, label=label or "k^%d(0)" % dim, certificate="zero multiplication")

    # -- views --------------------------------------------------------
    @cached_property
    def dense(self):
        c = np.zeros((self.dim,) * 3, dtype=np.int64)
        c[self.I, self.J, self.K] = self.V
        return c

    @property
    def nnz(self):
        return int(self.V.size)

    def is_zero_mult(self):
        return self.nnz == 0

    def entries(self):
        return [(int(i), int(j), int(k), int(v)) for i, j, k, v in zip(self.I, self.J, self.K, self.V)]

    def digest(self):
        h = hashlib.sha256()
        h.update(np.array([self.p, self.dim], dtype=np.int64).tobytes())
        for a in (self.I, self.J, self.K, self.V):
            h.update(a.tobytes())
        return h.hexdigest()

    def __repr__(self):
        return "FiniteAlgebra(%s, p=%d, dim=%d)" % (self.label or "?", self.p, self.dim)

    def zeros(self, *shape):
        return np.zeros(shape + (self.dim,), dtype=np.int64)

    def basis(self):
        return np.eye(self.dim, dtype=np.int64)

    # -- arithmetic on coordinate vectors -----------------------------
    def mul(self, u, v):
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        w = np.zeros(self.dim, dtype=np.int64)
        if self.nnz:
            np.add.at(w, self.K, (u[self.I] * v[self.J] % self.p) * self.V)
        return w % self.p

    def left_matrix(self, u):
        """Matrix of ``x -> u*x`` acting on column vectors."""
        u = np.asarray(u, dtype=np.int64)
        L = np.zeros((self.dim, self.dim), dtype=np.int64)
        if self.nnz:
            np.add.at(L, (self.K, self.J), u[self.I] * self.V)
        return L % self.p

    def products(self, U, W):
        """Array ``P[a, b] = U[a] * W[b]`` of shape ``(len(U), len(W), dim)``."""
        U = np.asarray(U, dtype=np.int64).reshape(-1, self.dim)
        W = np.asarray(W, dtype=np.int64).reshape(-1, self.dim)
        out = np.zeros((U.shape[0], W.shape[0], self.dim), dtype=np.int64)
        if not self.nnz:
            return out
        for a in range(U.shape[0]):
            out[a] = (W @ self.left_matrix(U[a]).T) % self.p
        return out

    def square_space(self):
        """The subspace ``A^2`` spanned by all products."""
        if not self.nnz:
            return Subspace(self.p, self.dim)
        rows = np.zeros((self.nnz, self.dim), dtype=np.int64)
        # each basis product e_i e_j
        pairs = {}
        for i, j, k, v in zip(self.I, self.J, self.K, self.V):
            pairs.setdefault((int(i), int(j)), np.zeros(self.dim, dtype=np.int64))[k] = v
        rows = np.array(list(pairs.values()), dtype=np.int64)
        return Subspace(self.p, self.dim, rows)

    # -- certification -------------------------------------------------
    def check_commutative(self):
        table = {(int(i), int(j), int(k)): int(v) for i, j, k, v in zip(self.I, self.J, self.K, self.V)}
        for (i, j, k), v in sorted(table.items()):
            if table.get((j, i, k), 0) != v:
                raise NotCommutative(i, j, k)

    def check_associative(self):
        n = self.dim
        if n == 0 or not self.nnz:
            return
        if n <= DENSE_CERTIFY_LIMIT:
            c = self.dense
            flat = c.reshape(n * n, n)
            # left[(i,j),(l,m)] = sum_k c[i,j,k] c[k,l,m]
            left = (flat @ c.reshape(n, n * n)) % self.p
            # right[(i,j,l),m] = sum_k c[j,l,k] c[i,k,m]
            jl = c.reshape(n * n, n)
            right = np.einsum("sk,ikm->ism", jl, c) % self.p
            left = left.reshape(n, n, n, n)
            right = right.reshape(n, n, n, n)
            bad = np.argwhere(left != right)
            if bad.size:
                i, j, l, _ = bad[0]
                raise NotAssociative(int(i), int(j), int(l))
            return
        # large: join the COO entries, (e_i e_j) e_l against e_i (e_j e_l)
        I, J, K, V, p = self.I, self.J, self.K, self.V, self.p
        ka, kb = _coo_join(K, I)  # c[i,j,k] c[k,l,m]
        left = (((I[ka] * n + J[ka]) * n + J[kb]) * n + K[kb], V[ka] * V[kb])
        ra, rb = _coo_join(K, J)  # c[j,l,k] c[i,k,m]
        right = (((I[rb] * n + I[ra]) * n + J[ra]) * n + K[rb], -V[ra] * V[rb])
        keys = np.concatenate([left[0], right[0]])
        vals = np.concatenate([left[1], right[1]]) % p
        uniq, inv = np.unique(keys, return_inverse=True)
        tot = np.zeros(uniq.size, dtype=np.int64)
        np.add.at(tot, inv, vals)
        bad = np.nonzero(tot % p)[0]
        if bad.size:
            key = int(uniq[bad[0]]) // n
            raise NotAssociative(key // (n * n), (key // n) % n, key % n)

    def certify(self):
        self.check_commutative()
        if self.certificate is None:
            self.check_associative()
            self.certificate = "checked on all basis triples"
        return self

    # -- misc ----------------------------------------------------------
    def identity_element(self):
        """The multiplicative identity as a vector, or ``None``."""
        n = self.dim
        if n == 0:
            return np.zeros(0, dtype=np.int64)
        # sum_i e_i c[i, j, :] = e_j for every j: n*n equations in n unknowns
        A = np.zeros((n * n, n), dtype=np.int64)
        for i, j, k, v in zip(self.I, self.J, self.K, self.V):
            A[j * n + k, i] = (A[j * n + k, i] + v) % self.p
        b = np.eye(n, dtype=np.int64).reshape(n * n, 1)
        from .linalg import solve

        x = solve(A, b, self.p)
        return None if x is None else x[:, 0] % self.p


def make_algebra(p, structconst, label=""):
    """Validated algebra from a dense ``n x n x n`` array over Z/p."""
    if not is_prime(int(p)):
        raise NotPrime("%r is not prime" % (p,))
    c = np.asarray(structconst, dtype=np.int64)
    if c.size == 0:
        return FiniteAlgebra(p, 0, label=label, certificate="zero algebra")
    if c.ndim != 3 or len(set(c.shape)) != 1:
        raise AlgebraError("structure constants must be a cubic array")
    A = FiniteAlgebra.from_dense(p, c, label=label)
    return A.certify()


class AlgElement:
    __slots__ = ("coords", "parent")

    def __init__(self, parent, coords):
        coords = np.asarray(coords, dtype=np.int64) % parent.p
        if coords.shape != (parent.dim,):
            raise ParentMismatch("coordinate length %d != dim %d" % (coords.size, parent.dim))
        self.parent = parent
        self.coords = coords

    def _same(self, other):
        if other.parent is not self.parent:
            raise ParentMismatch("elements of different algebras")

    def __add__(self, other):
        self._same(other)
        return AlgElement(self.parent, self.coords + other.coords)

    def __sub__(self, other):
        self._same(other)
        return AlgElement(self.parent, self.coords - other.coords)

    def __neg__(self):
        return AlgElement(self.parent, -self.coords)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return multiply(self, other)
        return AlgElement(self.parent, self.coords * int(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, AlgElement) and other.parent is self.parent and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def is_zero(self):
        return not self.coords.any()

    def __repr__(self):
        return "AlgElement(%s, %s)" % (self.parent.label or "?", self.coords.tolist())


def element(A, coords):
    return AlgElement(A, coords)


def basis_element(A, i):
    v = np.zeros(A.dim, dtype=np.int64)
    v[i] = 1
    return AlgElement(A, v)


def multiply(a, b):
    if a.parent is not b.parent:
        raise ParentMismatch("elements of different algebras")
    return AlgElement(a.parent, a.parent.mul(a.coords, b.coords))


# ----------------------------------------------------------------------
# morphisms, actions, bilinear maps


class AlgebraMorphism:
    """Linear map ``domain -> codomain``; matrix acts on column vectors."""

    def __init__(self, domain, codomain, matrix, section=None):
        if domain.p != codomain.p:
            raise ModulusMismatch("morphism between different characteristics")
        M = np.asarray(matrix, dtype=np.int64).reshape(codomain.dim, domain.dim) % domain.p
        self.domain = domain
        self.codomain = codomain
        self.matrix = M
        # right inverse (codomain.dim -> domain.dim) for quotient projections
        self.section = section

    @classmethod
    def identity(cls, A):
        return cls(A, A, np.eye(A.dim, dtype=np.int64))

    @classmethod
    def zero(cls, A, B):
        return cls(A, B, np.zeros((B.dim, A.dim), dtype=np.int64))

    def __call__(self, v):
        v = np.asarray(v, dtype=np.int64)
        if v.ndim == 1:
            return (self.matrix @ v) % self.domain.p
        return (v @ self.matrix.T) % self.domain.p

    def compose(self, other):
        """``self o other``."""
        if other.codomain.dim != self.domain.dim:
            raise AlgebraError("cannot compose: dimension mismatch")
        return AlgebraMorphism(other.domain, self.codomain, self.matrix @ other.matrix)

    def __add__(self, other):
        return AlgebraMorphism(self.domain, self.codomain, self.matrix + other.matrix)

    def __neg__(self):
        return AlgebraMorphism(self.domain, self.codomain, -self.matrix)

    def __eq__(self, other):
        return isinstance(other, AlgebraMorphism) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def multiplicativity_violation(self):
        """First basis pair ``(i, j)`` with ``f(e_i e_j) != f(e_i) f(e_j)``."""
        A, B = self.domain, self.codomain
        if A.dim == 0:
            return None
        F = self.matrix
        if A.generators is not None:
            # elements x with f(xy) = f(x)f(y) for all y form a subalgebra
            for gi, g in enumerate(A.generators):
                lhs = (F @ A.left_matrix(g)) % A.p
                rhs = (B.left_matrix(F @ g % A.p) @ F) % A.p
                if not np.array_equal(lhs, rhs):
                    return ("generator", gi, int(np.argwhere(lhs != rhs)[0][1]))
            return None
        for i in range(A.dim):
            ei = np.zeros(A.dim, dtype=np.int64)
            ei[i] = 1
            lhs = (F @ A.left_matrix(ei)) % A.p
            rhs = (B.left_matrix(F[:, i]) @ F) % A.p
            if not np.array_equal(lhs, rhs):
                return (i, int(np.argwhere(lhs != rhs)[0][1]))
        return None

    def is_multiplicative(self):
        return self.multiplicativity_violation() is None

    def kernel(self):
        return kernel_of(self.matrix, self.domain.p)

    def image(self):
        return image_of(self.matrix, self.domain.p)

    def __repr__(self):
        return "AlgebraMorphism(%s -> %s)" % (self.domain.label or self.domain.dim, self.codomain.label or self.codomain.dim)


class ActionTensor:
    """Bilinear action ``actor x acted -> acted`` by a tensor ``t[r, c, c']``."""

    def __init__(self, actor, acted, tensor):
        self.actor = actor
        self.acted = acted
        self.p = acted.p
        self.tensor = np.asarray(tensor, dtype=np.int64).reshape(actor.dim, acted.dim, acted.dim) % self.p

    @classmethod
    def trivial(cls, actor, acted):
        return cls(actor, acted, np.zeros((actor.dim, acted.dim, acted.dim), dtype=np.int64))

    @classmethod
    def from_matrices(cls, actor, acted, mats):
        """``mats[r]`` is the matrix of ``c -> e_r . c`` on column vectors."""
        t = np.zeros((actor.dim, acted.dim, acted.dim), dtype=np.int64)
        for r, m in enumerate(mats):
            t[r] = np.asarray(m, dtype=np.int64).T
        return cls(actor, acted, t)

    @classmethod
    def by_multiplication(cls, A):
        return cls(A, A, A.dense if A.dim else np.zeros((0, 0, 0)))

    @classmethod
    def via_morphism(cls, f, acted, act):
        """Action of ``f.domain`` on ``acted`` given by ``x . c = f(x) . c``."""
        t = np.einsum("ra,ack->rck", f.matrix.T, act.tensor) % acted.p
        return cls(f.domain, acted, t)

    @classmethod
    def into_ideal(cls, actor, acted, inclusion_actor, inclusion_acted, ambient):
        """Action by multiplication inside ``ambient`` of two subobjects.

        ``inclusion_acted`` must have a left inverse on its image; the
        product must land back inside the image of ``inclusion_acted``.
        """
        Ia = inclusion_actor.matrix
        Ic = inclusion_acted.matrix
        sub = Subspace(ambient.p, ambient.dim, Ic.T)
        t = np.zeros((actor.dim, acted.dim, acted.dim), dtype=np.int64)
        for r in range(actor.dim):
            L = ambient.left_matrix(Ia[:, r])
            prod = (L @ Ic).T % ambient.p
            if not sub.contains(prod):
                raise InvalidAction("product leaves the acted subalgebra", (r,))
            t[r] = _coords_in(Ic, prod, ambient.p)
        return cls(actor, acted, t)

    def matrix(self, r):
        """Matrix of ``c -> r . c`` for an actor vector ``r``."""
        r = np.asarray(r, dtype=np.int64)
        return np.einsum("a,ack->kc", r, self.tensor) % self.p

    def __call__(self, r, c):
        r = np.asarray(r, dtype=np.int64)
        c = np.asarray(c, dtype=np.int64)
        return np.einsum("a,b,abk->k", r, c, self.tensor) % self.p

    def violation(self):
        """First failure of the action axioms, or ``None``."""
        R, C, p = self.actor, self.acted, self.p
        mats = [self.tensor[r].T for r in range(R.dim)]
        for a in range(R.dim):
            for b in range(R.dim):
                prod = R.mul(np.eye(R.dim, dtype=np.int64)[a], np.eye(R.dim, dtype=np.int64)[b])
                lhs = self.matrix(prod)
                rhs = (mats[a] @ mats[b]) % p
                if not np.array_equal(lhs, rhs):
                    return ("actor-associativity", (a, b, int(np.argwhere(lhs != rhs)[0][1])))
        for r in range(R.dim):
            for c in range(C.dim):
                # (r.c) c' = r.(c c') for all c'
                lhs = C.left_matrix(self.tensor[r, c])
                ec = np.zeros(C.dim, dtype=np.int64)
                ec[c] = 1
                rhs = (mats[r] @ C.left_matrix(ec)) % p
                if not np.array_equal(lhs, rhs):
                    return ("multiplicative-compatibility", (r, c, int(np.argwhere(lhs != rhs)[0][1])))
        return None

    def validate(self):
        v = self.violation()
        if v is not None:
            raise InvalidAction("action fails %s at %r" % v, v)
        return self


class BilinearMap:
    """``b(e_i, e_j) = sum_k t[i, j, k] e_k``."""

    def __init__(self, left, right, target, tensor):
        self.left = left
        self.right = right
        self.target = target
        self.p = target.p
        self.tensor = np.asarray(tensor, dtype=np.int64).reshape(left.dim, right.dim, target.dim) % self.p

    @classmethod
    def zero(cls, left, right, target):
        return cls(left, right, target, np.zeros((left.dim, right.dim, target.dim), dtype=np.int64))

    def __call__(self, u, v):
        return np.einsum("a,b,abk->k", np.asarray(u), np.asarray(v), self.tensor) % self.p

    def is_zero(self):
        return not self.tensor.any()


def _coords_in(inclusion, rows, p):
    """Coordinates of ``rows`` (ambient vectors) in the column basis of ``inclusion``."""
    from .linalg import solve

    rows = np.asarray(rows, dtype=np.int64)
    if inclusion.shape[1] == 0:
        return np.zeros((rows.shape[0], 0), dtype=np.int64)
    X = solve(inclusion, rows.T, p)
    if X is None:
        raise AlgebraError("vector not in the image of the inclusion")
    return X.T % p


# ----------------------------------------------------------------------
# ideals, quotients, subalgebras


class AlgebraIdeal(Subspace):
    """Subspace of an algebra together with a closure certificate."""

    def __init__(self, ambient, rows=None, closed=None):
        super().__init__(ambient.p, ambient.dim, rows)
        self.ambient = ambient
        self.closed = self._is_closed() if closed is None else closed

    @classmethod
    def of(cls, ambient, space):
        return cls(ambient, space.basis)

    def _is_closed(self):
        A = self.ambient
        if self.dim == 0 or not A.nnz:
            return True
        for v in self.basis:
            if not self.contains(A.left_matrix(v).T):
                return False
        return True


def ideal_generated(A, gens, operators=()):
    """Smallest subspace containing ``gens`` closed under ``A``-multiplication.

    ``operators`` are extra square matrices (acting on column vectors) the
    result must also be stable under, e.g. an external action.
    """
    p, n = A.p, A.dim
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, n) % p if n else np.zeros((0, 0), dtype=np.int64)
    S = Subspace(p, n, gens)
    frontier = S.basis
    ops = [np.asarray(o, dtype=np.int64) for o in operators]
    while frontier.shape[0]:
        imgs = []
        for v in frontier:
            if A.nnz:
                imgs.append(A.left_matrix(v).T)
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
        if S.dim == n:
            break
        frontier = fresh.basis
    return AlgebraIdeal(A, S.basis, closed=True)


def zero_ideal(A):
    return AlgebraIdeal(A, None, closed=True)


def quotient_algebra(A, I, label=""):
    """``A/I`` on the non-pivot coordinates of ``I``, with the projection.

    The returned projection carries ``section``: the lift of quotient basis
    vectors to the corresponding unit vectors of ``A``.
    """
    if isinstance(I, Subspace) and not isinstance(I, AlgebraIdeal):
        I = AlgebraIdeal(A, I.basis)
    if not I.closed:
        raise IdealNotClosed("ideal is not closed under multiplication")
    p, n = A.p, A.dim
    Q = I.complement_columns()
    q = len(Q)
    P = np.zeros((q, n), dtype=np.int64)
    pos = {j: a for a, j in enumerate(Q)}
    for j in Q:
        P[pos[j], j] = 1
    for row, c in zip(I.basis, I.pivots):
        P[:, c] = (-row[Q]) % p
    S = np.zeros((n, q), dtype=np.int64)
    for j in Q:
        S[j, pos[j]] = 1
    ent = []
    if A.nnz and q:
        inQ = np.zeros(n, dtype=bool)
        inQ[Q] = True
        sel = inQ[A.I] & inQ[A.J]
        Qpos = np.full(n, -1, dtype=np.int64)
        Qpos[Q] = np.arange(q)
        Ii, Jj, Kk, Vv = Qpos[A.I[sel]], Qpos[A.J[sel]], A.K[sel], A.V[sel]
        cols = P[:, Kk]  # q x nsel
        a_idx, s_idx = np.nonzero(cols)
        if a_idx.size:
            vals = (cols[a_idx, s_idx] * Vv[s_idx]) % p
            ent = (Ii[s_idx], Jj[s_idx], a_idx, vals)
    cert = "quotient of certified algebra" if A.certificate else None
    B = FiniteAlgebra(p, q, ent if len(ent) else None, label=label or "%s/I" % (A.label or "A"), certificate=cert)
    if B.certificate is None:
        B.certify()
    proj = AlgebraMorphism(A, B, P, section=S)
    return B, proj


def subalgebra(A, space, label="", check=True):
    """Induced algebra on a multiplicatively closed subspace.

    Returns ``(B, inclusion)``; the basis of ``B`` is the RREF basis of
    ``space``.
    """
    space = space if isinstance(space, Subspace) else Subspace(A.p, A.dim, space)
    p, k = A.p, space.dim
    Bm = space.basis
    ent_I, ent_J, ent_K, ent_V = [], [], [], []
    if A.nnz and k:
        for a in range(k):
            prods = (Bm @ A.left_matrix(Bm[a]).T) % p  # rows: B_a * B_b
            if check and not space.contains(prods):
                raise AlgebraError("subspace is not closed under multiplication")
            co = space.coords(prods)
            bb, kk = np.nonzero(co)
            ent_I.append(np.full(bb.size, a))
            ent_J.append(bb)
            ent_K.append(kk)
            ent_V.append(co[bb, kk])
    coo = None
    if ent_I:
        coo = tuple(np.concatenate(x) for x in (ent_I, ent_J, ent_K, ent_V))
    cert = "subalgebra of certified algebra" if A.certificate else None
    B = FiniteAlgebra(p, k, coo, label=label or "sub(%s)" % (A.label or "A"), certificate=cert)
    if B.certificate is None:
        B.certify()
    inc = AlgebraMorphism(B, A, Bm.T)
    return B, inc


def induced_morphism(f, src_proj, tgt_proj):
    """Map ``A/I -> B/J`` induced by ``f: A -> B``; checks ``f(I) <= J``."""
    src_I = kernel_of(src_proj.matrix, f.domain.p)
    tgt_J = kernel_of(tgt_proj.matrix, f.domain.p)
    if src_I.dim and not tgt_J.contains(f(src_I.basis)):
        raise AlgebraError("morphism does not carry the ideal into the ideal")
    M = tgt_proj.matrix @ f.matrix @ src_proj.section
    return AlgebraMorphism(src_proj.codomain, tgt_proj.codomain, M)


def induced_action(act, proj=None, actor_proj=None, sub_inclusion=None):
    """Push an action through a quotient of the acted algebra (and/or actor)."""
    t = act.tensor
    actor, acted = act.actor, act.acted
    p = act.p
    if proj is not None:
        S, P = proj.section, proj.matrix
        t = np.einsum("rck,qk,cb->rbq", t, P, S) % p
        acted = proj.codomain
    if actor_proj is not None:
        t = np.einsum("rbq,ra->abq", t, actor_proj.section) % p
        actor = actor_proj.codomain
    return ActionTensor(actor, acted, t)


def restricted_action(act, inclusion):
    """Action on a stable subalgebra ``inclusion: B -> acted``."""
    B = inclusion.domain
    p = act.p
    Ic = inclusion.matrix
    t = np.zeros((act.actor.dim, B.dim, B.dim), dtype=np.int64)
    for r in range(act.actor.dim):
        img = (act.tensor[r].T @ Ic).T % p  # rows: e_r . b_c in ambient
        t[r] = _coords_in(Ic, img, p)
    return ActionTensor(act.actor, B, t)


def kernel(f):
    return f.kernel()


def image(f):
    return f.image()


def intersect(spaces):
    spaces = list(spaces)
    if not spaces:
        raise AlgebraError("intersect() needs at least one subspace")
    out = spaces[0]
    for s in spaces[1:]:
        out = out.intersect(s)
    return out


def is_stable(space, matrices):
    return all(space.contains(((m @ space.basis.T) % space.p).T) for m in matrices) if space.dim else True


# ----------------------------------------------------------------------
# products


@dataclass(frozen=True)
class SemidirectProduct:
    algebra: FiniteAlgebra
    inc_left: AlgebraMorphism
    inc_right: AlgebraMorphism
    proj_right: AlgebraMorphism
    proj_left_linear: np.ndarray


def semidirect_product(M, R, act, label="", validate=True):
    """``M x| R`` with ``(m,r)(m',r') = (mm' + r.m' + r'.m, rr')``.

    Basis order: the basis of ``M`` followed by the basis of ``R``.
    """
    if M.p != R.p:
        raise ModulusMismatch("semidirect product over different primes")
    if validate:
        act.validate()
    p, m, r = M.p, M.dim, R.dim
    n = m + r
    c = np.zeros((n, n, n), dtype=np.int64)
    if m:
        c[:m, :m, :m] = M.dense
    if r:
        c[m:, m:, m:] = R.dense
    if m and r:
        c[m:, :m, :m] = act.tensor
        c[:m, m:, :m] = act.tensor.transpose(1, 0, 2)
    cert = "semidirect product of certified algebras" if (M.certificate and R.certificate) else None
    S = FiniteAlgebra.from_dense(p, c, label=label or "%s x| %s" % (M.label, R.label), certificate=cert)
    if S.certificate is None:
        S.certify()
    eye = np.eye(n, dtype=np.int64)
    inc_m = AlgebraMorphism(M, S, eye[:, :m])
    inc_r = AlgebraMorphism(R, S, eye[:, m:])
    proj_r = AlgebraMorphism(S, R, eye[m:, :], section=eye[:, m:])
    return SemidirectProduct(S, inc_m, inc_r, proj_r, eye[:m, :])


def direct_product(A, B, label=""):
    if A.p != B.p:
        raise ModulusMismatch("direct product over different primes")
    n = A.dim + B.dim
    ent = [(i, j, k, v) for i, j, k, v in A.entries()]
    o = A.dim
    ent += [(i + o, j + o, k + o, v) for i, j, k, v in B.entries()]
    cert = "direct product of certified algebras" if (A.certificate and B.certificate) else None
    P = FiniteAlgebra.from_entries(A.p, n, ent, label=label or "%s x %s" % (A.label, B.label), certificate=cert)
    if P.certificate is None:
        P.certify()
    return P


def vector_tensor(U, V, label=""):
    """Tensor product of the underlying vector spaces, zero multiplication."""
    if U.p != V.p:
        raise ModulusMismatch("tensor over different primes")
    return FiniteAlgebra.zero_mult(U.p, U.dim * V.dim, label=label or "%s(x)%s" % (U.label, V.label))


def block_diag(*mats):
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def truncated_poly(p, degree, label=""):
    """``k[x]^+/(x^degree)``: basis ``x, x^2, .., x^(degree-1)``."""
    n = max(degree - 1, 0)
    ent = []
    for a in range(1, degree):
        for b in range(1, degree):
            if a + b < degree:
                ent.append((a - 1, b - 1, a + b - 1, 1))
    return FiniteAlgebra.from_entries(p, n, ent, label=label or "k[x]+/(x^%d)" % degree).certify()


def unital_truncated_poly(p, degree, label=""):
    """``k[t]/(t^degree)``: basis ``1, t, .., t^(degree-1)``."""
    ent = []
    for a in range(degree):
        for b in range(degree):
            if a + b < degree:
                ent.append((a, b, a + b, 1))
    return FiniteAlgebra.from_entries(p, degree, ent, label=label or "k[t]/(t^%d)" % degree).certify()


def field(p):
    return FiniteAlgebra.from_entries(p, 1, [(0, 0, 0, 1)], label="k").certify()
