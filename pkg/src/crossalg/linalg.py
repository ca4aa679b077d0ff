"""Dense linear algebra over Z/p.

Matrices are ``numpy.int64`` arrays with entries reduced to ``0..p-1``.
Vectors are rows; a subspace is stored by the reduced row-echelon form of
a spanning set, pivots chosen lowest column first so that every result is
reproducible.
"""

from __future__ import annotations

import numpy as np


class AmbientMismatch(ValueError):
    pass


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def inv_mod(a, p):
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod %d" % p)
    return pow(a, p - 2, p)


def rref(A, p):
    """Reduced row-echelon form of ``A`` mod ``p``.

    Returns ``(R, pivots)`` with zero rows removed.
    """
    R = np.array(A, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r, c:] = (R[r, c:] * inv_mod(R[r, c], p)) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit, c:] = (R[hit, c:] - np.outer(col[hit], R[r, c:])) % p
        pivots.append(c)
        r += 1
    return R[:r].copy(), pivots


def rank(A, p):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p):
    """Basis (rows, RREF) of ``{x : A @ x = 0}``."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    free = [j for j in range(n) if j not in set(piv)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        N[t, f] = 1
        for i, c in enumerate(piv):
            N[t, c] = (-R[i, f]) % p
    if N.shape[0]:
        N, _ = rref(N, p)
    return N


def solve(A, B, p):
    """One solution ``X`` of ``A @ X = B`` or ``None`` when inconsistent."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    m, n = A.shape
    k = B.shape[1]
    if m == 0:
        return np.zeros((n, k), dtype=np.int64)
    R, piv = rref(np.hstack([A, B]), p)
    if any(c >= n for c in piv):
        return None
    X = np.zeros((n, k), dtype=np.int64)
    for i, c in enumerate(piv):
        X[c] = R[i, n:]
    return X


def inverse(A, p):
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        return None
    X = solve(A, np.eye(n, dtype=np.int64), p)
    if X is None or not np.array_equal((A @ X) % p, np.eye(n, dtype=np.int64)):
        return None
    return X


def _rows(V, n):
    V = np.asarray(V, dtype=np.int64)
    if V.size == 0:
        return np.zeros((V.shape[0] if V.ndim == 2 and n == 0 else 0, n), dtype=np.int64)
    return V.reshape(-1, n)


class Subspace:
    """Subspace of ``(Z/p)^n`` held as an RREF basis."""

    def __init__(self, p, n, rows=None, _reduced=False):
        self.p = p
        self.n = n
        rows = _rows(rows if rows is not None else [], n) % p
        if _reduced:
            self.basis = rows
            self.pivots = [int(np.flatnonzero(r)[0]) for r in rows]
        elif rows.shape[0]:
            self.basis, self.pivots = rref(rows, p)
        else:
            self.basis, self.pivots = rows, []

    @classmethod
    def zero(cls, p, n):
        return cls(p, n)

    @classmethod
    def full(cls, p, n):
        return cls(p, n, np.eye(n, dtype=np.int64), _reduced=True)

    @property
    def dim(self):
        return self.basis.shape[0]

    def _check(self, other):
        if other.p != self.p or other.n != self.n:
            raise AmbientMismatch("subspaces live in different ambients")

    def reduce(self, V):
        """Residues of the rows of ``V`` modulo this subspace."""
        V = _rows(V, self.n) % self.p
        if self.dim == 0:
            return V
        coef = V[:, self.pivots]
        return (V - coef @ self.basis) % self.p

    def contains(self, V):
        return not np.any(self.reduce(V))

    def coords(self, V):
        """Coordinates of rows of ``V`` (assumed inside) in this basis."""
        V = _rows(V, self.n) % self.p
        return V[:, self.pivots].copy()

    def __add__(self, other):
        self._check(other)
        return Subspace(self.p, self.n, np.vstack([self.basis, other.basis]))

    def intersect(self, other):
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.p, self.n)
        A = np.vstack([self.basis, -other.basis]).T
        N = nullspace(A, self.p)
        return Subspace(self.p, self.n, N[:, : self.dim] @ self.basis)

    def __le__(self, other):
        self._check(other)
        return other.contains(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.n) == (other.p, other.n) and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash((self.p, self.n, self.basis.tobytes()))

    def complement_columns(self):
        piv = set(self.pivots)
        return [j for j in range(self.n) if j not in piv]

    def __repr__(self):
        return "Subspace(p=%d, n=%d, dim=%d)" % (self.p, self.n, self.dim)


def intersect_all(spaces, p, n):
    out = Subspace.full(p, n)
    for s in spaces:
        out = out.intersect(s)
    return out


def kernel_of(F, p):
    """Kernel of the matrix ``F`` acting on column vectors (domain rows)."""
    F = np.asarray(F, dtype=np.int64)
    return Subspace(p, F.shape[1], nullspace(F, p), _reduced=True)


def image_of(F, p):
    F = np.asarray(F, dtype=np.int64)
    return Subspace(p, F.shape[0], F.T)
