"""Brute-force reference checks written with explicit loops over basis elements."""

import numpy as np


def unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def mul(A, x, y):
    out = np.zeros(A.dim, dtype=np.int64)
    for i in range(A.dim):
        for j in range(A.dim):
            if x[i] and y[j]:
                out = out + x[i] * y[j] * A.dense[i, j]
    return out % A.p


def act(tensor, r, c, p):
    out = np.zeros(tensor.shape[2], dtype=np.int64)
    for a in range(tensor.shape[0]):
        for b in range(tensor.shape[1]):
            out = out + r[a] * c[b] * tensor[a, b]
    return out % p


def precrossed_ok(X):
    C, R, p = X.C, X.R, X.p
    d = lambda v: (X.boundary.matrix @ v) % p
    for i in range(C.dim):
        for j in range(C.dim):
            ei, ej = unit(C.dim, i), unit(C.dim, j)
            if not np.array_equal(d(mul(C, ei, ej)), mul(R, d(ei), d(ej))):
                return False
    for r in range(R.dim):
        er = unit(R.dim, r)
        for c in range(C.dim):
            ec = unit(C.dim, c)
            if not np.array_equal(d(act(X.action.tensor, er, ec, p)), mul(R, er, d(ec))):
                return False
            for s in range(R.dim):
                es = unit(R.dim, s)
                if not np.array_equal(act(X.action.tensor, mul(R, er, es), ec, p), act(X.action.tensor, er, act(X.action.tensor, es, ec, p), p)):
                    return False
            for c2 in range(C.dim):
                e2 = unit(C.dim, c2)
                if not np.array_equal(mul(C, act(X.action.tensor, er, ec, p), e2), act(X.action.tensor, er, mul(C, ec, e2), p)):
                    return False
    return True


def peiffer(X, x, y):
    return (mul(X.C, x, y) - act(X.action.tensor, (X.boundary.matrix @ y) % X.p, x, X.p)) % X.p


def crossed_ok(X):
    n = X.C.dim
    return precrossed_ok(X) and all(not peiffer(X, unit(n, i), unit(n, j)).any() for i in range(n) for j in range(n))


def nil2_ok(X):
    n = X.C.dim
    if not precrossed_ok(X):
        return False
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x, y, z = unit(n, i), unit(n, j), unit(n, k)
                if peiffer(X, peiffer(X, x, y), z).any() or peiffer(X, x, peiffer(X, y, z)).any():
                    return False
    return True
