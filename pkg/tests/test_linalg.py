import itertools

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from crossalg.linalg import Subspace, image_of, inv_mod, inverse, is_prime, kernel_of, nullspace, rank, rref, solve


def matrices(max_rows=5, max_cols=5):
    return st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, max_rows), st.integers(1, max_cols), st.integers(0, 2**32 - 1)).map(
        lambda t: (t[0], np.random.default_rng(t[3]).integers(0, t[0], size=(t[1], t[2])))
    )


def brute_rank(A, p):
    """Size of the row space by enumerating every combination of rows."""
    rows = {tuple(np.zeros(A.shape[1], dtype=np.int64))}
    for coeffs in itertools.product(range(p), repeat=A.shape[0]):
        rows.add(tuple((np.array(coeffs) @ A) % p))
    return int(round(np.log(len(rows)) / np.log(p)))


def test_primes():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert all((a * inv_mod(a, 7)) % 7 == 1 for a in range(1, 7))


@given(matrices(4, 4))
def test_rank_matches_enumeration(pa):
    p, A = pa
    assert rank(A, p) == brute_rank(A, p)


@given(matrices())
def test_rref_shape(pa):
    p, A = pa
    R, piv = rref(A, p)
    assert piv == sorted(set(piv))
    for i, c in enumerate(piv):
        assert R[i, c] == 1
        assert np.count_nonzero(R[:, c]) == 1
        assert not R[i, :c].any()


@given(matrices())
def test_nullspace(pa):
    p, A = pa
    N = nullspace(A, p)
    assert not ((A @ N.T) % p).any()
    assert N.shape[0] + rank(A, p) == A.shape[1]


@given(matrices())
def test_solve_consistent(pa):
    p, A = pa
    x = np.random.default_rng(A.size).integers(0, p, size=(A.shape[1], 2))
    B = (A @ x) % p
    X = solve(A, B, p)
    assert np.array_equal((A @ X) % p, B)


def test_solve_inconsistent():
    assert solve(np.array([[1, 0], [1, 0]]), np.array([[0], [1]]), 3) is None


def test_inverse():
    A = np.array([[1, 2], [0, 1]])
    assert np.array_equal((A @ inverse(A, 5)) % 5, np.eye(2, dtype=np.int64))
    assert inverse(np.array([[1, 1], [1, 1]]), 5) is None


@given(matrices(), matrices())
def test_subspace_calculus(pa, pb):
    p, A = pa
    _, B = pb
    n = min(A.shape[1], B.shape[1])
    U, W = Subspace(p, n, A[:, :n] % p), Subspace(p, n, B[:, :n] % p)
    S, I = U + W, U.intersect(W)
    assert S.dim + I.dim == U.dim + W.dim
    assert I <= U and I <= W and U <= S and W <= S
    assert U.contains(U.basis)
    c = U.coords(U.basis)
    assert np.array_equal((c @ U.basis) % p, U.basis)


def test_kernel_image_identity():
    I = np.eye(3, dtype=np.int64)
    assert kernel_of(I, 3).dim == 0
    assert image_of(np.zeros((3, 3), dtype=np.int64), 3).dim == 0


def test_deterministic_pivots():
    A = np.array([[0, 2, 1], [0, 1, 2], [1, 1, 1]])
    assert [r.tolist() for r in rref(A, 3)[0]] == [r.tolist() for r in rref(A.copy(), 3)[0]]
