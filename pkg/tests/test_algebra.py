import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crossalg.algebra import (
    ActionTensor,
    AlgebraMorphism,
    IdealNotClosed,
    InvalidAction,
    ModulusMismatch,
    NotAssociative,
    NotCommutative,
    NotPrime,
    ParentMismatch,
    basis_element,
    element,
    field,
    ideal_generated,
    image,
    intersect,
    kernel,
    make_algebra,
    multiply,
    quotient_algebra,
    semidirect_product,
    truncated_poly,
    unital_truncated_poly,
    vector_tensor,
    zero_ideal,
)
from crossalg.algebra import FiniteAlgebra, AlgebraIdeal
from crossalg.fixtures import random_algebra, random_ideal


def seeds():
    return st.tuples(st.sampled_from([2, 3, 5]), st.integers(0, 2**32 - 1))


def test_zero_algebra():
    A = make_algebra(2, np.zeros((0, 0, 0), dtype=np.int64))
    assert A.dim == 0


def test_field_idempotent():
    c = np.zeros((1, 1, 1), dtype=np.int64)
    c[0, 0, 0] = 1
    k = make_algebra(2, c)
    e = basis_element(k, 0)
    assert multiply(e, e) == e


def test_truncated_cube():
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 1] = 1
    A = make_algebra(2, c)
    x, x2 = basis_element(A, 0), basis_element(A, 1)
    assert multiply(x, x) == x2
    assert multiply(x, x2).is_zero() and multiply(x2, x2).is_zero()
    assert A.digest() == truncated_poly(2, 3).digest()


def test_errors_name_triples():
    with pytest.raises(NotPrime):
        make_algebra(4, np.zeros((1, 1, 1), dtype=np.int64))
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 1, 0] = 1
    with pytest.raises(NotCommutative) as e:
        make_algebra(3, c)
    assert e.value.witness[:2] in ((0, 1), (1, 0))
    # e0 e0 = e1, e1 e1 = e1: (e0 e0) e1 = e1 but e0 (e0 e1) = 0
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 1] = 1
    c[1, 1, 1] = 1
    with pytest.raises(NotAssociative):
        make_algebra(3, c)


def test_multiply_basics():
    A = truncated_poly(3, 4)
    a = element(A, [1, 2, 0])
    z = element(A, [0, 0, 0])
    assert multiply(z, a).is_zero()
    with pytest.raises(ParentMismatch):
        multiply(a, basis_element(truncated_poly(3, 3), 0))


@given(seeds())
def test_multiply_commutes(ps):
    p, s = ps
    rng = np.random.default_rng(s)
    A = random_algebra(rng, p)
    if A.dim == 0:
        return
    a, b = element(A, rng.integers(0, p, A.dim)), element(A, rng.integers(0, p, A.dim))
    assert multiply(a, b) == multiply(b, a)


def test_ideal_examples():
    A3, A4 = truncated_poly(2, 3), truncated_poly(2, 4)
    assert ideal_generated(A3, []).dim == 0
    I = ideal_generated(A3, [[0, 1]])
    assert I.dim == 1 and I.closed
    J = ideal_generated(A4, [[0, 1, 0]])
    assert [r.tolist() for r in J.basis] == [[0, 1, 0], [0, 0, 1]]


@given(seeds())
def test_ideal_is_closed_and_minimal(ps):
    p, s = ps
    rng = np.random.default_rng(s)
    A = random_algebra(rng, p)
    if A.dim == 0:
        return
    g = rng.integers(0, p, (1, A.dim))
    I = ideal_generated(A, g)
    assert I.closed and I.contains(g)
    for v in I.basis:
        for i in range(A.dim):
            assert I.contains(A.mul(A.basis()[i], v).reshape(1, -1))


def test_quotient_examples():
    A = truncated_poly(3, 3)
    B, q = quotient_algebra(A, zero_ideal(A))
    assert B.dim == A.dim and np.array_equal(q.matrix, np.eye(2, dtype=np.int64))
    B, q = quotient_algebra(A, AlgebraIdeal(A, np.eye(2, dtype=np.int64)))
    assert B.dim == 0
    B, q = quotient_algebra(A, ideal_generated(A, [[0, 1]]))
    assert B.dim == 1 and B.is_zero_mult
    assert q.is_multiplicative()
    with pytest.raises(IdealNotClosed):
        quotient_algebra(A, AlgebraIdeal(A, np.array([[1, 0]])))


@given(seeds())
def test_quotient_projection_multiplicative(ps):
    p, s = ps
    rng = np.random.default_rng(s)
    A = random_algebra(rng, p)
    if A.dim == 0:
        return
    B, q = quotient_algebra(A, random_ideal(rng, A))
    assert q.multiplicativity_violation() is None
    assert np.array_equal((q.matrix @ q.section) % p, np.eye(B.dim, dtype=np.int64))


def test_kernel_image_intersect():
    A = truncated_poly(3, 3)
    assert kernel(AlgebraMorphism.identity(A)).dim == 0
    assert image(AlgebraMorphism.zero(A, A)).dim == 0
    B, q = quotient_algebra(A, ideal_generated(A, [[0, 1]]))
    K = kernel(q)
    assert [r.tolist() for r in K.basis] == [[0, 1]]
    assert intersect([K, image(AlgebraMorphism.identity(A))]).dim == 1


def test_semidirect_examples():
    k = field(3)
    Z = FiniteAlgebra.zero_mult(3, 0)
    assert semidirect_product(Z, k, ActionTensor.trivial(k, Z)).algebra.dim == 1
    A = truncated_poly(3, 3)
    assert semidirect_product(A, Z, ActionTensor.trivial(Z, A)).algebra.digest() == A.digest()
    M = FiniteAlgebra.zero_mult(3, 1)
    act = ActionTensor(k, M, np.ones((1, 1, 1), dtype=np.int64))
    S = semidirect_product(M, k, act).algebra
    assert S.mul([1, 0], [0, 1]).tolist() == [1, 0]
    S.certify()


def test_semidirect_rejects_bad_action():
    k = field(3)
    M = FiniteAlgebra.zero_mult(3, 1)
    act = ActionTensor(k, M, 2 * np.ones((1, 1, 1), dtype=np.int64))  # e.(e.m) = 4m != 2m
    with pytest.raises(InvalidAction):
        semidirect_product(M, k, act)


def test_vector_tensor():
    U, V = FiniteAlgebra.zero_mult(3, 2), truncated_poly(3, 4)
    assert vector_tensor(FiniteAlgebra.zero_mult(3, 0), V).dim == 0
    T = vector_tensor(U, V)
    assert T.dim == 6 and T.is_zero_mult
    with pytest.raises(ModulusMismatch):
        vector_tensor(U, truncated_poly(2, 3))


def test_identity_element():
    R = unital_truncated_poly(5, 3)
    assert R.identity_element().tolist() == [1, 0, 0]
    assert truncated_poly(5, 3).identity_element() is None
