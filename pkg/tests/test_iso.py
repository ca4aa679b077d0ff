import numpy as np
import pytest

from crossalg.algebra import AlgebraMorphism, field, truncated_poly
from crossalg.freeconstruct import make_data, totally_free_quadratic
from crossalg.iso import (
    Inconsistent,
    Underdetermined,
    check_quadratic_morphism,
    extend_by_words,
    find_quadratic_isomorphism,
    is_bijective,
    subalgebra_generated,
)


def x(A, k=1):
    v = np.zeros(A.dim, dtype=np.int64)
    v[k - 1] = 1
    return v


def test_subalgebra_generated():
    A = truncated_poly(5, 4)  # x, x^2, x^3
    assert subalgebra_generated(A, [x(A)]).dim == 3
    assert subalgebra_generated(A, [x(A, 2)]).dim == 1  # x^4 = 0


def test_extend_scaling_is_automorphism():
    A = truncated_poly(5, 4)
    f = extend_by_words(A, A, [x(A)], [2 * x(A)])
    assert np.diag(f.matrix).tolist() == [2, 4, 3]
    assert is_bijective(f)
    assert f.multiplicativity_violation() is None


def test_extend_to_square_is_endomorphism():
    A = truncated_poly(5, 4)
    f = extend_by_words(A, A, [x(A)], [x(A, 2)])
    assert f(x(A, 2)).tolist() == [0, 0, 0]
    assert not is_bijective(f)


def test_extend_errors():
    A = truncated_poly(5, 4)
    with pytest.raises(Underdetermined):
        extend_by_words(A, A, [x(A, 2)], [x(A, 2)])
    S, T = truncated_poly(5, 3), truncated_poly(5, 4)
    with pytest.raises(Inconsistent):
        extend_by_words(S, T, [x(S)], [x(T)])  # x^3 = 0 in S but not in T
    assert extend_by_words(T, S, [x(T)], [x(S)]).matrix.tolist() == [[1, 0, 0], [0, 1, 0]]


def free_one(cap=4):
    return totally_free_quadratic(make_data(field(3), [("x", [0])], degree_cap=cap))


def test_quadratic_self_isomorphisms():
    Q = free_one()
    for scale in (1, 2):
        rep, maps = find_quadratic_isomorphism(Q, Q, [(Q.gen_M[0], scale * Q.gen_M[0] % 3)], [])
        assert rep.ok, rep.failures()
        assert all(is_bijective(f) for f in maps)


def test_quadratic_isomorphism_rejects_mismatch():
    Q = free_one()
    Q3 = totally_free_quadratic(make_data(field(3), [("x", [0]), ("z", [0])], degree_cap=3))
    rep, maps = find_quadratic_isomorphism(Q, Q3, [(Q.gen_M[0], Q3.gen_M[0])], [])
    assert not rep.ok
    assert rep.failures()[0].witness is not None


def test_morphism_check_names_failure():
    Q = free_one()
    zero = lambda A: AlgebraMorphism(A, A, np.zeros((A.dim, A.dim), dtype=np.int64))
    ident = AlgebraMorphism.identity
    rep = check_quadratic_morphism(Q, Q, ident(Q.L), zero(Q.M), ident(Q.N))
    assert not rep.ok
    assert rep.failures()[0].witness is not None
    assert check_quadratic_morphism(Q, Q, ident(Q.L), ident(Q.M), ident(Q.N)).ok
