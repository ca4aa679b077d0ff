import numpy as np
import pytest

from crossalg.algebra import ActionTensor, AlgebraMorphism, BilinearMap, FiniteAlgebra, field, truncated_poly
from crossalg.crossed import CrossedModule
from crossalg.fixtures import module_crossed_module, random_crossed_module, random_square
from crossalg.square import square_homology, trivial_square
from crossalg.twocrossed import (
    InvalidStructure,
    TwoCrossedModule,
    _mapping_cone_data,
    check_2crossed,
    from_crossed_module,
    homotopy_2crossed,
    lifting_sign_search,
    peiffer_in_semidirect,
    two_crossed_from_square,
)
from helpers import PRIMES, fixtures, mutants, outcome

AXIOMS = {"complex", "d2-multiplicative", "d1-multiplicative", "action-C0-on-C1", "action-C0-on-C2", "d1-equivariant", "d2-equivariant", "2CM1", "2CM2", "2CM3", "2CM4a", "2CM4b-action", "2CM5"}


def zero_over(R):
    Z = FiniteAlgebra.zero_mult(R.p, 0)
    return from_crossed_module(CrossedModule(Z, R, AlgebraMorphism.zero(Z, R), ActionTensor.trivial(R, Z)))


def test_vacuous():
    R = truncated_poly(3, 3)
    X = zero_over(R)
    assert check_2crossed(X).ok
    assert homotopy_2crossed(X).dims == (0, R.dim, 0, 0)


def test_crossed_module_as_2crossed():
    rng = np.random.default_rng(2)
    for _ in range(5):
        cm = random_crossed_module(rng, 3)
        assert check_2crossed(from_crossed_module(cm)).ok


def test_zero_boundary_homotopy():
    cm = module_crossed_module(truncated_poly(5, 3))
    X = from_crossed_module(cm)
    assert homotopy_2crossed(X).dims == (0, cm.R.dim, cm.C.dim, 0)


def test_pi3_of_zero_d2():
    k = field(3)
    A = FiniteAlgebra.zero_mult(3, 1)
    Z = FiniteAlgebra.zero_mult(3, 0)
    X = TwoCrossedModule(
        A, Z, k, AlgebraMorphism.zero(A, Z), AlgebraMorphism.zero(Z, k),
        ActionTensor.trivial(k, Z), ActionTensor.trivial(k, A), BilinearMap.zero(Z, Z, A),
    )
    assert check_2crossed(X).ok
    assert homotopy_2crossed(X).dims[3] == 1


def test_bad_lifting_names_2CM2():
    k = field(3)
    C = truncated_poly(3, 3)
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0, 0] = 1  # {x (x) x} = x, but x.x = x^2
    X = TwoCrossedModule(
        C, C, k, AlgebraMorphism.identity(C), AlgebraMorphism.zero(C, k),
        ActionTensor.trivial(k, C), ActionTensor.trivial(k, C), BilinearMap(C, C, C, T),
    )
    rep = check_2crossed(X)
    assert "2CM2" in [c.name for c in rep.failures()]
    assert rep.get("2CM2").witness is not None
    with pytest.raises(InvalidStructure):
        homotopy_2crossed(X)


def test_trivial_square_cone():
    R = truncated_poly(3, 3)
    X = two_crossed_from_square(trivial_square(R))
    assert (X.C2.dim, X.C1.dim, X.C0.dim) == (0, 0, R.dim)
    assert check_2crossed(X).ok


def test_cone_matches_square_homology():
    for s, S in fixtures("square", 20):
        X = two_crossed_from_square(S)
        assert check_2crossed(X).ok, s
        assert homotopy_2crossed(X).dims == square_homology(S).dims


def test_sign_search_pins_the_convention():
    rng = np.random.default_rng(7)
    seen = []
    for i in range(12):
        seen.append(set(lifting_sign_search(random_square(rng, PRIMES[i % 3]))))
    common = set.intersection(*seen)
    assert common == {(-1, 0)}


def test_peiffer_in_semidirect_matches_generic():
    for s, S in fixtures("square", 10):
        base, _ = _mapping_cone_data(S)
        m, n = S.M.dim, S.N.dim
        for i in range(m + n):
            for j in range(m + n):
                x = np.eye(m + n, dtype=np.int64)[i]
                y = np.eye(m + n, dtype=np.int64)[j]
                first, second = peiffer_in_semidirect(S, (x[:m], x[m:]), (y[:m], y[m:]))
                assert np.array_equal(np.concatenate([first, second]) % S.p, base.peiffer(x, y))
        zero_n = np.zeros(n, dtype=np.int64)
        for c in range(m):
            ec = np.eye(m, dtype=np.int64)[c]
            first, second = peiffer_in_semidirect(S, (np.zeros(m, dtype=np.int64), zero_n), (ec, zero_n))
            assert not first.any() and not second.any()


def test_mutations_fail_with_named_axiom():
    caught = 0
    for s, comp, _, m in mutants("2crossed", 20):
        rep, fail = outcome(m)
        if fail is not None:
            assert fail.name in AXIOMS or fail.name.startswith("algebra-")
            assert fail.witness is not None
            caught += 1
    assert caught >= 10
