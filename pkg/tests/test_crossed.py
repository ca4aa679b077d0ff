import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from crossalg.algebra import ActionTensor, AlgebraMorphism, FiniteAlgebra, ParentMismatch, basis_element, element, field, truncated_poly
from crossalg.crossed import (
    CodomainMismatch,
    CrossedModule,
    associated_crossed,
    check_crossed,
    check_morphism_of_precrossed,
    check_nil2,
    check_precrossed,
    coproduct_crossed,
    nil2_quotient,
    peiffer_element,
    peiffer_ideal_P2,
    triple_peiffer_ideal,
)
from crossalg.fixtures import module_crossed_module, random_crossed_module, random_precrossed, truncated_precrossed
from crossalg.linalg import Subspace
from helpers import PRIMES, fixtures, mutants, outcome


def zero_crossed(p=3):
    Z = FiniteAlgebra.zero_mult(p, 0)
    k = field(p)
    return CrossedModule(Z, k, AlgebraMorphism.zero(Z, k), ActionTensor.trivial(k, Z))


def test_zero_module_passes_all():
    X = zero_crossed()
    assert check_precrossed(X).ok and check_crossed(X).ok and check_nil2(X).ok


def test_zero_mult_zero_boundary_is_crossed():
    k = field(5)
    C = FiniteAlgebra.zero_mult(5, 3)
    X = CrossedModule(C, k, AlgebraMorphism.zero(C, k), ActionTensor.trivial(k, C))
    assert check_crossed(X).ok


def test_truncated_cube_precrossed_not_crossed():
    X = truncated_precrossed(3, 3)
    assert check_precrossed(X).ok
    rep = check_crossed(X)
    assert not rep.ok and rep.failures()[0].name == "peiffer-identity"
    assert rep.failures()[0].witness == (0, 0)


def test_peiffer_element_examples():
    X = truncated_precrossed(3, 3)
    x = basis_element(X.C, 0)
    assert peiffer_element(X, x, x) == basis_element(X.C, 1)
    assert peiffer_element(X, x, element(X.C, [0, 0])).is_zero()
    Y = module_crossed_module(field(3))
    assert not any(peiffer_element(Y, basis_element(Y.C, 0), basis_element(Y.C, 0)).coords)
    with pytest.raises(ParentMismatch):
        peiffer_element(X, x, basis_element(Y.C, 0))


def test_P2_examples():
    assert [r.tolist() for r in peiffer_ideal_P2(truncated_precrossed(3, 3)).basis] == [[0, 1]]
    assert [r.tolist() for r in peiffer_ideal_P2(truncated_precrossed(3, 4)).basis] == [[0, 1, 0], [0, 0, 1]]
    assert peiffer_ideal_P2(module_crossed_module(field(3))).dim == 0


def test_associated_crossed_examples():
    for deg in (3, 4):
        Xc = associated_crossed(truncated_precrossed(3, deg))
        assert Xc.C.dim == 1 and Xc.C.is_zero_mult and check_crossed(Xc).ok
    Y = module_crossed_module(field(3))
    assert associated_crossed(Y).C.dim == Y.C.dim


def test_P3_examples():
    assert triple_peiffer_ideal(truncated_precrossed(3, 3)).dim == 0
    assert check_nil2(truncated_precrossed(3, 3)).ok
    P3 = triple_peiffer_ideal(truncated_precrossed(3, 4))
    assert [r.tolist() for r in P3.basis] == [[0, 0, 1]]
    Xn = nil2_quotient(truncated_precrossed(3, 4))
    assert Xn.C.dim == 2 and check_nil2(Xn).ok
    assert Xn.C.digest() == truncated_precrossed(3, 3).C.digest()


def test_nil2_quotient_of_crossed_is_identity():
    Y = random_crossed_module(np.random.default_rng(3), 3)
    assert nil2_quotient(Y).C.dim == Y.C.dim


@given(st.sampled_from(PRIMES), st.integers(0, 2**32 - 1))
def test_invariants_on_random_precrossed(p, s):
    X = random_precrossed(np.random.default_rng(s), p)
    assert check_precrossed(X).ok
    P2, P3 = peiffer_ideal_P2(X), triple_peiffer_ideal(X)
    assert Subspace(p, X.C.dim, P3.basis) <= Subspace(p, X.C.dim, P2.basis)
    Xc = associated_crossed(X)
    assert check_crossed(Xc).ok
    assert associated_crossed(Xc).C.dim == Xc.C.dim
    assert check_nil2(nil2_quotient(X)).ok


def test_checkers_agree_with_oracle():
    for s, X in fixtures("precrossed", 15):
        assert check_precrossed(X).ok == oracles.precrossed_ok(X)
        assert check_crossed(X).ok == oracles.crossed_ok(X)
        assert check_nil2(X).ok == oracles.nil2_ok(X)


def test_coproduct_examples():
    k = field(3)
    M = module_crossed_module(k)
    Z = zero_crossed(3)
    Z = CrossedModule(Z.C, k, Z.boundary, Z.action)
    assert coproduct_crossed(M, Z).C.dim == M.C.dim
    assert coproduct_crossed(Z, Z).C.dim == 0
    C1 = FiniteAlgebra.zero_mult(3, 1)
    triv = CrossedModule(C1, k, AlgebraMorphism.zero(C1, k), ActionTensor.trivial(k, C1))
    U = coproduct_crossed(triv, triv)
    assert U.C.dim == 2 and U.C.is_zero_mult


def test_coproduct_canonical_maps():
    rng = np.random.default_rng(11)
    for _ in range(8):
        mu = random_crossed_module(rng, 3)
        R = mu.R
        nu = module_crossed_module(R)
        U = coproduct_crossed(mu, nu)
        assert check_crossed(U).ok
        assert np.array_equal((U.boundary.matrix @ U.i.matrix) % 3, mu.boundary.matrix % 3)
        assert np.array_equal((U.boundary.matrix @ U.j.matrix) % 3, nu.boundary.matrix % 3)
        idR = AlgebraMorphism.identity(R)
        assert check_morphism_of_precrossed(U.i, idR, mu, U).ok
        assert check_morphism_of_precrossed(U.j, idR, nu, U).ok


def test_coproduct_codomain_mismatch():
    with pytest.raises(CodomainMismatch):
        coproduct_crossed(module_crossed_module(field(3)), module_crossed_module(truncated_poly(3, 3)))


@pytest.mark.parametrize("kind", ["precrossed", "crossed", "nil2"])
def test_mutations_fail_or_are_genuinely_valid(kind):
    caught = 0
    for s, comp, _, m in mutants(kind, 20):
        rep, fail = outcome(m)
        oracle = {"precrossed": oracles.precrossed_ok, "crossed": oracles.crossed_ok, "nil2": oracles.nil2_ok}[kind](m)
        assert rep.ok == oracle, (s, comp)
        if fail is not None:
            assert fail.witness is not None
            caught += 1
    assert caught >= 10
