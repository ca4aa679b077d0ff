import numpy as np
import pytest

from crossalg.algebra import AlgebraMorphism, BilinearMap, FiniteAlgebra, field, truncated_poly, unital_truncated_poly
from crossalg.fixtures import module_crossed_module, random_skeleton
from crossalg.freeconstruct import build_skeleton, make_data
from crossalg.quadratic import check_quadratic, homotopy_quadratic
from crossalg.simplicial import TruncatedSimplicialAlgebra, m_functor_2, moore_homotopy
from crossalg.square import (
    CrossedSquare,
    WrongShape,
    check_square,
    ellis_free_quadratic,
    mapping_cone,
    square_homology,
    square_homology_free,
    trivial_square,
)
from crossalg.twocrossed import check_2crossed, homotopy_2crossed, two_crossed_from_square
from helpers import PRIMES, fixtures, mutants, outcome


def skeleta(count):
    for s in range(count):
        yield s, random_skeleton(np.random.default_rng(500 + s), PRIMES[s % 3])


def test_trivial_square():
    R = unital_truncated_poly(3, 3)
    S = trivial_square(R)
    assert check_square(S).ok
    assert square_homology(S).dims == (0, R.dim, 0, 0)


def module_square(R):
    """``(M, M, 0, R)``: ``lam = id``, ``mu = 0``, ``N = 0``."""
    cm = module_crossed_module(R)
    M = cm.C
    Z = FiniteAlgebra.zero_mult(R.p, 0)
    from crossalg.algebra import ActionTensor

    return CrossedSquare(
        M, M, Z, R, AlgebraMorphism.identity(M), AlgebraMorphism.zero(M, Z), cm.boundary, AlgebraMorphism.zero(Z, R),
        cm.action, cm.action, ActionTensor.trivial(R, Z), BilinearMap.zero(M, Z, M),
    )


def test_injective_lambda_zero_mu():
    R = truncated_poly(5, 3)
    S = module_square(R)
    assert check_square(S).ok
    for prof in (square_homology(S), homotopy_2crossed(mapping_cone(S))):
        assert prof.dims[3] == 0 and prof.dims[1] == R.dim


def test_broken_axiom_is_named():
    S = module_square(truncated_poly(5, 3))
    S.lam = AlgebraMorphism(S.L, S.M, 2 * S.lam.matrix)  # still commutes, no longer preserves h-axioms
    S.h = BilinearMap(S.M, S.N, S.L, S.h.tensor)
    S.mu = AlgebraMorphism(S.M, S.R, np.ones((S.R.dim, S.M.dim), dtype=np.int64))
    rep = check_square(S)
    assert not rep.ok
    assert all(c.witness is not None for c in rep.failures())


def test_m2_of_constant_is_trivial():
    R = unital_truncated_poly(3, 2)
    E = TruncatedSimplicialAlgebra.constant(R)
    S = m_functor_2(E)
    assert S.dims == (0, 0, 0, R.dim)
    E0 = build_skeleton(make_data(R, [("x", [0, 1])]), 0)
    assert m_functor_2(E0).dims == (0, 0, 0, R.dim)


def test_m2_on_skeleta_passes_and_h_lands_in_L():
    for s, E in skeleta(12):
        S = m_functor_2(E)
        assert check_square(S).ok, s
        assert S.h.tensor.shape == (S.M.dim, S.N.dim, S.L.dim)


def test_m2_with_degenerate_top():
    # degree cap 1: NE1 = span{x} with x^2 = 0 and NE2 = 0
    data = make_data(field(3), [("x", [0])], degree_cap=1)
    S = m_functor_2(build_skeleton(data, 1))
    assert S.dims == (0, 1, 1, 2) and S.M.is_zero_mult()
    assert check_square(S).ok


def test_square_chain_on_fixtures():
    for s, S in fixtures("square", 20):
        a = square_homology(S)
        X = mapping_cone(S)
        assert check_2crossed(X).ok
        assert a.dims == homotopy_2crossed(X).dims == homotopy_2crossed(two_crossed_from_square(S)).dims


def test_free_formula_on_free_shape():
    for s, E in skeleta(10):
        S = m_functor_2(E)
        assert square_homology_free(S).dims == square_homology(S).dims == moore_homotopy(E).dims


def test_free_formula_rejects_general_squares():
    with pytest.raises(WrongShape):
        square_homology_free(trivial_square(field(3)))


def test_ellis_requires_free_shape():
    with pytest.raises(WrongShape):
        ellis_free_quadratic(trivial_square(field(3)))


def test_ellis_output_valid_and_homology_preserved():
    for s, E in skeleta(12):
        S = m_functor_2(E)
        Q = ellis_free_quadratic(S)
        assert check_quadratic(Q).ok, s
        a, b = homotopy_quadratic(Q).dims, square_homology_free(S).dims
        assert a[1] == b[1] and a[2] == b[2]


def test_ellis_on_crossed_boundary_has_trivial_ideals():
    # Y = {} and one x of weight 1 over k: M is small enough that <M,M,M> vanishes
    data = make_data(field(2), [("x", [0])], degree_cap=2)
    S = m_functor_2(build_skeleton(data, 2))
    Q = ellis_free_quadratic(S)
    assert Q.P3.dim == 0 and Q.hMMM.dim == 0
    assert Q.M.dim == S.M.dim and Q.L.dim == S.L.dim


AXIOMS = {"shape", "commutative", "axiom3-5-bilinear", "axiom6", "axiom7", "axiom8", "axiom9", "axiom10"}


def test_mutations_fail_with_named_axiom():
    caught = 0
    for s, comp, _, m in mutants("square", 20):
        rep, fail = outcome(m)
        if fail is not None:
            assert fail.name in AXIOMS or fail.name.startswith(("axiom1-", "axiom2-", "algebra-"))
            assert fail.witness is not None
            caught += 1
    assert caught >= 10
