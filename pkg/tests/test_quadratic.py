import numpy as np
import pytest

from crossalg.algebra import ActionTensor, AlgebraMorphism, FiniteAlgebra, field, truncated_poly, unital_truncated_poly
from crossalg.crossed import PreCrossedModule, check_crossed, triple_peiffer_ideal
from crossalg.fixtures import module_crossed_module, random_skeleton, truncated_precrossed
from crossalg.quadratic import (
    OmegaNotZero,
    build_quadratic,
    check_factorization,
    check_prop_ho2,
    check_prop_ho3,
    check_quadratic,
    homotopy_quadratic,
    induced_crossed_from_quadratic,
    qm3_literal_violation,
    quadratic_from_2crossed,
    quadratic_from_crossed_complex,
    quadratic_from_nil2,
    quadratic_from_simplicial,
    quadratic_from_square,
    trivial_omega_report,
)
from crossalg.report import Report
from crossalg.simplicial import TruncatedSimplicialAlgebra, moore_homotopy
from crossalg.square import square_homology, trivial_square
from crossalg.twocrossed import from_crossed_module, homotopy_2crossed, two_crossed_from_square
from helpers import PRIMES, fixtures, mutants, outcome

AXIOMS = {
    "delta-multiplicative", "boundary-multiplicative", "action-N-on-L", "action-N-on-M", "C-singular", "QM1-nil2",
    "QM1-w-well-defined", "QM2-complex", "QM2-lift", "QM3-equivariance", "QM3-action", "QM4",
}


def skeleta(count, level=None):
    for s in range(count):
        yield s, random_skeleton(np.random.default_rng(900 + s), PRIMES[s % 3], level=level)


def zero_over(R):
    Z = FiniteAlgebra.zero_mult(R.p, 0)
    from crossalg.crossed import CrossedModule

    return CrossedModule(Z, R, AlgebraMorphism.zero(Z, R), ActionTensor.trivial(R, Z))


# -- examples -----------------------------------------------------------


def test_example1_crossed_base():
    cm = module_crossed_module(truncated_poly(3, 4))
    Q = quadratic_from_nil2(cm)
    assert check_quadratic(Q).ok
    assert homotopy_quadratic(Q).dims == (0, cm.R.dim, cm.C.dim, 0)


def test_example1_non_crossed_base_fails_lift():
    # k[x]+/(x^3) with zero boundary is nil(2) but not crossed: omega = 0 cannot lift w
    Q = quadratic_from_nil2(truncated_precrossed(3, 3))
    rep = check_quadratic(Q)
    assert [c.name for c in rep.failures()] == ["QM2-lift"]
    assert rep.get("QM2-lift").witness is not None


def example3(p=5):
    cm = module_crossed_module(truncated_poly(p, 3))
    L = FiniteAlgebra.zero_mult(p, cm.C.dim)
    return quadratic_from_crossed_complex(L, cm, AlgebraMorphism(L, cm.C, np.eye(cm.C.dim, dtype=np.int64)), cm.action)


def test_example3_crossed_complex():
    Q = example3()
    assert check_quadratic(Q).ok
    assert homotopy_quadratic(Q).dims[3] == 0  # delta injective


def pre_crossed_cube_with_lift(p=3):
    """``M = k[x]+/(x^3)``, ``d = 0``, ``L = span{l}`` with ``delta l = x^2`` and ``omega([x],[x]) = l``."""
    pc = truncated_precrossed(p, 3)
    M, N = pc.C, pc.R
    L = FiniteAlgebra.zero_mult(p, 1)
    delta = AlgebraMorphism(L, M, np.array([[0], [1]]))
    om = np.zeros((2, 2, 1), dtype=np.int64)
    om[0, 0, 0] = 1
    return build_quadratic(L, M, N, delta, pc.boundary, ActionTensor.trivial(N, L), pc.action, om)


def test_lifted_cube_is_quadratic():
    Q = pre_crossed_cube_with_lift()
    assert check_quadratic(Q).ok


def test_induced_crossed_examples():
    Q = pre_crossed_cube_with_lift()
    X = induced_crossed_from_quadratic(Q)
    assert X.C.dim == 1 and check_crossed(X).ok
    Q3 = example3()
    assert induced_crossed_from_quadratic(Q3).C.dim == Q3.M.dim


def test_induced_crossed_always_crossed():
    for s, Q in fixtures("quadratic", 15):
        assert check_crossed(induced_crossed_from_quadratic(Q)).ok


def test_trivial_omega_examples():
    assert trivial_omega_report(quadratic_from_nil2(module_crossed_module(field(3)))).ok
    assert trivial_omega_report(example3()).ok
    cm = module_crossed_module(truncated_poly(3, 3))
    L = truncated_poly(3, 3)
    Q = quadratic_from_crossed_complex(L, cm, AlgebraMorphism.zero(L, cm.C), ActionTensor.trivial(cm.R, L))
    rep = trivial_omega_report(Q)
    assert [c.name for c in rep.failures()] == ["(iii) L.L = 0"]
    assert "QM4" in [c.name for c in check_quadratic(Q).failures()]
    with pytest.raises(OmegaNotZero):
        trivial_omega_report(pre_crossed_cube_with_lift())


# -- the 2-crossed route ------------------------------------------------


def test_from_vacuous_2crossed():
    R = unital_truncated_poly(3, 2)
    Q = quadratic_from_2crossed(from_crossed_module(zero_over(R)))
    assert (Q.L.dim, Q.M.dim, Q.N.dim) == (0, 0, R.dim)


def test_from_crossed_2crossed_keeps_M():
    cm = module_crossed_module(truncated_poly(3, 4))
    X = from_crossed_module(cm)
    Q = quadratic_from_2crossed(X)
    assert Q.P3.dim == 0 and Q.P3prime.dim == 0 and Q.M.dim == cm.C.dim


def test_2crossed_route_on_fixtures():
    for s, X in fixtures("2crossed", 20):
        Q = quadratic_from_2crossed(X)
        assert check_quadratic(Q).ok, s
        assert Q.M.dim == X.C1.dim - triple_peiffer_ideal(X.base).dim
        rep = check_prop_ho2(X)
        assert rep.ok, (s, rep.summary())


def test_ho2_trivial_and_zero_boundary():
    R = field(3)
    assert check_prop_ho2(from_crossed_module(zero_over(R))).ok
    X = from_crossed_module(module_crossed_module(truncated_poly(3, 3)))
    rep = check_prop_ho2(X)
    assert rep.ok and homotopy_2crossed(X).dims[2] == X.C1.dim


# -- the simplicial route -----------------------------------------------


def test_constant_simplicial_gives_trivial_module():
    R = unital_truncated_poly(3, 3)
    Q = quadratic_from_simplicial(TruncatedSimplicialAlgebra.constant(R))
    assert (Q.L.dim, Q.M.dim, Q.N.dim) == (0, 0, R.dim)
    assert check_prop_ho3(TruncatedSimplicialAlgebra.constant(R)).ok


def test_simplicial_route_ho3_and_factorization():
    for s, E in skeleta(20):
        Q = quadratic_from_simplicial(E)
        assert check_quadratic(Q).ok, s
        assert check_prop_ho3(E).ok, s
        assert homotopy_quadratic(Q).dims == moore_homotopy(E).dims
        assert check_factorization(E).ok, s


# -- the square route ---------------------------------------------------


def test_trivial_square_gives_trivial_module():
    R = field(5)
    Q = quadratic_from_square(trivial_square(R))
    assert (Q.L.dim, Q.M.dim, Q.N.dim) == (0, 0, 1)


def test_square_route_is_the_composite():
    for s, S in fixtures("square", 20):
        Q = quadratic_from_square(S)
        Q2 = quadratic_from_2crossed(two_crossed_from_square(S))
        assert np.array_equal(Q.omega.tensor, Q2.omega.tensor)
        assert np.array_equal(Q.delta.matrix, Q2.delta.matrix) and np.array_equal(Q.quotC.matrix, Q2.quotC.matrix)
        assert homotopy_quadratic(Q).dims == square_homology(S).dims


def literal_square_omega(S, Q):
    """``omega([q1(m,n)] (x) [q1(c,a)]) = q2(h(c, na))`` with ``na`` the product in ``N``."""
    p, m = S.p, S.M.dim
    lift = (Q.q1.section @ Q.quotC.section) % p  # C -> M x| N
    out = np.zeros_like(Q.omega.tensor)
    for i in range(Q.C.dim):
        n = lift[m:, i]
        for j in range(Q.C.dim):
            c, a = lift[:m, j], lift[m:, j]
            out[i, j] = Q.q2(S.h(c, S.N.mul(n, a)))
    return out % p


def test_literal_square_omega_is_a_failing_variant():
    differs = failing = 0
    for s, S in fixtures("square", 20):
        Q = quadratic_from_square(S)
        lit = literal_square_omega(S, Q)
        if not np.array_equal(lit, Q.omega.tensor):
            differs += 1
            Q.omega.tensor = lit
            if "QM2-lift" in [c.name for c in check_quadratic(Q).failures()]:
                failing += 1
    assert differs > 0 and failing == differs


def test_qm3_literal_form_fails_off_characteristic_two():
    hits = {2: 0, 3: 0, 5: 0}
    for s, S in fixtures("square", 30):
        Q = quadratic_from_square(S)
        if qm3_literal_violation(Q) is not None:
            hits[S.p] += 1
    assert hits[2] == 0 and hits[3] + hits[5] > 0


def test_mutations_fail_with_named_axiom():
    caught = 0
    for s, comp, _, m in mutants("quadratic", 20):
        rep, fail = outcome(m)
        if fail is not None:
            assert fail.name in AXIOMS or fail.name.startswith("algebra-")
            assert fail.witness is not None or fail.name == "C-singular"
            caught += 1
    assert caught >= 10
