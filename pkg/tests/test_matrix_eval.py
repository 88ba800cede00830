import itertools
import random
from fractions import Fraction

import pytest
import sympy

from modules.config import Config
from modules.errors import ResourceCapError, UnassignedVariableError
from modules.free_sigma import (
    NCPoly, Slot, amitsur_expand, ch_polynomial, kernel_relations, sigma_of,
)
from modules.sigma_ring import SigmaPoly
from modules.matrix_eval import (
    Assignment, ExactMatrix, char_coeffs, conjugate, cycle_matrix, elementary_matrix,
    eval_nc_poly, eval_sigma_poly, generic_matrices, is_nilpotent, nilpotent_by_sigma,
    random_assignment, random_matrix, random_strictly_upper, verify_identity,
)
from tests.helpers import s, w, x

A, B = NCPoly.var(0), NCPoly.var(1)
DET_MULTIPLICATIVE = s(2, "ab") - s(2, "a") * s(2, "b")
TRACE_MULTIPLICATIVE = s(1, "ab") - s(1, "a") * s(1, "b")


# ─────────────────────────────────────────────────────────────────
# MATRICES
# ─────────────────────────────────────────────────────────────────
def test_char_coeffs_small():
    assert char_coeffs(ExactMatrix.of([[1, 2], [3, 4]])) == [5, -2]
    assert char_coeffs(ExactMatrix.of([[2, 0, 0], [0, 3, 0], [0, 0, 5]])) == [10, 31, 30]
    assert char_coeffs(ExactMatrix.of([[1, 2, 3], [4, 5, 6], [7, 8, 10]])) == [16, -12, -3]


def test_char_coeffs_agree_with_sympy(rng):
    for n in range(1, 6):
        for _ in range(5):
            m = random_matrix(n, rng, 6)
            coeffs = m.to_sympy().charpoly().all_coeffs()
            expected = [(-1) ** i * Fraction(int(c.p), int(c.q)) for i, c in enumerate(coeffs)][1:]
            assert char_coeffs(m) == expected


def test_char_coeffs_on_generic_matrix():
    (g,) = generic_matrices(2, 1)
    sigma1, sigma2 = char_coeffs(g)
    xi = g.domain.gens
    assert sigma1 == xi["xi0_1_1"] + xi["xi0_2_2"]
    assert sigma2 == xi["xi0_1_1"] * xi["xi0_2_2"] - xi["xi0_1_2"] * xi["xi0_2_1"]


def test_commutator_of_elementary_matrices():
    one = ExactMatrix.identity(2)
    e12, e21 = elementary_matrix(2, 1, 2), elementary_matrix(2, 2, 1)
    m = (one + e12) @ (one + e21) @ (one - e12) @ (one - e21)
    assert m == ExactMatrix.of([[3, -1], [1, 0]])
    assert m.det() == 1
    assert m.trace() == 3


def test_cycle_matrix():
    c = cycle_matrix(4)
    assert c.power(4) == ExactMatrix.identity(4)
    assert char_coeffs(c) == [0, 0, 0, -1]
    assert char_coeffs(cycle_matrix(3)) == [0, 0, 1]


def test_nilpotency_two_ways(rng):
    for n in range(2, 5):
        u = random_strictly_upper(n, rng)
        p = ExactMatrix.identity(n) + elementary_matrix(n, n, 1).scale(rng.randint(1, 5))
        m = conjugate(u, p)
        assert is_nilpotent(m)
        assert nilpotent_by_sigma(m)
    m = ExactMatrix.of([[1, 1], [0, 0]])
    assert not is_nilpotent(m)
    assert not nilpotent_by_sigma(m)


# ─────────────────────────────────────────────────────────────────
# EVALUATION
# ─────────────────────────────────────────────────────────────────
def test_eval_sigma_poly():
    a = ExactMatrix.of([[1, 2], [3, 4]])
    b = ExactMatrix.of([[0, 1], [1, 1]])
    asg = Assignment({0: a, 1: b})
    assert eval_sigma_poly(s(1, "ab"), asg) == (a @ b).trace()
    assert eval_sigma_poly(DET_MULTIPLICATIVE, asg) == 0
    assert eval_sigma_poly(s(3, "a"), asg) == 0


def test_eval_nc_poly_is_cayley_hamilton(rng):
    asg = random_assignment([0, 1], 2, rng)
    assert eval_nc_poly(ch_polynomial(2, A), asg).is_zero()
    assert eval_nc_poly(ch_polynomial(2, A + x("ab")), asg).is_zero()
    assert not eval_nc_poly(x("ab") - x("ba"), asg).is_zero()


def test_eval_unassigned():
    asg = Assignment({0: ExactMatrix.identity(2)})
    with pytest.raises(UnassignedVariableError):
        eval_sigma_poly(s(1, "b"), asg)
    with pytest.raises(UnassignedVariableError):
        eval_sigma_poly(s(1, "a") * SigmaPoly.param("t1"), asg)


def test_generic_matrices_cap(monkeypatch):
    monkeypatch.setattr(Config, "MAX_GENERIC_VARS", 4)
    with pytest.raises(ResourceCapError):
        generic_matrices(2, 2)


# ─────────────────────────────────────────────────────────────────
# VERIFICATION
# ─────────────────────────────────────────────────────────────────
def test_verify_determinant_multiplicativity_exact():
    verdict = verify_identity(DET_MULTIPLICATIVE, 2, "exact")
    assert verdict.status == "holds-exact"
    assert verdict.holds


def test_verify_trace_is_not_multiplicative():
    verdict = verify_identity(TRACE_MULTIPLICATIVE, 2, "random", trials=50, seed=7)
    assert verdict.status == "fails"
    assert set(verdict.witness) == {"a", "b"}
    assert verdict.trials <= 50
    assert verdict.value != 0


def test_verify_exact_failure_reports_residual_and_witness():
    verdict = verify_identity(TRACE_MULTIPLICATIVE, 2, "exact", trials=20)
    assert verdict.status == "fails"
    assert verdict.mode == "exact"
    assert verdict.residual
    assert verdict.witness is not None


def test_verify_determinant_fails_at_three():
    verdict = verify_identity(DET_MULTIPLICATIVE, 3, "random", trials=10, seed=1)
    assert verdict.status == "fails"


def test_verify_cayley_hamilton():
    assert verify_identity(ch_polynomial(2, A + B), 2, "exact").status == "holds-exact"
    assert verify_identity(ch_polynomial(3, A + x("ab")), 3, "random",
                           trials=10).status == "holds-randomized"
    assert verify_identity(ch_polynomial(2, A), 3, "random", trials=10).status == "fails"


def test_verify_composite_sigma_vanishes_above_level():
    # σ_3 of a two-term element, reduced at n = 2, is zero on 2×2 matrices
    expr = sigma_of(3, A + x("ab"), 2)
    assert verify_identity(expr, 2, "random", trials=20).holds


def test_verify_with_parameters():
    t1 = SigmaPoly.param("t1")
    assert verify_identity(t1 * DET_MULTIPLICATIVE, 2, "exact").status == "holds-exact"
    failing = verify_identity(t1 * TRACE_MULTIPLICATIVE, 2, "random", trials=30, seed=3)
    assert failing.status == "fails"
    assert "t1" in failing.witness


def test_verify_auto_mode():
    assert verify_identity(DET_MULTIPLICATIVE, 2).status == "holds-exact"
    verdict = verify_identity(ch_polynomial(3, A), 3, trials=5)
    assert verdict.status == "holds-randomized"
    assert verdict.caveat


def test_verify_is_deterministic():
    first = verify_identity(TRACE_MULTIPLICATIVE, 2, "random", trials=10, seed=11)
    second = verify_identity(TRACE_MULTIPLICATIVE, 2, "random", trials=10, seed=11)
    assert first.to_json() == second.to_json()


def test_verify_rejects_unknown_mode():
    with pytest.raises(ValueError):
        verify_identity(DET_MULTIPLICATIVE, 2, "symbolic")


def test_random_assignment_is_seeded():
    a = random_assignment([0, 1], 3, random.Random("k"), 4)
    b = random_assignment([0, 1], 3, random.Random("k"), 4)
    assert a.matrices == b.matrices
    assert all(abs(v) <= 4 for m in a.matrices.values() for r in m.rows for v in r)


def test_sympy_round_trip():
    m = ExactMatrix.of([[Fraction(1, 2), 3], [0, -1]])
    assert ExactMatrix.from_sympy(m.to_sympy()) == m
    assert m.to_sympy() == sympy.Matrix([[sympy.Rational(1, 2), 3], [0, -1]])


# ─────────────────────────────────────────────────────────────────
# ORACLES
# ─────────────────────────────────────────────────────────────────
ORACLE_SLOTS = "t1:a,t2:b,t3:ab"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_amitsur_expansion_matches_characteristic_coefficient(n):
    expansion = amitsur_expand(n, Slot.parse_list(ORACLE_SLOTS), n)
    for trial in range(100):
        asg = random_assignment([0, 1], n, random.Random(f"0:{trial}"), 10,
                                params=["t1", "t2", "t3"])
        t1, t2, t3 = (asg.params[p] for p in ("t1", "t2", "t3"))
        combo = (asg.word(w("a")).scale(t1) + asg.word(w("b")).scale(t2)
                 + asg.word(w("ab")).scale(t3))
        assert eval_sigma_poly(expansion, asg) == char_coeffs(combo)[n - 1]


MONOMIALS = ["a", "b", "aa", "ab", "ba", "bb"]


@pytest.mark.parametrize("f, g", list(itertools.product(MONOMIALS, repeat=2)))
def test_kernel_relations_vanish_on_generic_matrices(f, g):
    for rel in kernel_relations(2, [f], [g]):
        assert verify_identity(rel.phi, 2, "exact").status == "holds-exact"


@pytest.mark.parametrize("fs, gs", [
    (["a", "b"], ["a", "b"]),
    (["a", "ab"], ["b"]),
    (["ab", "ba"], ["aa", "bb"]),
])
def test_kernel_relations_of_monomial_pairs_vanish(fs, gs):
    rels = kernel_relations(2, fs, gs)
    assert rels
    for rel in rels:
        assert verify_identity(rel.phi, 2, "exact").status == "holds-exact"


@pytest.mark.parametrize("fs, gs", [
    (["a"], ["b"]),
    (["a", "b"], ["c"]),
    (["ab"], ["a", "b"]),
])
def test_kernel_relations_at_three_hold_on_random_matrices(fs, gs):
    rels = kernel_relations(3, fs, gs)
    assert rels
    for rel in rels:
        verdict = verify_identity(rel.phi, 3, "random", trials=100, seed=0)
        assert verdict.status == "holds-randomized"


@pytest.mark.parametrize("n, mode", [(2, "exact"), (3, "random"), (4, "random")])
def test_cayley_hamilton_polynomial_of_a_variable(n, mode):
    verdict = verify_identity(ch_polynomial(n, A), n, mode, trials=100)
    expected = "holds-exact" if mode == "exact" else "holds-randomized"
    assert verdict.status == expected
    if mode == "random":
        assert verdict.trials == 100


@pytest.mark.parametrize("n", range(1, 7))
def test_elementary_matrix_coefficients(n):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            coeffs = char_coeffs(elementary_matrix(n, i, j))
            if i == j:
                assert coeffs == [1] + [0] * (n - 1)
            else:
                assert coeffs == [0] * n


@pytest.mark.parametrize("n", range(1, 7))
def test_cycle_determinant(n):
    assert cycle_matrix(n).det() == (-1) ** (n - 1)
    assert char_coeffs(cycle_matrix(n))[-1] == (-1) ** (n - 1)


def test_exact_matrix_follows_sympy(rng):
    for n in range(1, 5):
        a, b = random_matrix(n, rng, 5), random_matrix(n, rng, 5)
        sa, sb = a.to_sympy(), b.to_sympy()
        assert (a @ b).to_sympy() == sa * sb
        assert (a - b).to_sympy() == sa - sb
        assert a.power(3).to_sympy() == sa ** 3
        det, trace = sa.det(method="berkowitz"), sa.trace()
        assert a.det() == Fraction(int(det.p), int(det.q))
        assert a.trace() == Fraction(int(trace.p), int(trace.q))
    assert ExactMatrix.identity(3).power(0) == ExactMatrix.identity(3)
    assert ExactMatrix.zeros(2).is_zero()
