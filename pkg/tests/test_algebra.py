import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURE_FILES, load_fixture
from project.libs.algebra import (
    AlgebraError,
    DimensionMismatch,
    NoUnity,
    NoUnityError,
    NotScalar,
    SingularBasis,
    StructureTensor,
    anticommutator,
    basis_vector,
    change_basis,
    check_axioms,
    find_unity,
    left_mul_matrix,
    minimal_polynomial,
    multiply,
    normalize_unity,
    polynomial_at,
    right_mul_matrix,
    scalar_part_test,
    transport,
)
from project.libs.linalg import RealPolynomial, Tolerance
from project.reporting.fixtures import SplitMix64, generate_tensor, random_basis_change

TOL = Tolerance()
ONE, I, J, K = np.eye(4)

# f = (i, j, 1, k): unity lands in slot 2
UNITY_TO_SLOT_TWO = np.column_stack([I, J, ONE, K])


def test_tensor_validation():
    with pytest.raises(AlgebraError):
        StructureTensor(np.zeros((2, 2, 3)))
    with pytest.raises(AlgebraError):
        StructureTensor(np.full((1, 1, 1), np.nan))
    with pytest.raises(AlgebraError):
        StructureTensor(np.zeros((2, 2, 2)), unity_index=0)
    with pytest.raises(AlgebraError):
        StructureTensor(np.zeros((2, 2, 2)), basis_names=("only-one",))
    T = StructureTensor(np.ones((1, 1, 1)))
    assert T.basis_names == ("e0",)
    assert not T.constants.flags.writeable


def test_marked_unity_is_snapped_exactly():
    c = np.zeros((1, 1, 1))
    c[0, 0, 0] = 1.0 + 1e-13
    assert StructureTensor(c, unity_index=0).constants[0, 0, 0] == 1.0


def test_multiply_quaternion_units(quaternions):
    np.testing.assert_array_equal(multiply(quaternions, I, J), K)
    np.testing.assert_array_equal(multiply(quaternions, J, I), -K)
    np.testing.assert_array_equal(multiply(quaternions, ONE + I, ONE + J), [1.0, 1.0, 1.0, 1.0])


def test_multiply_rejects_wrong_length(quaternions):
    with pytest.raises(DimensionMismatch):
        multiply(quaternions, [1.0, 0.0], J)
    with pytest.raises(DimensionMismatch):
        left_mul_matrix(quaternions, [1.0])


def test_left_multiplication_matrices(quaternions):
    np.testing.assert_array_equal(left_mul_matrix(quaternions, ONE), np.eye(4))
    np.testing.assert_array_equal(left_mul_matrix(quaternions, np.zeros(4)), np.zeros((4, 4)))
    L_i = left_mul_matrix(quaternions, I)
    np.testing.assert_array_equal(L_i @ ONE, I)
    np.testing.assert_array_equal(L_i @ I, -ONE)
    np.testing.assert_array_equal(L_i @ J, K)
    np.testing.assert_array_equal(L_i @ K, -J)


def test_right_multiplication_matrices(quaternions):
    np.testing.assert_array_equal(right_mul_matrix(quaternions, ONE), np.eye(4))
    np.testing.assert_array_equal(right_mul_matrix(quaternions, np.zeros(4)), np.zeros((4, 4)))
    L_i = left_mul_matrix(quaternions, I)
    R_i = right_mul_matrix(quaternions, I)
    np.testing.assert_array_equal(R_i[:, :2], L_i[:, :2])
    np.testing.assert_array_equal(R_i[:, 2:], -L_i[:, 2:])


def test_multiplication_matrices_agree_with_multiply(rng):
    T = load_fixture("octonion.json")
    for _ in range(20):
        a, x = rng.standard_normal(8), rng.standard_normal(8)
        np.testing.assert_allclose(left_mul_matrix(T, a) @ x, multiply(T, a, x), atol=1e-12)
        np.testing.assert_allclose(right_mul_matrix(T, a) @ x, multiply(T, x, a), atol=1e-12)


def test_left_multiplication_is_linear(quaternions, rng):
    for _ in range(50):
        a, b, lam = rng.standard_normal(4), rng.standard_normal(4), rng.standard_normal()
        L_a, L_b = left_mul_matrix(quaternions, a), left_mul_matrix(quaternions, b)
        np.testing.assert_allclose(left_mul_matrix(quaternions, a + b), L_a + L_b, atol=1e-12)
        np.testing.assert_allclose(left_mul_matrix(quaternions, lam * a), lam * L_a, atol=1e-12)


def test_find_unity(quaternions):
    np.testing.assert_allclose(find_unity(quaternions, TOL), ONE, atol=1e-12)
    assert isinstance(find_unity(load_fixture("zero_algebra.json"), TOL), NoUnity)
    permuted = change_basis(quaternions, UNITY_TO_SLOT_TWO, TOL)
    np.testing.assert_allclose(find_unity(permuted, TOL), [0.0, 0.0, 1.0, 0.0], atol=1e-12)
    assert permuted.unity_index == 2


def test_find_unity_of_non_basis_unity():
    T = load_fixture("m2r.json")
    np.testing.assert_allclose(find_unity(T, TOL), [1.0, 0.0, 0.0, 1.0], atol=1e-12)


def test_axioms_of_quaternions(quaternions):
    report = check_axioms(quaternions, TOL)
    assert report.associative and report.has_unity
    assert report.worst_assoc_residual == 0.0
    assert report.witness_triple is None


def test_axioms_of_octonions_give_a_witness():
    T = load_fixture("octonion.json")
    report = check_axioms(T, TOL)
    assert report.has_unity
    assert not report.associative
    i, j, k = report.witness_triple
    ei, ej, ek = (basis_vector(T, t) for t in (i, j, k))
    defect = multiply(T, multiply(T, ei, ej), ek) - multiply(T, ei, multiply(T, ej, ek))
    assert np.linalg.norm(defect) == pytest.approx(report.worst_assoc_residual)
    assert report.worst_assoc_residual >= 1e-6


def test_axioms_of_dual_numbers():
    report = check_axioms(load_fixture("dual.json"), TOL)
    assert report.associative and report.has_unity


def test_axioms_of_zero_algebra():
    report = check_axioms(load_fixture("zero_algebra.json"), TOL)
    assert report.associative
    assert not report.has_unity
    assert report.unity is None


def test_anticommutator_examples(quaternions):
    np.testing.assert_array_equal(anticommutator(quaternions, I, J), np.zeros(4))
    x = ONE + 2 * J - K
    np.testing.assert_allclose(anticommutator(quaternions, x, x), 2 * multiply(quaternions, x, x))
    np.testing.assert_allclose(anticommutator(quaternions, I + 2 * J, 3 * I - K), [-6.0, 0.0, 0.0, 0.0])


@pytest.mark.parametrize("name", FIXTURE_FILES)
def test_polarization_identity_on_fixtures(name, rng):
    T = load_fixture(name)
    for _ in range(500):
        x, y = rng.standard_normal(T.dim), rng.standard_normal(T.dim)
        expected = multiply(T, x + y, x + y) - multiply(T, x, x) - multiply(T, y, y)
        bound = 1e-9 * (1.0 + np.linalg.norm(x) + np.linalg.norm(y)) ** 2
        assert np.linalg.norm(anticommutator(T, x, y) - expected) <= bound


def test_polarization_identity_on_twisted_quaternions(rng):
    T = generate_tensor("twist-h", seed=7)
    for _ in range(500):
        x, y = rng.standard_normal(4), rng.standard_normal(4)
        expected = multiply(T, x + y, x + y) - multiply(T, x, x) - multiply(T, y, y)
        scale = (1.0 + np.max(np.abs(T.constants))) * (1.0 + np.linalg.norm(x) + np.linalg.norm(y)) ** 2
        assert np.linalg.norm(anticommutator(T, x, y) - expected) <= 1e-9 * scale


@settings(max_examples=50)
@given(
    st.lists(st.floats(-50, 50), min_size=4, max_size=4),
    st.lists(st.floats(-50, 50), min_size=4, max_size=4),
)
def test_anticommutator_is_symmetric(x, y):
    T = load_fixture("h_standard.json")
    np.testing.assert_array_equal(anticommutator(T, x, y), anticommutator(T, y, x))


def test_minimal_polynomials(quaternions):
    np.testing.assert_allclose(minimal_polynomial(quaternions, ONE, TOL).coeffs, [-1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(minimal_polynomial(quaternions, I, TOL).coeffs, [1.0, 0.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(
        minimal_polynomial(quaternions, 3 * ONE + 4 * I, TOL).coeffs, [25.0, -6.0, 1.0], atol=1e-12
    )


def test_minimal_polynomial_needs_unity():
    with pytest.raises(NoUnityError):
        minimal_polynomial(load_fixture("zero_algebra.json"), [1.0, 0.0], TOL)


def test_minimal_polynomial_annihilates_random_quaternions(quaternions, rng):
    for _ in range(200):
        x = rng.standard_normal(4)
        m = minimal_polynomial(quaternions, x, TOL)
        assert m.degree <= 2
        assert np.linalg.norm(polynomial_at(quaternions, m, x, TOL)) <= 1e-8


def test_minimal_polynomial_of_nilpotent():
    T = load_fixture("dual.json")
    m = minimal_polynomial(T, [1.0, 1.0], TOL)
    np.testing.assert_allclose(m.coeffs, [1.0, -2.0, 1.0], atol=1e-12)


def test_polynomial_at_uses_unity_for_constants(quaternions):
    np.testing.assert_array_equal(polynomial_at(quaternions, RealPolynomial((3.0,)), I, TOL), 3 * ONE)
    np.testing.assert_array_equal(polynomial_at(quaternions, RealPolynomial((1.0, 0.0, 1.0)), J, TOL), np.zeros(4))


def test_scalar_part_test(quaternions):
    assert scalar_part_test(quaternions, 5 * ONE, TOL) == 5.0
    assert isinstance(scalar_part_test(quaternions, I, TOL), NotScalar)
    assert scalar_part_test(quaternions, multiply(quaternions, I, I), TOL) == -1.0


def test_scalar_part_test_with_non_basis_unity():
    T = load_fixture("m2r.json")
    assert scalar_part_test(T, [2.0, 0.0, 0.0, 2.0], TOL) == pytest.approx(2.0)
    assert isinstance(scalar_part_test(T, [1.0, 0.0, 0.0, 0.0], TOL), NotScalar)


def test_change_basis_identity(quaternions):
    same = change_basis(quaternions, np.eye(4), TOL)
    np.testing.assert_array_equal(same.constants, quaternions.constants)
    assert same.unity_index == 0
    assert same.basis_names == quaternions.basis_names


def test_change_basis_permutation(quaternions):
    order = [1, 2, 0, 3]
    permuted = change_basis(quaternions, UNITY_TO_SLOT_TWO, TOL)
    expected = quaternions.constants[np.ix_(order, order, order)]
    np.testing.assert_array_equal(permuted.constants, expected)
    assert permuted.basis_names == ("i", "j", "1", "k")


def test_change_basis_rejects_singular_and_misshaped(quaternions):
    with pytest.raises(SingularBasis):
        change_basis(quaternions, np.ones((4, 4)), TOL)
    with pytest.raises(DimensionMismatch):
        change_basis(quaternions, np.eye(3), TOL)


def test_change_basis_transports_products(quaternions, rng):
    P = random_basis_change(4, SplitMix64(11))
    twisted = change_basis(quaternions, P, TOL)
    assert twisted.provenance["basis_change"] == P.tolist()
    for _ in range(50):
        a, b = rng.standard_normal(4), rng.standard_normal(4)
        lhs = transport(P, multiply(quaternions, a, b))
        rhs = multiply(twisted, transport(P, a), transport(P, b))
        np.testing.assert_allclose(lhs, rhs, atol=1e-8 * (1.0 + np.linalg.norm(lhs)))


def test_change_basis_round_trip(quaternions):
    for seed in range(20):
        P = random_basis_change(4, SplitMix64(seed))
        back = change_basis(change_basis(quaternions, P, TOL), np.linalg.inv(P), TOL)
        np.testing.assert_allclose(back.constants, quaternions.constants, atol=1e-8)


def test_normalize_unity_moves_unity_to_slot_zero(quaternions):
    twisted = generate_tensor("twist-h", seed=3)
    normalized, P = normalize_unity(twisted, TOL)
    assert normalized.unity_index == 0
    np.testing.assert_array_equal(normalized.constants[0], np.eye(4))
    np.testing.assert_allclose(P[:, 0], find_unity(twisted, TOL))
    assert check_axioms(normalized, TOL).associative

    permuted = change_basis(quaternions, UNITY_TO_SLOT_TWO, TOL)
    normalized, _ = normalize_unity(permuted, TOL)
    np.testing.assert_array_equal(normalized.constants[0], np.eye(4))


def test_normalize_unity_without_unity():
    assert isinstance(normalize_unity(load_fixture("zero_algebra.json"), TOL), NoUnity)
