import itertools
import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from infodistance import NumericalError, PreconditionError
from infodistance.distance import ProductTerm, product_expectation
from infodistance.inequalities import PM_OBSERVABLES, PM_TRIPLES
from infodistance.qsim import (
    DensityMatrix,
    PauliString,
    StateVector,
    XYMeasurement,
    commutes,
    expectation,
    ghz_state,
    ghz_xy_expectation_closed_form,
    local_product_matrix,
    observable_matrix,
    outcome_distribution,
    pauli_mul,
    product_operator,
    random_density_matrix,
    random_pure_state,
    xy_matrix,
)

# independent reference matrices
I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
REF = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron(*ms):
    return reduce(np.kron, ms)


def ref_matrix(ps: PauliString):
    return ps.phase * kron(*(REF[f] for f in ps.factors))


def xy_ref(a):
    return math.cos(a) * X + math.sin(a) * Y


class TestPauli:
    def test_examples(self):
        assert pauli_mul(PauliString("XX"), PauliString("YY")) == PauliString("ZZ", 2)
        assert pauli_mul(PauliString("XI"), PauliString("IX")) == PauliString("XX")
        assert pauli_mul(PauliString("XX"), PauliString("XX")) == PauliString("II")
        assert PauliString("X") * PauliString("Y") == PauliString.parse("Z", "+i")

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pauli_mul(PauliString("X"), PauliString("XX"))

    def test_bad_symbol(self):
        with pytest.raises(ValueError):
            PauliString("XQ")
        with pytest.raises(ValueError):
            PauliString.parse("X", "+2")

    def test_exhaustive_two_qubit_algebra(self):
        strings = ["".join(p) for p in itertools.product("IXYZ", repeat=2)]
        for a, b in itertools.product(strings, repeat=2):
            pa, pb = PauliString(a), PauliString(b)
            dense = kron(REF[a[0]], REF[a[1]]) @ kron(REF[b[0]], REF[b[1]])
            np.testing.assert_allclose(ref_matrix(pauli_mul(pa, pb)), dense, atol=1e-15)

    @given(st.text("IXYZ", min_size=1, max_size=3), st.integers(0, 3))
    def test_square_is_scalar(self, f, power):
        p = PauliString(f, power)
        sq = p * p
        assert set(sq.factors) == {"I"}
        if power % 2 == 0:
            assert sq.phase_power == 0

    @given(st.lists(st.text("IXYZ", min_size=3, max_size=3), min_size=3, max_size=3))
    def test_associative(self, fs):
        a, b, c = (PauliString(f) for f in fs)
        assert (a * b) * c == a * (b * c)

    def test_matrix_matches_reference(self):
        for f in ("XYZ", "ZZI", "YIX"):
            for power in range(4):
                p = PauliString(f, power)
                np.testing.assert_allclose(p.matrix(), ref_matrix(p), atol=0)


class TestObservables:
    def test_xy_examples(self):
        np.testing.assert_allclose(observable_matrix(XYMeasurement(0.0), 1), X, atol=1e-15)
        np.testing.assert_allclose(observable_matrix(XYMeasurement(math.pi / 2), 1), Y, atol=1e-15)
        np.testing.assert_allclose(observable_matrix(PauliString("ZZ"), 2), np.diag([1, -1, -1, 1]), atol=0)

    def test_embedding_order(self):
        # qubit 0 is the leftmost factor
        np.testing.assert_allclose(observable_matrix(XYMeasurement(0.3, 0), 2), kron(xy_ref(0.3), I2), atol=1e-15)
        np.testing.assert_allclose(observable_matrix(XYMeasurement(0.3, 1), 2), kron(I2, xy_ref(0.3)), atol=1e-15)

    def test_position_out_of_range(self):
        with pytest.raises(ValueError):
            observable_matrix(XYMeasurement(0.0, 2), 2)
        with pytest.raises(ValueError):
            observable_matrix(PauliString("XX"), 3)

    @given(st.floats(-10, 10))
    def test_xy_involution_and_hermitian(self, a):
        m = xy_matrix(a)
        assert np.max(np.abs(m @ m - I2)) < 1e-12
        assert np.max(np.abs(m - m.conj().T)) < 1e-12
        np.testing.assert_allclose(m, xy_ref(a), atol=1e-12)

    def test_local_product_rejects_shared_qubit(self):
        with pytest.raises(ValueError):
            local_product_matrix([XYMeasurement(0, 0), XYMeasurement(1, 0)], 2)


class TestStates:
    def test_ghz(self):
        s = ghz_state(2)
        np.testing.assert_allclose(s.amplitudes, [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])
        assert np.linalg.norm(ghz_state(3).amplitudes) == pytest.approx(1.0, abs=1e-15)
        assert expectation(ghz_state(3), kron(X, X, X)) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 21])
    def test_ghz_range(self, n):
        with pytest.raises(ValueError):
            ghz_state(n)

    def test_state_validation(self):
        with pytest.raises(ValueError):
            StateVector(np.array([1.0, 1.0], dtype=complex))
        with pytest.raises(ValueError):
            DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]], dtype=complex))
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.5, -0.5]).astype(complex))

    def test_random_states_valid(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            random_pure_state(3, rng)
            random_density_matrix(2, rng)


class TestExpectation:
    def test_tripartite_settings(self):
        g = ghz_state(3)
        assert expectation(g, local_product_matrix([XYMeasurement(math.pi / 6, q) for q in range(3)], 3)) == \
            pytest.approx(0.0, abs=1e-12)
        angles = [math.pi / 6, -math.pi / 12, -math.pi / 12]
        assert expectation(g, local_product_matrix([XYMeasurement(a, q) for q, a in enumerate(angles)], 3)) == \
            pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 8))
    def test_zero_angles(self, n):
        m = local_product_matrix([XYMeasurement(0.0, q) for q in range(n)], n)
        assert expectation(ghz_state(n), m) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_examples(self):
        assert ghz_xy_expectation_closed_form([math.pi / 4, math.pi / 4]) == pytest.approx(0.0, abs=1e-15)
        assert ghz_xy_expectation_closed_form([0.2, -0.2, 0.0]) == 1.0
        with pytest.raises(ValueError):
            ghz_xy_expectation_closed_form([0.1])

    def test_closed_form_matches_dense(self):
        rng = np.random.default_rng(42)
        for n in range(2, 11):
            g = ghz_state(n)
            for _ in range(100 if n <= 7 else 10):
                angles = rng.uniform(-math.pi, math.pi, n)
                dense = expectation(g, local_product_matrix([XYMeasurement(a, q) for q, a in enumerate(angles)], n))
                assert abs(dense - ghz_xy_expectation_closed_form(angles)) < 1e-10

    def test_density_matches_pure(self):
        rng = np.random.default_rng(1)
        s = random_pure_state(2, rng)
        rho = DensityMatrix(np.outer(s.amplitudes, s.amplitudes.conj()))
        for f in ("XY", "ZZ", "YI"):
            m = PauliString(f).matrix()
            assert expectation(rho, m) == pytest.approx(expectation(s, m), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation(ghz_state(2), np.eye(8))

    def test_non_hermitian_is_numerical_error(self):
        s = StateVector(np.array([1, 1j], dtype=complex) / math.sqrt(2))
        with pytest.raises(NumericalError):
            expectation(s, np.array([[0, 1], [0, 0]], dtype=complex))


class TestCommutation:
    def test_examples(self):
        assert commutes(kron(X, I2), kron(I2, X))
        assert not commutes(X, Y)
        with pytest.raises(ValueError):
            commutes(X, np.eye(4))

    def test_pm_triples(self):
        for triple in PM_TRIPLES:
            mats = [PM_OBSERVABLES[lab].matrix() for lab in triple]
            for a, b in itertools.combinations(mats, 2):
                assert commutes(a, b)
                assert np.max(np.abs(a @ b - b @ a)) < 1e-10

    def test_product_operator_examples(self):
        _, c = product_operator([kron(X, I2), kron(I2, X), kron(X, X)])
        assert c == 1
        _, c = product_operator([kron(X, X), kron(Y, Y), kron(Z, Z)])
        assert c == -1
        m, c = product_operator([kron(X, I2)])
        assert c is None
        np.testing.assert_allclose(m, kron(X, I2))

    def test_product_operator_noncommuting(self):
        with pytest.raises(PreconditionError):
            product_operator([X, Y])

    def test_pm_signs_on_random_states(self):
        rng = np.random.default_rng(7)
        states = [random_pure_state(2, rng) for _ in range(25)] + [random_density_matrix(2, rng) for _ in range(25)]
        expected = (1, 1, 1, 1, 1, -1)
        for triple, sign in zip(PM_TRIPLES, expected):
            mat, c = product_operator([PM_OBSERVABLES[lab].matrix() for lab in triple])
            assert c == sign
            for s in states:
                assert expectation(s, mat) == pytest.approx(sign, abs=1e-10)


class TestOutcomeDistribution:
    def test_single_local_measurement_random(self):
        d = outcome_distribution(ghz_state(3), [kron(X, I2, I2)], ["A"])
        assert d.probability((1,)) == pytest.approx(0.5, abs=1e-12)

    def test_pm_triple_product_plus(self):
        rng = np.random.default_rng(3)
        mats = [PM_OBSERVABLES[lab].matrix() for lab in PM_TRIPLES[0]]
        for _ in range(10):
            d = outcome_distribution(random_density_matrix(2, rng), mats, list(PM_TRIPLES[0]))
            assert product_expectation(d, ProductTerm(PM_TRIPLES[0])) == pytest.approx(1.0, abs=1e-10)

    def test_identity_is_point_mass(self):
        d = outcome_distribution(ghz_state(2), [np.eye(4)], ["E"])
        assert d.probability((1,)) == pytest.approx(1.0, abs=1e-12)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            outcome_distribution(ghz_state(2), [2 * np.eye(4)], ["E"])
        with pytest.raises(PreconditionError):
            outcome_distribution(ghz_state(2), [kron(X, I2), kron(Y, I2)], ["a", "b"])

    def test_marginals_reproduce_expectation(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            rho = random_density_matrix(2, rng)
            labels = list(PM_TRIPLES[5])
            mats = [PM_OBSERVABLES[lab].matrix() for lab in labels]
            d = outcome_distribution(rho, mats, labels)
            for lab, m in zip(labels, mats):
                assert product_expectation(d, ProductTerm([lab])) == pytest.approx(expectation(rho, m), abs=1e-10)
