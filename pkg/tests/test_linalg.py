import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qndlab import (
    NonHermitianInput,
    ZeroVector,
    eigendecompose_hermitian,
    evolve,
    haar_random_unitary,
    pure_state,
)
from qndlab.linalg import (
    PAULI_X,
    PAULI_Z,
    density_operator,
    random_pure_state,
    unitarity_defect,
)


def random_hermitian(dim, rng):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (z + z.conj().T) / 2.0


class TestEigendecompose:
    def test_pauli_z(self):
        obs = eigendecompose_hermitian(PAULI_Z)
        assert np.allclose(obs.eigenvalues, [-1.0, 1.0])
        assert np.allclose(obs.projectors[0], [[0, 0], [0, 1]])
        assert np.allclose(obs.projectors[1], [[1, 0], [0, 0]])

    def test_identity_degenerate(self):
        obs = eigendecompose_hermitian(np.eye(2))
        assert np.allclose(obs.eigenvalues, [1.0, 1.0])
        assert np.allclose(sum(obs.projectors), np.eye(2), atol=1e-10)
        for p in obs.projectors:
            assert abs(np.trace(p) - 1.0) < 1e-10  # rank-1 even when degenerate

    def test_pauli_x_reconstruction(self):
        obs = eigendecompose_hermitian(PAULI_X)
        assert np.allclose(obs.eigenvalues, [-1.0, 1.0])
        rebuilt = sum(a * p for a, p in zip(obs.eigenvalues, obs.projectors))
        assert np.max(np.abs(rebuilt - PAULI_X)) < 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianInput):
            eigendecompose_hermitian(np.array([[1.0, 1.0], [0.0, 1.0]]))

    @pytest.mark.parametrize("dim", [2, 3])
    def test_reconstruction_battery(self, dim):
        rng = np.random.default_rng(2024 + dim)
        for _ in range(1000):
            a = random_hermitian(dim, rng)
            obs = eigendecompose_hermitian(a)
            rebuilt = sum(v * p for v, p in zip(obs.eigenvalues, obs.projectors))
            assert np.max(np.abs(rebuilt - a)) < 1e-10
            assert np.max(np.abs(sum(obs.projectors) - np.eye(dim))) < 1e-10
            for r in range(dim):
                for s in range(dim):
                    prod = obs.projectors[r] @ obs.projectors[s]
                    ref = obs.projectors[r] if r == s else 0.0
                    assert np.max(np.abs(prod - ref)) < 1e-10

    def test_deterministic_phases(self):
        a = random_hermitian(3, np.random.default_rng(7))
        o1 = eigendecompose_hermitian(a)
        o2 = eigendecompose_hermitian(a.copy())
        assert np.array_equal(o1.eigenvectors, o2.eigenvectors)


class TestEvolve:
    def test_zero_hamiltonian(self):
        u = evolve(np.zeros((2, 2)), 1.0)
        assert np.allclose(u.matrix, np.eye(2))

    def test_pi_pulse_closed_form(self):
        # exp(-i (pi/2) sigma_x) = -i sigma_x
        u = evolve(0.5 * PAULI_X, np.pi)
        assert np.max(np.abs(u.matrix - (-1j) * PAULI_X)) < 1e-12

    def test_inverse_composition(self):
        h = random_hermitian(3, np.random.default_rng(11))
        prod = evolve(h, 0.7).matrix @ evolve(h, -0.7).matrix
        assert np.max(np.abs(prod - np.eye(3))) < 1e-10

    @given(
        t1=st.floats(-3.0, 3.0, allow_nan=False),
        t2=st.floats(-3.0, 3.0, allow_nan=False),
        seed=st.integers(0, 2**31 - 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_group_property(self, t1, t2, seed):
        h = random_hermitian(2, np.random.default_rng(seed))
        lhs = evolve(h, t1).matrix @ evolve(h, t2).matrix
        rhs = evolve(h, t1 + t2).matrix
        assert np.max(np.abs(lhs - rhs)) < 1e-9


class TestHaarRandomUnitary:
    def test_deterministic(self):
        a = haar_random_unitary(2, 42).matrix
        b = haar_random_unitary(2, 42).matrix
        assert np.array_equal(a, b)

    def test_seed_sensitivity(self):
        assert not np.allclose(
            haar_random_unitary(2, 7).matrix, haar_random_unitary(2, 8).matrix
        )

    @given(dim=st.integers(2, 5), seed=st.integers(0, 2**63 - 1))
    @settings(max_examples=80, deadline=None)
    def test_unitary(self, dim, seed):
        u = haar_random_unitary(dim, seed)
        assert unitarity_defect(u.matrix) < 1e-10

    def test_rejects_dim_one(self):
        with pytest.raises(ValueError):
            haar_random_unitary(1, 0)


class TestStates:
    def test_basis_state(self):
        rho = pure_state([1.0, 0.0])
        assert np.allclose(rho.matrix, [[1, 0], [0, 0]])

    def test_paper_initial_state(self):
        rho = pure_state([1.0, 1.0j])
        assert abs(rho.matrix[0, 0] - 0.5) < 1e-15
        assert abs(rho.matrix[1, 1] - 0.5) < 1e-15
        assert abs(rho.matrix[0, 1] - (-0.5j)) < 1e-15

    def test_normalization_applied(self):
        rho = pure_state([2.0, 0.0])
        assert np.allclose(rho.matrix, [[1, 0], [0, 0]])

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            pure_state([0.0, 0.0])

    @given(seed=st.integers(0, 2**31 - 1), dim=st.integers(2, 4))
    @settings(max_examples=60, deadline=None)
    def test_idempotent(self, seed, dim):
        rho = random_pure_state(dim, seed).matrix
        assert np.max(np.abs(rho @ rho - rho)) < 1e-10
        assert abs(np.trace(rho) - 1.0) < 1e-12

    def test_density_operator_validation(self):
        density_operator(np.eye(2) / 2.0)
        with pytest.raises(ValueError):
            density_operator(np.eye(2))  # trace 2
        with pytest.raises(ValueError):
            density_operator(np.diag([1.5, -0.5]))  # negative eigenvalue
