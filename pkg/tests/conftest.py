import numpy as np
import pytest

from qndlab import (
    ProtocolInstance,
    eigendecompose_hermitian,
    evolve,
    haar_random_unitary,
    pure_state,
)
from qndlab.linalg import PAULI_X, PAULI_Z, random_pure_state


def paper_instance(omega_tau: float) -> ProtocolInstance:
    """Two-level worked example: sigma-z under H = sigma_x / 2."""
    obs = eigendecompose_hermitian(PAULI_Z)
    rho = pure_state(np.array([1.0, 1.0j]) / np.sqrt(2.0))
    h = 0.5 * PAULI_X
    u1 = evolve(h, omega_tau)
    u2 = evolve(h, omega_tau)
    return ProtocolInstance(rho0=rho, u1=u1, u2=u2, observable=obs)


def haar_instance(dim: int, seed: int, observable=None) -> ProtocolInstance:
    """Random instance: Haar unitaries, Haar pure state, diagonal observable."""
    if observable is None:
        if dim == 2:
            observable = PAULI_Z
        else:
            observable = np.diag(np.arange(dim, dtype=float))
    obs = eigendecompose_hermitian(np.asarray(observable, dtype=complex))
    rho = random_pure_state(dim, seed)
    u1 = haar_random_unitary(dim, seed * 3 + 1)
    u2 = haar_random_unitary(dim, seed * 3 + 2)
    return ProtocolInstance(rho0=rho, u1=u1, u2=u2, observable=obs)


@pytest.fixture
def paper_pi3():
    return paper_instance(np.pi / 3.0)
