"""Finite-dimensional complex linear algebra for the measurement protocol.

Everything here is dense numpy on small Hilbert spaces (dim <= ~32):
Hermitian spectral decompositions with deterministic phase fixing, unitary
segments generated by Hermitian Hamiltonians, density operators, and a
seeded Haar-random unitary generator for property tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, ZeroVector

HERMITICITY_TOL = 1e-12
VALIDATION_TOL = 1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def as_square_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix contains non-finite entries")
    return a


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def require_hermitian(m, atol: float = HERMITICITY_TOL) -> np.ndarray:
    a = as_square_matrix(m)
    defect = hermiticity_defect(a)
    if defect > atol:
        raise NonHermitianInput(f"Hermiticity defect {defect:.3e} exceeds {atol:.1e}")
    return a


@dataclass(frozen=True)
class Observable:
    """Hermitian observable with its spectral decomposition.

    ``eigenvalues`` are sorted ascending; ``eigenvectors[:, r]`` is the
    eigenvector of ``eigenvalues[r]`` with its first significant component
    made real positive, so decompositions are reproducible.  ``projectors``
    are the rank-1 operators |r><r|, one per basis vector even for
    degenerate eigenvalues.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    projectors: tuple = field(repr=False, default=())

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityOperator:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class UnitarySegment:
    matrix: np.ndarray
    label: str = ""

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Schedule:
    t0: float
    t1: float
    t2: float
    generator: np.ndarray | None = None

    def __post_init__(self):
        if not (self.t0 <= self.t1 <= self.t2):
            raise ValueError("measurement times must satisfy t0 <= t1 <= t2")


def _fix_phases(vectors: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first nonzero component is real positive."""
    out = vectors.copy()
    for c in range(out.shape[1]):
        col = out[:, c]
        nz = np.flatnonzero(np.abs(col) > atol)
        if nz.size:
            phase = col[nz[0]] / abs(col[nz[0]])
            out[:, c] = col / phase
    return out


def eigendecompose_hermitian(a, atol: float = HERMITICITY_TOL) -> Observable:
    """Spectral decomposition of a Hermitian matrix into rank-1 projectors."""
    mat = require_hermitian(a, atol)
    evals, evecs = np.linalg.eigh(mat)
    evecs = _fix_phases(evecs)
    projectors = tuple(
        np.outer(evecs[:, r], evecs[:, r].conj()) for r in range(mat.shape[0])
    )
    return Observable(
        matrix=mat,
        eigenvalues=evals.real,
        eigenvectors=evecs,
        projectors=projectors,
    )


def evolve(h, dt: float, label: str = "") -> UnitarySegment:
    """Unitary segment exp(-i H dt) via the spectral decomposition of H."""
    if not np.isfinite(dt):
        raise ValueError("dt must be finite")
    obs = eigendecompose_hermitian(h)
    phases = np.exp(-1j * obs.eigenvalues * dt)
    u = (obs.eigenvectors * phases) @ obs.eigenvectors.conj().T
    return UnitarySegment(matrix=u, label=label)


def haar_random_unitary(dim: int, seed: int, label: str = "") -> UnitarySegment:
    """Seeded Haar-distributed unitary (QR of a complex Ginibre matrix)."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitarySegment(matrix=q, label=label)


def random_pure_state(dim: int, seed: int) -> DensityOperator:
    """Seeded Haar-random pure state, handy for property tests."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return pure_state(v)


def pure_state(amplitudes) -> DensityOperator:
    """Normalize a state vector and return its rank-1 density operator."""
    v = np.asarray(amplitudes, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if norm < 1e-15:
        raise ZeroVector("state vector has zero norm")
    v = v / norm
    return DensityOperator(matrix=np.outer(v, v.conj()))


def density_operator(m, atol: float = HERMITICITY_TOL) -> DensityOperator:
    """Validate a density matrix: Hermitian, unit trace, positive."""
    mat = require_hermitian(m, atol)
    tr = np.trace(mat).real
    if abs(tr - 1.0) > 1e-12:
        raise ValueError(f"trace is {tr}, expected 1")
    evals = np.linalg.eigvalsh(mat)
    if evals.min() < -1e-10:
        raise ValueError(f"negative eigenvalue {evals.min():.3e}")
    return DensityOperator(matrix=mat)


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
