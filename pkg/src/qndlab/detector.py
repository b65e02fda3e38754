"""Joint system-detector simulation and Fourier inversion.

Independent cross-check of the amplitude enumeration: a two-level detector
with momentum eigenvalues +/-1 is phase-coupled to the system observable
before, between and after the two evolution segments.  The off-diagonal
detector element after the full evolution is the quasi-characteristic
function G(lambda); its inverse discrete Fourier transform on the lattice
of achievable delta values recovers the quasi-probability weights.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LatticeMismatch, NonemptyGridRequired
from .linalg import Observable
from .protocol import ProtocolInstance, QuasiDistribution


@dataclass(frozen=True)
class DetectorModel:
    """Two-level detector read out between its +p and -p momentum states."""

    levels: int = 2
    p_values: tuple = (1.0, -1.0)

    def initial_state(self) -> np.ndarray:
        """Equal superposition density matrix; off-diagonal element 1/2."""
        return np.full((2, 2), 0.5, dtype=complex)


@dataclass(frozen=True)
class CharacteristicSamples:
    lambdas: np.ndarray
    values: np.ndarray


def coupling_unitary(obs: Observable, lam: float, det: DetectorModel = DetectorModel()) -> np.ndarray:
    """Joint phase kick exp(i (lambda/2) A (x) p), diagonal in the joint eigenbasis."""
    d = obs.dim
    u = np.zeros((d * det.levels, d * det.levels), dtype=complex)
    for r in range(d):
        proj = obs.projectors[r]
        phases = np.diag(
            [np.exp(0.5j * lam * obs.eigenvalues[r] * p) for p in det.p_values]
        )
        u += np.kron(proj, phases)
    return u


def run_protocol(inst: ProtocolInstance, det: DetectorModel, lam: float) -> complex:
    """One quasi-characteristic sample from the full joint evolution.

    Applies coupling, U1, coupling, U2, coupling to rho0 (x) r0 and extracts
    the normalized detector off-diagonal element.
    """
    d = inst.dim
    eye_det = np.eye(det.levels)
    u_c = coupling_unitary(inst.observable, lam, det)
    u_tot = u_c @ np.kron(inst.u2.matrix, eye_det) @ u_c @ np.kron(inst.u1.matrix, eye_det) @ u_c
    r0 = np.kron(inst.rho0.matrix, det.initial_state())
    if r0.shape != u_tot.shape:
        raise DimensionMismatch("joint space dimensions do not match")
    rt = u_tot @ r0 @ u_tot.conj().T
    # element <s, p | R | s, -p> summed over system states s; p is level 0
    block = rt.reshape(d, det.levels, d, det.levels)
    numerator = complex(np.einsum("ss->", block[:, 0, :, 1]))
    return numerator / 0.5


def sample_characteristic(
    inst: ProtocolInstance, det: DetectorModel, lambdas
) -> CharacteristicSamples:
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size == 0:
        raise NonemptyGridRequired("at least one lambda sample is required")
    values = np.array([run_protocol(inst, det, lam) for lam in lambdas])
    return CharacteristicSamples(lambdas=lambdas, values=values)


def characteristic_from_qpd(qpd: QuasiDistribution, lambdas) -> np.ndarray:
    """Synthesize G(lambda) = sum_delta w(delta) exp(i lambda delta)."""
    lambdas = np.asarray(lambdas, dtype=float)
    deltas = qpd.deltas
    weights = qpd.weights
    return (weights[None, :] * np.exp(1j * np.outer(lambdas, deltas))).sum(axis=1)


@dataclass(frozen=True)
class Lattice:
    """Uniform grid offset + n * spacing, 0 <= n < count, covering all deltas."""

    offset: float
    spacing: float
    count: int

    def points(self) -> np.ndarray:
        return self.offset + self.spacing * np.arange(self.count)


def uniform_lambda_grid(lattice: Lattice, n: int) -> np.ndarray:
    """n-point uniform lambda grid spanning one period 2 pi / spacing."""
    period = 2.0 * math.pi / lattice.spacing
    return np.arange(n) * (period / n)


def _float_gcd(values, rel_tol: float = 1e-9):
    """Approximate positive common divisor of floats, or None."""
    scale = max(values)
    tol = rel_tol * scale
    g = 0.0
    for v in values:
        a, b = v, g
        while abs(b) > tol:
            # Euclid with the symmetric remainder for float robustness
            a, b = b, abs(a - b * round(a / b))
        g = abs(a)
    if g <= tol:
        return None
    for v in values:
        ratio = v / g
        if abs(ratio - round(ratio)) > rel_tol * max(1.0, abs(ratio)):
            return None
    return g


def achievable_deltas(obs: Observable) -> np.ndarray:
    """Every delta value reachable by some index 5-tuple, sorted unique."""
    a = obs.eigenvalues
    four_sums = {
        s / 2.0
        for s in (
            math.fsum(c) for c in itertools.product(a, repeat=4)
        )
    }
    deltas = sorted({float(ak + h) for ak in a for h in four_sums})
    # merge floating-point near-duplicates
    merged = []
    for d in deltas:
        if not merged or d - merged[-1] > 1e-12:
            merged.append(d)
    return np.array(merged)


def detect_lattice(obs: Observable, rel_tol: float = 1e-9) -> Lattice | None:
    """Minimal uniform lattice covering the achievable deltas, if one exists.

    Returns None for incommensurate spectra; callers then fall back to the
    direct amplitude enumeration and use G(lambda) only for consistency checks.
    """
    deltas = achievable_deltas(obs)
    if deltas.size == 1:
        return Lattice(offset=float(deltas[0]), spacing=1.0, count=1)
    diffs = np.diff(deltas)
    g = _float_gcd(list(diffs), rel_tol)
    if g is None:
        return None
    count = int(round((deltas[-1] - deltas[0]) / g)) + 1
    return Lattice(offset=float(deltas[0]), spacing=float(g), count=count)


def invert_to_qpd(
    samples: CharacteristicSamples,
    lattice: Lattice,
    reconstruction_tol: float = 1e-6,
) -> QuasiDistribution:
    """Recover lattice weights from G(lambda) by discrete Fourier inversion.

    The samples must lie on a uniform grid of at least ``lattice.count``
    points spanning one period 2 pi / spacing.  The recovered weights are
    re-synthesized into G(lambda); a residual above ``reconstruction_tol``
    means the declared lattice does not carry the distribution.
    """
    lambdas = samples.lambdas
    n = lambdas.size
    if n < lattice.count:
        raise LatticeMismatch(
            f"{n} samples cannot resolve {lattice.count} lattice points"
        )
    period = 2.0 * math.pi / lattice.spacing
    expected = np.arange(n) * (period / n)
    if not np.allclose(lambdas, expected, atol=1e-9 * period):
        raise LatticeMismatch("lambda samples are not a uniform one-period grid")
    points = lattice.points()
    kernel = np.exp(-1j * np.outer(points, lambdas))
    raw = kernel @ samples.values / n
    resynth = (raw[None, :] * np.exp(1j * np.outer(lambdas, points))).sum(axis=1)
    residual = float(np.max(np.abs(resynth - samples.values)))
    if residual > reconstruction_tol:
        raise LatticeMismatch(
            f"reconstruction residual {residual:.3e} > {reconstruction_tol:.1e}"
        )
    weights = raw.real
    return QuasiDistribution(
        support=tuple(zip(points.tolist(), weights.tolist())),
        classical_part=None,
        quantum_part=None,
        negativity=float(np.sum(np.maximum(0.0, -weights))),
        imag_residue=float(np.max(np.abs(raw.imag))),
    )
