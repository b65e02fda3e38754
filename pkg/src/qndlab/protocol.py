"""Five-index path amplitudes and the quasi-probability distribution.

The three-time sequential measurement of an observable A on a system
evolving through two unitary segments U1, U2 is summarized by complex
amplitudes indexed by (k, j, m, i, l): the system branches through
eigenstates i -> j -> k on the ket side and l -> m -> k on the bra side.
Grouping the amplitudes by the composite outcome

    delta = a_k + (a_j + a_m + a_i + a_l) / 2

yields a real, normalized, possibly negative distribution.  Terms with
m == j and l == i form a genuine classical Markov chain; the rest encode
coherent superpositions of measurement paths and sum to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InstanceTooLarge,
    ResidueTooLarge,
)
from .linalg import DensityOperator, Observable, Schedule, UnitarySegment

DEFAULT_GROUPING_TOL = 1e-9
DEFAULT_ENUMERATION_CAP = 10**6

CLASSICAL = "classical"
QUANTUM = "quantum"

TIME_PAIRS = ((0, 1), (1, 2), (0, 2))


@dataclass(frozen=True)
class ProtocolInstance:
    """Initial state, the two evolution segments and the measured observable."""

    rho0: DensityOperator
    u1: UnitarySegment
    u2: UnitarySegment
    observable: Observable
    schedule: Schedule | None = None

    def __post_init__(self):
        dims = {self.rho0.dim, self.u1.dim, self.u2.dim, self.observable.dim}
        if len(dims) != 1:
            raise DimensionMismatch(f"inconsistent dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.observable.dim

    def eigenbasis_elements(self):
        """Matrix elements of U1, U2 and rho0 in the observable eigenbasis."""
        v = self.observable.eigenvectors
        vh = v.conj().T
        return vh @ self.u1.matrix @ v, vh @ self.u2.matrix @ v, vh @ self.rho0.matrix @ v


@dataclass(frozen=True)
class PathAmplitude:
    indices: tuple
    value: complex
    delta: float
    kind: str


@dataclass(frozen=True)
class AmplitudeSet:
    """Complete list of dim**5 path amplitudes plus the spectrum they refer to."""

    amplitudes: tuple
    eigenvalues: np.ndarray
    dim: int

    def __iter__(self):
        return iter(self.amplitudes)

    def __len__(self):
        return len(self.amplitudes)

    def value(self, k: int, j: int, m: int, i: int, l: int) -> complex:
        d = self.dim
        return self.amplitudes[(((k * d + j) * d + m) * d + i) * d + l].value


def path_amplitude(inst: ProtocolInstance, indices) -> complex:
    """Single amplitude Tr[Pi_k U2 Pi_j U1 Pi_i rho Pi_l U1+ Pi_m U2+].

    Evaluated by explicit matrix products; the element-wise formula used by
    :func:`enumerate_amplitudes` is cross-checked against this in the tests.
    """
    k, j, m, i, l = indices
    d = inst.dim
    if not all(0 <= x < d for x in (k, j, m, i, l)):
        raise IndexOutOfRange(f"indices {indices} outside dimension {d}")
    pi = inst.observable.projectors
    u1, u2 = inst.u1.matrix, inst.u2.matrix
    chain = (
        pi[k] @ u2 @ pi[j] @ u1 @ pi[i] @ inst.rho0.matrix
        @ pi[l] @ u1.conj().T @ pi[m] @ u2.conj().T
    )
    return complex(np.trace(chain))


def enumerate_amplitudes(
    inst: ProtocolInstance, cap: int = DEFAULT_ENUMERATION_CAP
) -> AmplitudeSet:
    """All dim**5 amplitudes, tagged classical iff m == j and l == i.

    Uses the element-wise product U2[k,j] U1[j,i] rho[i,l] U1*[m,l] U2*[k,m]
    valid for rank-1 projectors; O(1) per tuple after a basis change.
    """
    d = inst.dim
    if d**5 > cap:
        raise InstanceTooLarge(f"dim**5 = {d**5} exceeds cap {cap}")
    u1e, u2e, rhoe = inst.eigenbasis_elements()
    values = np.einsum(
        "kj,ji,il,ml,km->kjmil", u2e, u1e, rhoe, u1e.conj(), u2e.conj()
    )
    a = inst.observable.eigenvalues
    amps = []
    for k in range(d):
        for j in range(d):
            for m in range(d):
                for i in range(d):
                    for l in range(d):
                        delta = a[k] + (a[j] + a[m] + a[i] + a[l]) / 2.0
                        kind = CLASSICAL if (m == j and l == i) else QUANTUM
                        amps.append(
                            PathAmplitude(
                                indices=(k, j, m, i, l),
                                value=complex(values[k, j, m, i, l]),
                                delta=float(delta),
                                kind=kind,
                            )
                        )
    return AmplitudeSet(amplitudes=tuple(amps), eigenvalues=a.copy(), dim=d)


@dataclass(frozen=True)
class QuasiDistribution:
    """Grouped (delta, weight) pairs with the classical/quantum split.

    ``classical_part`` and ``quantum_part`` are None for distributions
    recovered by Fourier inversion, where the split is not observable.
    """

    support: tuple
    classical_part: tuple | None
    quantum_part: tuple | None
    negativity: float
    imag_residue: float

    @property
    def deltas(self) -> np.ndarray:
        return np.array([d for d, _ in self.support])

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.support])


def _group_deltas(deltas, tol: float):
    """Cluster sorted delta values within an absolute tolerance.

    Returns (representatives, index_of_group per input value).
    """
    order = np.argsort(deltas)
    reps = []
    group_of = np.empty(len(deltas), dtype=int)
    for pos in order:
        d = deltas[pos]
        if reps and abs(d - reps[-1]) <= tol:
            group_of[pos] = len(reps) - 1
        else:
            reps.append(d)
            group_of[pos] = len(reps) - 1
    return reps, group_of


def _realize(groups_values, n_groups):
    """Compensated per-group summation; returns real weights and max |Im|."""
    weights = np.zeros(n_groups)
    residue = 0.0
    for g in range(n_groups):
        vals = groups_values[g]
        re = math.fsum(v.real for v in vals)
        im = math.fsum(v.imag for v in vals)
        weights[g] = re
        residue = max(residue, abs(im))
    return weights, residue


def build_qpd(
    ampset: AmplitudeSet,
    grouping_tol: float = DEFAULT_GROUPING_TOL,
    residue_tol: float = 1e-8,
) -> QuasiDistribution:
    """Group amplitudes by delta and realize real weights.

    The maximum imaginary part discarded during realization is recorded;
    exceeding ``residue_tol`` signals a numerics or input bug and raises.
    """
    deltas = [a.delta for a in ampset]
    reps, group_of = _group_deltas(deltas, grouping_tol)
    n = len(reps)
    total = [[] for _ in range(n)]
    classical = [[] for _ in range(n)]
    quantum = [[] for _ in range(n)]
    for amp, g in zip(ampset, group_of):
        total[g].append(amp.value)
        (classical if amp.kind == CLASSICAL else quantum)[g].append(amp.value)
    w_tot, res_tot = _realize(total, n)
    w_cl, res_cl = _realize(classical, n)
    w_q, res_q = _realize(quantum, n)
    residue = max(res_tot, res_cl, res_q)
    if residue > residue_tol:
        raise ResidueTooLarge(f"imaginary residue {residue:.3e} > {residue_tol:.1e}")
    return QuasiDistribution(
        support=tuple(zip(reps, w_tot)),
        classical_part=tuple(zip(reps, w_cl)),
        quantum_part=tuple(zip(reps, w_q)),
        negativity=float(np.sum(np.maximum(0.0, -w_tot))),
        imag_residue=residue,
    )


def negativity(qpd: QuasiDistribution) -> float:
    """Total negative mass; zero iff all weights are non-negative."""
    return float(sum(max(0.0, -w) for _, w in qpd.support))


def _marginal(ampset: AmplitudeSet, contributions):
    """Accumulate amplitudes onto one index; returns [(eigenvalue, prob)]."""
    acc = np.zeros(ampset.dim, dtype=complex)
    for amp in ampset:
        for idx, frac in contributions(amp.indices):
            acc[idx] += frac * amp.value
    return [(float(ampset.eigenvalues[r]), float(acc[r].real)) for r in range(ampset.dim)]


def marginal_final(ampset: AmplitudeSet):
    """Probability of each outcome at the last time (sum over i, l, j, m)."""
    return _marginal(ampset, lambda idx: ((idx[0], 1.0),))


def marginal_initial(ampset: AmplitudeSet):
    """Probability of each outcome at the initial time, symmetrized over (i, l)."""
    return _marginal(ampset, lambda idx: ((idx[3], 0.5), (idx[4], 0.5)))


def marginal_intermediate(ampset: AmplitudeSet):
    """Probability of each outcome at the middle time, symmetrized over (j, m)."""
    return _marginal(ampset, lambda idx: ((idx[1], 0.5), (idx[2], 0.5)))


@dataclass(frozen=True)
class KirkwoodDiracTable:
    """Two-time quasi-probabilities from partial summation of the amplitudes.

    ``entries`` holds the real parts used in correlators; ``raw`` keeps the
    complex values before symmetrized realization.
    """

    pair: tuple
    entries: np.ndarray
    raw: np.ndarray

    def marginal_rows(self):
        return self.entries.sum(axis=1)

    def marginal_cols(self):
        return self.entries.sum(axis=0)


def kirkwood_dirac(ampset: AmplitudeSet, pair) -> KirkwoodDiracTable:
    """Reduce the five-index amplitudes to a two-time table.

    Row index is the earlier time, column index the later one.  Both bra
    and ket placements of the marginalized repeated index are averaged, so
    the table entries are real up to the conjugate-pair symmetry and sum
    to 1.
    """
    if tuple(pair) not in TIME_PAIRS:
        raise ValueError(f"pair must be one of {TIME_PAIRS}, got {pair}")
    d = ampset.dim
    raw = np.zeros((d, d), dtype=complex)
    if tuple(pair) == (0, 1):
        for amp in ampset:
            k, j, m, i, l = amp.indices
            v = amp.value / 4.0
            raw[i, j] += v
            raw[i, m] += v
            raw[l, j] += v
            raw[l, m] += v
    elif tuple(pair) == (1, 2):
        for amp in ampset:
            k, j, m, i, l = amp.indices
            v = amp.value / 2.0
            raw[j, k] += v
            raw[m, k] += v
    else:
        for amp in ampset:
            k, j, m, i, l = amp.indices
            v = amp.value / 2.0
            raw[i, k] += v
            raw[l, k] += v
    return KirkwoodDiracTable(pair=tuple(pair), entries=raw.real.copy(), raw=raw)
