"""Leggett-Garg parameter and its classical/quantum decomposition.

Restricted to binary observables (spectrum exactly {-1, +1}).  The LG
parameter K = C01 + C12 - C02 is evaluated both from Heisenberg-picture
correlators and as a weighted sum over the raw five-index amplitudes.
The amplitude route splits K into

    K = K_cl + K_q1 + K_q2

where K_cl is built from the classical (m = j, l = i) amplitudes and
always satisfies -3 <= K_cl <= 1, K_q1 (m = j, l != i) vanishes
identically, and K_q2 (m != j, l = i) carries any inequality violation.
The doubly off-diagonal amplitudes (m != j, l != i) receive weight zero
for binary spectra; the sum keeps them and verifies this numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IdentityViolation, NotBinary
from .linalg import Observable
from .protocol import (
    AmplitudeSet,
    ProtocolInstance,
    TIME_PAIRS,
    build_qpd,
    enumerate_amplitudes,
    kirkwood_dirac,
)

LGI_TOL = 1e-9
MRPS_TOL = 1e-10


@dataclass(frozen=True)
class LgBreakdown:
    c01: float
    c12: float
    c02: float
    k: float
    k_cl: float
    k_q1: float
    k_q2: float
    negativity: float
    lgi_violated: bool
    mrps_violated: bool


@dataclass(frozen=True)
class AppendixReport:
    """Residuals of the structural amplitude identities, keyed by label."""

    residuals: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def assert_binary(obs: Observable, atol: float = 1e-9) -> Observable:
    """Validate a {-1, +1} spectrum and snap the eigenvalues exactly."""
    if obs.dim != 2:
        raise NotBinary(f"binary observables need dimension 2, got {obs.dim}")
    snapped = np.array([-1.0, 1.0])
    if np.max(np.abs(obs.eigenvalues - snapped)) > atol:
        raise NotBinary(f"spectrum {obs.eigenvalues} is not {{-1, +1}}")
    return Observable(
        matrix=obs.matrix,
        eigenvalues=snapped,
        eigenvectors=obs.eigenvectors,
        projectors=obs.projectors,
    )


def _binary_ampset(inst: ProtocolInstance) -> tuple[ProtocolInstance, AmplitudeSet]:
    obs = assert_binary(inst.observable)
    inst = ProtocolInstance(
        rho0=inst.rho0, u1=inst.u1, u2=inst.u2, observable=obs, schedule=inst.schedule
    )
    return inst, enumerate_amplitudes(inst)


def correlator_operator(inst: ProtocolInstance, pair) -> float:
    """Symmetrized two-time correlator Tr[(A(ti)A(tj) + A(tj)A(ti)) rho]/2."""
    if tuple(pair) not in TIME_PAIRS:
        raise ValueError(f"pair must be one of {TIME_PAIRS}, got {pair}")
    assert_binary(inst.observable)
    a = inst.observable.matrix
    u1, u2 = inst.u1.matrix, inst.u2.matrix
    heisenberg = {0: a, 1: u1.conj().T @ a @ u1, 2: (u2 @ u1).conj().T @ a @ (u2 @ u1)}
    ai, aj = heisenberg[pair[0]], heisenberg[pair[1]]
    val = np.trace((ai @ aj + aj @ ai) @ inst.rho0.matrix) / 2.0
    return float(val.real)


def correlator_from_nd(ampset: AmplitudeSet, pair) -> float:
    """Correlator from the Kirkwood-Dirac reduction of the amplitudes."""
    _require_binary_set(ampset)
    table = kirkwood_dirac(ampset, pair)
    a = ampset.eigenvalues
    return float(np.einsum("r,s,rs->", a, a, table.entries))


def _require_binary_set(ampset: AmplitudeSet):
    if ampset.dim != 2 or np.max(np.abs(np.sort(ampset.eigenvalues) - [-1.0, 1.0])) > 1e-9:
        raise NotBinary("amplitude set does not come from a binary observable")


def _lg_weight(a, k, j, m, i, l) -> float:
    """Per-tuple weight reproducing C01 + C12 - C02 from the raw amplitudes."""
    return 0.25 * (a[i] + a[l]) * (a[j] + a[m]) + 0.5 * a[k] * (
        a[j] + a[m] - a[i] - a[l]
    )


def _k_parts(ampset: AmplitudeSet):
    a = ampset.eigenvalues
    parts = {"cl": [], "q1": [], "q2": [], "off": []}
    for amp in ampset:
        k, j, m, i, l = amp.indices
        v = _lg_weight(a, k, j, m, i, l) * amp.value.real
        if m == j and l == i:
            parts["cl"].append(v)
        elif m == j:
            parts["q1"].append(v)
        elif l == i:
            parts["q2"].append(v)
        else:
            parts["off"].append(v)
    return {name: math.fsum(vals) for name, vals in parts.items()}


def lg_breakdown(
    inst: ProtocolInstance,
    lgi_tol: float = LGI_TOL,
    mrps_tol: float = MRPS_TOL,
) -> LgBreakdown:
    """Full LG analysis of a binary instance.

    The doubly off-diagonal amplitude class must carry zero total weight for
    a binary spectrum; this is asserted rather than assumed.
    """
    inst, ampset = _binary_ampset(inst)
    c01 = correlator_from_nd(ampset, (0, 1))
    c12 = correlator_from_nd(ampset, (1, 2))
    c02 = correlator_from_nd(ampset, (0, 2))
    parts = _k_parts(ampset)
    if abs(parts["off"]) > 1e-10:
        raise IdentityViolation("off-diagonal-weight", abs(parts["off"]))
    k = parts["cl"] + parts["q1"] + parts["q2"] + parts["off"]
    neg = build_qpd(ampset).negativity
    return LgBreakdown(
        c01=c01,
        c12=c12,
        c02=c02,
        k=k,
        k_cl=parts["cl"],
        k_q1=parts["q1"],
        k_q2=parts["q2"],
        negativity=neg,
        lgi_violated=bool(k > 1.0 + lgi_tol or k < -3.0 - lgi_tol),
        mrps_violated=bool(neg > mrps_tol),
    )


def classical_k_form(ampset: AmplitudeSet) -> float:
    """Compact classical LG parameter 1 - 4 sum_k P(k, kbar, kbar, k, k)."""
    _require_binary_set(ampset)
    flip = math.fsum(
        ampset.value(k, 1 - k, 1 - k, k, k).real for k in range(2)
    )
    return 1.0 - 4.0 * flip


def verify_appendix_b(
    inst: ProtocolInstance,
    ampset: AmplitudeSet | None = None,
    atol: float = 1e-10,
) -> AppendixReport:
    """Check the binary-spectrum amplitude identities; raise on failure.

    Labels:
      a: P(k,k,k,i,ibar) = -P(kbar,kbar,kbar,i,ibar)
      b: P(k,kbar,kbar,i,ibar) = -P(kbar,k,k,i,ibar)
      c: sum_k P(k,j,jbar,i,i) = 0 for every j, i
      d: K_q1 = 0
      e: K_q2 = -4 sum_k Re P(k, j, jbar, k, k)
    """
    if ampset is None:
        inst, ampset = _binary_ampset(inst)
    else:
        _require_binary_set(ampset)
    p = ampset.value
    residuals = {}
    residuals["a"] = max(
        abs(p(k, k, k, i, 1 - i) + p(1 - k, 1 - k, 1 - k, i, 1 - i))
        for k in range(2)
        for i in range(2)
    )
    residuals["b"] = max(
        abs(p(k, 1 - k, 1 - k, i, 1 - i) + p(1 - k, k, k, i, 1 - i))
        for k in range(2)
        for i in range(2)
    )
    residuals["c"] = max(
        abs(sum(p(k, j, 1 - j, i, i) for k in range(2)))
        for j in range(2)
        for i in range(2)
    )
    parts = _k_parts(ampset)
    residuals["d"] = abs(parts["q1"])
    simplified = -4.0 * math.fsum(p(k, 0, 1, k, k).real for k in range(2))
    residuals["e"] = abs(parts["q2"] - simplified)
    for label, res in residuals.items():
        if res > atol:
            raise IdentityViolation(label, res)
    return AppendixReport(residuals=residuals)
