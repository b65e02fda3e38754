"""Executable invariants used by the `check` CLI command and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IdentityViolation, NotBinary
from .leggett_garg import verify_appendix_b
from .protocol import (
    AmplitudeSet,
    ProtocolInstance,
    build_qpd,
    enumerate_amplitudes,
    marginal_final,
    marginal_initial,
    marginal_intermediate,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def born_probabilities(inst: ProtocolInstance, when: str) -> np.ndarray:
    """Single-time Born probabilities in the observable eigenbasis."""
    rho = inst.rho0.matrix
    if when == "intermediate":
        rho = inst.u1.matrix @ rho @ inst.u1.matrix.conj().T
    elif when == "final":
        u = inst.u2.matrix @ inst.u1.matrix
        rho = u @ rho @ u.conj().T
    elif when != "initial":
        raise ValueError(f"unknown time label {when!r}")
    v = inst.observable.eigenvectors
    return np.real(np.diag(v.conj().T @ rho @ v))


def check_instance(inst: ProtocolInstance, atol: float = 1e-10) -> list[CheckResult]:
    """All structural invariants of one instance; Appendix B when binary."""
    ampset = enumerate_amplitudes(inst)
    results = []

    qpd = build_qpd(ampset)
    results.append(
        CheckResult("total-normalization", abs(sum(qpd.weights) - 1.0), atol)
    )
    results.append(
        CheckResult(
            "classical-normalization",
            abs(math.fsum(w for _, w in qpd.classical_part) - 1.0),
            atol,
        )
    )
    results.append(
        CheckResult(
            "quantum-zero-sum",
            abs(math.fsum(w for _, w in qpd.quantum_part)),
            atol,
        )
    )
    results.append(CheckResult("imaginary-residue", qpd.imag_residue, atol))
    results.append(
        CheckResult("conjugate-pair-symmetry", conjugate_symmetry_defect(ampset), 1e-12)
    )

    for name, marginal, when in (
        ("nsit-initial", marginal_initial, "initial"),
        ("nsit-intermediate", marginal_intermediate, "intermediate"),
        ("nsit-final", marginal_final, "final"),
    ):
        born = born_probabilities(inst, when)
        probs = np.array([p for _, p in marginal(ampset)])
        results.append(CheckResult(name, float(np.max(np.abs(probs - born))), atol))

    try:
        report = verify_appendix_b(inst, atol=atol)
        results.append(CheckResult("appendix-identities", report.max_residual, atol))
    except NotBinary:
        pass
    except IdentityViolation as exc:
        results.append(CheckResult(f"appendix-identity-{exc.label}", exc.residual, atol))
    return results


def conjugate_symmetry_defect(ampset: AmplitudeSet) -> float:
    """Max |P(k,m,j,l,i) - conj P(k,j,m,i,l)| over all tuples."""
    worst = 0.0
    for amp in ampset:
        k, j, m, i, l = amp.indices
        partner = ampset.value(k, m, j, l, i)
        worst = max(worst, abs(partner - amp.value.conjugate()))
    return worst
