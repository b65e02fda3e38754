"""Experiment configuration: YAML schema, presets and instance building.

Schema (YAML mapping)::

    dimension: 2                     # optional, inferred from the matrices
    observable: pauli-z              # preset name or matrix literal
    initial_state: paper-example     # preset name or complex vector literal
    hamiltonian: paper-example       # preset name or matrix literal
    times: {t0: 0.0, t1: 1.0, t2: 2.0}
    # ... or, mutually exclusive with `times`:
    sweep: {parameter: omega_tau, start: 0.0, stop: 6.2832, points: 629}
    outputs: [qpd, lg, characteristic, identities]
    seed: 0
    tolerances: {grouping: 1.0e-9, lgi: 1.0e-9, mrps: 1.0e-10}

Complex entries may be written as plain numbers, as strings accepted by
Python's ``complex()`` (e.g. ``"0.5-0.5j"``) or as two-element
``[real, imag]`` lists.  A sweep covers the half-open interval
``[start, stop)`` with ``points`` equally spaced values, which keeps
periodic parameter scans free of the duplicated endpoint.

Presets: observable ``pauli-x``/``pauli-y``/``pauli-z``; initial state
``paper-example`` = (|0> + i |1>)/sqrt(2); hamiltonian ``paper-example``
= sigma_x / 2 (unit angular frequency).  With the ``omega_tau`` sweep
parameter the measurement times are (0, v, 2 v) at each grid value v.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import ParseError, ValidationError
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Schedule,
    density_operator,
    eigendecompose_hermitian,
    evolve,
    pure_state,
    require_hermitian,
)
from .errors import NonHermitianInput, QndlabError
from .protocol import ProtocolInstance

OBSERVABLE_PRESETS = {
    "pauli-x": PAULI_X,
    "pauli-y": PAULI_Y,
    "pauli-z": PAULI_Z,
}

STATE_PRESETS = {
    "paper-example": np.array([1.0, 1.0j]) / np.sqrt(2.0),
}

HAMILTONIAN_PRESETS = {
    "paper-example": 0.5 * PAULI_X,
    "zero": np.zeros((2, 2)),
}

KNOWN_OUTPUTS = ("qpd", "lg", "characteristic", "identities")


@dataclass(frozen=True)
class Tolerances:
    grouping: float = 1e-9
    lgi: float = 1e-9
    mrps: float = 1e-10


@dataclass(frozen=True)
class FixedTimes:
    t0: float
    t1: float
    t2: float


@dataclass(frozen=True)
class Sweep:
    parameter: str
    start: float
    stop: float
    points: int

    def grid(self) -> np.ndarray:
        step = (self.stop - self.start) / self.points
        return self.start + step * np.arange(self.points)


@dataclass(frozen=True)
class ExperimentConfig:
    observable: np.ndarray
    initial_state: np.ndarray
    hamiltonian: np.ndarray
    times: FixedTimes | None
    sweep: Sweep | None
    outputs: tuple = ("qpd", "lg")
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def dimension(self) -> int:
        return self.observable.shape[0]

    def canonical_dict(self) -> dict:
        def cplx(m):
            a = np.asarray(m, dtype=complex)
            return [[[v.real, v.imag] for v in row] for row in np.atleast_2d(a)]

        doc = {
            "observable": cplx(self.observable),
            "initial_state": cplx(self.initial_state),
            "hamiltonian": cplx(self.hamiltonian),
            "outputs": list(self.outputs),
            "seed": self.seed,
            "tolerances": {
                "grouping": self.tolerances.grouping,
                "lgi": self.tolerances.lgi,
                "mrps": self.tolerances.mrps,
            },
        }
        if self.times is not None:
            doc["times"] = [self.times.t0, self.times.t1, self.times.t2]
        if self.sweep is not None:
            doc["sweep"] = {
                "parameter": self.sweep.parameter,
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "points": self.sweep.points,
            }
        return doc

    def digest(self) -> str:
        payload = json.dumps(self.canonical_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _parse_scalar(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError as exc:
            raise ValidationError(f"{where}: cannot parse complex literal {v!r}") from exc
    if isinstance(v, (list, tuple)) and len(v) == 2:
        try:
            return complex(float(v[0]), float(v[1]))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{where}: bad [real, imag] pair {v!r}") from exc
    raise ValidationError(f"{where}: unsupported complex literal {v!r}")


def _parse_vector(v, presets: dict, where: str) -> np.ndarray:
    if isinstance(v, str):
        if v in presets:
            return presets[v].copy()
        raise ValidationError(f"{where}: unknown preset {v!r}")
    if not isinstance(v, list) or not v:
        raise ValidationError(f"{where}: expected a preset name or a vector literal")
    return np.array([_parse_scalar(x, where) for x in v])


def _parse_matrix(v, presets: dict, where: str, hermitian: bool) -> np.ndarray:
    if isinstance(v, str):
        if v in presets:
            return presets[v].copy()
        raise ValidationError(f"{where}: unknown preset {v!r}")
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        raise ValidationError(f"{where}: expected a preset name or a matrix literal")
    rows = [[_parse_scalar(x, where) for x in row] for row in v]
    mat = np.array(rows)
    if mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"{where}: matrix literal is not square")
    if hermitian:
        try:
            require_hermitian(mat)
        except NonHermitianInput as exc:
            raise ValidationError(f"{where}: matrix is not Hermitian ({exc})") from exc
    return mat


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a YAML experiment document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("config document must be a mapping")
    return config_from_dict(doc)


def config_from_dict(doc: dict) -> ExperimentConfig:
    unknown = set(doc) - {
        "dimension",
        "observable",
        "initial_state",
        "hamiltonian",
        "times",
        "sweep",
        "outputs",
        "seed",
        "tolerances",
    }
    if unknown:
        raise ValidationError(f"unknown config fields: {sorted(unknown)}")
    for required in ("observable", "initial_state", "hamiltonian"):
        if required not in doc:
            raise ValidationError(f"missing required field {required!r}")

    observable = _parse_matrix(doc["observable"], OBSERVABLE_PRESETS, "observable", True)
    state = _parse_vector(doc["initial_state"], STATE_PRESETS, "initial_state")
    hamiltonian = _parse_matrix(
        doc["hamiltonian"], HAMILTONIAN_PRESETS, "hamiltonian", True
    )

    dims = {observable.shape[0], state.size, hamiltonian.shape[0]}
    if len(dims) != 1:
        raise ValidationError(f"inconsistent dimensions {sorted(dims)}")
    if "dimension" in doc and int(doc["dimension"]) != observable.shape[0]:
        raise ValidationError(
            f"declared dimension {doc['dimension']} != matrix dimension {observable.shape[0]}"
        )

    has_times = "times" in doc
    has_sweep = "sweep" in doc
    if has_times == has_sweep:
        raise ValidationError("exactly one of `times` or `sweep` must be given")

    times = None
    sweep = None
    if has_times:
        t = doc["times"]
        if not isinstance(t, dict) or set(t) != {"t0", "t1", "t2"}:
            raise ValidationError("`times` must be a mapping with t0, t1, t2")
        times = FixedTimes(float(t["t0"]), float(t["t1"]), float(t["t2"]))
        if not (times.t0 <= times.t1 <= times.t2):
            raise ValidationError("times must satisfy t0 <= t1 <= t2")
    else:
        s = doc["sweep"]
        if not isinstance(s, dict) or set(s) != {"parameter", "start", "stop", "points"}:
            raise ValidationError(
                "`sweep` must be a mapping with parameter, start, stop, points"
            )
        if s["parameter"] != "omega_tau":
            raise ValidationError(f"unsupported sweep parameter {s['parameter']!r}")
        points = int(s["points"])
        if points < 2:
            raise ValidationError("sweep needs at least 2 points")
        sweep = Sweep(str(s["parameter"]), float(s["start"]), float(s["stop"]), points)
        if sweep.stop <= sweep.start:
            raise ValidationError("sweep stop must exceed start")

    outputs = tuple(doc.get("outputs", ["qpd", "lg"]))
    bad = [o for o in outputs if o not in KNOWN_OUTPUTS]
    if bad:
        raise ValidationError(f"unknown outputs {bad}; choose from {KNOWN_OUTPUTS}")

    tol_doc = doc.get("tolerances", {}) or {}
    if not isinstance(tol_doc, dict) or set(tol_doc) - {"grouping", "lgi", "mrps"}:
        raise ValidationError("`tolerances` may set grouping, lgi and mrps only")
    tolerances = Tolerances(
        grouping=float(tol_doc.get("grouping", 1e-9)),
        lgi=float(tol_doc.get("lgi", 1e-9)),
        mrps=float(tol_doc.get("mrps", 1e-10)),
    )

    return ExperimentConfig(
        observable=observable,
        initial_state=state,
        hamiltonian=hamiltonian,
        times=times,
        sweep=sweep,
        outputs=outputs,
        seed=int(doc.get("seed", 0)),
        tolerances=tolerances,
    )


def build_instance(config: ExperimentConfig, omega_tau: float | None = None) -> ProtocolInstance:
    """Materialize a protocol instance at fixed times or one sweep value."""
    if omega_tau is None:
        if config.times is None:
            raise QndlabError("sweep configs need an explicit omega_tau value")
        t0, t1, t2 = config.times.t0, config.times.t1, config.times.t2
    else:
        t0, t1, t2 = 0.0, float(omega_tau), 2.0 * float(omega_tau)
    obs = eigendecompose_hermitian(config.observable)
    rho0 = pure_state(config.initial_state)
    u1 = evolve(config.hamiltonian, t1 - t0, label="t0->t1")
    u2 = evolve(config.hamiltonian, t2 - t1, label="t1->t2")
    schedule = Schedule(t0=t0, t1=t1, t2=t2, generator=np.asarray(config.hamiltonian))
    return ProtocolInstance(rho0=rho0, u1=u1, u2=u2, observable=obs, schedule=schedule)
