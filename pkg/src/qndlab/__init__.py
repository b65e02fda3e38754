"""Sequential non-demolition measurement quasi-probabilities.

Computes the three-time quasi-probability distribution of an observable
measured through phase couplings to an auxiliary detector, certifies
macrorealism violation via the distribution's negativity, and decomposes
the Leggett-Garg parameter into classical and quantum contributions.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionMismatch,
    EmptyReport,
    IdentityViolation,
    IndexOutOfRange,
    InstanceTooLarge,
    LatticeMismatch,
    NonHermitianInput,
    NonemptyGridRequired,
    NotBinary,
    ParseError,
    QndlabError,
    ResidueTooLarge,
    ValidationError,
    ZeroVector,
)
from .linalg import (
    DensityOperator,
    Observable,
    Schedule,
    UnitarySegment,
    eigendecompose_hermitian,
    evolve,
    haar_random_unitary,
    pure_state,
)
from .protocol import (
    AmplitudeSet,
    PathAmplitude,
    ProtocolInstance,
    QuasiDistribution,
    build_qpd,
    enumerate_amplitudes,
    kirkwood_dirac,
    marginal_final,
    marginal_initial,
    marginal_intermediate,
    negativity,
    path_amplitude,
)
from .detector import (
    CharacteristicSamples,
    DetectorModel,
    Lattice,
    characteristic_from_qpd,
    coupling_unitary,
    detect_lattice,
    invert_to_qpd,
    run_protocol,
    sample_characteristic,
    uniform_lambda_grid,
)
from .leggett_garg import (
    LgBreakdown,
    assert_binary,
    classical_k_form,
    correlator_from_nd,
    correlator_operator,
    lg_breakdown,
    verify_appendix_b,
)
from .config import ExperimentConfig, Sweep, Tolerances, build_instance, parse_config
from .pipeline import PointRecord, RunReport, evaluate_point, run
from .reporting import emit_csv, emit_figure, emit_json, load_report
