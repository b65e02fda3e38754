"""Exception hierarchy shared across the library."""


class QndlabError(Exception):
    """Base class for all library errors."""


class NonHermitianInput(QndlabError):
    """A matrix expected to be Hermitian exceeds the symmetry tolerance."""


class ZeroVector(QndlabError):
    """A state vector with (numerically) zero norm was supplied."""


class IndexOutOfRange(QndlabError):
    """A path index tuple refers to a level outside the Hilbert space."""


class InstanceTooLarge(QndlabError):
    """dim**5 exceeds the configured enumeration cap."""


class ResidueTooLarge(QndlabError):
    """Imaginary residue of realized weights exceeds the safety bound."""


class DimensionMismatch(QndlabError):
    """Operator dimensions in a protocol instance are inconsistent."""


class NonemptyGridRequired(QndlabError):
    """An empty coupling-grid was supplied where at least one point is needed."""


class LatticeMismatch(QndlabError):
    """Fourier inversion on the declared lattice fails to reproduce the data."""


class NotBinary(QndlabError):
    """The observable spectrum is not exactly {-1, +1}."""


class IdentityViolation(QndlabError):
    """A structural amplitude identity failed beyond tolerance."""

    def __init__(self, label: str, residual: float):
        super().__init__(f"identity {label!r} violated, residual {residual:.3e}")
        self.label = label
        self.residual = residual


class ConfigError(QndlabError):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    """The config document is not well-formed."""


class ValidationError(ConfigError):
    """The config document is well-formed but violates the schema."""


class EmptyReport(QndlabError):
    """A report with no records was passed to an emitter."""
