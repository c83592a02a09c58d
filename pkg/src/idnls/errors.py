"""Exception hierarchy shared across the package.

Two broad families matter for the CLI exit codes: configuration problems
(exit 2) and numeric/tolerance failures (exit 3).
"""


class IdnlsError(Exception):
    """Base class for all package errors."""


class ConfigError(IdnlsError):
    """Malformed or invalid configuration (CLI exit code 2)."""


class NumericsError(IdnlsError):
    """Base class for numeric failures (CLI exit code 3)."""


class DomainError(NumericsError):
    """Input outside the mathematical domain (|r| >= 1, |R| >= 1, z = 0, ...)."""


class GammaPoleError(DomainError):
    """Gamma evaluated at (or within 1e-14 of) a non-positive integer."""


class BranchCutError(DomainError):
    """Principal power evaluated on the negative-real-axis cut."""


class QuadratureError(NumericsError):
    """Adaptive refinement exceeded its depth cap without converging."""


class PoleOnPathError(NumericsError):
    """Path-continuous logarithm requested along an arc through its pole."""


class RegionError(NumericsError):
    """Ratio |n/t| outside the admissible region |v| <= 2 - V0."""


class DegenerateError(NumericsError):
    """Saddle coalescence: |n| = 2t makes the quarter-power factor vanish."""


class BlowUpError(NumericsError):
    """sup |R_n| reached 1 during integration."""


class ConservationError(NumericsError):
    """Conserved product drifted beyond the configured alarm threshold."""


class ConsistencyError(NumericsError):
    """An internal identity failed beyond tolerance (signals an upstream fault)."""
