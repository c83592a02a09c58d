"""Defocusing Ablowitz-Ladik lattice: simulation, scattering, asymptotics."""

from .asymptotics import (
    AsymptoticTerm,
    RegionGuard,
    SaddleFrame,
    build_saddle_frame,
    leading_term,
    phase_decomposition,
    saddle_points,
)
from .harness import ComparisonRow, RunConfig, load_config, run_compare
from .lattice import (
    IntegratorConfig,
    LatticeState,
    c_minus_inf,
    idnls_rhs,
    integrate,
    validate_initial,
)
from .scattering import (
    ScatteringData,
    evolve_reflection,
    reflection,
    scattering_coeffs,
    transfer_matrix,
)
from .selftest import run_selftest

__version__ = "0.1.0"

__all__ = [
    "AsymptoticTerm",
    "ComparisonRow",
    "IntegratorConfig",
    "LatticeState",
    "RegionGuard",
    "RunConfig",
    "SaddleFrame",
    "ScatteringData",
    "build_saddle_frame",
    "c_minus_inf",
    "evolve_reflection",
    "idnls_rhs",
    "integrate",
    "leading_term",
    "load_config",
    "phase_decomposition",
    "reflection",
    "run_compare",
    "run_selftest",
    "saddle_points",
    "scattering_coeffs",
    "transfer_matrix",
    "validate_initial",
]
