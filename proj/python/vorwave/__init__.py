"""Steady periodic water waves with vorticity.

Thin wrapper over the C++ core: laminar flows and the dispersion relation,
bifurcation and continuation in the height-function formulation, field
reconstruction, the theorem audit and the Gerstner fixture.
"""

from ._core import (
    ConfigError,
    DomainError,
    Error,
    GerstnerWave,
    HeightField,
    LaminarFlow,
    NoConvergenceError,
    NumericError,
    PreconditionError,
    StagnationError,
    StripGrid,
    VorticityFunction,
    WaveField,
    audit,
    continue_branch,
    discrete_laminar,
    find_bifurcation,
    gamma_criteria,
    lambda_c,
    parse_config,
    q_tilde,
    q_tilde_prime,
    reconstruct,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
