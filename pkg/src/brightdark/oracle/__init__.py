"""Brute-force references: a discretized slit and dense Fock-space states."""

from .coherent import (
    CoherentPair,
    CutoffError,
    build_coherent_pair,
    coherent_factorization_check,
)
from .discrete import (
    DiscreteSlitModel,
    build_discrete_model,
    dirichlet_coefficient,
    discrete_vs_continuum_error,
)
from .fockspace import (
    DenseFockSpace,
    FockSector,
    build_fock_state,
    exact_g2_bright,
    exact_ladder_identity_check,
)

__all__ = [
    "CoherentPair",
    "CutoffError",
    "DenseFockSpace",
    "DiscreteSlitModel",
    "FockSector",
    "build_coherent_pair",
    "build_discrete_model",
    "build_fock_state",
    "coherent_factorization_check",
    "dirichlet_coefficient",
    "discrete_vs_continuum_error",
    "exact_g2_bright",
    "exact_ladder_identity_check",
]
