"""Bright and dark detector modes of single-slit Fraunhofer diffraction."""

from .correlations import UNDEFINED, CorrelationResult, CouplingConfig, correlate, g1, g2
from .geometry import SlitGeometry, beta_from_angle, phase
from .modes import (
    DEFAULT_N_MAX,
    ModeDecomposition,
    bright_probability,
    coefficient,
    coefficients,
    dark_shares,
    decompose,
    pattern,
    sinc,
)
from .states import (
    Coherent,
    Fock,
    SinglePhoton,
    bright_mode_population,
    bright_occupation_law,
    coherent_mode_amplitudes,
    mean_total_photons,
    parse_source,
)

__version__ = "0.1.0"
