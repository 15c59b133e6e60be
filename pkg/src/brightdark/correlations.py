"""First- and second-order correlation functions at a detection angle."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .geometry import SlitGeometry, check_beta
from .modes import bright_probability
from .states import Coherent, Fock, QuantumSource, SinglePhoton, mean_total_photons

# |c_0|^2 at or below this counts as a diffraction minimum for G2 normalization.
DARK_ANGLE_THRESHOLD = 1e-12


class Marker(enum.Enum):
    UNDEFINED = "undefined"

    def __str__(self) -> str:
        return self.value


UNDEFINED = Marker.UNDEFINED


@dataclass(frozen=True)
class CouplingConfig:
    g: float = 1.0

    def __post_init__(self) -> None:
        if not self.g > 0:
            raise ValueError(f"coupling g must be > 0, got {self.g!r}")


@dataclass(frozen=True)
class CorrelationResult:
    g1: float
    g2: float | Marker


def g1(
    src: QuantumSource,
    beta: float,
    geom: SlitGeometry | None = None,
    cfg: CouplingConfig = CouplingConfig(),
) -> float:
    """G1 = g^2 <N_total> sinc^2(beta)."""
    return cfg.g**2 * mean_total_photons(src, geom) * bright_probability(check_beta(beta))


def g2(src: QuantumSource, beta: float) -> float | Marker:
    """Normalized G2 of the bright mode, or ``UNDEFINED`` when G1 vanishes."""
    if bright_probability(check_beta(beta)) <= DARK_ANGLE_THRESHOLD:
        return UNDEFINED
    match src:
        case SinglePhoton():
            return 0.0
        case Fock(n_photons=n):
            return 1.0 - 1.0 / n
        case Coherent(alpha=a):
            return UNDEFINED if a == 0 else 1.0
    raise TypeError(f"not a quantum source: {src!r}")


def correlate(
    src: QuantumSource,
    beta: float,
    geom: SlitGeometry | None = None,
    cfg: CouplingConfig = CouplingConfig(),
) -> CorrelationResult:
    return CorrelationResult(g1(src, beta, geom, cfg), g2(src, beta))
