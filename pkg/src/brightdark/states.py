"""Illumination sources and their occupation structure in the detector basis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .geometry import SlitGeometry, check_beta
from .modes import ModeDecomposition, bright_probability, decompose


@dataclass(frozen=True)
class SinglePhoton:
    pass


@dataclass(frozen=True)
class Fock:
    n_photons: int

    def __post_init__(self) -> None:
        if int(self.n_photons) != self.n_photons or self.n_photons < 1:
            raise ValueError(f"Fock state needs an integer photon number >= 1, got {self.n_photons!r}")


@dataclass(frozen=True)
class Coherent:
    """Uniform coherent illumination; ``alpha`` is an amplitude density (1/sqrt(m))."""

    alpha: complex

    def __post_init__(self) -> None:
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)


QuantumSource = Union[SinglePhoton, Fock, Coherent]


def parse_source(text: str) -> QuantumSource:
    """Parse ``single``, ``fock:N`` or ``coherent:RE,IM``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    if kind == "single" and not arg:
        return SinglePhoton()
    if kind == "fock" and arg:
        try:
            n = int(arg)
        except ValueError:
            raise ValueError(f"bad photon number in {text!r}") from None
        return Fock(n)
    if kind == "coherent" and arg:
        parts = arg.split(",")
        if len(parts) != 2:
            raise ValueError(f"coherent source needs RE,IM, got {text!r}")
        try:
            re, im = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"bad amplitude in {text!r}") from None
        return Coherent(complex(re, im))
    raise ValueError(f"unrecognized source {text!r}; expected single, fock:N or coherent:RE,IM")


def format_source(src: QuantumSource) -> str:
    match src:
        case SinglePhoton():
            return "single"
        case Fock(n_photons=n):
            return f"fock:{n}"
        case Coherent(alpha=a):
            return f"coherent:{a.real!r},{a.imag!r}"
    raise TypeError(f"not a quantum source: {src!r}")


def _slit_width(geom: SlitGeometry | None) -> float:
    if geom is None:
        raise ValueError("coherent sources need a SlitGeometry (the slit width sets |alpha|^2 b)")
    return geom.slit_width_b


# Occupation laws of the bright mode. Descriptors only; sampling is in montecarlo.

@dataclass(frozen=True)
class Bernoulli:
    p: float

    @property
    def mean(self) -> float:
        return self.p

    @property
    def variance(self) -> float:
        return self.p * (1.0 - self.p)

    def pmf(self, k: int) -> float:
        return {0: 1.0 - self.p, 1: self.p}.get(int(k), 0.0)


@dataclass(frozen=True)
class Binomial:
    trials: int
    p: float

    @property
    def mean(self) -> float:
        return self.trials * self.p

    @property
    def variance(self) -> float:
        return self.trials * self.p * (1.0 - self.p)

    def pmf(self, k: int) -> float:
        k = int(k)
        if k < 0 or k > self.trials:
            return 0.0
        return math.comb(self.trials, k) * self.p**k * (1.0 - self.p) ** (self.trials - k)


@dataclass(frozen=True)
class Poisson:
    mean: float

    @property
    def variance(self) -> float:
        return self.mean

    def pmf(self, k: int) -> float:
        k = int(k)
        if k < 0:
            return 0.0
        if self.mean == 0.0:
            return 1.0 if k == 0 else 0.0
        return math.exp(k * math.log(self.mean) - self.mean - math.lgamma(k + 1))


BrightOccupationLaw = Union[Bernoulli, Binomial, Poisson]


def mean_total_photons(src: QuantumSource, geom: SlitGeometry | None = None) -> float:
    match src:
        case SinglePhoton():
            return 1.0
        case Fock(n_photons=n):
            return float(n)
        case Coherent(alpha=a):
            return abs(a) ** 2 * _slit_width(geom)
    raise TypeError(f"not a quantum source: {src!r}")


def bright_mode_population(src: QuantumSource, beta: float, geom: SlitGeometry | None = None) -> float:
    """Mean photon number in the bright mode: total photons times |c_0|^2."""
    return mean_total_photons(src, geom) * bright_probability(check_beta(beta))


def mode_populations(src: QuantumSource, dec: ModeDecomposition, geom: SlitGeometry | None = None) -> np.ndarray:
    """Mean occupation of every stored mode n in ``dec`` (bright at the centre)."""
    return mean_total_photons(src, geom) * dec.weights


def bright_occupation_law(
    src: QuantumSource, beta: float, geom: SlitGeometry | None = None
) -> BrightOccupationLaw:
    """Distribution of the bright-mode photon count.

    Each photon of a Fock state lands in the bright mode independently with
    probability |c_0|^2, so the marginal is binomial; a coherent state
    factorizes over modes and its bright part is Poissonian.
    """
    p = bright_probability(check_beta(beta))
    match src:
        case SinglePhoton():
            return Bernoulli(p)
        case Fock(n_photons=n):
            return Binomial(n, p)
        case Coherent():
            return Poisson(mean_total_photons(src, geom) * p)
    raise TypeError(f"not a quantum source: {src!r}")


def coherent_mode_amplitudes(alpha: complex, geom: SlitGeometry, beta: float, n_max: int) -> np.ndarray:
    """Per-mode coherent amplitudes alpha_n = alpha sqrt(b) c_n for |n| <= n_max."""
    dec = decompose(beta, n_max)
    return complex(alpha) * math.sqrt(geom.slit_width_b) * dec.coefficients
