"""Seeded Monte Carlo of detection events and bright-mode photon counts.

Angles are drawn by inverse-CDF sampling from a cumulative Simpson table of
|c_0(theta)|^2 whose nodes include every histogram edge. Photon counts are
drawn from the bright occupation law of the source. All draws come from one
PCG64 stream seeded by ``SamplerConfig.seed``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .geometry import HALF_PI, SlitGeometry, beta_from_angle, check_beta
from .modes import bright_probability
from .correlations import DARK_ANGLE_THRESHOLD
from .states import Bernoulli, Binomial, Poisson, QuantumSource, bright_occupation_law

NODES_PER_BIN = 64


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    shots: int
    theta_min: float = -0.5
    theta_max: float = 0.5
    bins: int = 201

    def __post_init__(self) -> None:
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots!r}")
        if self.bins < 1:
            raise ValueError(f"bins must be >= 1, got {self.bins!r}")
        if not (-HALF_PI < self.theta_min < self.theta_max < HALF_PI):
            raise ValueError("need -pi/2 < theta_min < theta_max < pi/2")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(int(self.seed)))

    @property
    def bin_edges(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.bins + 1)


@dataclass(frozen=True)
class DetectionHistogram:
    bin_edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    total: int
    seed: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def _density(geom: SlitGeometry, theta: np.ndarray) -> np.ndarray:
    return bright_probability(beta_from_angle(geom, theta))


def cdf_table(geom: SlitGeometry, cfg: SamplerConfig) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and normalized cumulative mass, NODES_PER_BIN subintervals per bin."""
    nodes = np.linspace(cfg.theta_min, cfg.theta_max, cfg.bins * NODES_PER_BIN + 1)
    cum = integrate.cumulative_simpson(_density(geom, nodes), x=nodes, initial=0.0)
    cum = np.maximum.accumulate(cum)
    total = cum[-1]
    if not total >= 1e-300:
        raise ValueError(f"detection density integrates to {total!r} on the requested range")
    return nodes, cum / total


def sample_angles(geom: SlitGeometry, cfg: SamplerConfig) -> np.ndarray:
    nodes, cdf = cdf_table(geom, cfg)
    u = cfg.rng().random(cfg.shots)
    return np.interp(u, cdf, nodes)


def sample_pattern(geom: SlitGeometry, cfg: SamplerConfig) -> DetectionHistogram:
    theta = sample_angles(geom, cfg)
    # clip guards the closed right edge; interp never leaves [theta_min, theta_max]
    idx = np.minimum(np.searchsorted(cfg.bin_edges, theta, side="right") - 1, cfg.bins - 1)
    counts = np.bincount(np.maximum(idx, 0), minlength=cfg.bins).astype(np.int64)
    edges = cfg.bin_edges
    edges.setflags(write=False)
    counts.setflags(write=False)
    return DetectionHistogram(edges, counts, int(counts.sum()), int(cfg.seed))


def bin_masses(geom: SlitGeometry, edges) -> np.ndarray:
    """Normalized per-bin probability of the detection density by adaptive quadrature."""
    edges = np.asarray(edges, dtype=float)
    mass = np.array([
        integrate.quad(lambda t: float(_density(geom, t)), lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)[0]
        for lo, hi in zip(edges[:-1], edges[1:])
    ])
    return mass / mass.sum()


def sample_occupations(law, rng: np.random.Generator, shots: int) -> np.ndarray:
    match law:
        case Bernoulli(p=p):
            return rng.binomial(1, p, size=shots)
        case Binomial(trials=n, p=p):
            return rng.binomial(n, p, size=shots)
        case Poisson(mean=mu):
            return rng.poisson(mu, size=shots)
    raise TypeError(f"unknown occupation law {law!r}")


@dataclass(frozen=True)
class G2Estimate:
    value: float
    stderr: float
    shots: int
    seed: int


def estimate_g2(
    src: QuantumSource, beta: float, geom: SlitGeometry | None, cfg: SamplerConfig
) -> G2Estimate:
    """Empirical G2 = shots * sum m(m-1) / (sum m)^2 with a delta-method standard error."""
    beta = check_beta(beta)
    if bright_probability(beta) <= DARK_ANGLE_THRESHOLD:
        raise ValueError(f"beta={beta!r} is a dark angle; G2 is undefined there")
    law = bright_occupation_law(src, beta, geom)
    m = sample_occupations(law, cfg.rng(), cfg.shots).astype(np.float64)
    pairs = m * (m - 1.0)
    s1, s2 = m.sum(), pairs.sum()
    if s1 == 0:
        raise ValueError("no bright-mode photons were sampled; increase shots")
    n = cfg.shots
    value = n * s2 / s1**2
    mx, my = s2 / n, s1 / n
    if n > 1:
        cov = np.cov(np.vstack([pairs, m]), ddof=1) / n
        grad = np.array([1.0 / my**2, -2.0 * mx / my**3])
        stderr = math.sqrt(max(float(grad @ cov @ grad), 0.0))
    else:
        stderr = math.inf
    return G2Estimate(float(value), stderr, n, int(cfg.seed))


def sample_g2(src: QuantumSource, beta: float, geom: SlitGeometry | None, cfg: SamplerConfig) -> float:
    return estimate_g2(src, beta, geom, cfg).value
