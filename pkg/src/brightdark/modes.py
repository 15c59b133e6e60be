"""Detector-oriented mode coefficients for a uniformly illuminated slit.

The single-photon state spread evenly over the slit expands in the basis
oriented toward angle theta with coefficients

    c_n = exp(i (beta - n pi)) * sinc(beta - n pi),

where n = 0 is the bright (detector-coupled) mode and every n != 0 is dark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import SlitGeometry, beta_from_angle, check_beta

DEFAULT_N_MAX = 64

# Below this |x| the Taylor branch is used; the two branches agree to ~1e-28 here.
_SINC_TAYLOR_CUTOFF = 1e-4
_NO_DARK_WEIGHT = 1e-14


def sinc(x):
    """Unnormalized sinc, sin(x)/x, with sinc(0) = 1.

    A short Taylor series replaces the quotient near the removable
    singularity. Works elementwise on arrays.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_TAYLOR_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


def coefficients(beta: float, ns) -> np.ndarray:
    """Vector of c_n for the integer mode indices in ``ns``."""
    beta = check_beta(beta)
    ns = np.asarray(ns, dtype=np.int64)
    x = beta - ns * math.pi
    return np.exp(1j * x) * sinc(x)


def coefficient(beta: float, n: int) -> complex:
    """Overlap c_n of the uniform single-photon state with detector mode ``n``."""
    return complex(coefficients(beta, np.array([int(n)]))[0])


def bright_probability(beta):
    """|c_0|^2 = sinc(beta)^2, the single-slit intensity profile."""
    if np.ndim(beta) == 0:
        return sinc(check_beta(beta)) ** 2
    b = np.asarray(beta, dtype=float)
    if not np.all(np.isfinite(b)):
        raise ValueError("beta must be finite")
    return sinc(b) ** 2


def tail_bound(beta: float, n_max: int) -> float:
    """Upper bound on sum of |c_n|^2 over |n| > n_max.

    Uses |c_n|^2 <= 1/(beta - n pi)^2 and an integral comparison on both
    tails. Requires n_max > |beta|/pi + 1.
    """
    t = beta / math.pi
    if n_max <= abs(t) + 1:
        raise ValueError(
            f"truncation too small: n_max={n_max} must exceed |beta|/pi + 1 = {abs(t) + 1:.6g}"
        )
    return (1.0 / (n_max - t) + 1.0 / (n_max + t)) / math.pi**2


@dataclass(frozen=True)
class ModeDecomposition:
    """Coefficients c_n for n in [-n_max, n_max], stored densely."""

    beta: float
    n_max: int
    coefficients: np.ndarray = field(repr=False)
    captured_weight: float
    tail_bound: float

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.n_max:
            raise IndexError(f"mode {n} outside stored range |n| <= {self.n_max}")
        return complex(self.coefficients[n + self.n_max])

    def weight(self, n: int) -> float:
        return abs(self[n]) ** 2


def decompose(beta: float, n_max: int = DEFAULT_N_MAX) -> ModeDecomposition:
    """Truncated expansion of the uniform single-photon state at ``beta``."""
    beta = check_beta(beta)
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be >= 1; use bright_probability for the bright mode alone")
    bound = tail_bound(beta, n_max)
    c = coefficients(beta, np.arange(-n_max, n_max + 1))
    c.setflags(write=False)
    captured = float(np.sum(np.abs(c) ** 2))
    return ModeDecomposition(beta, n_max, c, captured, bound)


def dark_shares(dec: ModeDecomposition) -> dict[int, float]:
    """Fraction of the dark-subspace weight carried by each stored n != 0."""
    p0 = dec.weight(0)
    dark = 1.0 - p0
    if dark <= _NO_DARK_WEIGHT:
        raise ValueError(f"no dark weight at beta={dec.beta!r}")
    w = dec.weights
    return {int(n): float(w[i] / dark) for i, n in enumerate(dec.indices) if n != 0}


def pattern(geom: SlitGeometry, theta_grid) -> np.ndarray:
    """Rows of (theta, beta, intensity) with intensity = |c_0|^2 at each angle."""
    theta = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    if theta.size == 0:
        raise ValueError("theta grid is empty")
    if theta.ndim != 1:
        raise ValueError("theta grid must be one-dimensional")
    beta = beta_from_angle(geom, theta)
    return np.column_stack([theta, beta, bright_probability(beta)])
