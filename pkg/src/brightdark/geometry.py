"""Slit geometry and the dimensionless phase parameter beta.

Everything downstream works with beta = pi * b * sin(theta) / lambda only;
physical lengths are confined to this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class SlitGeometry:
    """Slit width ``b`` and wavelength ``lambda``, both in meters."""

    slit_width_b: float
    wavelength_lambda: float

    def __post_init__(self) -> None:
        for name in ("slit_width_b", "wavelength_lambda"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")

    def beta(self, theta):
        return beta_from_angle(self, theta)


def check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")
    return beta


def _check_theta(theta) -> np.ndarray:
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("theta must be finite")
    if np.any(np.abs(arr) >= HALF_PI):
        raise ValueError("theta must lie in the open interval (-pi/2, pi/2)")
    return arr


def beta_from_angle(geom: SlitGeometry, theta):
    """Return beta = pi b sin(theta) / lambda.

    Accepts a scalar or an array of angles; scalars give a Python float.
    """
    arr = _check_theta(theta)
    beta = math.pi * geom.slit_width_b * np.sin(arr) / geom.wavelength_lambda
    if arr.ndim == 0:
        return float(beta)
    return beta


def phase(x: float, theta: float, geom: SlitGeometry) -> float:
    """Far-field propagation phase (2 pi / lambda) x sin(theta) of slit point ``x``."""
    x = float(x)
    if not (0.0 <= x <= geom.slit_width_b):
        raise ValueError(f"x={x!r} outside the slit [0, {geom.slit_width_b!r}]")
    t = float(_check_theta(theta))
    return 2.0 * math.pi * x * math.sin(t) / geom.wavelength_lambda
