"""M-point discretized slit with an exact finite detector-oriented basis.

Slit points sit at the cell midpoints x_j = (j + 1/2) b / M. Basis vector n
has components exp(-i phi(x_j)) exp(i k_n x_j) / sqrt(M) with
phi(x_j) = 2 beta x_j / b and k_n = 2 pi n / b, for n in
[-floor(M/2), ceil(M/2)). The discrete coefficients are computed as plain
inner products, so nothing here depends on the continuum formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..geometry import check_beta
from ..modes import coefficient


@dataclass(frozen=True)
class DiscreteSlitModel:
    m_points: int
    beta: float
    positions: np.ndarray = field(repr=False)  # in units of b
    mode_indices: np.ndarray = field(repr=False)
    basis_vectors: np.ndarray = field(repr=False)  # column k is the vector of mode_indices[k]
    discrete_coeffs: np.ndarray = field(repr=False)

    def column(self, n: int) -> int:
        lo = int(self.mode_indices[0])
        if not lo <= n < lo + self.m_points:
            raise IndexError(f"mode {n} outside [{lo}, {lo + self.m_points})")
        return n - lo

    def vector(self, n: int) -> np.ndarray:
        return self.basis_vectors[:, self.column(n)]

    def coefficient(self, n: int) -> complex:
        return complex(self.discrete_coeffs[self.column(n)])

    @property
    def uniform_vector(self) -> np.ndarray:
        return np.full(self.m_points, 1.0 / math.sqrt(self.m_points), dtype=complex)

    def gram_error(self) -> float:
        v = self.basis_vectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(self.m_points))))

    def completeness_error(self) -> float:
        return abs(float(np.sum(np.abs(self.discrete_coeffs) ** 2)) - 1.0)


def build_discrete_model(m_points: int, beta: float) -> DiscreteSlitModel:
    m = int(m_points)
    if m < 2:
        raise ValueError(f"need at least 2 slit points, got {m_points!r}")
    beta = check_beta(beta)
    x = (np.arange(m) + 0.5) / m
    ns = np.arange(-(m // 2), -(m // 2) + m)
    # phi(x_j) - k_n x_j in units where b = 1
    arg = -2.0 * beta * x[:, None] + 2.0 * math.pi * ns[None, :] * x[:, None]
    vectors = np.exp(1j * arg) / math.sqrt(m)
    uniform = np.full(m, 1.0 / math.sqrt(m))
    coeffs = vectors.conj().T @ uniform
    for a in (x, ns, vectors, coeffs):
        a.setflags(write=False)
    return DiscreteSlitModel(m, beta, x, ns, vectors, coeffs)


def dirichlet_coefficient(beta: float, n: int, m_points: int) -> complex:
    """Closed form exp(i d) sin(d) / (M sin(d/M)) with d = beta - n pi."""
    d = check_beta(beta) - n * math.pi
    m = int(m_points)
    denom = m * math.sin(d / m)
    if abs(d / m) < 1e-8:
        return complex(np.exp(1j * d))  # sin(d)/(M sin(d/M)) -> 1
    return complex(np.exp(1j * d) * math.sin(d) / denom)


def discrete_vs_continuum_error(m_points: int, beta: float, n: int) -> float:
    """|c_n^(M) - c_n|, the discretization error of one coefficient."""
    m = int(m_points)
    if not abs(n) < m / 2:
        raise ValueError(f"need |n| < M/2, got n={n}, M={m}")
    model = build_discrete_model(m, beta)
    return abs(model.coefficient(n) - coefficient(beta, n))
