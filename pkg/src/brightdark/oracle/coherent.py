"""Coherent illumination of the discretized slit, built two ways.

Both constructions live in the truncated product space of the M detector
modes (mode n truncated at occupation K_n):

(a) displacement of the uniform mode, written normally ordered as
    exp(-|gamma|^2/2) exp(gamma A^dag) |0> with gamma = alpha sqrt(b) and
    A^dag = sum_n c_n J_n^dag, summed term by term;
(b) the tensor product of single-mode coherent states with amplitudes
    alpha_n = alpha sqrt(b) c_n.

Raising operators never lower an occupation, so truncation drops the same
components from both vectors and their distance is a clean check of the
factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..correlations import UNDEFINED
from ..geometry import SlitGeometry
from .discrete import DiscreteSlitModel, build_discrete_model

NEGLECTED_WEIGHT_LIMIT = 1e-10
MAX_PRODUCT_DIMENSION = 4 * 10**6


class CutoffError(ValueError):
    def __init__(self, message: str, neglected_weight: float):
        super().__init__(f"{message} (neglected weight {neglected_weight:.3e})")
        self.neglected_weight = neglected_weight


def mode_cutoff(amplitude: complex) -> int:
    a = abs(amplitude)
    if a <= 1.0:
        return 12
    return math.ceil(a * a + 8.0 * a + 10.0)


def poisson_tail(mean: float, cutoff: int) -> float:
    """P(k > cutoff) for a Poisson law, summed from the far side to avoid cancellation."""
    if mean == 0.0:
        return 0.0
    log_p = -mean + (cutoff + 1) * math.log(mean) - math.lgamma(cutoff + 2)
    term = math.exp(log_p)
    total = 0.0
    k = cutoff + 1
    while term > 1e-300 and (term > total * 1e-17 or k < mean):
        total += term
        k += 1
        term *= mean / k
    return total


def single_mode_coherent(amplitude: complex, cutoff: int) -> np.ndarray:
    k = np.arange(cutoff + 1)
    log_fact = np.array([math.lgamma(i + 1) for i in k])
    a = complex(amplitude)
    if a == 0:
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0
        return out
    mag = np.exp(-0.5 * abs(a) ** 2 + k * math.log(abs(a)) - 0.5 * log_fact)
    return mag * np.exp(1j * k * np.angle(a))


def _raise_axis(psi: np.ndarray, axis: int, weight: complex) -> np.ndarray:
    out = np.zeros_like(psi)
    src = np.moveaxis(psi, axis, 0)
    dst = np.moveaxis(out, axis, 0)
    n = src.shape[0]
    shape = (n - 1,) + (1,) * (src.ndim - 1)
    dst[1:] = weight * np.sqrt(np.arange(1, n)).reshape(shape) * src[:-1]
    return out


def _lower_axis(psi: np.ndarray, axis: int) -> np.ndarray:
    out = np.zeros_like(psi)
    src = np.moveaxis(psi, axis, 0)
    dst = np.moveaxis(out, axis, 0)
    n = src.shape[0]
    shape = (n - 1,) + (1,) * (src.ndim - 1)
    dst[:-1] = np.sqrt(np.arange(1, n)).reshape(shape) * src[1:]
    return out


@dataclass(frozen=True)
class CoherentPair:
    model: DiscreteSlitModel = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)  # alpha_n^(M), ordered like model.mode_indices
    cutoffs: tuple[int, ...]
    neglected_weight: float
    displaced: np.ndarray = field(repr=False)  # construction (a)
    product: np.ndarray = field(repr=False)  # construction (b)

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.displaced - self.product))

    def bright_g2(self, which: str = "displaced"):
        """<B^dag B^dag B B> / <B^dag B>^2 on the truncated state."""
        psi = getattr(self, which)
        axis = self.model.column(0)
        b1 = _lower_axis(psi, axis)
        mean = float(np.vdot(b1, b1).real)
        if mean <= 0.0:
            return UNDEFINED
        b2 = _lower_axis(b1, axis)
        return float(np.vdot(b2, b2).real) / mean**2


def build_coherent_pair(m_modes: int, alpha: complex, geom: SlitGeometry, beta: float) -> CoherentPair:
    model = build_discrete_model(m_modes, beta)
    gamma = complex(alpha) * math.sqrt(geom.slit_width_b)
    amps = gamma * model.discrete_coeffs
    cutoffs = tuple(mode_cutoff(a) for a in amps)
    dim = math.prod(k + 1 for k in cutoffs)
    if dim > MAX_PRODUCT_DIMENSION:
        raise ValueError(f"truncated product space dimension {dim} exceeds {MAX_PRODUCT_DIMENSION}")

    neglected = -math.expm1(sum(math.log1p(-poisson_tail(abs(a) ** 2, k)) for a, k in zip(amps, cutoffs)))
    if neglected >= NEGLECTED_WEIGHT_LIMIT:
        raise CutoffError("per-mode photon cutoff insufficient", neglected)

    shape = tuple(k + 1 for k in cutoffs)
    product = np.ones((), dtype=complex)
    for a, k in zip(amps, cutoffs):
        product = np.multiply.outer(product, single_mode_coherent(a, k))

    term = np.zeros(shape, dtype=complex)
    term[(0,) * len(shape)] = 1.0
    series = term.copy()
    for k in range(1, sum(cutoffs) + 1):
        nxt = np.zeros(shape, dtype=complex)
        for axis, c in enumerate(model.discrete_coeffs):
            nxt += _raise_axis(term, axis, c)
        term = nxt * (gamma / k)
        series += term
        if not np.any(term):
            break
    displaced = math.exp(-0.5 * abs(gamma) ** 2) * series

    return CoherentPair(model, amps, cutoffs, neglected, displaced, product)


def coherent_factorization_check(m_modes: int, alpha: complex, geom: SlitGeometry, beta: float) -> float:
    """Distance between the displaced uniform mode and the per-mode product state."""
    return build_coherent_pair(m_modes, alpha, geom, beta).distance
