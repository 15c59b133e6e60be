"""Dense bosonic Fock space over the M slit points.

States live in fixed-photon-number sectors. Occupation tuples in each sector
are in ascending lexicographic order and ranked combinatorially, so ladder
operators reduce to precomputed index maps. Mode operators of the detector
basis are linear combinations of the local ones:
J_n = sum_j conj(v_n[j]) a_j and J_n^dag = sum_j v_n[j] a_j^dag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..correlations import UNDEFINED
from .discrete import DiscreteSlitModel, build_discrete_model

MAX_DIMENSION = 10**6


def sector_dimension(m_modes: int, n_photons: int) -> int:
    if n_photons < 0:
        return 0
    return math.comb(m_modes + n_photons - 1, n_photons)


def _count(m_modes: int, n_photons: int) -> int:
    # states of n photons in m modes, with zero modes allowed
    if m_modes == 0:
        return 1 if n_photons == 0 else 0
    return sector_dimension(m_modes, n_photons)


def _enumerate(m_modes: int, n_photons: int) -> list[tuple[int, ...]]:
    if m_modes == 1:
        return [(n_photons,)]
    out = []
    for first in range(n_photons + 1):
        for rest in _enumerate(m_modes - 1, n_photons - first):
            out.append((first,) + rest)
    return out


class FockSector:
    """All occupation tuples of ``n_photons`` bosons in ``m_modes`` modes."""

    def __init__(self, m_modes: int, n_photons: int):
        self.m_modes = m_modes
        self.n_photons = n_photons
        self.dimension = sector_dimension(m_modes, n_photons)
        if self.dimension > MAX_DIMENSION:
            raise ValueError(
                f"Fock sector dimension {self.dimension} exceeds the cap {MAX_DIMENSION}"
            )
        self.states = np.array(_enumerate(m_modes, n_photons), dtype=np.int64).reshape(-1, m_modes)

    def rank(self, occupation) -> int:
        """Position of ``occupation`` in ascending lexicographic order."""
        occ = [int(k) for k in occupation]
        if len(occ) != self.m_modes or sum(occ) != self.n_photons or min(occ) < 0:
            raise ValueError(f"{occupation!r} is not in the {self.n_photons}-photon sector")
        r = 0
        left = self.n_photons
        for i, k in enumerate(occ[:-1]):
            rest = self.m_modes - i - 1
            for v in range(k):
                r += _count(rest, left - v)
            left -= k
        return r

    def lowering_map(self, mode: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(source, target, sqrt(n_mode)) for a_mode into the (N-1)-photon sector."""
        occ = self.states[:, mode]
        src = np.nonzero(occ > 0)[0]
        lowered = self.states[src].copy()
        lowered[:, mode] -= 1
        dst = np.array([_rank_cached(self.m_modes, self.n_photons - 1, tuple(s)) for s in lowered],
                       dtype=np.int64)
        return src, dst, np.sqrt(occ[src].astype(float))


@lru_cache(maxsize=None)
def _sector(m_modes: int, n_photons: int) -> FockSector:
    return FockSector(m_modes, n_photons)


@lru_cache(maxsize=None)
def _rank_cached(m_modes: int, n_photons: int, occupation: tuple[int, ...]) -> int:
    return _sector(m_modes, n_photons).rank(occupation)


@lru_cache(maxsize=None)
def _lowering(m_modes: int, n_photons: int, mode: int):
    return _sector(m_modes, n_photons).lowering_map(mode)


def lower(vec: np.ndarray, n_photons: int, m_modes: int, weights) -> np.ndarray:
    """Apply sum_j weights[j] a_j to a state of the ``n_photons`` sector."""
    if n_photons == 0:
        return np.zeros(0, dtype=complex)
    out = np.zeros(sector_dimension(m_modes, n_photons - 1), dtype=complex)
    for j, w in enumerate(weights):
        if w == 0:
            continue
        src, dst, amp = _lowering(m_modes, n_photons, j)
        out[dst] += w * amp * vec[src]
    return out


def raise_(vec: np.ndarray, n_photons: int, m_modes: int, weights) -> np.ndarray:
    """Apply sum_j weights[j] a_j^dag, mapping the ``n_photons`` sector up by one."""
    out = np.zeros(sector_dimension(m_modes, n_photons + 1), dtype=complex)
    for j, w in enumerate(weights):
        if w == 0:
            continue
        # a_j^dag is the adjoint of a_j acting on the sector above
        src, dst, amp = _lowering(m_modes, n_photons + 1, j)
        out[src] += w * amp * vec[dst]
    return out


def vacuum(m_modes: int) -> np.ndarray:
    return np.ones(1, dtype=complex)


def _global_creation_weights(model: DiscreteSlitModel) -> np.ndarray:
    # A^dag = sum_n c_n J_n^dag, expressed on the local slit modes
    return model.basis_vectors @ model.discrete_coeffs


def _creation_power(model: DiscreteSlitModel, n_photons: int) -> np.ndarray:
    """(A^dag)^N |0>, unnormalized."""
    w = _global_creation_weights(model)
    vec = vacuum(model.m_points)
    for k in range(n_photons):
        vec = raise_(vec, k, model.m_points, w)
    return vec


@dataclass(frozen=True)
class DenseFockSpace:
    """N-photon uniform-illumination state on an M-point slit."""

    m_modes: int
    n_photons: int
    dimension: int
    model: DiscreteSlitModel = field(repr=False)
    state_vector: np.ndarray = field(repr=False)
    unnormalized_norm: float  # ||(A^dag)^N |0>||, equals sqrt(N!) when [A, A^dag] = 1

    def annihilate(self, n: int, vec: np.ndarray | None = None, photons: int | None = None) -> np.ndarray:
        """Apply detector-mode J_n to ``vec`` (default: the stored state)."""
        vec = self.state_vector if vec is None else vec
        photons = self.n_photons if photons is None else photons
        return lower(vec, photons, self.m_modes, self.model.vector(n).conj())

    def mode_population(self, n: int) -> float:
        return float(np.linalg.norm(self.annihilate(n)) ** 2)

    def mode_populations(self) -> dict[int, float]:
        return {int(n): self.mode_population(int(n)) for n in self.model.mode_indices}

    def total_number(self) -> float:
        """<sum_n J_n^dag J_n>, evaluated in the detector basis."""
        return float(sum(self.mode_populations().values()))

    def local_total_number(self) -> int:
        states = _sector(self.m_modes, self.n_photons).states
        return int(np.unique(states.sum(axis=1)).item())

    def bright_factorial_moments(self) -> np.ndarray:
        """<(B^dag)^k B^k> for k = 0..N."""
        moments = []
        vec, photons = self.state_vector, self.n_photons
        for k in range(self.n_photons + 1):
            moments.append(float(np.linalg.norm(vec) ** 2))
            if k < self.n_photons:
                vec = self.annihilate(0, vec, photons)
                photons -= 1
        return np.array(moments)

    def bright_occupation_distribution(self) -> np.ndarray:
        """P(m photons in the bright mode), m = 0..N, from factorial moments."""
        f = self.bright_factorial_moments()
        n = self.n_photons
        p = np.zeros(n + 1)
        for m in range(n + 1):
            p[m] = sum((-1) ** (k - m) * math.comb(k, m) * f[k] / math.factorial(k)
                       for k in range(m, n + 1))
        return p


def build_fock_state(m_modes: int, n_photons: int, beta: float) -> DenseFockSpace:
    """|N> = (A^dag)^N |0> / sqrt(N!) built by repeated ladder application."""
    m, n = int(m_modes), int(n_photons)
    if m < 2:
        raise ValueError(f"need at least 2 modes, got {m_modes!r}")
    if n < 1:
        raise ValueError(f"need at least one photon, got {n_photons!r}")
    dim = sector_dimension(m, n)
    if dim > MAX_DIMENSION:
        raise ValueError(f"Fock space dimension C({m + n - 1},{n}) = {dim} exceeds cap {MAX_DIMENSION}")
    model = build_discrete_model(m, beta)
    vec = _creation_power(model, n)
    norm = float(np.linalg.norm(vec))
    vec = vec / norm
    vec.setflags(write=False)
    return DenseFockSpace(m, n, dim, model, vec, norm)


def exact_g2_bright(fs: DenseFockSpace, threshold: float = 1e-12):
    """<B^dag B^dag B B> / <B^dag B>^2 by dense ladder application.

    Returns ``UNDEFINED`` when the bright population is below ``threshold``.
    """
    b1 = fs.annihilate(0)
    mean = float(np.linalg.norm(b1) ** 2)
    if mean <= threshold:
        return UNDEFINED
    b2 = fs.annihilate(0, b1, fs.n_photons - 1)
    num = float(np.linalg.norm(b2) ** 2) if b2.size else 0.0
    return num / mean**2


def exact_ladder_identity_check(fs: DenseFockSpace) -> float:
    """|| B|N> - sqrt(N) c_0 |N-1> || on the same discretized slit."""
    lhs = fs.annihilate(0)
    below = _creation_power(fs.model, fs.n_photons - 1)
    below = below / np.linalg.norm(below)
    rhs = math.sqrt(fs.n_photons) * fs.model.coefficient(0) * below
    return float(np.linalg.norm(lhs - rhs))
