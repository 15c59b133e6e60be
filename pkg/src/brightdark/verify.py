"""Invariant and oracle suite behind ``brightdark verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import correlations, modes
from .geometry import SlitGeometry
from .oracle import (
    build_coherent_pair,
    build_discrete_model,
    build_fock_state,
    dirichlet_coefficient,
    discrete_vs_continuum_error,
    exact_g2_bright,
    exact_ladder_identity_check,
)
from .states import Binomial, Fock

LEVELS = ("quick", "full")

# published weights at beta = 0.3 pi
REFERENCE_BETA = 0.3 * math.pi
REFERENCE_WEIGHTS = {0: 0.737, 1: 0.135, -1: 0.039}
REFERENCE_SHARES = {1: 0.514, -1: 0.149, 2: 0.087, -2: 0.048}


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""


def _check(name: str, residual: float, tolerance: float, detail: str = "") -> Check:
    residual = float(residual)
    return Check(name, residual, tolerance, bool(residual <= tolerance), detail)


def _level_params(level: str) -> dict:
    if level == "quick":
        return dict(
            n_max=1000,
            discrete_m=(2, 3, 4),
            convergence_m=(3, 4),
            fock_m=(3, 4),
            fock_n=(1, 2),
            fock_beta=(0.1 * math.pi, 0.3 * math.pi),
            coherent=((3, 0.5),),
            ratio_test=False,
        )
    if level == "full":
        return dict(
            n_max=10_000,
            discrete_m=(2, 3, 4, 6, 16, 64, 256, 1024),
            convergence_m=(3, 4, 6, 16, 64, 256, 1024),
            fock_m=(3, 4, 6),
            fock_n=(1, 2, 3),
            fock_beta=(0.1 * math.pi, 0.3 * math.pi, 0.7 * math.pi),
            coherent=((3, 0.5), (4, 0.5 + 0.25j)),
            ratio_test=True,
        )
    raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")


def _weight_table() -> Iterator[Check]:
    dec = modes.decompose(REFERENCE_BETA, 64)
    for n, ref in REFERENCE_WEIGHTS.items():
        yield _check(f"weight |c_{n}|^2 at beta=0.3pi", abs(dec.weight(n) - ref), 5e-4)
    shares = modes.dark_shares(dec)
    for n, ref in REFERENCE_SHARES.items():
        yield _check(f"dark share n={n} at beta=0.3pi", abs(shares[n] - ref), 1e-3)


def _normalization(n_max: int) -> Iterator[Check]:
    dec = modes.decompose(REFERENCE_BETA, n_max)
    yield _check(
        "normalization sum|c_n|^2 at beta=0.3pi",
        1.0 - dec.captured_weight,
        dec.tail_bound,
        f"n_max={n_max}, captured={dec.captured_weight!r}",
    )
    worst = 0.0
    for beta in np.linspace(0.0, 4.0 * math.pi, 50):
        d = modes.decompose(beta, n_max)
        worst = max(worst, 1.0 - d.captured_weight - d.tail_bound, d.captured_weight - 1.0)
    yield _check("normalization with tail bound, beta grid on [0, 4pi]", max(worst, 0.0), 1e-12,
                 f"n_max={n_max}")


def _minima() -> Iterator[Check]:
    for m in (1, 2, 3):
        beta = m * math.pi
        yield _check(f"bright probability at beta={m}pi", modes.bright_probability(beta), 1e-28)
        dec = modes.decompose(beta, m + 3)
        yield _check(f"weight on dark mode n={m} at beta={m}pi", 1.0 - dec.weight(m), 1e-12)
        others = max(abs(c) for n, c in zip(dec.indices, dec.coefficients) if n != m)
        yield _check(f"other coefficients at beta={m}pi", others, 1e-14)


def _singularity() -> Iterator[Check]:
    worst = 0.0
    for n in (-2, 0, 1, 3):
        for eps in (1e-3, 1e-6, 1e-9):
            mag = abs(modes.coefficient(n * math.pi + eps, n))
            lo = 1.0 - eps**2 / 6.0 - 1e-12
            worst = max(worst, lo - mag, mag - 1.0)
    yield _check("sinc removable singularity", max(worst, 0.0), 0.0)


def _discrete(ms) -> Iterator[Check]:
    gram = completeness = closed = 0.0
    for m in ms:
        for beta in (0.0, REFERENCE_BETA, 0.7 * math.pi, 2.5):
            model = build_discrete_model(m, beta)
            gram = max(gram, model.gram_error())
            completeness = max(completeness, model.completeness_error())
            for n, c in zip(model.mode_indices, model.discrete_coeffs):
                closed = max(closed, abs(c - dirichlet_coefficient(beta, int(n), m)))
    yield _check("discrete basis Gram identity", gram, 1e-12, f"M in {tuple(ms)}")
    yield _check("discrete completeness sum|c_n^(M)|^2 = 1", completeness, 1e-12)
    yield _check("discrete overlaps match Dirichlet closed form", closed, 1e-12)


def _convergence(ms, ratio_test: bool) -> Iterator[Check]:
    worst = 0.0
    for m in ms:
        for n in (0, 1, -1):
            if not abs(n) < m / 2:
                continue
            err = discrete_vs_continuum_error(m, REFERENCE_BETA, n)
            bound = 10.0 * abs(REFERENCE_BETA - n * math.pi) / m**2
            worst = max(worst, err / bound)
    yield _check("discrete-to-continuum error <= 10|beta - n pi|/M^2", worst, 1.0,
                 "residual is error/bound")
    if ratio_test:
        dev = 0.0
        for n in (0, 1, -1):
            errs = [discrete_vs_continuum_error(m, REFERENCE_BETA, n) for m in (64, 128, 256, 512)]
            for a, b in zip(errs, errs[1:]):
                dev = max(dev, abs(a / b - 4.0))
        yield _check("O(1/M^2) convergence ratio per doubling, |ratio - 4|", dev, 0.5)


def _fock(ms, ns, betas) -> Iterator[Check]:
    ladder = conservation = g2dev = law = popdev = normdev = 0.0
    for m in ms:
        for n in ns:
            for beta in betas:
                fs = build_fock_state(m, n, beta)
                c0 = fs.model.coefficient(0)
                ladder = max(ladder, exact_ladder_identity_check(fs))
                conservation = max(conservation, abs(fs.total_number() - n))
                g2 = exact_g2_bright(fs)
                closed = correlations.g2(Fock(n), beta)
                g2dev = max(g2dev, abs(g2 - closed))
                binom = Binomial(n, abs(c0) ** 2)
                dist = fs.bright_occupation_distribution()
                law = max(law, max(abs(dist[k] - binom.pmf(k)) for k in range(n + 1)))
                popdev = max(popdev, abs(fs.mode_population(0) - n * abs(c0) ** 2))
                normdev = max(normdev, abs(fs.unnormalized_norm**2 / math.factorial(n) - 1.0))
    label = f"M in {tuple(ms)}, N in {tuple(ns)}"
    yield _check("ladder identity B|N> = sqrt(N) c_0 |N-1>", ladder, 1e-10, label)
    yield _check("number conservation <sum J_n^dag J_n> = N", conservation, 1e-12, label)
    yield _check("dense G2 equals 1 - 1/N", g2dev, 1e-10, label)
    yield _check("bright occupation is Binomial(N, |c_0|^2)", law, 1e-10, label)
    yield _check("bright population N|c_0|^2", popdev, 1e-10, label)
    yield _check("||(A^dag)^N|0>||^2 = N!", normdev, 1e-12, label)


def _coherent(cases) -> Iterator[Check]:
    geom = SlitGeometry(1.0, 1.0)
    dist = g2dev = 0.0
    for m, alpha in cases:
        pair = build_coherent_pair(m, alpha, geom, REFERENCE_BETA)
        dist = max(dist, pair.distance)
        g2dev = max(g2dev, abs(pair.bright_g2() - 1.0))
    yield _check("coherent state factorizes over detector modes", dist, 1e-8)
    yield _check("coherent bright-mode G2 = 1", g2dev, 1e-8)


def run_checks(level: str = "quick") -> list[Check]:
    p = _level_params(level)
    groups: list[tuple[str, Callable[[], Iterator[Check]]]] = [
        ("weight table", _weight_table),
        ("normalization", lambda: _normalization(p["n_max"])),
        ("diffraction minima", _minima),
        ("removable singularity", _singularity),
        ("discrete basis", lambda: _discrete(p["discrete_m"])),
        ("continuum convergence", lambda: _convergence(p["convergence_m"], p["ratio_test"])),
        ("dense Fock oracle", lambda: _fock(p["fock_m"], p["fock_n"], p["fock_beta"])),
        ("coherent factorization", lambda: _coherent(p["coherent"])),
    ]
    checks: list[Check] = []
    for name, group in groups:
        try:
            checks.extend(group())
        except Exception as exc:  # a crashing group is a failed check, not a crashed report
            checks.append(Check(name, math.inf, 0.0, False, repr(exc)))
    return checks
