import math

import numpy as np
import pytest

from brightdark import SlitGeometry
from brightdark.correlations import UNDEFINED
from brightdark.oracle import build_coherent_pair, coherent_factorization_check
from brightdark.oracle.coherent import CutoffError, mode_cutoff, poisson_tail, single_mode_coherent

from conftest import BETA_03


def test_vacuum_both_ways(unit_slit):
    pair = build_coherent_pair(3, 0.0, unit_slit, BETA_03)
    assert pair.distance == 0.0
    assert pair.bright_g2() is UNDEFINED


def test_m3_example(unit_slit):
    assert coherent_factorization_check(3, 0.5, unit_slit, BETA_03) <= 1e-8


@pytest.mark.parametrize("m,alpha,b", [(3, 0.5, 1.0), (4, 0.5 + 0.25j, 1.0), (3, 0.3j, 2.0), (2, 1.5, 1.0)])
def test_factorization_and_g2(m, alpha, b):
    pair = build_coherent_pair(m, alpha, SlitGeometry(b, 1.0), BETA_03)
    assert pair.neglected_weight < 1e-10
    assert pair.distance <= 1e-8
    assert abs(pair.bright_g2() - 1) <= 1e-8
    assert abs(pair.bright_g2("product") - 1) <= 1e-8
    expected = alpha * math.sqrt(b) * pair.model.discrete_coeffs
    assert np.allclose(pair.amplitudes, expected, rtol=1e-15, atol=0)


def test_cutoff_rule():
    assert mode_cutoff(1.0) == 12
    assert mode_cutoff(0.3j) == 12
    assert mode_cutoff(2.0) == math.ceil(4 + 16 + 10)


def test_poisson_tail_mpmath_value():
    # P(k > 12) for mean 1, from mpmath: 1 - sum_{k<=12} e^-1/k!
    assert poisson_tail(1.0, 12) == pytest.approx(6.359777327134142e-11, rel=1e-12)
    assert poisson_tail(0.0, 12) == 0.0


def test_single_mode_is_normalized():
    v = single_mode_coherent(0.7 - 0.2j, 30)
    assert abs(np.linalg.norm(v) - 1) < 1e-15


def test_insufficient_cutoff_reported(monkeypatch, unit_slit):
    monkeypatch.setattr("brightdark.oracle.coherent.mode_cutoff", lambda a: 2)
    with pytest.raises(CutoffError) as info:
        build_coherent_pair(3, 0.5, unit_slit, BETA_03)
    assert info.value.neglected_weight >= 1e-10
