"""
Photon statistics witnesses - antibunching, sub-Poissonian statistics and
the Agarwal-Tara moment-matrix ratio
"""

from math import comb
from typing import Tuple

import numpy as np

from ..config import DEFAULT_CONFIG
from ..errors import ParameterError
from ..fock.combinatorics import stirling2
from ..fock.moments import mean_photon_number, moment, number_moment
from ..fock.state import FockSuperposition
from .result import AGARWAL_TARA_FLOOR_SLACK, WitnessResult


def antibunching_value(state: FockSuperposition, l: int) -> float:
    """
    D(l) = <a^{+(l+1)} a^{l+1}> - <a^+ a>^{l+1}

    D(-1) = D(0) = 0 by convention so the sub-Poissonian sum can start at
    k = 0.
    """
    if l <= 0:
        return 0.0
    return moment(state, l + 1, l + 1).real - mean_photon_number(state) ** (l + 1)


def hoa(state: FockSuperposition, l: int) -> WitnessResult:
    """Higher-order antibunching D(l) < 0; l = 1 is ordinary antibunching"""
    if l < 1:
        raise ParameterError(f"antibunching order must be >= 1, got {l}")
    return WitnessResult.from_value(antibunching_value(state, l), 'hoa', l)


def hosps(state: FockSuperposition, l: int) -> WitnessResult:
    """
    Higher-order sub-Poissonian statistics

        D_h(l-1) = sum_{r=0}^{l} sum_{k=0}^{r} S2(r,k) C(l,r) (-1)^r D(k-1) <N>^{l-r}

    Args:
        state: Fock superposition
        l: Order, at least 2 (l = 2 reproduces D(1))

    Returns:
        WitnessResult tagged with order l
    """
    if l < 2:
        raise ParameterError(f"sub-Poissonian order must be >= 2, got {l}")

    mean = mean_photon_number(state)
    value = 0.0
    for r in range(l + 1):
        for k in range(r + 1):
            weight = stirling2(r, k) * comb(l, r) * (-1) ** r
            if weight == 0 or k < 2:
                continue
            value += weight * antibunching_value(state, k - 1) * mean ** (l - r)
    return WitnessResult.from_value(value, 'hosps', l)


def agarwal_tara_matrices(state: FockSuperposition, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Hankel matrices of normally ordered moments m_j and number moments mu_j"""
    if n < 2:
        raise ParameterError(f"Agarwal-Tara order must be >= 2, got {n}")
    normal = [moment(state, j, j).real for j in range(2 * n - 1)]
    plain = [number_moment(state, j) for j in range(2 * n - 1)]
    index = np.add.outer(np.arange(n), np.arange(n))
    return np.array(normal)[index], np.array(plain)[index]


def agarwal_tara(state: FockSuperposition, n: int) -> WitnessResult:
    """
    A_n = det m / (det mu - det m); nonclassical when -1 <= A_n < 0

    A vanishing denominator yields an indeterminate result instead of a
    number.
    """
    m, mu = agarwal_tara_matrices(state, n)
    det_m = np.linalg.det(m)
    denominator = np.linalg.det(mu) - det_m
    if abs(denominator) < DEFAULT_CONFIG.indeterminate_threshold:
        return WitnessResult.indeterminate('agarwal_tara', n)

    value = float(det_m / denominator)
    nonclassical = -1.0 - AGARWAL_TARA_FLOOR_SLACK <= value < 0.0
    return WitnessResult(value=value, criterion='agarwal_tara', order=n, nonclassical=nonclassical)
