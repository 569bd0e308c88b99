"""
Limits - Binomial, number and truncated coherent states
"""

import math
from typing import Optional

import numpy as np
from scipy.special import xlogy

from ..errors import ParameterError
from ..fock.combinatorics import log_binomial, log_factorial
from ..fock.state import FockSuperposition, make_state


def fock_state(n: int, cutoff: Optional[int] = None) -> FockSuperposition:
    """Number state |n>, optionally padded to a larger cutoff"""
    if n < 0:
        raise ParameterError(f"photon number must be non-negative, got {n}")
    cutoff = n if cutoff is None else cutoff
    if cutoff < n:
        raise ParameterError(f"cutoff {cutoff} is below the photon number {n}")
    coefficients = np.zeros(cutoff + 1, dtype=complex)
    coefficients[n] = 1.0
    return FockSuperposition(coefficients)


def binomial_state(M: int, p: float) -> FockSuperposition:
    """
    Binomial state with c_n = [C(M, n) p^n (1-p)^{M-n}]^{1/2}

    The endpoints are allowed: p = 0 gives the vacuum and p = 1 gives |M>,
    both exactly.
    """
    if int(M) != M or M < 0:
        raise ParameterError(f"M must be a non-negative integer, got {M}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")

    M = int(M)
    log_squares = np.array([
        log_binomial(M, n) + xlogy(n, p) + xlogy(M - n, 1.0 - p)
        for n in range(M + 1)
    ])
    return FockSuperposition(np.exp(0.5 * log_squares))


def coherent_cutoff(alpha: complex) -> int:
    """Cutoff |alpha|^2 + 10|alpha| + 20, leaving a Poisson tail far below 1e-12"""
    magnitude = abs(alpha)
    return int(math.ceil(magnitude ** 2 + 10.0 * magnitude + 20.0))


def truncated_coherent_state(alpha: complex, cutoff: Optional[int] = None) -> FockSuperposition:
    """
    Coherent state |alpha> truncated at the given cutoff and renormalized

    Args:
        alpha: Coherent amplitude
        cutoff: Highest Fock index kept; defaults to coherent_cutoff(alpha)

    Returns:
        FockSuperposition with c_n proportional to alpha^n / sqrt(n!)
    """
    cutoff = coherent_cutoff(alpha) if cutoff is None else int(cutoff)
    if cutoff < 0:
        raise ParameterError(f"cutoff must be non-negative, got {cutoff}")

    if alpha == 0:
        return fock_state(0, cutoff)

    n = np.arange(cutoff + 1)
    log_magnitude = n * math.log(abs(alpha)) - 0.5 * log_factorial(n)
    phase = np.exp(1j * n * np.angle(alpha))
    # divide by the largest term before exponentiating; make_state renormalizes
    amplitudes = np.exp(log_magnitude - log_magnitude.max()) * phase
    return make_state(amplitudes)
