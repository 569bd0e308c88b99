"""
NGBS - Generalized binomial states built from Abel's binomial identity

    |M, p, q> = sum_n B_n^M(p, q) |n>,
    B_n^2 = C(M, n) p (p + nq)^{n-1} (1 - p + (M - n) q)^{M-n} / (1 + Mq)^M

which reduces to the binomial state at q = 0.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from ..errors import ParameterError
from ..fock.combinatorics import log_binomial, log_factorial
from ..fock.state import FockSuperposition

logger = logging.getLogger(__name__)

# relative slack on the Abel bound so q = -(1-p)/M survives the rounding of 1 - p
ABEL_SLACK = 1e-12


def _clamp(base: float) -> float:
    # bases vanish at the Abel bound; roundoff must not push them negative
    return max(base, 0.0)


@dataclass(frozen=True)
class NGBSParams:
    """(M, p, q) with 0 < p < 1 and q at or above the Abel bound"""

    M: int
    p: float
    q: float

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 0:
            raise ParameterError(f"M must be a non-negative integer, got {self.M}")
        object.__setattr__(self, 'M', int(self.M))

        if not 0.0 < self.p < 1.0:
            raise ParameterError(f"p must lie in the open interval (0, 1), got {self.p}")

        if self.M >= 1:
            lower_p = -self.p / self.M
            lower_1mp = -(1.0 - self.p) / self.M
            bound = max(lower_p, lower_1mp)
            if self.q < bound - ABEL_SLACK * abs(bound):
                name = "-p/M" if lower_p >= lower_1mp else "-(1-p)/M"
                raise ParameterError(
                    f"q={self.q} violates the Abel bound q >= {name} = {bound:.12g}"
                )

    @property
    def abel_bound(self) -> float:
        if self.M == 0:
            return -math.inf
        return max(-self.p / self.M, -(1.0 - self.p) / self.M)


def ngbs_coefficients(params: NGBSParams) -> np.ndarray:
    """Real non-negative amplitudes B_0..B_M"""
    M, p, q = params.M, params.p, params.q
    denominator = 1.0 + M * q

    log_squares = np.empty(M + 1)
    # n = 0: the (p + nq)^{-1} power cancels the leading p
    log_squares[0] = xlogy(M, _clamp(1.0 - p / denominator))
    for n in range(1, M + 1):
        log_squares[n] = (
            log_binomial(M, n)
            + math.log(p)
            + xlogy(n - 1, _clamp(p + n * q))
            + xlogy(M - n, _clamp(1.0 - p + (M - n) * q))
            - M * math.log(denominator)
        )
    return np.exp(0.5 * log_squares)


def ngbs_state(params: NGBSParams) -> FockSuperposition:
    """
    Construct |M, p, q>

    The amplitudes are not renormalized: the Abel identity makes them sum to
    one, and the state constructor checks it.

    Args:
        params: Validated NGBS parameters

    Returns:
        FockSuperposition with cutoff M
    """
    logger.debug("Building NGBS M=%d p=%g q=%g", params.M, params.p, params.q)
    return FockSuperposition(ngbs_coefficients(params))


def ngbs_moment_closed_form(params: NGBSParams, k: int, l: int) -> float:
    """
    <a^{+k} a^l> from the NGBS-specific closed form

        p M! / (1 + Mq) sum_n 1/(n-l)! sqrt(u_n^{n-1} u_j^{j-1} v_n^{M-n} v_j^{M-j}
                                            / ((M-n)! (M-j)!))

    with j = n - l + k, u_n = (p + nq)/(1 + Mq) and v_n = 1 - u_n. Terms whose
    factorial arguments would be negative are dropped.
    """
    if k < 0 or l < 0:
        raise ParameterError(f"moment orders must be non-negative, got ({k}, {l})")

    M, p, q = params.M, params.p, params.q
    denominator = 1.0 + M * q
    log_prefactor = math.log(p) + log_factorial(M) - math.log(denominator)

    total = 0.0
    for n in range(l, M + 1):
        j = n - l + k
        if j > M:
            break
        u_n = _clamp((p + n * q) / denominator)
        u_j = _clamp((p + j * q) / denominator)
        log_term = (
            -log_factorial(n - l)
            + 0.5 * (
                xlogy(n - 1, u_n)
                + xlogy(j - 1, u_j)
                + xlogy(M - n, _clamp(1.0 - u_n))
                + xlogy(M - j, _clamp(1.0 - u_j))
                - log_factorial(M - n)
                - log_factorial(M - j)
            )
        )
        if np.isfinite(log_term):
            total += math.exp(log_prefactor + log_term)
    return total
