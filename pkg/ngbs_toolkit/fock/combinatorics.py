"""
Combinatorics - Factorials, Pochhammer symbols and Stirling numbers

Factorial ratios are exact for arguments up to 20 and go through log-gamma
differences beyond that, where 64-bit integers overflow.
"""

import math
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.special import gammaln

from ..errors import DomainError, ParameterError

EXACT_FACTORIAL_LIMIT = 20

_SMALL_FACTORIALS = [math.factorial(n) for n in range(EXACT_FACTORIAL_LIMIT + 1)]
_SMALL_LOG_FACTORIALS = np.log(np.array(_SMALL_FACTORIALS, dtype=float))

ArrayLike = Union[int, np.ndarray]


def log_factorial(n: ArrayLike) -> Union[float, np.ndarray]:
    """log(n!) for non-negative integers, scalar or array"""
    values = np.asarray(n)
    if np.any(values < 0):
        raise ParameterError("log_factorial needs n >= 0")

    small = values <= EXACT_FACTORIAL_LIMIT
    result = np.where(
        small,
        _SMALL_LOG_FACTORIALS[np.clip(values, 0, EXACT_FACTORIAL_LIMIT).astype(int)],
        gammaln(values + 1.0),
    )
    if result.ndim == 0:
        return float(result)
    return result


def factorial_ratio(a: int, b: int) -> float:
    """
    a! / b! for non-negative integers

    Args:
        a: Numerator argument
        b: Denominator argument

    Returns:
        The ratio as a float
    """
    if a < 0 or b < 0:
        raise ParameterError("factorial_ratio needs non-negative arguments")
    if a <= EXACT_FACTORIAL_LIMIT and b <= EXACT_FACTORIAL_LIMIT:
        return _SMALL_FACTORIALS[a] / _SMALL_FACTORIALS[b]
    return math.exp(log_factorial(a) - log_factorial(b))


def log_binomial(n: int, k: int) -> float:
    """log C(n, k); -inf outside 0 <= k <= n"""
    if k < 0 or k > n:
        return -math.inf
    if n <= EXACT_FACTORIAL_LIMIT:
        return math.log(math.comb(n, k))
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


def double_factorial(n: int) -> int:
    """n!! with the conventions 0!! = (-1)!! = 1"""
    if n < -1:
        raise ParameterError(f"double factorial undefined for n={n}")
    return math.prod(range(n, 0, -2))


def pochhammer_half(n: int) -> float:
    """
    (1/2)_{n/2} = (n-1)!! / 2^{n/2}, the coherent-state bound of even
    quadrature moments

    Args:
        n: Even non-negative order

    Returns:
        The Pochhammer value
    """
    if n < 0:
        raise ParameterError(f"pochhammer_half needs n >= 0, got {n}")
    if n % 2:
        raise DomainError(f"pochhammer_half is only defined for even n, got {n}")
    return double_factorial(n - 1) / 2 ** (n // 2)


@lru_cache(maxsize=None)
def stirling2(r: int, k: int) -> int:
    """Stirling number of the second kind S2(r, k); zero when k > r"""
    if r < 0 or k < 0:
        raise ParameterError(f"stirling2 needs non-negative arguments, got ({r}, {k})")
    if k > r:
        return 0
    if r == 0:
        return 1
    if k == 0:
        return 0
    return k * stirling2(r - 1, k) + stirling2(r - 1, k - 1)
