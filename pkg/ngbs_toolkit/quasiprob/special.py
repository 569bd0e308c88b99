"""
Special functions - Scaled three-term recurrences for Laguerre and Hermite
functions

The Gaussian envelope is folded into the starting values, so every term of
the recurrences stays bounded and large degrees neither overflow nor lose
the tiny exponential prefactor.
"""

from typing import Iterator

import numpy as np
from scipy.special import gammaln

PI_QUARTER_ROOT = np.pi ** -0.25


def iter_laguerre_functions(d: int, t: np.ndarray, n_max: int) -> Iterator[np.ndarray]:
    """
    Yield lambda_n^d(t) = sqrt(n!/(n+d)!) t^{d/2} e^{-t/2} L_n^d(t), n = 0..n_max

    Args:
        d: Associated index d >= 0
        t: Non-negative arguments (any shape)
        n_max: Highest degree

    Yields:
        Arrays shaped like t
    """
    t = np.asarray(t, dtype=float)
    with np.errstate(divide='ignore'):
        log_t = np.log(t)
    if d == 0:
        previous = np.exp(-0.5 * t)
    else:
        previous = np.where(t > 0.0, np.exp(0.5 * d * log_t - 0.5 * t - 0.5 * gammaln(d + 1.0)), 0.0)
    yield previous
    if n_max == 0:
        return

    current = (1.0 + d - t) / np.sqrt(1.0 + d) * previous
    yield current
    for n in range(1, n_max):
        lead = (2.0 * n + 1.0 + d - t) / np.sqrt((n + 1.0) * (n + 1.0 + d))
        trail = np.sqrt(n * (n + d) / ((n + 1.0) * (n + 1.0 + d)))
        previous, current = current, lead * current - trail * previous
        yield current


def laguerre_function_table(d: int, t: np.ndarray, n_max: int) -> np.ndarray:
    """Stack of lambda_0^d .. lambda_{n_max}^d along a new leading axis"""
    return np.stack(list(iter_laguerre_functions(d, t, n_max)))


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """
    Oscillator eigenfunctions psi_n(x) = pi^{-1/4} (2^n n!)^{-1/2} e^{-x^2/2} H_n(x)

    Uses psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}; complex
    arguments are accepted.

    Args:
        n_max: Highest degree
        x: Arguments (any shape, real or complex)

    Returns:
        Array of shape (n_max + 1,) + x.shape
    """
    x = np.asarray(x)
    dtype = complex if np.iscomplexobj(x) else float
    table = np.empty((n_max + 1,) + x.shape, dtype=dtype)
    table[0] = PI_QUARTER_ROOT * np.exp(-0.5 * x * x)
    if n_max >= 1:
        table[1] = np.sqrt(2.0) * x * table[0]
    for n in range(1, n_max):
        table[n + 1] = np.sqrt(2.0 / (n + 1)) * x * table[n] - np.sqrt(n / (n + 1.0)) * table[n - 1]
    return table
