"""
Moments - Normally ordered moments of finite Fock superpositions

All moments come from the ladder action a^l|m> = sqrt(m!/(m-l)!) |m-l>
applied directly in the Fock basis.
"""

import threading
from typing import TYPE_CHECKING, Dict, Tuple

import numpy as np

from ..errors import ParameterError
from .combinatorics import factorial_ratio

if TYPE_CHECKING:
    from .state import FockSuperposition


def _normal_moment(coefficients: np.ndarray, k: int, l: int) -> complex:
    """Direct Fock-basis sum for <a^{+k} a^l>"""
    cutoff = len(coefficients) - 1
    total = 0j
    for m in range(l, cutoff + 1):
        j = m - l + k
        if j > cutoff:
            break
        base = m - l
        weight = np.sqrt(factorial_ratio(m, base) * factorial_ratio(j, base))
        total += np.conj(coefficients[j]) * coefficients[m] * weight
    return complex(total)


class MomentTable:
    """Lazily filled, thread-safe cache of <a^{+k} a^l> for one state"""

    def __init__(self, coefficients: np.ndarray):
        self._coefficients = coefficients
        self._entries: Dict[Tuple[int, int], complex] = {(0, 0): 1.0 + 0j}
        self._lock = threading.Lock()

    @property
    def entries(self) -> Dict[Tuple[int, int], complex]:
        with self._lock:
            return dict(self._entries)

    @property
    def max_order(self) -> int:
        with self._lock:
            return max(k + l for k, l in self._entries)

    def entry(self, k: int, l: int) -> complex:
        """Normally ordered moment, computed once per (k, l)"""
        if k < 0 or l < 0:
            raise ParameterError(f"moment orders must be non-negative, got ({k}, {l})")

        with self._lock:
            cached = self._entries.get((k, l))
        if cached is not None:
            return cached

        mirrored = None
        with self._lock:
            if (l, k) in self._entries:
                mirrored = self._entries[(l, k)]
        value = np.conj(mirrored) if mirrored is not None else _normal_moment(self._coefficients, k, l)

        with self._lock:
            return self._entries.setdefault((k, l), complex(value))

    def freeze(self, max_order: int) -> 'MomentTable':
        """Precompute every entry with k + l <= max_order"""
        for total in range(max_order + 1):
            for k in range(total + 1):
                self.entry(k, total - k)
        return self

    def __getstate__(self):
        state = self.__dict__.copy()
        del state['_lock']
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()


def moment(state: 'FockSuperposition', k: int, l: int) -> complex:
    """
    Normally ordered moment <a^{+k} a^l>

    Args:
        state: Fock superposition
        k: Power of the creation operator
        l: Power of the annihilation operator

    Returns:
        Complex moment; zero when the ladder runs past the cutoff
    """
    return state.moments.entry(k, l)


def antinormal_diagonal_moment(state: 'FockSuperposition', l: int) -> float:
    """<a^l a^{+l}> = sum_n |c_n|^2 (n+l)!/n!"""
    if l < 0:
        raise ParameterError(f"order must be non-negative, got {l}")
    probabilities = state.probabilities
    return float(sum(probabilities[n] * factorial_ratio(n + l, n) for n in range(len(probabilities))))


def number_moment(state: 'FockSuperposition', l: int) -> float:
    """mu_l = <(a^+ a)^l> = sum_n n^l |c_n|^2"""
    if l < 0:
        raise ParameterError(f"order must be non-negative, got {l}")
    n = np.arange(state.cutoff + 1, dtype=float)
    return float(np.sum(n ** l * state.probabilities))


def mean_photon_number(state: 'FockSuperposition') -> float:
    """<N> = <a^+ a>"""
    return moment(state, 1, 1).real
