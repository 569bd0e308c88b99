"""
State - Finite Fock superpositions sum_n c_n |n>, n = 0..N
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ParameterError
from .moments import MomentTable

NORMALIZATION_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class FockSuperposition:
    """Normalized complex amplitudes on a truncated Fock basis"""

    coefficients: np.ndarray
    moments: MomentTable = field(init=False, repr=False)

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=complex).ravel()
        if coefficients.size == 0:
            raise ParameterError("a Fock superposition needs at least one amplitude")

        norm = float(np.sum(np.abs(coefficients) ** 2))
        if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
            raise ParameterError(f"amplitudes are not normalized (sum |c_n|^2 = {norm:.15g})")

        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)
        object.__setattr__(self, 'moments', MomentTable(coefficients))

    @property
    def cutoff(self) -> int:
        return len(self.coefficients) - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def __repr__(self) -> str:
        return f"FockSuperposition(cutoff={self.cutoff})"


def make_state(amplitudes: Sequence[complex]) -> FockSuperposition:
    """
    Build a state from arbitrary amplitudes, dividing by their Euclidean norm

    Args:
        amplitudes: c_0..c_N, not all zero

    Returns:
        Normalized FockSuperposition
    """
    vector = np.array(amplitudes, dtype=complex).ravel()
    if vector.size == 0:
        raise ParameterError("zero vector: no amplitudes given")

    norm = np.linalg.norm(vector)
    if norm == 0.0:
        raise ParameterError("zero vector: every amplitude is zero")

    return FockSuperposition(vector / norm)


def photon_number_distribution(state: FockSuperposition) -> np.ndarray:
    """P(n) = |c_n|^2 for n = 0..N"""
    return state.probabilities.copy()


def overlap(first: FockSuperposition, second: FockSuperposition) -> float:
    """|<first|second>|^2 with the shorter vector zero-padded"""
    size = max(len(first.coefficients), len(second.coefficients))
    a = np.zeros(size, dtype=complex)
    b = np.zeros(size, dtype=complex)
    a[:len(first.coefficients)] = first.coefficients
    b[:len(second.coefficients)] = second.coefficients
    return float(abs(np.vdot(a, b)) ** 2)
