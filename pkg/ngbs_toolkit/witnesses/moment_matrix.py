"""
Moment matrix - Shchukin-Vogel determinants over the monomial basis
(1, a, a^+, a^2, a^+ a, a^{+2}, a^3, ...)
"""

from typing import List, Tuple

import numpy as np

from ..errors import DomainError
from ..fock.moments import moment
from ..fock.state import FockSuperposition
from .result import WitnessResult


def monomial_basis(size: int) -> List[Tuple[int, int]]:
    """
    First `size` monomials a^{+s} a^t as (s, t) pairs

    Ordered by total degree, and within a degree from pure annihilation to
    pure creation, so the first four are 1, a, a^+, a^2.
    """
    basis: List[Tuple[int, int]] = []
    degree = 0
    while len(basis) < size:
        for s in range(degree + 1):
            basis.append((s, degree - s))
        degree += 1
    return basis[:size]


def vogel_matrix(state: FockSuperposition, size: int) -> np.ndarray:
    """Hermitian matrix of <:f_i^+ f_j:> over the monomial basis"""
    basis = monomial_basis(size)
    matrix = np.empty((size, size), dtype=complex)
    for i, (s_i, t_i) in enumerate(basis):
        for j, (s_j, t_j) in enumerate(basis):
            # f_i^+ f_j = a^{+t_i} a^{s_i} a^{+s_j} a^{t_j}, normally ordered
            matrix[i, j] = moment(state, t_i + s_j, s_i + t_j)
    return matrix


def vogel_determinant(state: FockSuperposition, V: int) -> WitnessResult:
    """
    Determinant d_V of the top-left V x V block; negative is sufficient for
    nonclassicality

    Args:
        state: Fock superposition
        V: Block size, at least 3 (d_2 is never negative)

    Returns:
        WitnessResult with the real part of the determinant
    """
    if V < 3:
        raise DomainError(f"Vogel determinants start at V = 3, got {V}")
    value = np.linalg.det(vogel_matrix(state, V)).real
    return WitnessResult.from_value(value, 'vogel', V)
