"""
Squeezing witnesses - Hong-Mandel higher-order and Hillery amplitude-powered

Quadrature convention: X = (a + a^+)/sqrt(2), so the vacuum has
<(dX)^2> = 1/2.
"""

from math import comb
from typing import Tuple

from ..errors import DomainError, ParameterError
from ..fock.combinatorics import double_factorial, pochhammer_half
from ..fock.moments import antinormal_diagonal_moment, moment
from ..fock.state import FockSuperposition
from .result import WitnessResult


def quadrature_moment(state: FockSuperposition, n: int) -> float:
    """
    Central moment <(dX)^n> for even n, expanded in normally ordered moments

        sum_r sum_{i<=r/2} sum_{k<=r-2i} (-1)^r 2^{-n/2} (2i-1)!! C(r-2i,k) C(n,r)
              C(r,2i) <a^+ + a>^{n-r} <a^{+k} a^{r-2i-k}>
    """
    if n < 2:
        raise ParameterError(f"Hong-Mandel order must be >= 2, got {n}")
    if n % 2:
        raise DomainError(f"Hong-Mandel order must be even, got {n}")

    displacement = 2.0 * moment(state, 0, 1).real
    total = 0j
    for r in range(n + 1):
        outer = (-1) ** r * comb(n, r) * displacement ** (n - r)
        for i in range(r // 2 + 1):
            pairing = double_factorial(2 * i - 1) * comb(r, 2 * i)
            for k in range(r - 2 * i + 1):
                total += outer * pairing * comb(r - 2 * i, k) * moment(state, k, r - 2 * i - k)
    return total.real / 2 ** (n // 2)


def hong_mandel_hos(state: FockSuperposition, n: int) -> WitnessResult:
    """S_HM(n) = (<(dX)^n> - (1/2)_{n/2}) / (1/2)_{n/2} for even n >= 2"""
    value = quadrature_moment(state, n)
    bound = pochhammer_half(n)
    return WitnessResult.from_value((value - bound) / bound, 'hong_mandel', n)


def hillery_variances(state: FockSuperposition, l: int) -> Tuple[float, float, complex]:
    """
    Variances of Y1 = (a^l + a^{+l})/2 and Y2 = -i(a^l - a^{+l})/2 plus <[Y1, Y2]>

    Args:
        state: Fock superposition
        l: Amplitude power, at least 1

    Returns:
        ((dY1)^2, (dY2)^2, <[Y1, Y2]>)
    """
    if l < 1:
        raise ParameterError(f"Hillery order must be >= 1, got {l}")

    a_l = moment(state, 0, l)
    a_2l = moment(state, 0, 2 * l)
    adag_2l = moment(state, 2 * l, 0)
    normal = moment(state, l, l).real
    antinormal = antinormal_diagonal_moment(state, l)

    y1_square = 0.25 * (a_2l + adag_2l + normal + antinormal).real
    y2_square = -0.25 * (a_2l + adag_2l - normal - antinormal).real
    variance_1 = y1_square - a_l.real ** 2
    variance_2 = y2_square - a_l.imag ** 2
    commutator = 0.5j * (antinormal - normal)
    return variance_1, variance_2, commutator


def hillery_hos(state: FockSuperposition, l: int) -> WitnessResult:
    """(dY1)^2 - |<[Y1, Y2]>|/2 < 0 signals amplitude-powered squeezing"""
    variance_1, _, commutator = hillery_variances(state, l)
    return WitnessResult.from_value(variance_1 - 0.5 * abs(commutator), 'hillery', l)
