"""
Wigner - Wigner function of finite Fock superpositions

Conventions: hbar = 1, X = (a + a^+)/sqrt(2), position wavefunctions
psi_n(x) = b_n e^{-x^2/2} H_n(x) with b_n = pi^{-1/4} (2^n n!)^{-1/2}, and

    W(x, p') = (1/pi) int psi*(x + y) psi(x - y) e^{2ip'y} dy

so the vacuum peaks at 1/pi. Three independent evaluations are provided:
the closed-form Laguerre sum (production path), the displaced-number-state
series and direct quadrature of the integral above.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import eval_genlaguerre, gammaln

from ..config import DEFAULT_CONFIG
from ..errors import ConvergenceError, ParameterError
from ..fock.state import FockSuperposition
from ..parallel import map_ordered
from .special import hermite_functions, iter_laguerre_functions

logger = logging.getLogger(__name__)

REALITY_TOLERANCE = 1e-10
ROW_BLOCK = 64
GRID_TOLERANCE = 1e-6

Window = Tuple[float, float, float, float]


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """W sampled on a rectangular lattice; values[i, j] = W(x_axis[i], p_axis[j])"""

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    cell_area: float
    normalization: float
    quadrature_tolerance: float
    covers_support: bool = True

    @property
    def window(self) -> Window:
        return (float(self.x_axis[0]), float(self.x_axis[-1]),
                float(self.p_axis[0]), float(self.p_axis[-1]))


def phase_space_radius(cutoff: int, margin: float = DEFAULT_CONFIG.window_margin) -> float:
    """Support radius sqrt(2N) of |N> plus a Gaussian tail margin"""
    return math.sqrt(2.0 * cutoff) + margin


def default_window(state: FockSuperposition, margin: float = DEFAULT_CONFIG.window_margin) -> Window:
    radius = phase_space_radius(state.cutoff, margin)
    return (-radius, radius, -radius, radius)


def as_window(window: Union[None, float, Sequence[float]], state: FockSuperposition) -> Window:
    """Accept None (default), a radius, or (x_min, x_max, p_min, p_max)"""
    if window is None:
        return default_window(state)
    if np.isscalar(window):
        radius = float(window)
        return (-radius, radius, -radius, radius)

    bounds = tuple(float(v) for v in window)
    if len(bounds) != 4:
        raise ParameterError(f"window needs 4 bounds (x_min, x_max, p_min, p_max), got {bounds}")
    if bounds[0] >= bounds[1] or bounds[2] >= bounds[3]:
        raise ParameterError(f"window bounds must be increasing, got {bounds}")
    return bounds


def wigner_values(coefficients: np.ndarray, x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """
    Closed-form W on arrays of points (broadcast together)

    Each (n, n + d) pair contributes

        (1/pi) (-1)^{n+d} c_n* c_{n+d} e^{id phi} lambda_n^d(2(x^2 + p^2))

    where e^{i phi} = (ip - x)/r and lambda is the scaled Laguerre function;
    pairs with n > n' are the complex conjugates of their partners.
    """
    coefficients = np.asarray(coefficients, dtype=complex)
    x, p = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(p, dtype=float))
    cutoff = len(coefficients) - 1

    radius_sq = x * x + p * p
    t = 2.0 * radius_sq
    radius = np.sqrt(radius_sq)
    with np.errstate(invalid='ignore', divide='ignore'):
        rotation = np.where(radius > 0.0, (1j * p - x) / radius, 1.0 + 0j)

    total = np.zeros(x.shape, dtype=complex)
    phase = np.ones(x.shape, dtype=complex)
    for d in range(cutoff + 1):
        products = np.conj(coefficients[:cutoff + 1 - d]) * coefficients[d:]
        if np.any(products != 0):
            accumulated = np.zeros(x.shape, dtype=complex)
            for n, laguerre in enumerate(iter_laguerre_functions(d, t, cutoff - d)):
                if products[n] != 0:
                    sign = -1.0 if (n + d) % 2 else 1.0
                    accumulated += (sign * products[n]) * laguerre
            term = accumulated * phase
            total += term if d == 0 else term + np.conj(term)
        phase = phase * rotation

    residue = float(np.max(np.abs(total.imag))) if total.size else 0.0
    if residue > REALITY_TOLERANCE:
        logger.warning("Wigner imaginary residue %.3g exceeds %.1g", residue, REALITY_TOLERANCE)
    return total.real / np.pi


def _wigner_block(task: Tuple[np.ndarray, np.ndarray, np.ndarray]) -> np.ndarray:
    coefficients, x_block, p_axis = task
    x, p = np.meshgrid(x_block, p_axis, indexing='ij')
    return wigner_values(coefficients, x, p)


def wigner_lattice(coefficients: np.ndarray, x_axis: np.ndarray, p_axis: np.ndarray,
                   workers: int = 1) -> np.ndarray:
    """Closed-form W on the product lattice x_axis x p_axis, in x-row blocks"""
    tasks = [(coefficients, x_axis[start:start + ROW_BLOCK], p_axis)
             for start in range(0, len(x_axis), ROW_BLOCK)]
    return np.concatenate(map_ordered(_wigner_block, tasks, workers), axis=0)


def wigner_point(state: FockSuperposition, x: float, p_prime: float) -> float:
    """Closed-form Wigner function at one phase-space point"""
    return float(wigner_values(state.coefficients, x, p_prime))


def series_cutoff(state: FockSuperposition, x: float, p_prime: float) -> int:
    """k_max = N + ceil(10 (x^2 + p'^2)) + 30"""
    return state.cutoff + int(math.ceil(10.0 * (x * x + p_prime * p_prime))) + 30


def _displacement_column(n: int, beta: complex, k: np.ndarray) -> np.ndarray:
    """<k|D(beta)|n> for an array of k"""
    magnitude_sq = abs(beta) ** 2
    if magnitude_sq == 0.0:
        return (k == n).astype(complex)

    log_beta = math.log(abs(beta))
    column = np.zeros(k.shape, dtype=complex)

    upper = k >= n
    ku = k[upper]
    column[upper] = (
        np.exp(0.5 * (gammaln(n + 1.0) - gammaln(ku + 1.0)) + (ku - n) * log_beta - 0.5 * magnitude_sq)
        * np.exp(1j * (ku - n) * np.angle(beta))
        * eval_genlaguerre(n, ku - n, magnitude_sq)
    )

    lower = ~upper
    kl = k[lower]
    column[lower] = (
        np.exp(0.5 * (gammaln(kl + 1.0) - gammaln(n + 1.0)) + (n - kl) * log_beta - 0.5 * magnitude_sq)
        * np.exp(1j * (n - kl) * np.angle(-np.conj(beta)))
        * eval_genlaguerre(kl, n - kl, magnitude_sq)
    )
    return column


def wigner_series(state: FockSuperposition, x: float, p_prime: float,
                  k_max: Optional[int] = None,
                  tolerance: float = DEFAULT_CONFIG.series_tolerance) -> float:
    """
    Wigner function from the displaced-number-state series

        W(alpha) = (2/pi) sum_k (-1)^k |<k| D(-alpha) |psi>|^2,  alpha = (x + ip')/sqrt(2)

    divided by 2 to convert the density from d^2 alpha to dx dp'.

    Args:
        state: Fock superposition
        x: Position
        p_prime: Momentum
        k_max: Truncation; defaults to series_cutoff()
        tolerance: Largest tail term tolerated at k_max

    Returns:
        W(x, p')
    """
    k_max = series_cutoff(state, x, p_prime) if k_max is None else int(k_max)
    beta = -(x + 1j * p_prime) / math.sqrt(2.0)
    k = np.arange(k_max + 1)

    projections = np.zeros(k_max + 1, dtype=complex)
    for n, amplitude in enumerate(state.coefficients):
        if amplitude != 0:
            projections += amplitude * _displacement_column(n, beta, k)

    terms = np.where(k % 2, -1.0, 1.0) * np.abs(projections) ** 2
    tail = float(np.max(np.abs(terms[-5:])))
    if tail > tolerance:
        raise ConvergenceError(
            f"Wigner series not converged at k_max={k_max}: tail term {tail:.3g} > {tolerance:.1g}",
            history=[{'k_max': k_max, 'partial_sum': float(np.sum(terms[:-1])) / math.pi,
                      'final_sum': float(np.sum(terms)) / math.pi}],
        )
    return float(np.sum(terms)) / math.pi


def position_wavefunction(state: FockSuperposition, u: np.ndarray) -> np.ndarray:
    """psi(u) = sum_n c_n psi_n(u)"""
    table = hermite_functions(state.cutoff, np.asarray(u, dtype=float))
    return np.tensordot(state.coefficients, table, axes=(0, 0))


def wigner_quadrature(state: FockSuperposition, x: float, p_prime: float,
                      half_width: Optional[float] = None,
                      step: Optional[float] = None) -> float:
    """
    Wigner function by trapezoidal quadrature of the defining integral

    The half-width defaults to sqrt(2N) + 8 and the step resolves the
    e^{2ip'y} oscillation with at least 20 points per period.
    """
    if half_width is None:
        half_width = phase_space_radius(state.cutoff, DEFAULT_CONFIG.line_margin)
    if step is None:
        step = DEFAULT_CONFIG.line_step
        if p_prime != 0.0:
            step = min(step, math.pi / abs(p_prime) / 20.0)

    count = int(math.ceil(2.0 * half_width / step)) + 1
    y = np.linspace(-half_width, half_width, count)
    integrand = (
        np.conj(position_wavefunction(state, x + y))
        * position_wavefunction(state, x - y)
        * np.exp(2j * p_prime * y)
    )
    return float(trapezoid(integrand, y).real) / math.pi


def wigner_grid(state: FockSuperposition,
                window: Union[None, float, Sequence[float]] = None,
                resolution: Union[int, Tuple[int, int]] = DEFAULT_CONFIG.resolution,
                workers: int = 1) -> PhaseSpaceGrid:
    """
    Closed-form W on a uniform lattice

    Args:
        state: Fock superposition
        window: None, a radius, or (x_min, x_max, p_min, p_max)
        resolution: Points per axis (one value or an (nx, np) pair), >= 2
        workers: Worker processes for the row blocks

    Returns:
        PhaseSpaceGrid with its trapezoidal normalization
    """
    x_min, x_max, p_min, p_max = as_window(window, state)
    nx, np_ = (resolution, resolution) if np.isscalar(resolution) else resolution
    if nx < 2 or np_ < 2:
        raise ParameterError(f"resolution must be >= 2 per axis, got {resolution}")

    x_axis = np.linspace(x_min, x_max, int(nx))
    p_axis = np.linspace(p_min, p_max, int(np_))
    values = wigner_lattice(state.coefficients, x_axis, p_axis, workers)

    dx = x_axis[1] - x_axis[0]
    dp = p_axis[1] - p_axis[0]
    normalization = float(trapezoid(trapezoid(values, p_axis, axis=1), x_axis))
    # a window reaching sqrt(2N) + 4 in every direction leaves a tail below the tolerance
    reach = min(-x_min, x_max, -p_min, p_max)
    covers_support = reach >= phase_space_radius(state.cutoff, 4.0)
    return PhaseSpaceGrid(
        x_axis=x_axis,
        p_axis=p_axis,
        values=values,
        cell_area=float(dx * dp),
        normalization=normalization,
        quadrature_tolerance=GRID_TOLERANCE,
        covers_support=covers_support,
    )
