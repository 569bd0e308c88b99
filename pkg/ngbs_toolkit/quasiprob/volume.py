"""
Volume - Nonclassical volume delta = int int |W| dx dp' - 1

Since |W| = W + 2 max(-W, 0), delta is the lattice mass of W minus one plus
twice the volume of the negative part. The mass is a trapezoid sum over the
whole window. The negative part is integrated exactly for the piecewise-linear
interpolant of W on a triangulated lattice, so the W = 0 contour is located
by linear interpolation inside every cell it crosses. Cells that straddle
the contour are re-sampled on a finer sub-lattice, refinement only covers the
bounding box of the negative region found on the first lattice, and
successive resolution doublings are combined by Richardson extrapolation of
the h^2 error term.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid

from ..config import DEFAULT_CONFIG
from ..errors import ConvergenceError, ParameterError
from ..fock.state import FockSuperposition
from ..parallel import map_ordered
from .wigner import Window, as_window, wigner_lattice, wigner_values

logger = logging.getLogger(__name__)

CELL_BLOCK = 2048
BOX_MARGIN = 2
# negative lobes below this fraction of max |W| are left out of the refinement box
NEGLIGIBLE_FRACTION = 1e-12

Box = Tuple[int, int, int, int]


@dataclass
class VolumeReport:
    """Nonclassical volume with the lattice history that produced it"""

    delta: float
    window: Window
    resolution: int
    tolerance: float
    converged: bool
    normalization: float
    history: List[Dict] = field(default_factory=list)

    @property
    def negative_volume(self) -> float:
        """Volume of the negative part of W, delta / 2"""
        return 0.5 * self.delta

    def to_dict(self) -> Dict:
        return {
            'delta': self.delta,
            'negative_volume': self.negative_volume,
            'normalization': self.normalization,
            'window': list(self.window),
            'resolution': self.resolution,
            'tolerance': self.tolerance,
            'converged': self.converged,
            'history': self.history,
        }


def _triangle_positive_part(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Integral of max(g, 0) over a unit-area triangle, g linear with vertex values a, b, c"""
    low, mid, high = np.sort(np.stack([a, b, c]), axis=0)
    total = low + mid + high
    with np.errstate(divide='ignore', invalid='ignore'):
        one_vertex = high ** 3 / ((high - mid) * (high - low))
        two_vertices = total + (-low) ** 3 / ((high - low) * (mid - low))
    return np.where(low >= 0.0, total,
                    np.where(high <= 0.0, 0.0,
                             np.where(mid <= 0.0, one_vertex, two_vertices))) / 3.0


def negative_part_cells(values: np.ndarray, cell_area: float) -> np.ndarray:
    """
    Exact integral of max(-W, 0) for the linear interpolant on each cell

    Each cell is split along its (i, j) - (i+1, j+1) diagonal. Works on the
    last two axes, so a stack of sub-lattices gives a stack of cell arrays.
    """
    g = -np.asarray(values, dtype=float)
    first = _triangle_positive_part(g[..., :-1, :-1], g[..., 1:, :-1], g[..., 1:, 1:])
    second = _triangle_positive_part(g[..., :-1, :-1], g[..., :-1, 1:], g[..., 1:, 1:])
    return (first + second) * (0.5 * cell_area)


def _kink_cell_block(task: Tuple[np.ndarray, np.ndarray, np.ndarray, float, float, int]) -> np.ndarray:
    """Negative part of each listed cell on its own sub-lattice"""
    coefficients, x_lower, p_lower, dx, dp, subdivisions = task
    offsets = np.linspace(0.0, 1.0, subdivisions + 1)
    x = x_lower[:, None, None] + dx * offsets[None, :, None]
    p = p_lower[:, None, None] + dp * offsets[None, None, :]
    values = wigner_values(coefficients, x, p)
    parts = negative_part_cells(values, dx * dp / subdivisions ** 2)
    return parts.sum(axis=(1, 2))


def _negative_box(values: np.ndarray) -> Optional[Box]:
    """Point-index bounds (i_lo, i_hi, j_lo, j_hi) of the cells where W dips negative"""
    scale = float(np.max(np.abs(values)))
    corners_min = np.minimum(np.minimum(values[:-1, :-1], values[1:, :-1]),
                             np.minimum(values[:-1, 1:], values[1:, 1:]))
    rows, cols = np.nonzero(corners_min < -NEGLIGIBLE_FRACTION * scale)
    if rows.size == 0:
        return None
    last = values.shape[0] - 1
    return (max(int(rows.min()) - BOX_MARGIN, 0), min(int(rows.max()) + 1 + BOX_MARGIN, last),
            max(int(cols.min()) - BOX_MARGIN, 0), min(int(cols.max()) + 1 + BOX_MARGIN, last))


def _negative_volume(coefficients: np.ndarray, x_axis: np.ndarray, p_axis: np.ndarray,
                     values: np.ndarray, subdivisions: int, workers: int) -> Tuple[float, int]:
    dx = x_axis[1] - x_axis[0]
    dp = p_axis[1] - p_axis[0]
    parts = negative_part_cells(values, dx * dp)

    corners = np.stack([values[:-1, :-1], values[1:, :-1], values[:-1, 1:], values[1:, 1:]])
    rows, cols = np.nonzero((corners.min(axis=0) < 0.0) & (corners.max(axis=0) > 0.0))

    if rows.size and subdivisions > 1:
        tasks = [
            (coefficients, x_axis[rows[i:i + CELL_BLOCK]], p_axis[cols[i:i + CELL_BLOCK]],
             dx, dp, subdivisions)
            for i in range(0, rows.size, CELL_BLOCK)
        ]
        parts[rows, cols] = np.concatenate(map_ordered(_kink_cell_block, tasks, workers))

    return float(np.sum(parts)), int(rows.size)


def nonclassical_volume_report(state: FockSuperposition,
                               window: Union[None, float, Sequence[float]] = None,
                               resolution: int = DEFAULT_CONFIG.resolution,
                               tolerance: float = DEFAULT_CONFIG.volume_tolerance,
                               max_refinements: int = DEFAULT_CONFIG.max_refinements,
                               subdivisions: int = DEFAULT_CONFIG.kink_subdivisions,
                               workers: int = 1) -> VolumeReport:
    """
    Nonclassical volume with refinement until two extrapolated estimates agree

    Args:
        state: Fock superposition
        window: None (radius sqrt(2N) + 6), a radius, or explicit bounds
        resolution: Starting points per axis
        tolerance: Agreement required between successive extrapolations
        max_refinements: Resolution doublings allowed after the first lattice
        subdivisions: Sub-lattice factor for cells straddling W = 0
        workers: Worker processes

    Returns:
        VolumeReport; raises ConvergenceError with the history otherwise
    """
    if tolerance <= 0.0:
        raise ParameterError(f"tolerance must be positive, got {tolerance}")
    if resolution < 3:
        raise ParameterError(f"resolution must be >= 3, got {resolution}")
    if subdivisions < 1:
        raise ParameterError(f"subdivisions must be >= 1, got {subdivisions}")

    bounds = as_window(window, state)
    coefficients = state.coefficients
    base = int(resolution)

    x_full = np.linspace(bounds[0], bounds[1], base)
    p_full = np.linspace(bounds[2], bounds[3], base)
    values = wigner_lattice(coefficients, x_full, p_full, workers)
    normalization = float(trapezoid(trapezoid(values, p_full, axis=1), x_full))
    box = _negative_box(values)
    logger.debug("Volume window %s, normalization %.12f, negative box %s", bounds, normalization, box)

    history: List[Dict] = []
    current = base
    for level in range(max_refinements + 1):
        factor = 2 ** level
        if box is None:
            negative, kink_cells = 0.0, 0
        else:
            i_lo, i_hi, j_lo, j_hi = (index * factor for index in box)
            x_axis = np.linspace(bounds[0], bounds[1], current)[i_lo:i_hi + 1]
            p_axis = np.linspace(bounds[2], bounds[3], current)[j_lo:j_hi + 1]
            if level == 0:
                box_values = values[i_lo:i_hi + 1, j_lo:j_hi + 1]
            else:
                box_values = wigner_lattice(coefficients, x_axis, p_axis, workers)
            negative, kink_cells = _negative_volume(coefficients, x_axis, p_axis, box_values,
                                                    subdivisions, workers)

        entry = {
            'resolution': current,
            'negative_volume': negative,
            'estimate': normalization - 1.0 + 2.0 * negative,
            'kink_cells': kink_cells,
        }
        if history:
            entry['extrapolated'] = entry['estimate'] + (entry['estimate'] - history[-1]['estimate']) / 3.0
        else:
            entry['extrapolated'] = entry['estimate']
        history.append(entry)
        logger.debug("Volume level %d: resolution=%d estimate=%.10f extrapolated=%.10f kink_cells=%d",
                     level, current, entry['estimate'], entry['extrapolated'], kink_cells)

        if len(history) >= 2 and abs(entry['extrapolated'] - history[-2]['extrapolated']) < tolerance:
            return VolumeReport(delta=entry['extrapolated'], window=bounds, resolution=current,
                                tolerance=tolerance, converged=True, normalization=normalization,
                                history=history)
        current = 2 * (current - 1) + 1

    last = history[-1]
    raise ConvergenceError(
        f"nonclassical volume did not converge to {tolerance:.1g} after {max_refinements} "
        f"refinements (last estimates {history[-2]['extrapolated']:.10f}, {last['extrapolated']:.10f})"
        if len(history) >= 2 else
        f"nonclassical volume needs at least one refinement (estimate {last['extrapolated']:.10f})",
        history=history,
    )


def nonclassical_volume(state: FockSuperposition,
                        window: Union[None, float, Sequence[float]] = None,
                        resolution: int = DEFAULT_CONFIG.resolution,
                        tolerance: float = DEFAULT_CONFIG.volume_tolerance,
                        workers: int = 1) -> float:
    """delta(psi) = int int |W| - 1, refined to the given tolerance"""
    report = nonclassical_volume_report(state, window, resolution, tolerance, workers=workers)
    return report.delta
