"""
Runner - Execute sweeps, grids, volumes and state dumps and write their files
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import DEFAULT_CONFIG, ToolkitConfig
from .errors import ConvergenceError, ParameterError
from .fock.moments import mean_photon_number
from .output import check_writable, sidecar_path, timestamp_comment, write_csv, write_json
from .parallel import map_ordered
from .parser import StateSpec, SweepSpec
from .quasiprob.tomogram import TomogramGrid, tomogram_grid
from .quasiprob.volume import VolumeReport, nonclassical_volume_report
from .quasiprob.wigner import PhaseSpaceGrid, as_window, default_window, wigner_grid
from .states.families import state_from_family
from .witnesses.catalog import WitnessCatalog
from .witnesses.result import STATUS_INVALID, WitnessResult

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ('sweep_value', 'criterion', 'order', 'value', 'nonclassical', 'status')

WindowArg = Union[None, float, Sequence[float]]


def _evaluate_sweep_point(task: Tuple[str, Dict[str, float], List[Tuple[str, int]]]) -> List[WitnessResult]:
    """Every requested witness at one sweep point; invalid parameters tag the rows"""
    family, params, witnesses = task
    catalog = WitnessCatalog()
    try:
        state = state_from_family(family, params)
    except ParameterError as e:
        logger.info("Invalid sweep point %s: %s", params, e)
        return [WitnessResult(value=None, criterion=name, order=order, nonclassical=False,
                              status=STATUS_INVALID)
                for name, order in witnesses]
    return [catalog.evaluate(state, name, order) for name, order in witnesses]


class ToolkitRunner:
    """Run toolkit computations and manage their output files"""

    def __init__(self, config: ToolkitConfig = DEFAULT_CONFIG, workers: Optional[int] = None):
        self.config = config
        self.workers = workers if workers is not None else config.workers

    def run_sweep(self, spec: SweepSpec) -> List[Dict]:
        """
        Evaluate the spec's witnesses at every sweep value

        Args:
            spec: Validated sweep specification

        Returns:
            Rows ordered by sweep value, then criterion and order
        """
        if spec.output:
            check_writable(Path(spec.output))

        witnesses = sorted(spec.witnesses)
        values = spec.values()
        tasks = []
        for value in values:
            params = dict(spec.fixed_params)
            params[spec.sweep_param] = float(value)
            tasks.append((spec.state_family, params, witnesses))

        logger.info("Sweeping %s over %d values of %s with %d witnesses",
                    spec.state_family, len(values), spec.sweep_param, len(witnesses))
        results = map_ordered(_evaluate_sweep_point, tasks, self.workers)

        rows = []
        for value, point in zip(values, results):
            for result in point:
                rows.append({
                    'sweep_value': float(value),
                    'criterion': result.criterion,
                    'order': result.order,
                    'value': result.value,
                    'nonclassical': result.nonclassical,
                    'status': result.status,
                })

        if spec.output:
            self._write_sweep(spec, rows)
        return rows

    def _write_sweep(self, spec: SweepSpec, rows: List[Dict]):
        path = Path(spec.output)
        digits = self.config.significant_digits
        if spec.format == 'csv':
            write_csv(path, SWEEP_COLUMNS, ([row[c] for c in SWEEP_COLUMNS] for row in rows), digits=digits)
        else:
            write_json(path, {'columns': list(SWEEP_COLUMNS), 'rows': rows}, digits=digits)

        write_json(sidecar_path(path), {
            'comment': timestamp_comment(),
            'spec': spec.to_config_text(),
            'rows': len(rows),
            'columns': list(SWEEP_COLUMNS),
            'config': self.config.to_dict(),
        }, digits=digits)

    def run_grid(self, kind: str, state_spec: StateSpec, window: WindowArg = None,
                 resolution: Optional[int] = None, output: Optional[Path] = None,
                 theta_count: Optional[int] = None) -> Union[PhaseSpaceGrid, TomogramGrid]:
        """
        Sample the Wigner function or the tomogram of a state on a lattice

        Args:
            kind: 'wigner' or 'tomogram'
            state_spec: State to sample
            window: Phase-space window (Wigner) or X range (tomogram)
            resolution: Points per axis
            output: Long-format CSV destination with a metadata header
            theta_count: Number of angles (tomogram only)

        Returns:
            PhaseSpaceGrid or TomogramGrid
        """
        if kind not in ('wigner', 'tomogram'):
            raise ParameterError(f"unknown grid kind '{kind}'")
        if output is not None:
            check_writable(Path(output))

        state = state_spec.build()
        resolution = resolution or self.config.resolution

        if kind == 'wigner':
            bounds = default_window(state, self.config.window_margin) if window is None else as_window(window, state)
            grid = wigner_grid(state, bounds, resolution, self.workers)
            error = abs(grid.normalization - 1.0)
            metadata = [
                "kind: wigner",
                f"state: {state_spec.label()}",
                f"window: {', '.join(self._fmt(v) for v in grid.window)}",
                f"resolution: {len(grid.x_axis)} x {len(grid.p_axis)}",
                f"normalization: {self._fmt(grid.normalization)}",
                f"normalization_check: {'pass' if error <= grid.quadrature_tolerance else 'fail'} "
                f"(tolerance {grid.quadrature_tolerance:g})"
                + ('' if grid.covers_support else ', window truncates support'),
                f"minimum: {self._fmt(float(grid.values.min()))}",
            ]
            header = ('x', 'p', 'W')
            rows = ((x, p, grid.values[i, j])
                    for i, x in enumerate(grid.x_axis) for j, p in enumerate(grid.p_axis))
        else:
            if window is not None and not np.isscalar(window) and len(window) != 2:
                raise ParameterError("a tomogram takes an X range: a radius or 'X_min,X_max'")
            if window is None:
                window = default_window(state, self.config.window_margin)[1]
            grid = tomogram_grid(state, window, resolution, theta_count or self.config.theta_count)
            metadata = [
                "kind: tomogram",
                f"state: {state_spec.label()}",
                f"x_range: {', '.join(self._fmt(v) for v in grid.x_range)}",
                f"resolution: {len(grid.x_axis)} x {len(grid.theta_axis)}",
                f"normalization_min: {self._fmt(float(grid.normalization.min()))}",
                f"normalization_max: {self._fmt(float(grid.normalization.max()))}",
            ]
            header = ('X', 'theta', 'w')
            rows = ((X, t, grid.values[i, j])
                    for i, X in enumerate(grid.x_axis) for j, t in enumerate(grid.theta_axis))

        if output is not None:
            write_csv(Path(output), header, rows, comments=metadata, digits=self.config.significant_digits)
        return grid

    def run_volume(self, state_spec: StateSpec, tolerance: Optional[float] = None,
                   output: Optional[Path] = None, window: WindowArg = None,
                   resolution: Optional[int] = None) -> VolumeReport:
        """
        Nonclassical volume with its refinement history

        A failed refinement still writes a report (converged = false) holding
        the partial history before the ConvergenceError propagates.
        """
        tolerance = self.config.volume_tolerance if tolerance is None else tolerance
        if tolerance <= 0.0:
            raise ParameterError(f"tolerance must be positive, got {tolerance}")
        if output is not None:
            check_writable(Path(output))

        state = state_spec.build()
        bounds = default_window(state, self.config.window_margin) if window is None else as_window(window, state)
        try:
            report = nonclassical_volume_report(
                state,
                window=bounds,
                resolution=resolution or self.config.resolution,
                tolerance=tolerance,
                max_refinements=self.config.max_refinements,
                subdivisions=self.config.kink_subdivisions,
                workers=self.workers,
            )
        except ConvergenceError as e:
            if output is not None:
                write_json(Path(output), {
                    'state': state_spec.label(),
                    'converged': False,
                    'error': str(e),
                    'window': list(bounds),
                    'tolerance': tolerance,
                    'history': e.history,
                }, digits=self.config.significant_digits)
            raise

        if output is not None:
            payload = report.to_dict()
            payload['state'] = state_spec.label()
            write_json(Path(output), payload, digits=self.config.significant_digits)
        return report

    def dump_state(self, state_spec: StateSpec, output: Optional[Path] = None) -> Dict:
        """Coefficients and photon-number distribution of a family member"""
        if output is not None:
            check_writable(Path(output))

        state = state_spec.build()
        summary = {
            'state': state_spec.label(),
            'cutoff': state.cutoff,
            'mean_photon_number': mean_photon_number(state),
            'rows': [(n, c.real, c.imag, prob)
                     for n, (c, prob) in enumerate(zip(state.coefficients, state.probabilities))],
        }
        if output is not None:
            write_csv(Path(output), ('n', 'amplitude_re', 'amplitude_im', 'probability'), summary['rows'],
                      comments=[f"state: {summary['state']}",
                                f"mean_photon_number: {self._fmt(summary['mean_photon_number'])}"],
                      digits=self.config.significant_digits)
        return summary

    def _fmt(self, value: float) -> str:
        return f"{value:.{self.config.significant_digits}g}"
