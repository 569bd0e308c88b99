"""
Tests for the nonclassical volume integrator
"""

import math

import numpy as np
import pytest

from ngbs_toolkit.errors import ConvergenceError, ParameterError
from ngbs_toolkit.quasiprob.volume import (
    negative_part_cells,
    nonclassical_volume,
    nonclassical_volume_report,
)
from ngbs_toolkit.states.limits import fock_state
from ngbs_toolkit.states.ngbs import NGBSParams, ngbs_state


def test_negative_part_is_exact_for_linear_functions():
    """The W = 0 line is located inside the cells it crosses"""
    axis = np.linspace(-1.0, 1.0, 5)
    x, p = np.meshgrid(axis, axis, indexing='ij')
    cell_area = 0.25

    assert np.sum(negative_part_cells(x, cell_area)) == pytest.approx(1.0, abs=1e-14)
    assert np.sum(negative_part_cells(x - 0.3, cell_area)) == pytest.approx(1.69, abs=1e-14)
    assert np.sum(negative_part_cells(x + p, cell_area)) == pytest.approx(4.0 / 3.0, abs=1e-14)
    assert np.sum(negative_part_cells(x + 5.0, cell_area)) == 0.0
    assert np.sum(negative_part_cells(-np.ones((3, 3)), 1.0)) == pytest.approx(4.0)

    stacked = negative_part_cells(np.stack([x, x - 0.3]), cell_area)
    assert stacked.shape == (2, 4, 4)

    print("✅ Linear negative part test passed")


def test_vacuum_volume_is_zero():
    """A positive Wigner function has no nonclassical volume"""
    report = nonclassical_volume_report(fock_state(0))
    assert report.converged
    assert abs(report.delta) < 1e-6
    assert report.negative_volume == 0.5 * report.delta
    assert all(entry['kink_cells'] == 0 and entry['negative_volume'] == 0.0 for entry in report.history)
    assert len(report.history) == 2

    print("✅ Vacuum volume test passed")


def test_fock_one_volume():
    """delta(|1>) = 4 e^{-1/2} - 2, twice its negative part"""
    report = nonclassical_volume_report(fock_state(1))
    assert report.converged
    assert report.delta == pytest.approx(4.0 * math.exp(-0.5) - 2.0, abs=1e-5)
    assert report.negative_volume == pytest.approx(2.0 * math.exp(-0.5) - 1.0, abs=5e-6)
    assert report.normalization == pytest.approx(1.0, abs=1e-6)
    assert report.history[0]['kink_cells'] > 0
    assert [entry['resolution'] for entry in report.history[:3]] == [201, 401, 801][:len(report.history)]

    payload = report.to_dict()
    assert payload['delta'] == report.delta
    assert payload['negative_volume'] == report.negative_volume
    assert len(payload['window']) == 4

    print("✅ Fock volume test passed")


def test_volume_errors():
    """Refinement failures carry their history; bad knobs are rejected"""
    with pytest.raises(ConvergenceError) as excinfo:
        nonclassical_volume_report(fock_state(1), resolution=21, max_refinements=0)
    assert len(excinfo.value.history) == 1

    with pytest.raises(ConvergenceError) as excinfo:
        nonclassical_volume_report(fock_state(1), resolution=21, tolerance=1e-15, max_refinements=1)
    assert len(excinfo.value.history) == 2
    assert 'extrapolated' in excinfo.value.history[-1]

    with pytest.raises(ParameterError):
        nonclassical_volume(fock_state(1), tolerance=0.0)
    with pytest.raises(ParameterError):
        nonclassical_volume(fock_state(1), resolution=2)
    with pytest.raises(ParameterError):
        nonclassical_volume_report(fock_state(1), subdivisions=0)


@pytest.mark.slow
def test_reference_ngbs_volumes():
    """Negative-part volume for M = 25, q = 0.5 converges at 1e-5 and grows with p"""
    expected = {0.2: 0.166724, 0.4: 0.244092, 0.6: 0.324178, 0.8: 0.416412}
    values = []
    for p, negative_volume in expected.items():
        report = nonclassical_volume_report(ngbs_state(NGBSParams(25, p, 0.5)), tolerance=1e-5)
        assert report.converged, p
        assert report.negative_volume == pytest.approx(negative_volume, abs=5e-4), p
        assert report.delta == pytest.approx(2.0 * negative_volume, abs=1e-3), p
        values.append(report.negative_volume)
    assert values == sorted(values)
    assert len(set(values)) == len(values)


if __name__ == '__main__':
    test_negative_part_is_exact_for_linear_functions()
    test_vacuum_volume_is_zero()
    test_fock_one_volume()
    test_volume_errors()
    test_reference_ngbs_volumes()
    print("\n🎉 All volume tests passed!")
