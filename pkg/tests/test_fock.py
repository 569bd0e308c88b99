"""
Tests for Fock superpositions, combinatorics and the moment engine
"""

import math
import pickle

import numpy as np
import pytest

from ngbs_toolkit.errors import DomainError, ParameterError
from ngbs_toolkit.fock.combinatorics import (
    double_factorial,
    factorial_ratio,
    log_binomial,
    log_factorial,
    pochhammer_half,
    stirling2,
)
from ngbs_toolkit.fock.moments import (
    antinormal_diagonal_moment,
    mean_photon_number,
    moment,
    number_moment,
)
from ngbs_toolkit.fock.state import FockSuperposition, make_state, overlap, photon_number_distribution
from ngbs_toolkit.states.limits import fock_state


def _random_state(rng, cutoff):
    return make_state(rng.normal(size=cutoff + 1) + 1j * rng.normal(size=cutoff + 1))


def _lowering_matrix(size):
    return np.diag(np.sqrt(np.arange(1, size)), 1)


def test_make_state_examples():
    """Normalizing constructor"""
    np.testing.assert_allclose(make_state([1, 0]).coefficients, [1, 0])
    np.testing.assert_allclose(make_state([1, 1]).coefficients, [1 / math.sqrt(2)] * 2)
    np.testing.assert_allclose(make_state([3, 4j]).coefficients, [0.6, 0.8j])

    with pytest.raises(ParameterError, match="zero vector"):
        make_state([0, 0, 0])
    with pytest.raises(ParameterError, match="zero vector"):
        make_state([])

    print("✅ make_state test passed")


def test_state_invariants():
    """Normalization is enforced and amplitudes are frozen"""
    with pytest.raises(ParameterError):
        FockSuperposition(np.array([1.0, 1.0]))

    state = make_state([1, 2, 3])
    assert state.cutoff == 2
    assert abs(np.sum(state.probabilities) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        state.coefficients[0] = 0.0

    np.testing.assert_allclose(photon_number_distribution(make_state([1, 1])), [0.5, 0.5])
    np.testing.assert_allclose(photon_number_distribution(fock_state(2)), [0, 0, 1])

    print("✅ State invariants test passed")


def test_combinatorics():
    """Factorials, Pochhammer symbols"""
    assert log_factorial(5) == pytest.approx(math.log(120))
    assert log_factorial(30) == pytest.approx(math.lgamma(31), rel=1e-14)
    np.testing.assert_allclose(log_factorial(np.array([0, 1, 25])), [0.0, 0.0, math.lgamma(26)])
    assert factorial_ratio(5, 3) == 20.0
    assert factorial_ratio(25, 23) == pytest.approx(600.0, rel=1e-12)
    assert log_binomial(5, 7) == -math.inf
    assert log_binomial(30, 15) == pytest.approx(math.log(math.comb(30, 15)), rel=1e-13)

    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(5) == 15
    assert pochhammer_half(2) == 0.5
    assert pochhammer_half(4) == 0.75
    assert pochhammer_half(6) == 15 / 8
    with pytest.raises(DomainError):
        pochhammer_half(3)
    with pytest.raises(ParameterError):
        log_factorial(-1)

    print("✅ Combinatorics test passed")


def test_stirling_numbers():
    """Known values and the falling-factorial identity"""
    assert stirling2(3, 2) == 3
    assert stirling2(4, 2) == 7
    assert stirling2(6, 6) == 1
    assert stirling2(2, 5) == 0

    for x in range(1, 7):
        for r in range(7):
            total = sum(stirling2(r, k) * math.perm(x, k) for k in range(r + 1))
            assert total == x ** r

    print("✅ Stirling test passed")


def test_moment_examples():
    """Small states with known moments"""
    assert moment(fock_state(1), 1, 1) == pytest.approx(1.0)
    assert moment(make_state([1, 1]), 0, 1) == pytest.approx(0.5)
    assert moment(fock_state(2), 2, 2) == pytest.approx(2.0)
    assert moment(fock_state(3), 0, 0) == 1.0
    assert moment(fock_state(2), 3, 3) == 0.0

    assert antinormal_diagonal_moment(fock_state(0), 2) == pytest.approx(2.0)
    assert antinormal_diagonal_moment(fock_state(1), 1) == pytest.approx(2.0)
    assert antinormal_diagonal_moment(make_state([1, 0, 1]), 2) == pytest.approx(7.0)

    assert number_moment(fock_state(3), 2) == pytest.approx(9.0)
    assert number_moment(fock_state(0), 3) == 0.0
    assert number_moment(make_state([1, 0, 1]), 1) == pytest.approx(1.0)

    print("✅ Moment examples test passed")


def test_moments_match_matrix_oracle():
    """Direct Fock sums against explicit ladder matrices"""
    rng = np.random.default_rng(7)
    for cutoff in range(0, 9):
        state = _random_state(rng, cutoff)
        a = _lowering_matrix(cutoff + 1)
        c = state.coefficients
        for k in range(4):
            for l in range(4):
                expected = np.vdot(np.linalg.matrix_power(a, k) @ c, np.linalg.matrix_power(a, l) @ c)
                assert abs(moment(state, k, l) - expected) <= 1e-10 * max(1.0, abs(expected))

    print("✅ Moment oracle test passed")


def test_moment_hermiticity_and_commutator():
    """<a^{+k} a^l> = conj <a^{+l} a^k>; <a a^+> - <a^+ a> = 1"""
    rng = np.random.default_rng(11)
    for cutoff in (3, 7, 12):
        first = _random_state(rng, cutoff)
        second = FockSuperposition(first.coefficients.copy())
        for k in range(7):
            for l in range(7):
                forward = moment(first, k, l)
                backward = moment(second, l, k)
                assert abs(forward - np.conj(backward)) <= 1e-12 * max(1.0, abs(forward))
        assert antinormal_diagonal_moment(first, 1) - moment(first, 1, 1).real == pytest.approx(1.0, abs=1e-12)
        assert number_moment(first, 1) == pytest.approx(mean_photon_number(first), abs=1e-12)

    print("✅ Hermiticity test passed")


def test_moment_table_cache():
    """Entries are cached and survive pickling"""
    state = make_state([0.3, 0.5j, 0.1, 0.8])
    table = state.moments.freeze(4)
    assert table.max_order == 4
    assert table.entries[(0, 0)] == 1.0
    assert (2, 2) in table.entries

    restored = pickle.loads(pickle.dumps(state))
    assert moment(restored, 1, 2) == pytest.approx(moment(state, 1, 2))

    print("✅ Moment table test passed")


def test_overlap():
    """Zero-padded overlaps"""
    assert overlap(fock_state(2), fock_state(2, cutoff=5)) == pytest.approx(1.0)
    assert overlap(fock_state(1), fock_state(2)) == 0.0
    assert overlap(make_state([1, 1]), fock_state(0)) == pytest.approx(0.5)

    print("✅ Overlap test passed")


if __name__ == '__main__':
    test_make_state_examples()
    test_state_invariants()
    test_combinatorics()
    test_stirling_numbers()
    test_moment_examples()
    test_moments_match_matrix_oracle()
    test_moment_hermiticity_and_commutator()
    test_moment_table_cache()
    test_overlap()
    print("\n🎉 All Fock tests passed!")
