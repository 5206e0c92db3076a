import numpy as np
import pytest
from numpy.testing import assert_allclose

from hittime import (
    NonConvergenceError,
    ValidationError,
    classical_monte_carlo,
    first_visit_series,
    from_stochastic,
    pure_density,
    subspace_from_indices,
    super_projectors,
    tau_series,
)
from hittime.examples import cycle_chain, symmetric_two_state_chain


def chain_setup(p_matrix, target_indices):
    channel = from_stochastic(p_matrix)
    sp = super_projectors(subspace_from_indices(p_matrix.shape[0], target_indices))
    return channel, sp


# ---------------------------------------------------------------- series terms

def test_series_sums_to_one(qubit_channel, qubit_solution, qubit_states):
    dist = first_visit_series(
        qubit_channel, qubit_solution.projectors, qubit_states["phi"], 200
    )
    assert dist.probabilities.sum() == pytest.approx(1.0, abs=1e-10)
    assert dist.r_max == 200
    partial = np.cumsum(dist.probabilities)
    assert np.all(partial <= 1.0 + 1e-12)
    assert np.all(dist.probabilities >= -1e-12)
    assert dist.probabilities.sum() + dist.tail_bound >= 1.0 - 1e-10


def test_series_tail_bound_decreases_geometrically(
    qubit_channel, qubit_solution, qubit_states
):
    sp = qubit_solution.projectors
    short = first_visit_series(qubit_channel, sp, qubit_states["phi"], 30)
    long = first_visit_series(qubit_channel, sp, qubit_states["phi"], 60)
    assert long.tail_bound < short.tail_bound
    assert long.tail_bound <= short.tail_bound * (5.0 / 6.0) ** 25


def test_series_matches_geometric_law():
    p = 0.3
    channel, sp = chain_setup(symmetric_two_state_chain(p), [1])
    dist = first_visit_series(channel, sp, pure_density([1.0, 0.0]), 40)
    expected = [(1 - p) ** (r - 1) * p for r in range(1, 41)]
    assert_allclose(dist.probabilities, expected, atol=1e-12)


def test_series_absorbed_in_one_step():
    channel, sp = chain_setup(np.array([[0.0, 1.0], [1.0, 0.0]]), [1])
    dist = first_visit_series(channel, sp, pure_density([1.0, 0.0]), 10)
    assert dist.probabilities[0] == pytest.approx(1.0, abs=1e-14)
    assert_allclose(dist.probabilities[1:], 0.0, atol=1e-14)


def test_series_rejects_bad_r_max(qubit_channel, qubit_solution, qubit_states):
    with pytest.raises(ValidationError):
        first_visit_series(
            qubit_channel, qubit_solution.projectors, qubit_states["phi"], 0
        )


def test_series_detects_non_contracting_survival():
    channel, sp = chain_setup(np.eye(2), [1])
    with pytest.raises(NonConvergenceError, match="spectral radius"):
        first_visit_series(channel, sp, pure_density([1.0, 0.0]), 10)
    with pytest.raises(NonConvergenceError):
        tau_series(channel, sp, pure_density([1.0, 0.0]))


# ----------------------------------------------------------------- mean times

def test_tau_series_demo_values(qubit_channel, qubit_solution, qubit_states):
    sp = qubit_solution.projectors
    assert tau_series(qubit_channel, sp, qubit_states["phi"]) == pytest.approx(
        6.0, abs=1e-8
    )
    assert tau_series(qubit_channel, sp, qubit_states["chi"]) == pytest.approx(
        2.0, abs=1e-8
    )


def test_tau_series_geometric_mean():
    channel, sp = chain_setup(symmetric_two_state_chain(0.5), [1])
    assert tau_series(channel, sp, pure_density([1.0, 0.0])) == pytest.approx(
        2.0, abs=1e-8
    )


# ---------------------------------------------------------------- monte carlo

def test_monte_carlo_two_state_chain():
    estimate = classical_monte_carlo(
        symmetric_two_state_chain(0.5), 0, [1], trials=100_000, seed=123
    )
    assert estimate.trials == 100_000
    assert estimate.seed == 123
    assert abs(estimate.mean - 2.0) <= 3.0 * estimate.std_error


def test_monte_carlo_return_time_counts_first_step():
    estimate = classical_monte_carlo(
        symmetric_two_state_chain(0.5), 0, [0], trials=100_000, seed=7
    )
    assert abs(estimate.mean - 2.0) <= 3.0 * estimate.std_error


def test_monte_carlo_deterministic_cycle():
    estimate = classical_monte_carlo(cycle_chain(4), 0, [2], trials=500, seed=11)
    assert estimate.mean == 2.0
    assert estimate.std_error == 0.0


def test_monte_carlo_is_reproducible():
    first = classical_monte_carlo(
        symmetric_two_state_chain(0.3), 0, [1], trials=5_000, seed=99
    )
    second = classical_monte_carlo(
        symmetric_two_state_chain(0.3), 0, [1], trials=5_000, seed=99
    )
    assert first.mean == second.mean
    assert first.std_error == second.std_error


def test_monte_carlo_distribution_start():
    estimate = classical_monte_carlo(
        symmetric_two_state_chain(0.5), [0.5, 0.5], [1], trials=50_000, seed=21
    )
    # every step is uniform, so the first visit is Geometric(1/2) with mean 2
    assert abs(estimate.mean - 2.0) <= 4.0 * estimate.std_error


def test_monte_carlo_step_cap():
    with pytest.raises(NonConvergenceError, match="step cap"):
        classical_monte_carlo(np.eye(2), 0, [1], trials=10, seed=0, step_cap=100)


def test_monte_carlo_validations():
    chain = symmetric_two_state_chain(0.5)
    with pytest.raises(ValidationError):
        classical_monte_carlo(chain, 0, [], trials=10, seed=0)
    with pytest.raises(ValidationError):
        classical_monte_carlo(chain, 0, [5], trials=10, seed=0)
    with pytest.raises(ValidationError):
        classical_monte_carlo(chain, 9, [1], trials=10, seed=0)
    with pytest.raises(ValidationError):
        classical_monte_carlo(chain, 0, [1], trials=0, seed=0)
    with pytest.raises(ValidationError):
        classical_monte_carlo(chain, [0.7, 0.7], [1], trials=10, seed=0)
