import numpy as np
import pytest

from breakage_fvm.errors import InstanceTooLargeError, RejectedStepError
from breakage_fvm.functions import exp_decay
from breakage_fvm.kernels import DiracComb, Product, Sum, discretize
from breakage_fvm.mesh import make_geometric, make_uniform
from breakage_fvm.oracle import brute_force_rhs, brute_force_step, rk4_reference_run
from breakage_fvm.solver import SolverState, StabilityBudget, euler_step, initial_state, rhs, run

from tests.conftest import DISTRIBUTIONS, KERNELS

PAIRS = [(k, d) for k in sorted(KERNELS) for d in sorted(DISTRIBUTIONS)]


def _random_instance(rng):
    cells = int(rng.integers(1, 17))
    lo = float(rng.uniform(0.0, 0.2))
    hi = lo + float(rng.uniform(0.5, 4.0))
    if rng.random() < 0.5:
        mesh = make_uniform(lo, hi, cells)
    else:
        mesh = make_geometric(lo, hi, cells, float(rng.uniform(0.8, 1.4)))
    return mesh, SolverState(rng.random(cells) * rng.uniform(0.1, 10.0))


def _scale(state, disc, mesh):
    conc = state.concentrations
    rate = conc * (disc.k_cells @ (conc * mesh.widths))
    return max(float(rate.max()), np.finfo(float).tiny)


def test_oracle_of_zero_state_vanishes(unit_mesh):
    rate = brute_force_rhs(SolverState(np.zeros(4)), Sum(), DiracComb([0.4, 0.6]), unit_mesh)
    assert np.all(rate == 0.0)


def test_oracle_single_cell_by_hand():
    mesh = make_uniform(0.0, 1.0, 1)
    assert brute_force_rhs(SolverState([1.0]), Product(), DiracComb([0.4, 0.6]), mesh)[0] == pytest.approx(0.25, rel=1e-14)


def test_oracle_refuses_large_instances():
    mesh = make_uniform(0.0, 1.0, 65)
    with pytest.raises(InstanceTooLargeError):
        brute_force_rhs(SolverState(np.ones(65)), Product(), DiracComb([0.4, 0.6]), mesh)


def test_sum_kernel_eight_cells(rng):
    mesh = make_uniform(1e-3, 10.0, 8)
    state = SolverState(rng.random(8))
    disc = discretize(Sum(), DiracComb([0.4, 0.6]), mesh)
    fast, slow = rhs(state, disc, mesh), brute_force_rhs(state, Sum(), DiracComb([0.4, 0.6]), mesh)
    np.testing.assert_allclose(fast, slow, rtol=0, atol=1e-12 * _scale(state, disc, mesh))


@pytest.mark.parametrize("kernel_name, dist_name", PAIRS)
def test_rhs_matches_oracle_on_random_instances(kernel_name, dist_name):
    kernel, dist = KERNELS[kernel_name], DISTRIBUTIONS[dist_name]
    rng = np.random.default_rng(PAIRS.index((kernel_name, dist_name)))
    for _ in range(5):
        mesh, state = _random_instance(rng)
        disc = discretize(kernel, dist, mesh)
        scale = _scale(state, disc, mesh)
        np.testing.assert_allclose(
            rhs(state, disc, mesh), brute_force_rhs(state, kernel, dist, mesh), rtol=0, atol=1e-12 * scale
        )


@pytest.mark.parametrize("kernel_name, dist_name", PAIRS)
def test_euler_step_matches_oracle_step(kernel_name, dist_name):
    kernel, dist = KERNELS[kernel_name], DISTRIBUTIONS[dist_name]
    rng = np.random.default_rng(1000 + PAIRS.index((kernel_name, dist_name)))
    mesh = make_uniform(0.05, 2.5, 4)
    state = SolverState(rng.random(4))
    disc = discretize(kernel, dist, mesh)
    stepped = euler_step(state, disc, mesh, 1e-3)
    expected = brute_force_step(state, kernel, dist, mesh, 1e-3)
    np.testing.assert_allclose(stepped.concentrations, expected, rtol=1e-12)


def test_rk4_keeps_zero_state():
    mesh = make_uniform(0.0, 1.0, 6)
    final = rk4_reference_run(SolverState(np.zeros(6)), Sum(), DiracComb([0.4, 0.6]), mesh, 1.0, 0.05)
    assert np.all(final.concentrations == 0.0)
    assert final.time == 1.0


def test_rk4_single_cell_closed_form():
    # C' = C^2 / 4 with C(0) = 1, so C(t) = 1 / (1 - t / 4)
    mesh = make_uniform(0.0, 1.0, 1)
    final = rk4_reference_run(SolverState([1.0]), Product(), DiracComb([0.4, 0.6]), mesh, 1.0, 1e-3)
    assert final.concentrations[0] == pytest.approx(4.0 / 3.0, rel=1e-10)


def test_rk4_step_must_respect_tenth_of_limit():
    mesh = make_uniform(0.0, 1.0, 2)
    budget = StabilityBudget(S=5.0, theta=0.5, dt_max=0.1)
    with pytest.raises(RejectedStepError):
        rk4_reference_run(SolverState([1.0, 1.0]), Product(), DiracComb([0.4, 0.6]), mesh, 1.0, 0.02, budget=budget)
    rk4_reference_run(SolverState([1.0, 1.0]), Product(), DiracComb([0.4, 0.6]), mesh, 0.05, 0.01, budget=budget)


def test_euler_error_is_first_order_in_time():
    mesh = make_uniform(1e-3, 10.0, 120)
    kernel, dist = Product(), DiracComb([0.4, 0.6])
    state = initial_state(mesh, exp_decay)
    disc = discretize(kernel, dist, mesh)
    reference = rk4_reference_run(state, kernel, dist, mesh, 1.0, 1e-3).concentrations

    errors = []
    for dt in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
        final = run(state, disc, mesh, 1.0, dt, record=False).state.concentrations
        errors.append(float(np.dot(np.abs(final - reference), mesh.widths)))
    ratios = [a / b for a, b in zip(errors, errors[1:])]
    assert ratios == [pytest.approx(2.0, rel=0.1)] * 3
