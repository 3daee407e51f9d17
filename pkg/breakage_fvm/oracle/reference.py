"""
Slow reference implementations for validating the solver on small instances.

``brute_force_rhs`` re-derives the semi-discrete rates with explicit loops over
(target, parent, partner) and scalar calls to the kernel and window-integral
primitives. It shares no precomputed operator with the solver.
"""

from __future__ import annotations

import logging
import math
from dataclasses import replace
from typing import Optional

import numpy as np
from scipy import special

from breakage_fvm.errors import InstanceTooLargeError, InvalidArgumentError, RejectedStepError
from breakage_fvm.kernels import (
    BreakageDistribution,
    CollisionKernel,
    breakage_interval_integral,
    discretize,
)
from breakage_fvm.mesh import Mesh
from breakage_fvm.solver.scheme import rhs
from breakage_fvm.solver.stability import StabilityBudget
from breakage_fvm.solver.state import SolverState

logger = logging.getLogger(__name__)

ORACLE_MAX_CELLS = 64


def _kernel_average(kernel: CollisionKernel, mesh: Mesh, j: int, l: int, order: int) -> float:
    x, w = special.roots_legendre(order)
    total = 0.0
    for p in range(order):
        m = mesh.midpoints[j] + 0.5 * mesh.widths[j] * x[p]
        for q in range(order):
            n = mesh.midpoints[l] + 0.5 * mesh.widths[l] * x[q]
            total += 0.25 * w[p] * w[q] * float(kernel(m, n))
    return total


def brute_force_rhs(
    state: SolverState,
    kernel: CollisionKernel,
    dist: BreakageDistribution,
    mesh: Mesh,
    quadrature_order: int = 4,
) -> np.ndarray:
    cells = mesh.cells
    if cells > ORACLE_MAX_CELLS:
        raise InstanceTooLargeError(
            f"brute-force oracle refuses {cells} cells (limit {ORACLE_MAX_CELLS})"
        )
    if state.cells != cells:
        raise InvalidArgumentError(f"state has {state.cells} cells, mesh {cells}")

    conc = state.concentrations
    edges, mid, width = mesh.edges, mesh.midpoints, mesh.widths
    k_avg = [[_kernel_average(kernel, mesh, j, l, quadrature_order) for l in range(cells)] for j in range(cells)]

    rate = np.zeros(cells)
    for a in range(cells):
        birth = 0.0
        for j in range(a, cells):
            upper = mid[a] if j == a else edges[a + 1]
            for l in range(cells):
                window = breakage_interval_integral(dist, edges[a], upper, mid[j], mid[l])
                birth += k_avg[j][l] * conc[j] * conc[l] * width[j] * width[l] * window
        death = 0.0
        for j in range(cells):
            death += k_avg[a][j] * conc[a] * conc[j] * width[j]
        rate[a] = birth / width[a] - death
    return rate


def brute_force_step(
    state: SolverState,
    kernel: CollisionKernel,
    dist: BreakageDistribution,
    mesh: Mesh,
    dt: float,
    quadrature_order: int = 4,
) -> np.ndarray:
    """Unclamped explicit Euler update computed from :func:`brute_force_rhs`."""
    return state.concentrations + dt * brute_force_rhs(state, kernel, dist, mesh, quadrature_order)


def rk4_reference_run(
    state: SolverState,
    kernel: CollisionKernel,
    dist: BreakageDistribution,
    mesh: Mesh,
    t_final: float,
    dt_small: float,
    budget: Optional[StabilityBudget] = None,
    quadrature_order: int = 4,
) -> SolverState:
    """Classical Runge-Kutta integration of the same semi-discrete system."""
    if not math.isfinite(dt_small) or dt_small <= 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt_small}")
    if not math.isfinite(t_final) or t_final < state.time:
        raise InvalidArgumentError(f"t_final={t_final} precedes the current time {state.time}")
    if budget is not None and dt_small > budget.dt_max / 10.0:
        raise RejectedStepError(
            f"reference step {dt_small:.6g} must not exceed dt_max/10 = {budget.dt_max / 10.0:.6g}"
        )

    disc = discretize(kernel, dist, mesh, quadrature_order)

    def f(conc: np.ndarray) -> np.ndarray:
        return rhs(SolverState(concentrations=conc), disc, mesh)

    conc = state.concentrations.copy()
    time = state.time
    steps = 0
    while t_final - time > dt_small * 1e-9:
        h = min(dt_small, t_final - time)
        k1 = f(conc)
        k2 = f(conc + 0.5 * h * k1)
        k3 = f(conc + 0.5 * h * k2)
        k4 = f(conc + h * k3)
        conc = conc + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        time += h
        steps += 1

    logger.debug("rk4 reference: %d steps of %.3g on %d cells", steps, dt_small, mesh.cells)
    return replace(state, concentrations=conc, time=float(t_final), step_index=state.step_index + steps)
