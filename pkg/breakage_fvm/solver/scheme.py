"""
Semi-discrete rates and the explicit Euler scheme.

For cell a the semi-discrete equation reads

    dC_a/dt = (1/dm_a) sum_{j>=a} sum_l K_{j,l} C_j C_l dm_j dm_l W(a, j, l)
              - sum_j K_{a,j} C_a C_j dm_j

with W the birth window integrals held by :class:`BirthWeights`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

import numpy as np

from breakage_fvm.errors import (
    InvalidArgumentError,
    RejectedStepError,
    SchemeFailureError,
    StepLimitError,
)
from breakage_fvm.kernels import DiscreteKernels
from breakage_fvm.mesh import Mesh
from breakage_fvm.solver.stability import StabilityBudget
from breakage_fvm.solver.state import SolverState, total_mass

logger = logging.getLogger(__name__)

NEGATIVITY_TOLERANCE = 1e-14
MASS_INCREASE_RTOL = 1e-12
DEFAULT_MAX_STEPS = 1_000_000

Observer = Callable[[float, np.ndarray], None]


@dataclass
class RunResult:
    """Final state plus the recorded trajectory (initial entry included)."""

    state: SolverState
    times: list[float] = field(default_factory=list)
    snapshots: list[np.ndarray] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return self.state.step_index


def _check_dimensions(state: SolverState, disc: DiscreteKernels, mesh: Mesh) -> None:
    if not (state.cells == disc.cells == mesh.cells):
        raise InvalidArgumentError(
            f"dimension mismatch: state has {state.cells} cells, kernels {disc.cells}, mesh {mesh.cells}"
        )


def rhs(state: SolverState, disc: DiscreteKernels, mesh: Mesh) -> np.ndarray:
    _check_dimensions(state, disc, mesh)
    conc = state.concentrations
    number = conc * mesh.widths

    # F[j, l] = K_{j,l} C_j C_l dm_j dm_l
    flux = disc.k_cells * np.outer(number, number)
    birth = disc.birth.apply(flux) / mesh.widths
    death = conc * (disc.k_cells @ number)
    return birth - death


def euler_step(
    state: SolverState,
    disc: DiscreteKernels,
    mesh: Mesh,
    dt: float,
    budget: Optional[StabilityBudget] = None,
) -> SolverState:
    if not math.isfinite(dt) or dt < 0:
        raise InvalidArgumentError(f"time step must be finite and >= 0, got {dt}")
    if budget is not None and dt > budget.dt_max * (1.0 + 1e-12):
        raise RejectedStepError(
            f"dt={dt:.6g} exceeds the stability limit dt_max={budget.dt_max:.6g}"
        )
    if dt == 0:
        return state

    updated = state.concentrations + dt * rhs(state, disc, mesh)

    clamped = 0
    negative = updated < 0
    if negative.any():
        worst = int(np.argmin(updated))
        if updated[worst] < -NEGATIVITY_TOLERANCE:
            raise SchemeFailureError(worst, float(updated[worst]), state.time + dt)
        clamped = int(negative.sum())
        logger.warning(
            "clamped %d round-off negative cell(s) at t=%.6g (min %.3e in cell %d)",
            clamped, state.time + dt, updated[worst], worst,
        )
        updated = np.where(negative, 0.0, updated)

    mass_before = total_mass(state, mesh)
    mass_after = float(np.dot(mesh.midpoints * updated, mesh.widths))
    scale = state.reference_mass or mass_before
    rose = mass_after - mass_before > MASS_INCREASE_RTOL * scale
    if rose:
        logger.debug(
            "mass rose by %.3e at step %d", mass_after - mass_before, state.step_index + 1
        )

    return state.advance(
        updated,
        dt,
        clamped_cells=state.clamped_cells + clamped,
        mass_increase_steps=state.mass_increase_steps + int(rose),
    )


def run(
    state: SolverState,
    disc: DiscreteKernels,
    mesh: Mesh,
    t_final: float,
    dt: float,
    observers: Iterable[Observer] = (),
    budget: Optional[StabilityBudget] = None,
    record: bool = True,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> RunResult:
    """Advance with uniform steps of ``dt`` up to the absolute time ``t_final``.

    The last step is shortened so the final state sits exactly on ``t_final``.
    Observers are called after every step with (time, concentrations).
    """
    if not math.isfinite(t_final) or t_final < state.time:
        raise InvalidArgumentError(f"t_final={t_final} precedes the current time {state.time}")
    if not math.isfinite(dt) or dt <= 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    if budget is not None and dt > budget.dt_max * (1.0 + 1e-12):
        raise RejectedStepError(
            f"dt={dt:.6g} exceeds the stability limit dt_max={budget.dt_max:.6g}"
        )

    expected_steps = math.ceil((t_final - state.time) / dt - 1e-9)
    if expected_steps > max_steps:
        raise StepLimitError(
            f"{expected_steps} steps of dt={dt:.6g} exceed the limit of {max_steps}"
        )

    observers = list(observers)
    result = RunResult(state=state)
    if record:
        result.times.append(state.time)
        result.snapshots.append(state.concentrations)

    while True:
        remaining = t_final - state.time
        if remaining <= dt * 1e-9:
            break
        last = remaining <= dt * (1.0 + 1e-9)
        state = euler_step(state, disc, mesh, remaining if last else dt, budget)
        if last:
            state = replace(state, time=t_final)

        for observer in observers:
            observer(state.time, state.concentrations)
        if record:
            result.times.append(state.time)
            result.snapshots.append(state.concentrations)

    if state.mass_increase_steps:
        logger.warning(
            "total mass rose above tolerance in %d of %d steps on %d cells",
            state.mass_increase_steps, state.step_index, mesh.cells,
        )
    result.state = state
    return result
