from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from breakage_fvm.errors import InvalidArgumentError
from breakage_fvm.kernels.collision import gauss_legendre_nodes
from breakage_fvm.mesh import Mesh


@dataclass(frozen=True, eq=False)
class SolverState:
    """Cell-mean concentrations C_a^n at time t^n.

    ``clamped_cells`` and ``mass_increase_steps`` accumulate the number of
    round-off clamps and of steps whose mass rose above tolerance;
    ``reference_mass`` is the initial first moment that scales the tolerance.
    """

    concentrations: np.ndarray
    time: float = 0.0
    step_index: int = 0
    clamped_cells: int = 0
    mass_increase_steps: int = 0
    reference_mass: float = 0.0

    def __post_init__(self):
        conc = np.array(self.concentrations, dtype=float)
        conc.setflags(write=False)
        object.__setattr__(self, "concentrations", conc)

    @property
    def cells(self) -> int:
        return int(self.concentrations.size)

    def advance(self, concentrations: np.ndarray, dt: float, **counters) -> "SolverState":
        return replace(
            self,
            concentrations=concentrations,
            time=self.time + dt,
            step_index=self.step_index + 1,
            **counters,
        )


def total_number(state: SolverState, mesh: Mesh) -> float:
    return float(np.dot(state.concentrations, mesh.widths))


def total_mass(state: SolverState, mesh: Mesh) -> float:
    return float(np.dot(mesh.midpoints * state.concentrations, mesh.widths))


def initial_state(mesh: Mesh, init: Callable, quadrature_order: int = 6) -> SolverState:
    """Cell averages of ``init`` by Gauss-Legendre quadrature."""
    nodes, weights = gauss_legendre_nodes(mesh, quadrature_order)
    values = np.broadcast_to(np.asarray(init(nodes), dtype=float), nodes.shape)
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError("initial data is not finite at the quadrature nodes")
    if np.any(values < 0):
        bad = int(np.argwhere(values < 0)[0, 0])
        raise InvalidArgumentError(f"initial data is negative inside cell {bad}")

    concentrations = (values * weights).sum(axis=1)
    state = SolverState(concentrations=concentrations)
    mass = total_mass(state, mesh)
    return replace(state, reference_mass=mass)
