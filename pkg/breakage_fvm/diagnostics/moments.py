from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from breakage_fvm.errors import InvalidArgumentError
from breakage_fvm.mesh import Mesh
from breakage_fvm.solver.state import SolverState


def _moment(concentrations: np.ndarray, mesh: Mesh, order: float) -> float:
    # same summation order as total_number / total_mass for orders 0 and 1
    if order == 0:
        return float(np.dot(concentrations, mesh.widths))
    if order == 1:
        return float(np.dot(mesh.midpoints * concentrations, mesh.widths))
    return float(np.dot(mesh.midpoints ** order * concentrations, mesh.widths))


def moment(state: SolverState, mesh: Mesh, order: float) -> float:
    """Midpoint-rule moment sum_a m_a^order C_a dm_a."""
    if not np.isfinite(order) or order < 0:
        raise InvalidArgumentError(f"moment order must be >= 0, got {order}")
    return _moment(state.concentrations, mesh, order)


@dataclass
class MomentSeries:
    orders: tuple[float, ...]
    times: list[float] = field(default_factory=list)
    values: list[tuple[float, ...]] = field(default_factory=list)

    def column(self, order: float) -> np.ndarray:
        try:
            k = self.orders.index(order)
        except ValueError:
            raise InvalidArgumentError(f"order {order} was not recorded") from None
        return np.array([row[k] for row in self.values])

    def __len__(self) -> int:
        return len(self.times)


class MomentRecorder:
    """Observer collecting moments of the requested orders at every tick."""

    def __init__(self, mesh: Mesh, orders: Sequence[float] = (0, 1)):
        for order in orders:
            if order < 0:
                raise InvalidArgumentError(f"moment order must be >= 0, got {order}")
        self._mesh = mesh
        self.series = MomentSeries(orders=tuple(orders))

    def record(self, state: SolverState) -> None:
        self(state.time, state.concentrations)

    def __call__(self, time: float, concentrations: np.ndarray) -> None:
        if self.series.times and time <= self.series.times[-1]:
            raise InvalidArgumentError(
                f"moment series times must increase ({time} after {self.series.times[-1]})"
            )
        self.series.times.append(float(time))
        self.series.values.append(
            tuple(_moment(concentrations, self._mesh, order) for order in self.series.orders)
        )
