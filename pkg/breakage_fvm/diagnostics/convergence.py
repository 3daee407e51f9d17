"""
Double-mesh convergence measurement.

With N_I the total particle number on I cells at the final time, the
experimental order of convergence of three nested levels is

    EOC = ln(|N_I - N_2I| / |N_2I - N_4I|) / ln 2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from breakage_fvm.errors import DegenerateConvergenceError, InvalidArgumentError
from breakage_fvm.mesh import Mesh
from breakage_fvm.solver.state import SolverState

UNDEFINED = "-"


def eoc(values: Sequence[float], from_errors: bool = False) -> list[float]:
    """EOC for each consecutive triple of totals (or pair of errors).

    Args:
        values: per-level totals N_I ordered coarse to fine, or the
            double-mesh errors themselves when ``from_errors`` is set.
        from_errors: treat ``values`` as |N_I - N_2I| already.
    """
    values = [float(v) for v in values]
    if not all(math.isfinite(v) for v in values):
        raise InvalidArgumentError("convergence values must be finite")
    if from_errors:
        if len(values) < 2:
            raise InvalidArgumentError("at least two errors are needed for an EOC")
        errors = [abs(v) for v in values]
    else:
        if len(values) < 3:
            raise InvalidArgumentError("at least three levels are needed for an EOC")
        errors = [abs(a - b) for a, b in zip(values, values[1:])]

    orders = []
    for k, (coarse, fine) in enumerate(zip(errors, errors[1:])):
        if coarse == 0 or fine == 0:
            raise DegenerateConvergenceError(
                f"double-mesh error vanishes between levels {k} and {k + 2}; EOC undefined"
            )
        orders.append(math.log(coarse / fine) / math.log(2.0))
    return orders


def _check_nested(coarse: Mesh, fine: Mesh) -> None:
    if fine.cells != 2 * coarse.cells:
        raise InvalidArgumentError(
            f"fine mesh must have twice the coarse cells ({fine.cells} vs {coarse.cells})"
        )
    scale = max(abs(coarse.domain_max), 1.0)
    if not np.allclose(fine.edges[::2], coarse.edges, rtol=0.0, atol=1e-12 * scale):
        raise InvalidArgumentError("meshes are not nested: fine edges do not refine coarse edges")


def project_to_coarse(fine_state: SolverState, fine_mesh: Mesh, coarse_mesh: Mesh) -> np.ndarray:
    """Width-weighted average of each pair of child cells."""
    _check_nested(coarse_mesh, fine_mesh)
    number = fine_state.concentrations * fine_mesh.widths
    return (number[0::2] + number[1::2]) / coarse_mesh.widths


def nested_l1_difference(
    coarse_state: SolverState,
    coarse_mesh: Mesh,
    fine_state: SolverState,
    fine_mesh: Mesh,
) -> float:
    """L1 distance between a coarse solution and the projected fine one."""
    if coarse_state.cells != coarse_mesh.cells or fine_state.cells != fine_mesh.cells:
        raise InvalidArgumentError("state and mesh sizes differ")
    projected = project_to_coarse(fine_state, fine_mesh, coarse_mesh)
    return float(np.dot(np.abs(coarse_state.concentrations - projected), coarse_mesh.widths))


@dataclass
class ConvergenceReport:
    cell_counts: list[int]
    totals: list[float]
    errors: list[float] = field(default_factory=list)
    eoc: list[float] = field(default_factory=list)

    @classmethod
    def from_totals(cls, cell_counts: Sequence[int], totals: Sequence[float]) -> "ConvergenceReport":
        cell_counts = [int(c) for c in cell_counts]
        totals = [float(t) for t in totals]
        if len(cell_counts) != len(totals):
            raise InvalidArgumentError("one total per level is required")
        for coarse, fine in zip(cell_counts, cell_counts[1:]):
            if fine != 2 * coarse:
                raise InvalidArgumentError(f"levels must double: {coarse} -> {fine}")
        errors = [abs(a - b) for a, b in zip(totals, totals[1:])]
        return cls(cell_counts=cell_counts, totals=totals, errors=errors, eoc=eoc(totals))

    def to_rows(self) -> list[dict[str, object]]:
        """Table rows, '-' where a level has no error or EOC yet."""
        rows = []
        for k, cells in enumerate(self.cell_counts):
            rows.append(
                {
                    "cells": cells,
                    "total_number": f"{self.totals[k]:.10e}",
                    "error": f"{self.errors[k - 1]:.3e}" if k >= 1 else UNDEFINED,
                    "eoc": f"{self.eoc[k - 2]:.4f}" if k >= 2 else UNDEFINED,
                }
            )
        return rows

    def to_dict(self) -> dict[str, list]:
        return {
            "cell_counts": list(self.cell_counts),
            "totals": list(self.totals),
            "errors": list(self.errors),
            "eoc": list(self.eoc),
        }
