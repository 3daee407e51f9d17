"""
Finite-volume partition of the truncated volume domain.

Cells are left-open and right-closed: cell ``a`` covers
``]edges[a], edges[a + 1]]``, so a volume sitting exactly on an interior edge
belongs to the lower cell. Indices are 0-based.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from breakage_fvm.errors import InvalidArgumentError, OutOfDomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Mesh:
    """Cell edges, midpoints and widths of a 1-D volume grid."""

    edges: np.ndarray
    midpoints: np.ndarray
    widths: np.ndarray

    @classmethod
    def from_edges(cls, edges) -> "Mesh":
        edges = np.asarray(edges, dtype=float).copy()
        if edges.ndim != 1 or edges.size < 2:
            raise InvalidArgumentError("a mesh needs at least two edges")
        if not np.all(np.isfinite(edges)):
            raise InvalidArgumentError("mesh edges must be finite")
        if edges[0] < 0:
            raise InvalidArgumentError(f"left domain bound must be >= 0, got {edges[0]}")
        widths = np.diff(edges)
        if np.any(widths <= 0):
            raise InvalidArgumentError("mesh edges must be strictly increasing")

        midpoints = 0.5 * (edges[:-1] + edges[1:])
        for arr in (edges, midpoints, widths):
            arr.setflags(write=False)
        return cls(edges=edges, midpoints=midpoints, widths=widths)

    @property
    def cells(self) -> int:
        return int(self.widths.size)

    @property
    def h_max(self) -> float:
        return float(self.widths.max())

    @property
    def h_min(self) -> float:
        return float(self.widths.min())

    @property
    def domain_min(self) -> float:
        return float(self.edges[0])

    @property
    def domain_max(self) -> float:
        return float(self.edges[-1])

    def locate(self, volumes) -> np.ndarray:
        """Vectorized cell lookup; volumes outside the domain map to -1."""
        volumes = np.asarray(volumes, dtype=float)
        index = np.searchsorted(self.edges, volumes, side="left") - 1
        outside = (volumes <= self.edges[0]) | (volumes > self.edges[-1])
        return np.where(outside, -1, index)

    def refine(self) -> "Mesh":
        """Split every cell in two at its midpoint."""
        edges = np.empty(2 * self.cells + 1)
        edges[0::2] = self.edges
        edges[1::2] = self.midpoints
        return Mesh.from_edges(edges)

    def __repr__(self) -> str:
        return (
            f"Mesh(cells={self.cells}, domain=[{self.domain_min:g}, {self.domain_max:g}], "
            f"h_max={self.h_max:.4g})"
        )


def _check_bounds(domain_min: float, domain_max: float, cells: int) -> None:
    if not (math.isfinite(domain_min) and math.isfinite(domain_max)):
        raise InvalidArgumentError("domain bounds must be finite")
    if domain_min < 0:
        raise InvalidArgumentError(f"domain_min must be >= 0, got {domain_min}")
    if domain_min >= domain_max:
        raise InvalidArgumentError(
            f"domain_min ({domain_min}) must be smaller than domain_max ({domain_max})"
        )
    if int(cells) != cells or cells < 1:
        raise InvalidArgumentError(f"cells must be a positive integer, got {cells}")


def make_uniform(domain_min: float, domain_max: float, cells: int) -> Mesh:
    _check_bounds(domain_min, domain_max, cells)
    edges = np.linspace(domain_min, domain_max, int(cells) + 1)
    mesh = Mesh.from_edges(edges)
    logger.debug("built uniform %r", mesh)
    return mesh


def make_geometric(domain_min: float, domain_max: float, cells: int, ratio: float) -> Mesh:
    """Widths grow by ``ratio`` from cell to cell; ratio 1 is the uniform mesh."""
    _check_bounds(domain_min, domain_max, cells)
    if not math.isfinite(ratio) or ratio <= 0:
        raise InvalidArgumentError(f"ratio must be positive and finite, got {ratio}")
    if ratio == 1.0:
        return make_uniform(domain_min, domain_max, cells)

    cells = int(cells)
    log_r = math.log(ratio)
    # w0 * (r^I - 1) / (r - 1) = L, written with expm1 for ratios close to 1
    try:
        first = (domain_max - domain_min) * math.expm1(log_r) / math.expm1(cells * log_r)
    except OverflowError:
        raise InvalidArgumentError(
            f"ratio {ratio} over {cells} cells overflows the widths; use fewer cells or a ratio closer to 1"
        ) from None
    with np.errstate(under="ignore"):
        widths = first * ratio ** np.arange(cells)
    if not np.all(widths > 0):
        raise InvalidArgumentError(
            f"ratio {ratio} over {cells} cells underflows the smallest width to zero"
        )

    edges = np.empty(cells + 1)
    edges[0] = domain_min
    edges[1:] = domain_min + np.cumsum(widths)
    edges[-1] = domain_max
    mesh = Mesh.from_edges(edges)
    logger.debug("built geometric %r with ratio %g", mesh, ratio)
    return mesh


def locate_cell(mesh: Mesh, m: float) -> int:
    if not math.isfinite(m) or m <= mesh.domain_min or m > mesh.domain_max:
        raise OutOfDomainError(
            f"volume {m} outside ]{mesh.domain_min}, {mesh.domain_max}]"
        )
    return int(np.searchsorted(mesh.edges, m, side="left") - 1)
