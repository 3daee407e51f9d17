"""
Finite-volume discretization of the kernels.

The birth term of cell ``a`` gathers, for every source pair (j, l) with
j >= a, the fragments of parent m_j (colliding with m_l) that fall into the
window ]edges[a], p_j^a], where p_j^a is the midpoint m_a when j == a and the
right edge of cell a otherwise. Those window integrals are stored as a sparse
operator mapping the pair-flux matrix F[j, l] to per-cell birth counts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from breakage_fvm.errors import InvalidArgumentError
from breakage_fvm.kernels.breakage import BreakageDistribution, DensityBreakage, DiracComb
from breakage_fvm.kernels.collision import CollisionKernel, gauss_legendre_nodes
from breakage_fvm.mesh import Mesh

logger = logging.getLogger(__name__)

TRIPLE_AVERAGE_MAX_CELLS = 128


@dataclass(frozen=True, eq=False)
class BirthWeights:
    """Sparse window integrals int_{edges[a]}^{p_j^a} B(m, m_j, m_l) dm.

    Rows are target cells. Columns are parent cells j when the distribution
    ignores the partner, otherwise flattened pairs ``j * cells + l``.
    """

    matrix: sparse.csr_matrix
    cells: int
    partner_independent: bool

    def _column(self, j: int, l: int) -> int:
        return j if self.partner_independent else j * self.cells + l

    def apply(self, flux: np.ndarray) -> np.ndarray:
        """Birth count per cell for the pair flux F[j, l]."""
        if self.partner_independent:
            return self.matrix @ flux.sum(axis=1)
        return self.matrix @ flux.reshape(-1)

    def weight(self, a: int, j: int, l: int) -> float:
        return float(self.matrix[a, self._column(j, l)])

    def entries(self, j: int, l: int) -> list[tuple[int, float]]:
        """(target cell, weight) pairs fed by the source pair (j, l)."""
        column = self.matrix[:, [self._column(j, l)]].tocoo()
        order = np.argsort(column.row)
        return [(int(column.row[k]), float(column.data[k])) for k in order]

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)


@dataclass(frozen=True, eq=False)
class DiscreteKernels:
    k_cells: np.ndarray
    birth: BirthWeights

    @property
    def cells(self) -> int:
        return int(self.k_cells.shape[0])

    def birth_weight(self, a: int, j: int, l: int) -> float:
        return self.birth.weight(a, j, l)


def _dirac_birth_weights(dist: DiracComb, mesh: Mesh) -> BirthWeights:
    cells = mesh.cells
    parents = np.arange(cells)
    rows, cols, data = [], [], []
    for fraction, weight in zip(dist.fractions, dist.weights):
        sites = fraction * mesh.midpoints
        target = mesh.locate(sites)
        # sites below the left domain bound are lost; in the parent's own
        # cell only the lower half-window up to the midpoint counts
        keep = (target >= 0) & ((target < parents) | ((target == parents) & (sites <= mesh.midpoints)))
        rows.append(target[keep])
        cols.append(parents[keep])
        data.append(np.full(int(keep.sum()), weight))

    matrix = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(cells, cells),
    ).tocsr()
    return BirthWeights(matrix=matrix, cells=cells, partner_independent=True)


def _window_birth_weights(dist: BreakageDistribution, mesh: Mesh) -> BirthWeights:
    cells = mesh.cells
    partners = [0] if dist.partner_independent else range(cells)
    rows, cols, data = [], [], []

    for j in range(cells):
        lower = mesh.edges[: j + 1]
        upper = mesh.edges[1 : j + 2].copy()
        upper[j] = mesh.midpoints[j]
        for l in partners:
            values = np.asarray(
                dist.interval_integral(lower, upper, mesh.midpoints[j], mesh.midpoints[l]),
                dtype=float,
            )
            if np.any(values < 0):
                raise InvalidArgumentError(
                    f"negative window integral for parent cell {j}, partner cell {l}"
                )
            nonzero = np.flatnonzero(values)
            rows.append(nonzero)
            cols.append(np.full(nonzero.size, j if dist.partner_independent else j * cells + l))
            data.append(values[nonzero])

    width = cells if dist.partner_independent else cells * cells
    matrix = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(cells, width),
    ).tocsr()
    return BirthWeights(matrix=matrix, cells=cells, partner_independent=dist.partner_independent)


def birth_weights(dist: BreakageDistribution, mesh: Mesh) -> BirthWeights:
    if isinstance(dist, DiracComb):
        return _dirac_birth_weights(dist, mesh)
    return _window_birth_weights(dist, mesh)


def discretize(
    kernel: CollisionKernel,
    dist: BreakageDistribution,
    mesh: Mesh,
    quadrature_order: int = 4,
) -> DiscreteKernels:
    if int(quadrature_order) != quadrature_order or quadrature_order < 1:
        raise InvalidArgumentError(f"quadrature order must be >= 1, got {quadrature_order}")

    k_cells = np.asarray(kernel.cell_average(mesh, int(quadrature_order)), dtype=float)
    if k_cells.shape != (mesh.cells, mesh.cells):
        raise InvalidArgumentError(
            f"kernel cell average has shape {k_cells.shape}, expected {(mesh.cells, mesh.cells)}"
        )
    k_cells.setflags(write=False)

    birth = birth_weights(dist, mesh)
    logger.debug(
        "discretized %r / %r on %d cells: %d birth weights", kernel, dist, mesh.cells, birth.nnz
    )
    return DiscreteKernels(k_cells=k_cells, birth=birth)


def triple_cell_average(dist: DensityBreakage, mesh: Mesh, order: int = 4) -> np.ndarray:
    """Dense B_{a,j,l}: the average of a bounded density over cell a x cell j x cell l."""
    if not isinstance(dist, DensityBreakage):
        raise InvalidArgumentError(
            f"triple cell averages need a bounded density, not {type(dist).__name__}"
        )
    if mesh.cells > TRIPLE_AVERAGE_MAX_CELLS:
        raise InvalidArgumentError(
            f"triple cell average is dense; {mesh.cells} cells exceeds {TRIPLE_AVERAGE_MAX_CELLS}"
        )

    nodes, weights = gauss_legendre_nodes(mesh, order)
    cells, q = nodes.shape
    flat = nodes.reshape(-1)
    result = np.empty((cells, cells, cells))
    for a in range(cells):
        values = dist.density(nodes[a][:, None, None], flat[None, :, None], flat[None, None, :])
        values = np.broadcast_to(values, (q, cells * q, cells * q)).reshape(q, cells, q, cells, q)
        result[a] = np.einsum("p,pjqlr,jq,lr->jl", weights[a], values, weights, weights)
    return result
