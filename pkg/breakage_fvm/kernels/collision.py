"""
Collision kernels K(m, n).

All kernels evaluate vectorized over numpy arrays and produce the matrix of
cell averages used by the finite-volume scheme. Product and Sum kernels are
averaged analytically (the average of m over a cell is its midpoint); the
other variants use tensor Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from breakage_fvm.errors import InvalidArgumentError
from breakage_fvm.mesh import Mesh


def gauss_legendre_nodes(mesh: Mesh, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell quadrature nodes and weights, each shaped (cells, order).

    Weights are normalized so that they sum to one inside every cell, i.e.
    ``(f(nodes) * weights).sum(axis=1)`` is the cell average of ``f``.
    """
    if int(order) != order or order < 1:
        raise InvalidArgumentError(f"quadrature order must be >= 1, got {order}")
    x, w = special.roots_legendre(int(order))
    half = 0.5 * mesh.widths[:, None]
    nodes = mesh.midpoints[:, None] + half * x[None, :]
    weights = np.broadcast_to(0.5 * w[None, :], nodes.shape)
    return nodes, weights


class CollisionKernel(ABC):
    """Symmetric, nonnegative collision rate between volumes m and n."""

    #: rate coefficient entering the stability constant S(T, R)
    lam: float = 1.0

    @abstractmethod
    def __call__(self, m, n):
        ...

    def cell_average(self, mesh: Mesh, order: int = 4) -> np.ndarray:
        """K_{a,j} = (1 / (dm_a dm_j)) * integral of K over cell a x cell j."""
        nodes, weights = gauss_legendre_nodes(mesh, order)
        u = nodes.reshape(-1)
        values = np.asarray(self(u[:, None], u[None, :]), dtype=float)
        values = values.reshape(mesh.cells, order, mesh.cells, order)
        return np.einsum("aq,aqjr,jr->aj", weights, values, weights)


@dataclass(frozen=True)
class Product(CollisionKernel):
    lam: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam <= 0:
            raise InvalidArgumentError(f"lam must be positive, got {self.lam}")

    def __call__(self, m, n):
        return self.lam * np.multiply(m, n)

    def cell_average(self, mesh: Mesh, order: int = 4) -> np.ndarray:
        centroid = mesh.midpoints
        return self.lam * np.outer(centroid, centroid)


@dataclass(frozen=True)
class Sum(CollisionKernel):
    lam: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam <= 0:
            raise InvalidArgumentError(f"lam must be positive, got {self.lam}")

    def __call__(self, m, n):
        return self.lam * np.add(m, n)

    def cell_average(self, mesh: Mesh, order: int = 4) -> np.ndarray:
        centroid = mesh.midpoints
        return self.lam * (centroid[:, None] + centroid[None, :])


@dataclass(frozen=True)
class PiecewiseH2(CollisionKernel):
    """Four-branch kernel: lam*m*n below one in both arguments, mixed power
    laws across the unit volume, lam*(m^zeta n^eta + m^eta n^zeta) above.

    Volumes equal to exactly 1 take the large-volume branch.
    """

    lam: float = 1.0
    alpha: float = 0.0
    zeta: float = 0.5
    eta: float = 0.5

    def __post_init__(self):
        for name in ("lam", "alpha", "zeta", "eta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"{name} must be finite")
        if self.lam <= 0:
            raise InvalidArgumentError(f"lam must be positive, got {self.lam}")
        if self.alpha < 0:
            raise InvalidArgumentError(f"alpha must be >= 0, got {self.alpha}")
        if not (0 < self.zeta <= self.eta <= 1) or self.zeta + self.eta > 1:
            raise InvalidArgumentError(
                f"need 0 < zeta <= eta <= 1 and zeta + eta <= 1, got zeta={self.zeta}, eta={self.eta}"
            )

    def __call__(self, m, n):
        m, n = np.broadcast_arrays(np.asarray(m, dtype=float), np.asarray(n, dtype=float))
        small_m = m < 1.0
        small_n = n < 1.0
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            both_small = m * n
            m_small_only = m * n ** (-self.alpha)
            n_small_only = m ** (-self.alpha) * n
            both_large = m ** self.zeta * n ** self.eta + m ** self.eta * n ** self.zeta
        value = np.select(
            [small_m & small_n, small_m & ~small_n, ~small_m & small_n],
            [both_small, m_small_only, n_small_only],
            default=both_large,
        )
        return self.lam * value


class CustomKernel(CollisionKernel):
    """User-supplied pointwise kernel; must accept broadcastable arrays."""

    def __init__(self, func: Callable, lam: float = 1.0, name: str = "custom"):
        if not math.isfinite(lam) or lam <= 0:
            raise InvalidArgumentError(f"lam must be positive, got {lam}")
        self._func = func
        self.lam = lam
        self.name = name

    def __call__(self, m, n):
        return self._func(m, n)

    def __repr__(self) -> str:
        return f"CustomKernel(name={self.name!r}, lam={self.lam})"


def eval_collision(kernel: CollisionKernel, m: float, n: float) -> float:
    if not (math.isfinite(m) and math.isfinite(n)) or m <= 0 or n <= 0:
        raise InvalidArgumentError(f"collision volumes must be positive, got m={m}, n={n}")
    return float(kernel(m, n))
