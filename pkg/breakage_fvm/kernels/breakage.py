"""
Breakage distribution functions B(m, n, z).

B(m, n, z) is the number density of fragments of volume m produced when a
particle of volume n breaks after colliding with a particle of volume z.
Every distribution satisfies the mass identity  int_0^n m B(m, n, z) dm = n
and vanishes for m > n.

Window integrals follow the cell convention: a delta located exactly on the
upper bound of a window is counted, one on the lower bound is not.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

from breakage_fvm.errors import InvalidArgumentError
from breakage_fvm.mesh import Mesh

MASS_IDENTITY_RTOL = 1e-12


class BreakageDistribution(ABC):
    #: True when B does not depend on the partner volume z
    partner_independent: bool = False

    @abstractmethod
    def interval_integral(self, lower, upper, n: float, z: float):
        """int_lower^upper B(m, n, z) dm, vectorized over lower/upper."""

    @abstractmethod
    def mass_integral(self, n: float, z: float) -> float:
        """int_0^n m B(m, n, z) dm."""

    @abstractmethod
    def sup_norm(self, mesh: Mesh) -> float:
        """Bound used in place of ||B||_inf by the stability constant."""


class DiracComb(BreakageDistribution):
    """B(m, n, z) = sum_i w_i delta(m - f_i n)."""

    partner_independent = True

    def __init__(self, fractions: Sequence[float], weights: Optional[Sequence[float]] = None):
        fractions = np.asarray(fractions, dtype=float)
        weights = np.ones_like(fractions) if weights is None else np.asarray(weights, dtype=float)

        if fractions.ndim != 1 or fractions.size == 0:
            raise InvalidArgumentError("a Dirac comb needs at least one fragment fraction")
        if weights.shape != fractions.shape:
            raise InvalidArgumentError(
                f"got {fractions.size} fractions but {weights.size} weights"
            )
        if not (np.all(np.isfinite(fractions)) and np.all(np.isfinite(weights))):
            raise InvalidArgumentError("fractions and weights must be finite")
        if np.any(fractions <= 0) or np.any(fractions > 1):
            raise InvalidArgumentError("fragment fractions must lie in ]0, 1]")
        if np.any(weights <= 0):
            raise InvalidArgumentError("fragment weights must be positive")

        total = float(np.dot(weights, fractions))
        if abs(total - 1.0) > MASS_IDENTITY_RTOL:
            raise InvalidArgumentError(
                f"sum of weight * fraction must be 1 to conserve mass, got {total!r}"
            )

        fractions.setflags(write=False)
        weights.setflags(write=False)
        self.fractions = fractions
        self.weights = weights

    def sites(self, n):
        """Fragment volumes produced by breaking a parent of volume n."""
        return np.multiply.outer(np.asarray(n, dtype=float), self.fractions)

    def interval_integral(self, lower, upper, n: float, z: float):
        lower = np.asarray(lower, dtype=float)[..., None]
        upper = np.asarray(upper, dtype=float)[..., None]
        sites = self.fractions * n
        inside = (lower < sites) & (sites <= upper)
        return (inside * self.weights).sum(axis=-1)

    def mass_integral(self, n: float, z: float) -> float:
        return float(np.sum(self.weights * (self.fractions * n)))

    @property
    def fragment_count(self) -> float:
        return float(self.weights.sum())

    def sup_norm(self, mesh: Mesh) -> float:
        # a cell can catch every delta at once
        return self.fragment_count / mesh.h_min

    def __repr__(self) -> str:
        return f"DiracComb(fractions={self.fractions.tolist()}, weights={self.weights.tolist()})"


class ConditionalUniform(BreakageDistribution):
    """Only the larger particle of a pair breaks, uniformly into two pieces.

    B = 2/n on ]0, n] when n > z, and delta(m - n) when n <= z.
    """

    def interval_integral(self, lower, upper, n: float, z: float):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if n > z:
            return 2.0 * (np.minimum(upper, n) - np.minimum(lower, n)) / n
        return ((lower < n) & (n <= upper)).astype(float)

    def mass_integral(self, n: float, z: float) -> float:
        window = float(self.interval_integral(0.0, n, n, z))
        if n > z:
            # flat density on ]0, n]: the midpoint rule is exact for m * B
            return 0.5 * n * window
        # delta at the parent volume
        return n * window

    def sup_norm(self, mesh: Mesh) -> float:
        return max(2.0 / float(mesh.midpoints[0]), 1.0 / mesh.h_min)

    def __repr__(self) -> str:
        return "ConditionalUniform()"


class DensityBreakage(BreakageDistribution):
    """Bounded user density with its exact window integral.

    Args:
        density: B(m, n, z), vectorized in m.
        interval_integral: (lower, upper, n, z) -> window integral, vectorized
            over lower/upper.
        mass_integral: Optional exact first moment; Gauss-Legendre otherwise.
        sup: Bound on the density used by the stability constant.
    """

    def __init__(
        self,
        density: Callable,
        interval_integral: Callable,
        mass_integral: Optional[Callable[[float, float], float]] = None,
        sup: Optional[float] = None,
        partner_independent: bool = False,
    ):
        self.density = density
        self._interval_integral = interval_integral
        self._mass_integral = mass_integral
        self.sup = sup
        self.partner_independent = partner_independent

    def interval_integral(self, lower, upper, n: float, z: float):
        return np.asarray(
            self._interval_integral(np.asarray(lower, dtype=float), np.asarray(upper, dtype=float), n, z),
            dtype=float,
        )

    def mass_integral(self, n: float, z: float) -> float:
        if self._mass_integral is not None:
            return float(self._mass_integral(n, z))
        x, w = special.roots_legendre(32)
        m = 0.5 * n * (x + 1.0)
        return float(0.5 * n * np.sum(w * m * self.density(m, n, z)))

    def sup_norm(self, mesh: Mesh) -> float:
        if self.sup is None:
            raise InvalidArgumentError("density breakage needs an explicit sup bound")
        return float(self.sup)


def _check_volumes(n: float, z: float) -> None:
    if not (math.isfinite(n) and math.isfinite(z)) or n <= 0 or z <= 0:
        raise InvalidArgumentError(f"parent and partner volumes must be positive, got n={n}, z={z}")


def breakage_interval_integral(
    dist: BreakageDistribution, lower: float, upper: float, n: float, z: float
) -> float:
    if lower > upper:
        raise InvalidArgumentError(f"lower bound {lower} exceeds upper bound {upper}")
    _check_volumes(n, z)
    return float(dist.interval_integral(lower, upper, n, z))


def breakage_mass_check(dist: BreakageDistribution, n: float, z: float) -> float:
    _check_volumes(n, z)
    return dist.mass_integral(n, z)
