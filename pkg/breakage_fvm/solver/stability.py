"""
Time-step restriction of the explicit scheme.

    S(T, R) = lam * (2 R ||C_in||_1 exp(2 lam R ||B||_inf M1_in T) + M1_in)

and a step dt is admissible when S * dt <= theta < 1. Under that restriction
the discrete solution stays nonnegative and its total number obeys the
exponential growth bound returned by :func:`l1_growth_bound`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from breakage_fvm.errors import InvalidArgumentError, StabilityUnboundedError
from breakage_fvm.kernels import BreakageDistribution, CollisionKernel
from breakage_fvm.mesh import Mesh
from breakage_fvm.solver.state import SolverState, total_mass, total_number

logger = logging.getLogger(__name__)

DEFAULT_THETA = 0.5
_MAX_EXPONENT = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class StabilityBudget:
    S: float
    theta: float
    dt_max: float

    def usage(self, dt: float) -> float:
        """Fraction of the admissible step consumed by ``dt``."""
        return dt / self.dt_max if math.isfinite(self.dt_max) else 0.0


def _positive(name: str, value: float, allow_zero: bool = False) -> None:
    if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise InvalidArgumentError(f"{name} must be {'>= 0' if allow_zero else '> 0'} and finite, got {value}")


def stability_constant(
    lam: float,
    R: float,
    l1_init: float,
    b_sup: float,
    m1_init: float,
    T: float,
    theta: float = DEFAULT_THETA,
) -> StabilityBudget:
    _positive("lam", lam)
    _positive("R", R)
    _positive("b_sup", b_sup)
    # zero initial data is a legitimate (stationary) problem
    _positive("l1_init", l1_init, allow_zero=True)
    _positive("m1_init", m1_init, allow_zero=True)
    _positive("T", T, allow_zero=True)
    if not (0 < theta < 1):
        raise InvalidArgumentError(f"theta must lie in (0, 1), got {theta}")

    exponent = 2.0 * lam * R * b_sup * m1_init * T
    if exponent > _MAX_EXPONENT:
        raise StabilityUnboundedError(
            f"stability exponent {exponent:.4g} overflows; reduce T or R"
        )
    S = lam * (2.0 * R * l1_init * math.exp(exponent) + m1_init)
    if not math.isfinite(S):
        raise StabilityUnboundedError(f"stability constant overflows (exponent {exponent:.4g})")

    dt_max = theta / S if S > 0 else math.inf
    return StabilityBudget(S=S, theta=theta, dt_max=dt_max)


def stability_budget(
    state: SolverState,
    mesh: Mesh,
    kernel: CollisionKernel,
    dist: BreakageDistribution,
    t_final: float,
    theta: float = DEFAULT_THETA,
    b_sup: Optional[float] = None,
) -> StabilityBudget:
    """S(T, R) for the initial data held by ``state``."""
    if b_sup is None:
        b_sup = dist.sup_norm(mesh)
    budget = stability_constant(
        lam=kernel.lam,
        R=mesh.domain_max,
        l1_init=total_number(state, mesh),
        b_sup=b_sup,
        m1_init=total_mass(state, mesh),
        T=t_final,
        theta=theta,
    )
    logger.info(
        "stability budget on %d cells: S=%.6g, dt_max=%.6g (||B|| surrogate %.4g)",
        mesh.cells, budget.S, budget.dt_max, b_sup,
    )
    return budget


def l1_growth_bound(
    l1_init: float, lam: float, R: float, b_sup: float, m1_init: float, t: float
) -> float:
    """Upper bound on the total number at time t."""
    return l1_init * math.exp(2.0 * lam * R * b_sup * m1_init * t)
