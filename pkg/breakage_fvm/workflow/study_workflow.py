"""
Orchestration of single runs and nested-mesh convergence studies.

Study levels are independent: :class:`StudyWorkflow` schedules each one on a
worker thread and streams results back as they finish, reporting progress
through optional coroutine callbacks. The final report is ordered by level.
"""

from __future__ import annotations

import asyncio
import logging
import math
from collections.abc import AsyncIterator
from dataclasses import dataclass
from pathlib import Path
from typing import Awaitable, Callable, Optional, Union

import numpy as np
import pandas as pd

from breakage_fvm.diagnostics import ConvergenceReport
from breakage_fvm.errors import InvalidArgumentError, OracleMismatchError, StudyError
from breakage_fvm.kernels import DiscreteKernels, discretize
from breakage_fvm.mesh import Mesh
from breakage_fvm.oracle import brute_force_rhs
from breakage_fvm.solver import (
    SolverState,
    StabilityBudget,
    initial_state,
    rhs,
    run,
    stability_budget,
    total_mass,
    total_number,
)
from breakage_fvm.workflow.config import RunConfig, StudyConfig
from breakage_fvm.workflow.output import SERIES_COLUMNS, write_report, write_series

logger = logging.getLogger(__name__)

SEED_CHECK_CELLS = 8
SEED_CHECK_RTOL = 1e-12


@dataclass
class LevelPlan:
    index: int
    mesh: Mesh
    state: SolverState
    budget: StabilityBudget
    dt: float = math.nan


@dataclass
class LevelResult:
    index: int
    cells: int
    total_number: float
    dt: float
    steps: int
    clamped_cells: int
    mass_increase_steps: int
    mesh: Mesh
    state: SolverState


def _budget(cfg: RunConfig, mesh: Mesh, state: SolverState) -> StabilityBudget:
    return stability_budget(
        state,
        mesh,
        cfg.build_kernel(),
        cfg.build_breakage(),
        cfg.time.t_final,
        theta=cfg.time.theta,
        b_sup=cfg.stability.b_sup,
    )


def auto_step_factor(plans: list[LevelPlan]) -> float:
    """Largest c <= 1 with c * h <= dt_max on every level."""
    return min(min(1.0, plan.budget.dt_max / plan.mesh.h_max) for plan in plans)


def plan_time_step(cfg: RunConfig, mesh: Mesh, budget: StabilityBudget, c: Optional[float] = None) -> float:
    if cfg.time.policy == "fixed":
        return float(cfg.time.dt)
    if c is None:
        c = cfg.time.c if cfg.time.c is not None else min(1.0, budget.dt_max / mesh.h_max)
    return min(c * mesh.h_max, budget.dt_max)


def _solve(cfg: RunConfig, plan: LevelPlan) -> LevelResult:
    disc = discretize(cfg.build_kernel(), cfg.build_breakage(), plan.mesh, cfg.quadrature.order)
    if cfg.time.t_final == 0:
        final = plan.state
    else:
        final = run(
            plan.state,
            disc,
            plan.mesh,
            cfg.time.t_final,
            plan.dt,
            budget=plan.budget,
            record=False,
            max_steps=cfg.time.max_steps,
        ).state
    return LevelResult(
        index=plan.index,
        cells=plan.mesh.cells,
        total_number=total_number(final, plan.mesh),
        dt=plan.dt,
        steps=final.step_index,
        clamped_cells=final.clamped_cells,
        mass_increase_steps=final.mass_increase_steps,
        mesh=plan.mesh,
        state=final,
    )


class StudyWorkflow:
    def __init__(
        self,
        cfg: StudyConfig,
        threads: int = 1,
        on_level_start: Optional[Callable[[LevelPlan], Awaitable[None]]] = None,
        on_level_complete: Optional[Callable[[LevelResult], Awaitable[None]]] = None,
    ):
        """
        Args:
            cfg: The validated study configuration.
            threads: Maximum number of levels solved at the same time.
            on_level_start: A coroutine called before a level starts stepping.
            on_level_complete: A coroutine called with each finished level.
        """
        if threads < 1:
            raise InvalidArgumentError(f"threads must be >= 1, got {threads}")
        self._cfg = cfg
        self._threads = threads
        self._on_level_start = on_level_start
        self._on_level_complete = on_level_complete
        self.plans = self.prepare()

    def prepare(self) -> list[LevelPlan]:
        """Nested meshes, initial states, budgets and per-level time steps."""
        cfg = self._cfg
        init = cfg.build_initial()
        mesh = cfg.build_mesh(cfg.study.levels[0])
        plans = []
        for index, _ in enumerate(cfg.study.levels):
            if index:
                mesh = mesh.refine()
            state = initial_state(mesh, init)
            plans.append(LevelPlan(index=index, mesh=mesh, state=state, budget=_budget(cfg, mesh, state)))

        c = cfg.time.c if cfg.time.c is not None else auto_step_factor(plans)
        for plan in plans:
            plan.dt = plan_time_step(cfg, plan.mesh, plan.budget, c)
        return plans

    async def _run_level(self, plan: LevelPlan, slots: asyncio.Semaphore) -> LevelResult:
        async with slots:
            logger.info("level %d: %d cells, dt=%.4g", plan.index, plan.mesh.cells, plan.dt)
            if self._on_level_start:
                await self._on_level_start(plan)
            try:
                result = await asyncio.to_thread(_solve, self._cfg, plan)
            except Exception as exc:
                raise StudyError(plan.mesh.cells, exc) from exc
            logger.info(
                "level %d finished: N=%.10e after %d steps", plan.index, result.total_number, result.steps
            )
            if self._on_level_complete:
                await self._on_level_complete(result)
            return result

    async def run(self) -> AsyncIterator[LevelResult]:
        """Yield level results in completion order."""
        slots = asyncio.Semaphore(self._threads)
        tasks = [asyncio.create_task(self._run_level(plan, slots)) for plan in self.plans]
        try:
            for next_done in asyncio.as_completed(tasks):
                yield await next_done
        finally:
            for task in tasks:
                task.cancel()
            await asyncio.gather(*tasks, return_exceptions=True)

    async def collect(self) -> ConvergenceReport:
        results = [result async for result in self.run()]
        results.sort(key=lambda r: r.index)
        self.results = results
        return ConvergenceReport.from_totals(
            [r.cells for r in results], [r.total_number for r in results]
        )


def run_study(
    cfg: StudyConfig,
    threads: int = 1,
    output: Union[str, Path, None] = None,
    fmt: Optional[str] = None,
) -> ConvergenceReport:
    workflow = StudyWorkflow(cfg, threads=threads)
    report = asyncio.run(workflow.collect())
    path = output if output is not None else cfg.output.path
    if path is not None:
        write_report(report, path, fmt or cfg.output.format)
    return report


def run_single(
    cfg: RunConfig,
    output: Union[str, Path, None] = None,
    fmt: Optional[str] = None,
) -> pd.DataFrame:
    """One run; returns the moment series sampled every ``output.cadence`` steps."""
    mesh = cfg.build_mesh()
    disc = discretize(cfg.build_kernel(), cfg.build_breakage(), mesh, cfg.quadrature.order)
    state = initial_state(mesh, cfg.build_initial())
    budget = _budget(cfg, mesh, state)
    dt = plan_time_step(cfg, mesh, budget)

    rows = []

    def sample(time: float, conc: np.ndarray, step: float) -> None:
        snapshot = SolverState(concentrations=conc, time=time)
        rows.append(
            (time, total_number(snapshot, mesh), total_mass(snapshot, mesh), float(conc.min()), budget.usage(step))
        )

    sample(state.time, state.concentrations, 0.0)
    if cfg.time.t_final > 0:
        ticks = {"count": 0, "time": state.time}

        def observer(time: float, conc: np.ndarray) -> None:
            ticks["count"] += 1
            step = time - ticks["time"]
            ticks["time"] = time
            if ticks["count"] % cfg.output.cadence == 0 or time == cfg.time.t_final:
                sample(time, conc, step)

        run(
            state,
            disc,
            mesh,
            cfg.time.t_final,
            dt,
            observers=[observer],
            budget=budget,
            record=False,
            max_steps=cfg.time.max_steps,
        )

    frame = pd.DataFrame(rows, columns=SERIES_COLUMNS)
    path = output if output is not None else cfg.output.path
    if path is not None:
        write_series(frame, path, fmt or cfg.output.format)
    return frame


def seed_check(cfg: RunConfig, seed: int = 0) -> float:
    """Compare ``rhs`` with the brute-force oracle on a small random instance.

    Returns the relative discrepancy; raises when it exceeds 1e-12.
    """
    mesh = cfg.build_mesh(SEED_CHECK_CELLS)
    kernel, dist = cfg.build_kernel(), cfg.build_breakage()
    rng = np.random.default_rng(seed)
    state = SolverState(concentrations=rng.random(mesh.cells))

    disc: DiscreteKernels = discretize(kernel, dist, mesh, cfg.quadrature.order)
    fast = rhs(state, disc, mesh)
    slow = brute_force_rhs(state, kernel, dist, mesh, cfg.quadrature.order)
    scale = max(float(np.abs(slow).max()), np.finfo(float).tiny)
    discrepancy = float(np.abs(fast - slow).max()) / scale
    if discrepancy > SEED_CHECK_RTOL:
        raise OracleMismatchError(
            f"rhs differs from the brute-force oracle by {discrepancy:.3e} (relative) on {mesh.cells} cells"
        )
    logger.info("seed check passed on %d cells (relative discrepancy %.2e)", mesh.cells, discrepancy)
    return discrepancy
