# This file makes the solver directory a Python package
from breakage_fvm.solver.state import SolverState, initial_state, total_mass, total_number
from breakage_fvm.solver.stability import (
    StabilityBudget,
    l1_growth_bound,
    stability_budget,
    stability_constant,
)
from breakage_fvm.solver.scheme import RunResult, euler_step, rhs, run

__all__ = [
    'SolverState',
    'initial_state',
    'total_number',
    'total_mass',
    'StabilityBudget',
    'stability_constant',
    'stability_budget',
    'l1_growth_bound',
    'RunResult',
    'rhs',
    'euler_step',
    'run',
]
