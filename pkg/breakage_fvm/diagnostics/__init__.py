# This file makes the diagnostics directory a Python package
from breakage_fvm.diagnostics.moments import MomentRecorder, MomentSeries, moment
from breakage_fvm.diagnostics.convergence import (
    ConvergenceReport,
    eoc,
    nested_l1_difference,
    project_to_coarse,
)

__all__ = [
    'moment',
    'MomentSeries',
    'MomentRecorder',
    'eoc',
    'nested_l1_difference',
    'project_to_coarse',
    'ConvergenceReport',
]
