# This file makes the oracle directory a Python package
from breakage_fvm.oracle.reference import (
    ORACLE_MAX_CELLS,
    brute_force_rhs,
    brute_force_step,
    rk4_reference_run,
)

__all__ = [
    'ORACLE_MAX_CELLS',
    'brute_force_rhs',
    'brute_force_step',
    'rk4_reference_run',
]
