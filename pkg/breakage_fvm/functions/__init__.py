# This file makes the functions directory a Python package
from breakage_fvm.functions.initial_conditions import (
    INITIAL_CONDITIONS,
    exp_decay,
    get_initial_condition,
    tabulated,
    zero,
)

__all__ = [
    'INITIAL_CONDITIONS',
    'exp_decay',
    'zero',
    'tabulated',
    'get_initial_condition',
]
