# This file makes the cases directory a Python package
from breakage_fvm.cases.presets import PRESETS, TEST_CASE_1, TEST_CASE_2

__all__ = ['PRESETS', 'TEST_CASE_1', 'TEST_CASE_2']
