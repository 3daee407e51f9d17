# This file makes the breakage_fvm directory a Python package
