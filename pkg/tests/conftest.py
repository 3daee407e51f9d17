import numpy as np
import pytest

from breakage_fvm.kernels import (
    ConditionalUniform,
    DensityBreakage,
    DiracComb,
    PiecewiseH2,
    Product,
    Sum,
)
from breakage_fvm.mesh import make_uniform
from breakage_fvm.workflow import config_from_dict


def uniform_binary_breakage() -> DensityBreakage:
    """B = 2/n on ]0, n], independent of the partner."""

    def density(m, n, z):
        return np.where(np.asarray(m) <= n, 2.0 / n, 0.0)

    def window(lower, upper, n, z):
        return 2.0 * (np.minimum(upper, n) - np.minimum(lower, n)) / n

    return DensityBreakage(density, window, sup=None, partner_independent=True)


KERNELS = {
    "product": Product(),
    "sum": Sum(lam=0.5),
    "h2_default": PiecewiseH2(),
    "h2_alpha": PiecewiseH2(lam=2.0, alpha=1.0, zeta=0.3, eta=0.6),
}

DISTRIBUTIONS = {
    "binary_40_60": DiracComb([0.4, 0.6]),
    "ternary": DiracComb([0.2, 0.3, 0.5]),
    "weighted": DiracComb([0.25, 0.5], weights=[2.0, 1.0]),
    "conditional_uniform": ConditionalUniform(),
    "uniform_density": uniform_binary_breakage(),
}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_mesh():
    return make_uniform(0.0, 1.0, 4)


@pytest.fixture
def small_run_dict():
    return {
        "domain": {"min": 1e-3, "max": 10.0},
        "mesh": {"kind": "uniform", "cells": 30},
        "kernel": {"kind": "product", "lam": 1.0},
        "breakage": {"kind": "dirac_comb", "fractions": [0.4, 0.6], "weights": [1.0, 1.0]},
        "initial": {"kind": "exp_decay"},
        "time": {"t_final": 0.05, "policy": "auto", "theta": 0.5},
        "stability": {"b_sup": 0.2},
    }


@pytest.fixture
def small_run_config(small_run_dict):
    return config_from_dict(small_run_dict)


@pytest.fixture
def small_study_config(small_run_dict):
    data = dict(small_run_dict)
    data["mesh"] = {"kind": "uniform", "cells": 8}
    data["study"] = {"levels": [8, 16, 32]}
    return config_from_dict(data)
