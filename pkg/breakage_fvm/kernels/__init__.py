# This file makes the kernels directory a Python package
from breakage_fvm.kernels.collision import (
    CollisionKernel,
    CustomKernel,
    PiecewiseH2,
    Product,
    Sum,
    eval_collision,
)
from breakage_fvm.kernels.breakage import (
    BreakageDistribution,
    ConditionalUniform,
    DensityBreakage,
    DiracComb,
    breakage_interval_integral,
    breakage_mass_check,
)
from breakage_fvm.kernels.discrete import (
    BirthWeights,
    DiscreteKernels,
    discretize,
    triple_cell_average,
)

__all__ = [
    'CollisionKernel',
    'Product',
    'Sum',
    'PiecewiseH2',
    'CustomKernel',
    'eval_collision',
    'BreakageDistribution',
    'DiracComb',
    'ConditionalUniform',
    'DensityBreakage',
    'breakage_interval_integral',
    'breakage_mass_check',
    'BirthWeights',
    'DiscreteKernels',
    'discretize',
    'triple_cell_average',
]
