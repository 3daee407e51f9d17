from breakage_fvm.workflow.config import (
    DiracCombConfig,
    DomainConfig,
    ExpDecayConfig,
    MeshConfig,
    OutputConfig,
    ProductKernelConfig,
    QuadratureConfig,
    StabilityConfig,
    StudyConfig,
    StudySection,
    SumKernelConfig,
    TimeConfig,
)

# Shared setup of the reference convergence tables: exponential initial data on
# [1e-3, 10], binary 40/60 breakage, t in [0, 1], five nested uniform meshes.
_DOMAIN = DomainConfig(min=1e-3, max=10.0)
_MESH = MeshConfig(kind="uniform", cells=30)
_BREAKAGE = DiracCombConfig(fractions=[0.4, 0.6], weights=[1.0, 1.0])
_TIME = TimeConfig(t_final=1.0, policy="auto", theta=0.5)
# two fragments per event spread over R = 10
_STABILITY = StabilityConfig(b_sup=0.2)
_LEVELS = StudySection(levels=[30, 60, 120, 240, 480])

TEST_CASE_1 = StudyConfig(
    domain=_DOMAIN,
    mesh=_MESH,
    kernel=ProductKernelConfig(lam=1.0),
    breakage=_BREAKAGE,
    initial=ExpDecayConfig(),
    time=_TIME,
    stability=_STABILITY,
    quadrature=QuadratureConfig(order=4),
    output=OutputConfig(path="results/test_case_1.csv", format="csv"),
    study=_LEVELS,
)

TEST_CASE_2 = StudyConfig(
    domain=_DOMAIN,
    mesh=_MESH,
    kernel=SumKernelConfig(lam=1.0),
    breakage=_BREAKAGE,
    initial=ExpDecayConfig(),
    time=_TIME,
    stability=_STABILITY,
    quadrature=QuadratureConfig(order=4),
    output=OutputConfig(path="results/test_case_2.csv", format="csv"),
    study=_LEVELS,
)

PRESETS = {
    "test_case_1": TEST_CASE_1,
    "test_case_2": TEST_CASE_2,
}
