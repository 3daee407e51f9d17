"""
Run and study configuration.

Documents are TOML; see README.md for the schema. Parsing is strict: unknown
keys, non-finite numbers and out-of-range values are rejected with the dotted
path of every offending field.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

import tomlkit
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from tomlkit.exceptions import TOMLKitError

from breakage_fvm.errors import ConfigError, InvalidArgumentError
from breakage_fvm.functions import get_initial_condition
from breakage_fvm.kernels import (
    BreakageDistribution,
    CollisionKernel,
    ConditionalUniform,
    DiracComb,
    PiecewiseH2,
    Product,
    Sum,
)
from breakage_fvm.mesh import Mesh, make_geometric, make_uniform


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class DomainConfig(_Section):
    min: float = Field(ge=0)
    max: float

    @model_validator(mode="after")
    def _ordered(self):
        if self.max <= self.min:
            raise ValueError(f"max ({self.max}) must exceed min ({self.min})")
        return self


class MeshConfig(_Section):
    kind: Literal["uniform", "geometric"] = "uniform"
    cells: int = Field(gt=0)
    ratio: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def _ratio_only_for_geometric(self):
        if self.kind == "uniform" and self.ratio != 1.0:
            raise ValueError("ratio applies to geometric meshes only")
        return self


class ProductKernelConfig(_Section):
    kind: Literal["product"] = "product"
    lam: float = Field(1.0, gt=0)


class SumKernelConfig(_Section):
    kind: Literal["sum"] = "sum"
    lam: float = Field(1.0, gt=0)


class PiecewiseH2KernelConfig(_Section):
    kind: Literal["piecewise_h2"] = "piecewise_h2"
    lam: float = Field(1.0, gt=0)
    alpha: float = Field(0.0, ge=0)
    zeta: float = Field(0.5, gt=0, le=1)
    eta: float = Field(0.5, gt=0, le=1)


KernelConfig = Annotated[
    Union[ProductKernelConfig, SumKernelConfig, PiecewiseH2KernelConfig],
    Field(discriminator="kind"),
]


class DiracCombConfig(_Section):
    kind: Literal["dirac_comb"] = "dirac_comb"
    fractions: list[float] = Field(min_length=1)
    weights: Optional[list[float]] = None


class ConditionalUniformConfig(_Section):
    kind: Literal["conditional_uniform"] = "conditional_uniform"


BreakageConfig = Annotated[
    Union[DiracCombConfig, ConditionalUniformConfig],
    Field(discriminator="kind"),
]


class ExpDecayConfig(_Section):
    kind: Literal["exp_decay"] = "exp_decay"


class ZeroInitialConfig(_Section):
    kind: Literal["zero"] = "zero"


class TabulatedInitialConfig(_Section):
    kind: Literal["tabulated"] = "tabulated"
    volumes: list[float] = Field(min_length=2)
    values: list[float] = Field(min_length=2)


InitialConfig = Annotated[
    Union[ExpDecayConfig, ZeroInitialConfig, TabulatedInitialConfig],
    Field(discriminator="kind"),
]


class TimeConfig(_Section):
    t_final: float = Field(ge=0)
    policy: Literal["auto", "fixed"] = "auto"
    theta: float = Field(0.5, gt=0, lt=1)
    c: Optional[float] = Field(None, gt=0)
    dt: Optional[float] = Field(None, gt=0)
    max_steps: int = Field(1_000_000, gt=0)

    @model_validator(mode="after")
    def _fixed_needs_dt(self):
        if self.policy == "fixed" and self.dt is None:
            raise ValueError("policy 'fixed' requires dt")
        return self


class StabilityConfig(_Section):
    b_sup: Optional[float] = Field(None, gt=0)


class QuadratureConfig(_Section):
    order: int = Field(4, ge=1, le=32)


class OutputConfig(_Section):
    path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    cadence: int = Field(1, ge=1)


class StudySection(_Section):
    levels: list[int]

    @field_validator("levels")
    @classmethod
    def _doubling(cls, levels: list[int]) -> list[int]:
        if len(levels) < 3:
            raise ValueError("at least three levels are needed for an EOC")
        if levels[0] <= 0:
            raise ValueError("cell counts must be positive")
        for coarse, fine in zip(levels, levels[1:]):
            if fine != 2 * coarse:
                raise ValueError(f"levels must double: {coarse} -> {fine}")
        return levels


class RunConfig(_Section):
    domain: DomainConfig
    mesh: MeshConfig
    kernel: KernelConfig
    breakage: BreakageConfig
    initial: InitialConfig
    time: TimeConfig
    stability: StabilityConfig = StabilityConfig()
    quadrature: QuadratureConfig = QuadratureConfig()
    output: OutputConfig = OutputConfig()

    def build_mesh(self, cells: Optional[int] = None) -> Mesh:
        cells = self.mesh.cells if cells is None else cells
        if self.mesh.kind == "geometric":
            return make_geometric(self.domain.min, self.domain.max, cells, self.mesh.ratio)
        return make_uniform(self.domain.min, self.domain.max, cells)

    def build_kernel(self) -> CollisionKernel:
        spec = self.kernel
        if isinstance(spec, ProductKernelConfig):
            return Product(lam=spec.lam)
        if isinstance(spec, SumKernelConfig):
            return Sum(lam=spec.lam)
        return PiecewiseH2(lam=spec.lam, alpha=spec.alpha, zeta=spec.zeta, eta=spec.eta)

    def build_breakage(self) -> BreakageDistribution:
        spec = self.breakage
        if isinstance(spec, DiracCombConfig):
            return DiracComb(spec.fractions, spec.weights)
        return ConditionalUniform()

    def build_initial(self):
        spec = self.initial
        if isinstance(spec, TabulatedInitialConfig):
            return get_initial_condition(spec.kind, volumes=spec.volumes, values=spec.values)
        return get_initial_condition(spec.kind)


class StudyConfig(RunConfig):
    """A run repeated on nested meshes; ``study.levels`` overrides ``mesh.cells``."""

    study: StudySection


_UNION_SECTIONS = {"kernel", "breakage", "initial"}


def _field_path(loc: tuple) -> str:
    parts = [str(p) for p in loc]
    # drop the discriminator tag pydantic inserts after a tagged union
    if len(parts) > 2 and parts[0] in _UNION_SECTIONS:
        del parts[1]
    return ".".join(parts)


def _check_buildable(cfg: RunConfig) -> None:
    for section, build in (
        ("kernel", cfg.build_kernel),
        ("breakage", cfg.build_breakage),
        ("initial", cfg.build_initial),
        ("mesh", cfg.build_mesh),
    ):
        try:
            build()
        except InvalidArgumentError as exc:
            raise ConfigError(f"{section}: {exc}", fields=[section]) from exc


def config_from_dict(data: dict) -> Union[RunConfig, StudyConfig]:
    model = StudyConfig if "study" in data else RunConfig
    try:
        cfg = model.model_validate(data)
    except ValidationError as exc:
        fields = [_field_path(err["loc"]) for err in exc.errors()]
        details = "; ".join(
            f"{_field_path(err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"invalid configuration: {details}", fields=fields) from exc
    _check_buildable(cfg)
    return cfg


def parse_config(text: str) -> Union[RunConfig, StudyConfig]:
    try:
        data = tomlkit.parse(text).unwrap()
    except TOMLKitError as exc:
        raise ConfigError(f"malformed TOML: {exc}") from exc
    return config_from_dict(data)


def load_config(path) -> Union[RunConfig, StudyConfig]:
    with open(path, encoding="utf-8") as f:
        return parse_config(f.read())


def serialize_config(cfg: RunConfig) -> str:
    return tomlkit.dumps(cfg.model_dump(mode="json", exclude_none=True))
