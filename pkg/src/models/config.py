"""Configuration models using Pydantic for validation."""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..constants import (
    DEFAULT_ADDITIVITY_TOL,
    DEFAULT_R,
    DEFAULT_TOLERANCE,
    MAX_DEPTH,
    ORACLE_DEPTH_OFFSET,
)
from .element import NumericMode


def _hyphenate(name: str) -> str:
    return name.replace("_", "-")


class _HyphenatedModel(BaseModel):
    """Accepts both snake_case and hyphenated keys."""

    model_config = ConfigDict(
        alias_generator=_hyphenate,
        populate_by_name=True,
        extra="forbid",
    )


class NoiseKind(str, Enum):
    """Bounded perturbation families."""

    NONE = "none"
    BOUNDED_SIN = "bounded-sin"
    BOUNDED_HASH = "bounded-hash"
    ADVERSARIAL_STEP = "adversarial-step"


class Engine(str, Enum):
    """Which stabilization route to run."""

    CONE = "cone"
    NORMED = "normed"
    BOTH = "both"


class StabilizeConfig(BaseModel):
    """Settings of the order-theoretic stabilization engine."""

    depth: int = Field(default=MAX_DEPTH, ge=1, le=MAX_DEPTH, description="Depth cap N")
    tolerance: float = Field(
        default=DEFAULT_TOLERANCE,
        gt=0,
        description="Gap between even depths that stops the iteration",
    )
    additivity_tolerance: float = Field(
        default=DEFAULT_ADDITIVITY_TOL, gt=0, description="Allowed additivity gap of the tabulation"
    )
    workers: int = Field(default=1, ge=1, description="Threads evaluating disjoint domain points")


class NormedConfig(StabilizeConfig):
    """Settings of the normed (classical) route."""

    r: float = Field(default=DEFAULT_R, gt=1, description="Slack factor r > 1 of the radii")
    telescoping_depth: int = Field(
        default=12,
        ge=0,
        le=MAX_DEPTH,
        description="Largest n checked by the telescoping inequality",
    )


class BaseMapConfig(_HyphenatedModel):
    """Additive base map the noisy triple is built around."""

    coefficient: float = Field(default=3.0, description="Linear coefficient c of x -> c*x")
    matrix: Optional[List[List[float]]] = Field(
        default=None, description="d x k matrix for vector targets (overrides coefficient)"
    )
    interval: Optional[Tuple[float, float]] = Field(
        default=None, description="Interval [lo, hi] of x -> x*[lo, hi] for the interval cone"
    )
    offsets: Tuple[float, float] = Field(
        default=(0.0, 0.0), description="Pexider offsets (a, b): g = base + a, h = base + b"
    )

    @field_validator("interval")
    @classmethod
    def check_interval_order(
        cls, v: Optional[Tuple[float, float]]
    ) -> Optional[Tuple[float, float]]:
        """Interval endpoints must be ordered."""
        if v is not None and v[0] > v[1]:
            raise ValueError(f"interval endpoints out of order: {v}")
        return v

    @field_validator("matrix")
    @classmethod
    def check_matrix_shape(cls, v: Optional[List[List[float]]]) -> Optional[List[List[float]]]:
        """Matrix rows must be nonempty and of equal length."""
        if v is None:
            return v
        if not v or not v[0] or any(len(row) != len(v[0]) for row in v):
            raise ValueError("matrix must be a nonempty rectangular list of rows")
        return v


class NoiseConfig(_HyphenatedModel):
    """Bounded perturbation settings."""

    kind: NoiseKind = Field(default=NoiseKind.BOUNDED_HASH, description="Noise family")
    magnitude: float = Field(default=0.25, ge=0, description="Pointwise bound eps0")
    seed: int = Field(default=7, ge=0, lt=2**64, description="64-bit noise seed")
    anchor_origin: bool = Field(default=False, description="Force all noise channels to 0 at x = 0")


class DomainConfig(_HyphenatedModel):
    """Grid of base points of the sampled source domain."""

    count: int = Field(default=8, ge=1, le=64, description="Number of grid points")
    spacing: float = Field(default=1.0, gt=0, description="Grid spacing")
    dimension: int = Field(default=1, ge=1, le=16, description="Dimension of the domain points")


class ExperimentConfig(_HyphenatedModel):
    """One harness experiment."""

    instance_name: str = Field(default="ext-reals", description="Target cone instance name")
    base_map: BaseMapConfig = Field(default_factory=BaseMapConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    v_scale: float = Field(
        default=1.0, gt=0, description="Coefficient of v (or eps on the normed route)"
    )
    depth: int = Field(default=24, ge=1, le=MAX_DEPTH, description="Depth cap N")
    tolerance: float = Field(default=DEFAULT_TOLERANCE, gt=0, description="Convergence tolerance")
    domain: DomainConfig = Field(default_factory=DomainConfig)
    engine: Engine = Field(default=Engine.CONE, description="Stabilization route")
    numeric_mode: NumericMode = Field(
        default=NumericMode.RATIONAL, description="Scalar representation"
    )
    r: float = Field(default=DEFAULT_R, gt=1, description="Slack factor of the normed route")
    oracle_offset: int = Field(
        default=ORACLE_DEPTH_OFFSET, ge=0, le=20, description="Oracle depth M = N + offset"
    )
    infinite_origin: bool = Field(
        default=False, description="Inject f(0) = +inf (extended reals only)"
    )
    include_timing: bool = Field(default=False, description="Add wall-clock timing to the report")

    @field_validator("instance_name")
    @classmethod
    def check_instance_name(cls, v: str) -> str:
        """Reject names no factory understands."""
        v = v.strip()
        if v in ("ext-reals", "ext-reals-nonneg", "intervals"):
            return v
        parts = v.split(":")
        if len(parts) == 3 and parts[0] == "vector-uc" and parts[2] in ("sup", "euclidean"):
            if parts[1].isdigit() and int(parts[1]) >= 1:
                return v
        raise ValueError(f"unknown instance name: {v!r}")

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentConfig":
        """Cross-field checks."""
        if self.infinite_origin and not self.instance_name.startswith("ext-reals"):
            raise ValueError("infinite_origin is only meaningful for extended-real instances")
        if self.instance_name == "ext-reals-nonneg":
            if self.base_map.coefficient < 0 or min(self.base_map.offsets) < 0:
                raise ValueError(
                    "nonnegative extended reals need nonnegative coefficient and offsets"
                )
        if self.instance_name.startswith("ext-reals") and self.domain.dimension != 1:
            if self.base_map.matrix is None:
                raise ValueError("vector domains into scalar targets need a 1 x k base matrix")
        return self

    def stabilize_config(self) -> StabilizeConfig:
        """Engine settings for the cone route."""
        return StabilizeConfig(depth=self.depth, tolerance=self.tolerance)

    def normed_config(self) -> NormedConfig:
        """Engine settings for the normed route."""
        return NormedConfig(depth=self.depth, tolerance=self.tolerance, r=self.r)
