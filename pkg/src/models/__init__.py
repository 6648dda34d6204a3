"""Data models for conestab."""
from .element import (
    INF,
    Ball,
    CarrierKind,
    Element,
    Interval,
    NeighborhoodElement,
    NumericMode,
    PositiveInfinity,
)
from .domain import SampleDomain
from .config import (
    BaseMapConfig,
    DomainConfig,
    Engine,
    ExperimentConfig,
    NoiseConfig,
    NoiseKind,
    NormedConfig,
    StabilizeConfig,
)
from .report import (
    AdditivityReport,
    AxiomReport,
    HypothesisReport,
    NormedReport,
    RunReport,
    StabilizationReport,
    Tabulation,
)

__all__ = [
    "INF",
    "Ball",
    "CarrierKind",
    "Element",
    "Interval",
    "NeighborhoodElement",
    "NumericMode",
    "PositiveInfinity",
    "SampleDomain",
    "BaseMapConfig",
    "DomainConfig",
    "Engine",
    "ExperimentConfig",
    "NoiseConfig",
    "NoiseKind",
    "NormedConfig",
    "StabilizeConfig",
    "AdditivityReport",
    "AxiomReport",
    "HypothesisReport",
    "NormedReport",
    "RunReport",
    "StabilizationReport",
    "Tabulation",
]
