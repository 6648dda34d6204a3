"""Services package."""
from .cone_core import (
    ConeInstance,
    check_axioms,
    closure_contains,
    in_lower_nbhd,
    in_symmetric_nbhd,
    in_upper_nbhd,
    lower_bound_coefficient,
    separation_check,
    symmetric_gap,
    upper_bound_coefficient,
)
from .cone_instances import (
    ExtendedRealsCone,
    IntervalCone,
    NormKind,
    VectorUcCone,
    instance_from_name,
    make_extended_reals,
    make_interval_cone,
    make_vector_uc,
    seminorm_q,
)
from .stabilizer import PexiderInstance, stabilize, verify_hypothesis
from .normed_hyers import NormedPexiderInstance, classical_stabilize
from .harness import ExperimentRunner, oracle_limit, perturb, run

__all__ = [
    "ConeInstance",
    "check_axioms",
    "closure_contains",
    "in_lower_nbhd",
    "in_symmetric_nbhd",
    "in_upper_nbhd",
    "lower_bound_coefficient",
    "separation_check",
    "symmetric_gap",
    "upper_bound_coefficient",
    "ExtendedRealsCone",
    "IntervalCone",
    "NormKind",
    "VectorUcCone",
    "instance_from_name",
    "make_extended_reals",
    "make_interval_cone",
    "make_vector_uc",
    "seminorm_q",
    "PexiderInstance",
    "stabilize",
    "verify_hypothesis",
    "NormedPexiderInstance",
    "classical_stabilize",
    "ExperimentRunner",
    "oracle_limit",
    "perturb",
    "run",
]
