"""Builders and strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from src.models.config import BaseMapConfig, NoiseConfig, NoiseKind
from src.services.harness import make_base_map, perturb
from src.services.stabilizer import PexiderInstance


def dyadics(bound: int = 4096, denominator: int = 64):
    """Exact dyadic rationals k/denominator with |k| <= bound."""
    return st.integers(-bound, bound).map(lambda k: Fraction(k, denominator))


def nonneg_dyadics(bound: int = 4096, denominator: int = 64):
    return st.integers(0, bound).map(lambda k: Fraction(k, denominator))


def linear_triple(
    target,
    coefficient=3,
    magnitude=0.25,
    seed=7,
    anchor=True,
    offsets=(0, 0),
    kind=NoiseKind.BOUNDED_HASH,
):
    """Noisy (f, g, h) around the additive base of a target, x -> c*x by default."""
    base = make_base_map(BaseMapConfig(coefficient=coefficient), target)
    noise = NoiseConfig(
        kind=kind if magnitude else NoiseKind.NONE,
        magnitude=magnitude,
        seed=seed,
        anchor_origin=anchor,
    )
    return perturb(target, base, noise, offsets)


def noisy_pexider(target, domain, v_scale=1, **kwargs) -> PexiderInstance:
    """PexiderInstance of a noisy linear triple."""
    f, g, h = linear_triple(target, **kwargs)
    return PexiderInstance(target, domain, f, g, h, target.neighborhood(v_scale))
