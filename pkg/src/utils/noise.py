"""Reproducible bounded noise for perturbed Pexider triples.

Noise is a pure function of (seed, channel, component, point): a
splitmix64 hash chain mapped onto [-eps0, eps0]. No generator state is
carried between calls, so evaluation order never changes the values.
"""
import math
from fractions import Fraction
from typing import Iterable

from ..models.config import NoiseConfig, NoiseKind
from ..models.domain import Point, point_components

MASK64 = (1 << 64) - 1

# Channel ids mixed into the hash
CHANNELS = {"f": 1, "g": 2, "h": 3}

# Step direction per channel for the adversarial family
STEP_SIGNS = {"f": 1, "g": -1, "h": -1}


def splitmix64(state: int) -> int:
    """One splitmix64 output for the given 64-bit state."""
    z = (state + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def hash_words(seed: int, words: Iterable[int]) -> int:
    """Fold integers into a splitmix64 chain started at seed."""
    h = splitmix64(seed & MASK64)
    for word in words:
        # Large numerators are folded in 64-bit chunks
        word = int(word)
        sign = 1 if word < 0 else 0
        word = abs(word)
        h = splitmix64(h ^ sign)
        while True:
            h = splitmix64(h ^ (word & MASK64))
            word >>= 64
            if not word:
                break
    return h


def point_words(point: Point) -> list:
    """Integer encoding of a rational domain point."""
    words = []
    for c in point_components(point):
        c = Fraction(c)
        words.extend((c.numerator, c.denominator))
    return words


class NoiseSource:
    """Deterministic bounded perturbation p(channel, component, x)."""

    def __init__(self, config: NoiseConfig):
        """Initialize noise source.

        Args:
            config: Noise family, magnitude and seed
        """
        self.config = config
        self.magnitude = Fraction(config.magnitude)

    def __call__(self, channel: str, component: int, point: Point) -> Fraction:
        """Noise value in [-eps0, eps0] for one channel/component at a point."""
        kind = self.config.kind
        if kind is NoiseKind.NONE or self.magnitude == 0:
            return Fraction(0)
        if self.config.anchor_origin and all(c == 0 for c in point_components(point)):
            return Fraction(0)

        if kind is NoiseKind.BOUNDED_HASH:
            h = hash_words(self.config.seed, [CHANNELS[channel], component, *point_words(point)])
            # u in [0, 1) with 64-bit resolution
            u = Fraction(h, 1 << 64)
            return self.magnitude * (2 * u - 1)

        if kind is NoiseKind.BOUNDED_SIN:
            phase = (self.config.seed % 997) / 997.0 + CHANNELS[channel] + 0.5 * component
            t = float(sum(point_components(point)))
            s = Fraction(math.sin(1.7 * t + phase))
            return self.magnitude * max(Fraction(-1), min(Fraction(1), s))

        # adversarial step: full magnitude once the point leaves [0, 1)
        if max(point_components(point)) >= 1:
            return self.magnitude * STEP_SIGNS[channel]
        return Fraction(0)
