"""Concrete locally convex cones used as test beds.

- Extended reals R u {+inf} (and the nonnegative half), neighborhoods eps > 0
- Finite-dimensional uc-cones: closed balls of R^d under the sup or Euclidean norm
- Nonempty closed intervals under inclusion, generated by w = [-1, 1]
"""
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from ..constants import FLOAT_EQUALITY_TOL, MIN_PROBE
from ..errors import ConfigError, InstanceMismatchError, InvalidScalarError, NotUcConeError
from ..errors import NotVectorSpaceError
from ..models.element import (
    INF,
    Ball,
    CarrierKind,
    Element,
    ExtendedScalar,
    Interval,
    NumericMode,
    Scalar,
)
from ..utils.search import minimal_coefficient
from .cone_core import ConeInstance, in_symmetric_nbhd

logger = logging.getLogger(__name__)

# Fractional bits of the rounded-up rational square root
SQRT_BITS = 64


class NormKind(str, Enum):
    """Unit ball used as w(0)w of a vector uc-cone."""

    SUP = "sup"
    EUCLIDEAN = "euclidean"


def sqrt_upper(s: Fraction, bits: int = SQRT_BITS) -> Fraction:
    """Smallest multiple of 2^-bits that is >= sqrt(s); exact on perfect squares."""
    if s < 0:
        raise ValueError(f"sqrt of negative value {s}")
    scale = 4**bits
    m = -((-s.numerator * scale) // s.denominator)
    root = math.isqrt(m)
    if root * root < m:
        root += 1
    return Fraction(root, 2**bits)


class ExtendedRealsCone(ConeInstance):
    """(R-bar, xi) or (R-bar_+, xi) with the standard order and +inf on top."""

    def __init__(self, nonneg: bool = False, mode: NumericMode = NumericMode.RATIONAL):
        name = "ext-reals-nonneg" if nonneg else "ext-reals"
        super().__init__(name, mode)
        self.nonneg = nonneg
        self.kind = CarrierKind.NONNEG_EXTENDED_REAL if nonneg else CarrierKind.EXTENDED_REAL

    def _validate(self, value):
        if value is INF or (isinstance(value, float) and value == math.inf):
            return INF
        if isinstance(value, float) and math.isnan(value):
            raise InvalidScalarError("NaN is not an extended real")
        if isinstance(value, float) and math.isinf(value):
            raise InvalidScalarError("-inf does not belong to the extended reals")
        value = self.coerce(value)
        if self.nonneg and value < 0:
            raise InvalidScalarError(f"{value} is not a nonnegative extended real")
        return value

    def _zero_value(self):
        return self.coerce(0)

    def _generator_value(self):
        return self.coerce(1)

    def _add(self, a, b):
        if a is INF or b is INF:
            return INF
        return a + b

    def _scale(self, lam, a):
        if a is INF:
            return INF
        return lam * a

    def _leq(self, a, b) -> bool:
        if b is INF:
            return True
        if a is INF:
            return False
        return self.scalars_leq(a, b)

    def _equal(self, a, b) -> bool:
        if a is INF or b is INF:
            return a is b
        return self.scalars_equal(a, b)

    def _is_neighborhood_value(self, value) -> bool:
        return value is not INF and value > 0

    def _upper_magnitude(self, value) -> Optional[Scalar]:
        if value is INF:
            return None
        return value

    def _lower_magnitude(self, value) -> Scalar:
        if value is INF:
            return self.coerce(0)
        return -value

    def _gap(self, a, b) -> ExtendedScalar:
        if a is INF and b is INF:
            return self.coerce(0)
        if a is INF or b is INF:
            return INF
        return abs(a - b)

    def _seminorm(self, a) -> ExtendedScalar:
        if a is INF:
            return INF
        return abs(a)

    def _sample_value(self, rng: np.random.Generator):
        if rng.random() < 0.05:
            return INF
        x = self.dyadic(rng)
        return abs(x) if self.nonneg else x


class VectorUcCone(ConeInstance):
    """Closed balls center + radius*B of R^d ordered by inclusion.

    Radius-0 balls are the vectors of R^d and the generator is the unit
    ball w = 0 + 1*B, so x <= y + lam*w iff norm(x - y) <= lam and the
    seminorm q of the cone is the chosen vector norm.
    """

    kind = CarrierKind.VECTOR
    vector_space = True

    def __init__(
        self,
        dimension: int,
        norm_kind: NormKind = NormKind.SUP,
        mode: NumericMode = NumericMode.RATIONAL,
    ):
        norm_kind = NormKind(norm_kind)
        super().__init__(f"vector-uc:{dimension}:{norm_kind.value}", mode)
        self.dimension = dimension
        self.norm_kind = norm_kind

    # -- vectors ------------------------------------------------------

    def vector_norm(self, vector: Sequence[Scalar]) -> Scalar:
        """Norm of a plain coordinate vector (rounded up in rational Euclidean mode)."""
        if self.mode is NumericMode.FLOAT:
            order = np.inf if self.norm_kind is NormKind.SUP else 2
            return float(np.linalg.norm(np.asarray(vector, dtype=float), ord=order))
        if self.norm_kind is NormKind.SUP:
            return max((abs(c) for c in vector), default=Fraction(0))
        return sqrt_upper(sum((c * c for c in vector), Fraction(0)))

    def _within(self, delta: Sequence[Scalar], budget: Scalar) -> bool:
        """norm(delta) <= budget, exact in rational mode."""
        if self.mode is NumericMode.RATIONAL and self.norm_kind is NormKind.EUCLIDEAN:
            return budget >= 0 and sum((c * c for c in delta), Fraction(0)) <= budget * budget
        return self.scalars_leq(self.vector_norm(delta), budget)

    @staticmethod
    def _delta(x: Ball, y: Ball) -> Tuple[Scalar, ...]:
        return tuple(a - b for a, b in zip(x.center, y.center))

    # -- hooks --------------------------------------------------------

    def _validate(self, value):
        if isinstance(value, Ball):
            center, radius = value.center, value.radius
        elif isinstance(value, (tuple, list, np.ndarray)):
            center, radius = tuple(value), 0
        elif self.dimension == 1 and value is not INF:
            center, radius = (value,), 0
        else:
            raise InvalidScalarError(f"{value!r} is not a point of R^{self.dimension}")
        if len(center) != self.dimension:
            raise InstanceMismatchError(
                f"Expected dimension {self.dimension}, got {len(center)} in {self.name}"
            )
        try:
            return Ball(tuple(self.coerce(c) for c in center), self.coerce(radius))
        except ValueError as e:
            raise InvalidScalarError(str(e)) from e

    def _zero_value(self):
        return Ball(tuple(self.coerce(0) for _ in range(self.dimension)), self.coerce(0))

    def _generator_value(self):
        return Ball(tuple(self.coerce(0) for _ in range(self.dimension)), self.coerce(1))

    def _add(self, a, b):
        return Ball(tuple(x + y for x, y in zip(a.center, b.center)), a.radius + b.radius)

    def _scale(self, lam, a):
        return Ball(tuple(lam * x for x in a.center), lam * a.radius)

    def _leq(self, a, b) -> bool:
        return self._within(self._delta(a, b), b.radius - a.radius)

    def _equal(self, a, b) -> bool:
        return self.scalars_equal(a.radius, b.radius) and all(
            self.scalars_equal(x, y) for x, y in zip(a.center, b.center)
        )

    def _is_neighborhood_value(self, value) -> bool:
        return value.radius > 0 and all(self.scalars_equal(c, 0) for c in value.center)

    def _upper_magnitude(self, value) -> Optional[Scalar]:
        return self.vector_norm(value.center) + value.radius

    def _lower_magnitude(self, value) -> Scalar:
        return self.vector_norm(value.center) - value.radius

    def _gap(self, a, b) -> ExtendedScalar:
        return self.vector_norm(self._delta(a, b)) + abs(a.radius - b.radius)

    def _seminorm(self, a) -> ExtendedScalar:
        return self.vector_norm(a.center) + a.radius

    def _sample_value(self, rng: np.random.Generator):
        center = tuple(self.dyadic(rng) for _ in range(self.dimension))
        radius = abs(self.dyadic(rng, bound=256)) if rng.random() < 0.5 else 0
        return Ball(center, radius)

    # -- vector-space operations -------------------------------------

    def vector(self, coords) -> Element:
        """Radius-0 element from coordinates (a bare scalar when d = 1)."""
        return self.element(coords)

    def coordinates(self, a: Element) -> Tuple[Scalar, ...]:
        """Center coordinates of a vector element."""
        self.check(a)
        return a.value.center

    def subtract(self, a: Element, b: Element) -> Element:
        """a - b for vectors (radius-0 elements only)."""
        self.check(a, b)
        if not (a.value.is_vector and b.value.is_vector):
            raise NotVectorSpaceError(f"Cannot subtract non-point balls {a!r} - {b!r}")
        return Element(self.name, Ball(self._delta(a.value, b.value), self.coerce(0)))

    def negate(self, a: Element) -> Element:
        """-a for vectors."""
        return self.subtract(self.zero(), a)

    def norm(self, a: Element) -> Scalar:
        """Norm of the center of a (the seminorm q on vectors)."""
        self.check(a)
        return self.vector_norm(a.value.center)

    @property
    def norm_slack(self) -> Scalar:
        """Worst rounding of vector_norm (rounded-up square roots, float arithmetic)."""
        if self.mode is NumericMode.FLOAT:
            return FLOAT_EQUALITY_TOL
        if self.norm_kind is NormKind.EUCLIDEAN:
            return Fraction(1, 2 ** (SQRT_BITS - 4))
        return Fraction(0)

    def norm_within(self, a: Element, budget) -> bool:
        """norm(a) <= budget without rounding in rational mode."""
        self.check(a)
        return self._within(a.value.center, self.coerce(budget))


class IntervalCone(ConeInstance):
    """Nonempty closed bounded intervals with Minkowski sum and inclusion order."""

    kind = CarrierKind.INTERVAL

    def __init__(self, mode: NumericMode = NumericMode.RATIONAL):
        super().__init__("intervals", mode)

    def _validate(self, value):
        if isinstance(value, Interval):
            lo, hi = value.lo, value.hi
        elif isinstance(value, (tuple, list)) and len(value) == 2:
            lo, hi = value
        elif value is not INF and not isinstance(value, (tuple, list)):
            lo = hi = value
        else:
            raise InvalidScalarError(f"{value!r} is not a closed bounded interval")
        try:
            return Interval(self.coerce(lo), self.coerce(hi))
        except ValueError as e:
            raise InvalidScalarError(str(e)) from e

    def _zero_value(self):
        return Interval(self.coerce(0), self.coerce(0))

    def _generator_value(self):
        return Interval(self.coerce(-1), self.coerce(1))

    def _add(self, a, b):
        return Interval(a.lo + b.lo, a.hi + b.hi)

    def _scale(self, lam, a):
        return Interval(lam * a.lo, lam * a.hi)

    def _leq(self, a, b) -> bool:
        return self.scalars_leq(b.lo, a.lo) and self.scalars_leq(a.hi, b.hi)

    def _equal(self, a, b) -> bool:
        return self.scalars_equal(a.lo, b.lo) and self.scalars_equal(a.hi, b.hi)

    def _is_neighborhood_value(self, value) -> bool:
        return value.hi > 0 and self.scalars_equal(value.lo, -value.hi)

    def _upper_magnitude(self, value) -> Optional[Scalar]:
        return max(-value.lo, value.hi)

    def _lower_magnitude(self, value) -> Scalar:
        return max(value.lo, -value.hi)

    def _gap(self, a, b) -> ExtendedScalar:
        return max(abs(a.lo - b.lo), abs(a.hi - b.hi))

    def _seminorm(self, a) -> ExtendedScalar:
        return max(abs(a.lo), abs(a.hi))

    def _sample_value(self, rng: np.random.Generator):
        lo = self.dyadic(rng)
        return Interval(lo, lo + abs(self.dyadic(rng, bound=512)))


def make_extended_reals(
    nonneg: bool = False, mode: NumericMode = NumericMode.RATIONAL
) -> ExtendedRealsCone:
    """Extended reals R-bar (or R-bar_+ with nonneg=True)."""
    return ExtendedRealsCone(nonneg=nonneg, mode=mode)


def make_vector_uc(
    d: int, norm_kind: NormKind = NormKind.SUP, mode: NumericMode = NumericMode.RATIONAL
) -> VectorUcCone:
    """Finite-dimensional uc-cone R^d with the sup or Euclidean unit ball.

    Raises:
        InvalidScalarError: if d < 1
    """
    if d < 1:
        raise InvalidScalarError(f"Vector uc-cone dimension must be positive, got {d}")
    return VectorUcCone(d, norm_kind, mode)


def make_interval_cone(mode: NumericMode = NumericMode.RATIONAL) -> IntervalCone:
    """Interval cone with w = [-1, 1]."""
    return IntervalCone(mode)


def seminorm_q(instance: ConeInstance, a: Element, analytic: bool = True) -> ExtendedScalar:
    """q(a) = inf{mu > 0 : a/mu in w(0)w}, or +inf when no mu qualifies.

    Raises:
        NotUcConeError: if the instance is not generated by a single element
    """
    if not instance.uc_cone:
        raise NotUcConeError(f"Seminorm needs a uc-cone, {instance.name} is not one")
    instance.check(a)

    if analytic and instance.analytic_bounds:
        return instance._seminorm(a.value)

    zero = instance.zero()
    if instance.equal(a, zero):
        return instance.coerce(0)
    unit = instance.neighborhood(1)
    mu = minimal_coefficient(
        lambda m: in_symmetric_nbhd(instance, instance.scale(1 / m, a), zero, unit),
        instance.coerce(MIN_PROBE),
    )
    return INF if mu is None else mu


def instance_from_name(name: str, mode: NumericMode = NumericMode.RATIONAL) -> ConeInstance:
    """Build an instance from its configuration name.

    Args:
        name: "ext-reals", "ext-reals-nonneg", "vector-uc:<d>:<sup|euclidean>" or "intervals"
        mode: Scalar representation

    Returns:
        ConeInstance

    Raises:
        ConfigError: for unknown names
    """
    name = name.strip()
    if name == "ext-reals":
        return make_extended_reals(False, mode)
    if name == "ext-reals-nonneg":
        return make_extended_reals(True, mode)
    if name == "intervals":
        return make_interval_cone(mode)

    parts = name.split(":")
    if len(parts) == 3 and parts[0] == "vector-uc":
        try:
            return make_vector_uc(int(parts[1]), NormKind(parts[2]), mode)
        except (ValueError, InvalidScalarError) as e:
            raise ConfigError(f"Invalid vector instance {name!r}: {e}") from e

    raise ConfigError(f"Unknown instance name: {name!r}")
