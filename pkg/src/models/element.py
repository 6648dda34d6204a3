"""Carrier values and cone elements."""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Tuple, Union

Scalar = Union[Fraction, float]


class CarrierKind(str, Enum):
    """Kinds of carrier shipped with the library."""

    EXTENDED_REAL = "extended-real"
    NONNEG_EXTENDED_REAL = "nonneg-extended-real"
    VECTOR = "vector"
    INTERVAL = "interval"


class NumericMode(str, Enum):
    """Scalar representation used inside an instance."""

    RATIONAL = "rational"
    FLOAT = "float"


class PositiveInfinity:
    """The top element +inf of the extended reals.

    Kept as its own type so that 0 * (+inf) = 0 is decided before any
    multiplication happens (IEEE would give NaN).
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "+inf"

    def __reduce__(self):
        return (PositiveInfinity, ())


INF = PositiveInfinity()

ExtendedScalar = Union[Fraction, float, PositiveInfinity]


@dataclass(frozen=True)
class Interval:
    """Nonempty closed bounded interval [lo, hi]."""

    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Interval endpoints out of order: [{self.lo}, {self.hi}]")

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class Ball:
    """Closed ball center + radius * B of a finite-dimensional normed space.

    Radius-0 balls are the vectors themselves.
    """

    center: Tuple[Scalar, ...]
    radius: Scalar = 0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"Ball radius must be nonnegative, got {self.radius}")

    @property
    def dimension(self) -> int:
        """Dimension of the ambient space."""
        return len(self.center)

    @property
    def is_vector(self) -> bool:
        """Whether this ball is a single point."""
        return self.radius == 0

    def __repr__(self) -> str:
        coords = ", ".join(str(c) for c in self.center)
        if self.is_vector:
            return f"({coords})"
        return f"({coords}) + {self.radius}B"


CarrierValue = Union[Fraction, float, PositiveInfinity, Interval, Ball]


@dataclass(frozen=True)
class Element:
    """One value of a cone carrier, tagged with its owning instance."""

    tag: str
    value: Any

    def __repr__(self) -> str:
        return f"{self.value!r}@{self.tag}"


@dataclass(frozen=True)
class NeighborhoodElement:
    """Member of an instance's abstract 0-neighborhood system.

    For the uc-cones shipped here every neighborhood element is a positive
    multiple of the generating element: base = coefficient * generator.
    """

    base: Element
    coefficient: Scalar = field(default=Fraction(1))

    @property
    def tag(self) -> str:
        """Owning instance tag."""
        return self.base.tag


def rational_to_json(x: Fraction) -> Union[int, str]:
    """Exact JSON rendering of a rational: an int, or a "p/q" string."""
    if x.denominator == 1:
        return int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def scalar_to_json(x: Any) -> Any:
    """Render a scalar (or +inf) as a JSON value; float-mode scalars stay floats."""
    if x is INF:
        return "+inf"
    if isinstance(x, Fraction):
        return rational_to_json(x)
    return x


def value_to_json(value: Any) -> Any:
    """Render a carrier value as a JSON value."""
    if isinstance(value, Interval):
        return [scalar_to_json(value.lo), scalar_to_json(value.hi)]
    if isinstance(value, Ball):
        center = [scalar_to_json(c) for c in value.center]
        if value.is_vector:
            return center
        return {"center": center, "radius": scalar_to_json(value.radius)}
    if isinstance(value, tuple):
        return [scalar_to_json(c) for c in value]
    return scalar_to_json(value)


def element_to_json(element: Element) -> Any:
    """Render an Element as a JSON value."""
    return value_to_json(element.value)
