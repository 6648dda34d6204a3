"""Sampled source domains for the Pexider maps.

Domain points are nonnegative rationals (dimension 1) or tuples of
nonnegative rationals (dimension > 1).
"""
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Tuple, Union

from .element import rational_to_json

Point = Union[Fraction, Tuple[Fraction, ...]]
PointPair = Tuple[Point, Point]


def zero_point(dimension: int = 1) -> Point:
    """Neutral element of the source domain."""
    if dimension == 1:
        return Fraction(0)
    return tuple(Fraction(0) for _ in range(dimension))


def scale_point(point: Point, factor) -> Point:
    """Multiply a domain point by a nonnegative rational factor."""
    factor = Fraction(factor)
    if isinstance(point, tuple):
        return tuple(c * factor for c in point)
    return point * factor


def double_point(point: Point, times: int = 1) -> Point:
    """Return 2^times * point."""
    return scale_point(point, 2**times)


def add_points(x: Point, y: Point) -> Point:
    """Sum of two domain points."""
    if isinstance(x, tuple):
        return tuple(a + b for a, b in zip(x, y))
    return x + y


def point_components(point: Point) -> Tuple[Fraction, ...]:
    """Coordinates of a point as a tuple."""
    if isinstance(point, tuple):
        return point
    return (point,)


def point_to_json(point: Point):
    """Render a domain point as a JSON value."""
    coords = [rational_to_json(c) for c in point_components(point)]
    return coords if isinstance(point, tuple) else coords[0]


@dataclass(frozen=True)
class SampleDomain:
    """Finite sample of the source cone.

    The sample holds the base points, every pair sum of the tested pairs,
    and all their dyadic multiples 2^k x for k <= depth.
    """

    base_points: Tuple[Point, ...]
    pairs: Tuple[PointPair, ...]
    depth: int
    points: FrozenSet[Point]
    dimension: int = 1

    @classmethod
    def build(
        cls,
        base_points: Iterable[Point],
        depth: int,
        pairs: Iterable[PointPair] = None,
        dimension: int = 1,
    ) -> "SampleDomain":
        """Close a set of base points under doubling and pair sums.

        Args:
            base_points: Points the maps are sampled at (0 is added)
            depth: Doubling depth the closure must support
            pairs: Tested pairs (all ordered pairs of base points if None)
            dimension: Dimension of the points

        Returns:
            SampleDomain instance
        """
        if depth < 0:
            raise ValueError(f"Domain depth must be nonnegative, got {depth}")

        zero = zero_point(dimension)
        base: List[Point] = [zero]
        for p in base_points:
            if any(c < 0 for c in point_components(p)):
                raise ValueError(f"Domain points must be nonnegative, got {p}")
            if p not in base:
                base.append(p)

        if pairs is None:
            pairs = [(x, y) for x in base for y in base]
        pairs = tuple(pairs)

        seeds = set(base)
        seeds.update(add_points(x, y) for x, y in pairs)
        closure = {double_point(p, k) for p in seeds for k in range(depth + 1)}

        return cls(
            base_points=tuple(base),
            pairs=pairs,
            depth=depth,
            points=frozenset(closure),
            dimension=dimension,
        )

    @classmethod
    def grid(cls, count: int, spacing, depth: int, dimension: int = 1) -> "SampleDomain":
        """Regular grid k * spacing, k = 0..count-1 (diagonal points for dimension > 1).

        Off-diagonal vector points use a coordinate shift so that components differ.
        """
        spacing = Fraction(spacing)
        if dimension == 1:
            points: List[Point] = [spacing * k for k in range(count)]
        else:
            points = [
                tuple(spacing * ((k + i) % max(count, 1)) for i in range(dimension))
                for k in range(count)
            ]
        return cls.build(points, depth=depth, dimension=dimension)

    @property
    def zero(self) -> Point:
        """Neutral element (always sampled)."""
        return zero_point(self.dimension)

    @property
    def tabulated_points(self) -> Tuple[Point, ...]:
        """Base points followed by new pair sums, in deterministic order."""
        ordered = list(self.base_points)
        for x, y in self.pairs:
            s = add_points(x, y)
            if s not in ordered:
                ordered.append(s)
        return tuple(ordered)

    def contains(self, point: Point) -> bool:
        """Whether a point belongs to the sample."""
        return point in self.points

    def with_points(self, extra: Iterable[Point]) -> "SampleDomain":
        """Same tabulation with extra sampled points (e.g. x/alpha for a rescaled map)."""
        extra = frozenset(extra)
        if any(c < 0 for p in extra for c in point_components(p)):
            raise ValueError("Domain points must be nonnegative")
        return replace(self, points=self.points | extra)

    def shrink(self, levels: int = 1) -> "SampleDomain":
        """Same base and pairs, with a smaller doubling depth."""
        if self.depth < levels:
            raise ValueError(f"Cannot shrink depth {self.depth} by {levels}")
        return SampleDomain.build(
            self.base_points, self.depth - levels, self.pairs, self.dimension
        )
