"""Abstract locally convex cone contract and generic checkers.

A ConeInstance supplies the carrier arithmetic (addition, nonnegative
scaling, preorder) and its abstract 0-neighborhood system, generated by
positive multiples of one element. Everything in this module is written
against that contract only and never assumes cancellation.
"""
import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from ..constants import DEFAULT_PROBE_DEPTH, FLOAT_EQUALITY_TOL, MIN_PROBE
from ..errors import InstanceArithmeticError, InstanceMismatchError, InvalidScalarError
from ..models.element import (
    INF,
    CarrierKind,
    Element,
    ExtendedScalar,
    NeighborhoodElement,
    NumericMode,
    Scalar,
)
from ..models.report import AxiomReport, LawResult
from ..utils.search import minimal_coefficient

logger = logging.getLogger(__name__)


class ConeInstance(ABC):
    """A concrete preordered cone with a uc-style neighborhood system.

    Subclasses implement the underscore hooks on raw carrier values; the
    public methods handle instance tags, scalar coercion and the
    0 * a = 0 convention.
    """

    kind: CarrierKind
    separated = True
    complete = True
    antisymmetric = True
    vector_space = False
    uc_cone = True
    analytic_bounds = True

    def __init__(self, name: str, mode: NumericMode = NumericMode.RATIONAL):
        """Initialize the instance.

        Args:
            name: Instance tag carried by every element
            mode: Scalar representation (exact rationals or floats)
        """
        self.name = name
        self.mode = NumericMode(mode)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, mode={self.mode.value})"

    # ------------------------------------------------------------------
    # Scalars
    # ------------------------------------------------------------------

    @property
    def slack(self) -> Scalar:
        """Comparison slack: 0 for rationals, the float tolerance otherwise."""
        if self.mode is NumericMode.RATIONAL:
            return Fraction(0)
        return FLOAT_EQUALITY_TOL

    def coerce(self, x) -> Scalar:
        """Convert a real number to the instance's scalar type."""
        if x is INF:
            raise InvalidScalarError("+inf is not a scalar")
        if self.mode is NumericMode.RATIONAL:
            return x if isinstance(x, Fraction) else Fraction(x)
        return float(x)

    def scalars_equal(self, a: Scalar, b: Scalar) -> bool:
        """Scalar equality under the instance tolerance policy."""
        if self.mode is NumericMode.RATIONAL:
            return a == b
        return math.isclose(a, b, rel_tol=FLOAT_EQUALITY_TOL, abs_tol=FLOAT_EQUALITY_TOL)

    def scalars_leq(self, a: Scalar, b: Scalar) -> bool:
        """Scalar a <= b, with the float tolerance in float mode."""
        if self.mode is NumericMode.RATIONAL:
            return a <= b
        return a <= b or self.scalars_equal(a, b)

    # ------------------------------------------------------------------
    # Carrier hooks
    # ------------------------------------------------------------------

    @abstractmethod
    def _validate(self, value):
        """Coerce and validate a raw carrier value."""

    @abstractmethod
    def _zero_value(self):
        """Neutral element."""

    @abstractmethod
    def _generator_value(self):
        """Generating element w of the neighborhood system."""

    @abstractmethod
    def _add(self, a, b):
        """Carrier addition."""

    @abstractmethod
    def _scale(self, lam: Scalar, a):
        """Scaling by lam > 0 (lam = 0 is handled by the caller)."""

    @abstractmethod
    def _leq(self, a, b) -> bool:
        """Carrier preorder."""

    @abstractmethod
    def _equal(self, a, b) -> bool:
        """Value equality under the tolerance policy."""

    @abstractmethod
    def _is_neighborhood_value(self, value) -> bool:
        """Membership in the abstract 0-neighborhood system."""

    @abstractmethod
    def _upper_magnitude(self, value) -> Optional[Scalar]:
        """Threshold t with a <= lam*w iff lam >= t; None if no lam works."""

    @abstractmethod
    def _lower_magnitude(self, value) -> Scalar:
        """Threshold t with 0 <= a + rho*w iff rho >= t."""

    @abstractmethod
    def _gap(self, a, b) -> ExtendedScalar:
        """Least eps with a in (eps w)(b)(eps w)."""

    @abstractmethod
    def _seminorm(self, a) -> ExtendedScalar:
        """q(a) = inf{mu > 0 : a/mu in w(0)w}."""

    @abstractmethod
    def _sample_value(self, rng: np.random.Generator):
        """Draw one pseudo-random carrier value."""

    def _closure_leq(self, x, a) -> bool:
        """x <= a + eps*w for every eps > 0 (closed orders: x <= a)."""
        return self._leq(x, a)

    # ------------------------------------------------------------------
    # Public algebra
    # ------------------------------------------------------------------

    def element(self, value) -> Element:
        """Wrap a raw value as an element of this instance."""
        return Element(self.name, self._validate(value))

    def zero(self) -> Element:
        """Neutral element 0."""
        return Element(self.name, self._zero_value())

    @property
    def generator(self) -> Element:
        """Generating element w of V = {lam*w : lam > 0}."""
        return Element(self.name, self._generator_value())

    def check(self, *elements: Element) -> None:
        """Reject elements owned by another instance."""
        for e in elements:
            if e.tag != self.name:
                raise InstanceMismatchError(
                    f"Element {e!r} does not belong to instance {self.name!r}"
                )

    def add(self, a: Element, b: Element) -> Element:
        """a + b."""
        self.check(a, b)
        return Element(self.name, self._add(a.value, b.value))

    def scale(self, lam, a: Element) -> Element:
        """lam * a for lam >= 0, with 0 * a = 0 for every a (including +inf)."""
        self.check(a)
        lam = self.coerce(lam)
        if lam < 0:
            raise InvalidScalarError(f"Scaling factor must be nonnegative, got {lam}")
        if lam == 0:
            return self.zero()
        return Element(self.name, self._scale(lam, a.value))

    def leq(self, a: Element, b: Element) -> bool:
        """Instance preorder a <= b."""
        self.check(a, b)
        return self._leq(a.value, b.value)

    def equal(self, a: Element, b: Element) -> bool:
        """Value equality (exact in rational mode, 2^-40 in float mode)."""
        self.check(a, b)
        return self._equal(a.value, b.value)

    def neighborhood(self, coefficient=1) -> NeighborhoodElement:
        """The neighborhood element coefficient * w."""
        c = self.coerce(coefficient)
        if c <= 0:
            raise InvalidScalarError(f"Neighborhood coefficient must be positive, got {c}")
        return NeighborhoodElement(base=self.scale(c, self.generator), coefficient=c)

    def scale_neighborhood(self, lam, v: NeighborhoodElement) -> NeighborhoodElement:
        """lam * v for lam > 0 (axiom (iii))."""
        self.check(v.base)
        lam = self.coerce(lam)
        if lam <= 0:
            raise InvalidScalarError(f"Neighborhoods scale by positive factors only, got {lam}")
        return NeighborhoodElement(base=self.scale(lam, v.base), coefficient=lam * v.coefficient)

    def is_neighborhood(self, e: Element) -> bool:
        """Whether e belongs to the abstract 0-neighborhood system."""
        self.check(e)
        return self._is_neighborhood_value(e.value)

    def nbhd_generators(self) -> List[NeighborhoodElement]:
        """Finite generator list used by the axiom checks."""
        return [self.neighborhood(c) for c in (1, Fraction(1, 2), 3, Fraction(1, 8))]

    def probes(self, depth: int = DEFAULT_PROBE_DEPTH) -> List[NeighborhoodElement]:
        """Decreasing probe schedule {2^-k w : k <= depth}."""
        return [self.neighborhood(Fraction(1, 2**k)) for k in range(depth + 1)]

    def sample(self, count: int, seed: int = 0) -> List[Element]:
        """Pseudo-random sample of carrier elements with a fixed seed."""
        rng = np.random.default_rng(seed)
        return [Element(self.name, self._validate(self._sample_value(rng))) for _ in range(count)]

    def sample_scalars(self, count: int, seed: int = 0) -> List[Scalar]:
        """Nonnegative dyadic scalars, always including 0 and 1."""
        rng = np.random.default_rng(seed + 1)
        fixed = [0, 1, Fraction(1, 2), 2]
        size = max(count - len(fixed), 0)
        drawn = [Fraction(int(k), 16) for k in rng.integers(0, 128, size=size)]
        return [self.coerce(s) for s in (fixed + drawn)[:count]]

    def dyadic(self, rng: np.random.Generator, bound: int = 4096) -> Scalar:
        """Random dyadic scalar k/64 with |k| <= bound."""
        return self.coerce(Fraction(int(rng.integers(-bound, bound + 1)), 64))


# ----------------------------------------------------------------------
# Neighborhood membership
# ----------------------------------------------------------------------


def in_upper_nbhd(instance: ConeInstance, b: Element, a: Element, v: NeighborhoodElement) -> bool:
    """b in v(a), i.e. b <= a + v."""
    return instance.leq(b, instance.add(a, v.base))


def in_lower_nbhd(instance: ConeInstance, b: Element, a: Element, v: NeighborhoodElement) -> bool:
    """b in (a)v, i.e. a <= b + v."""
    return instance.leq(a, instance.add(b, v.base))


def in_symmetric_nbhd(
    instance: ConeInstance, b: Element, a: Element, v: NeighborhoodElement
) -> bool:
    """b in v(a)v = v(a) intersected with (a)v."""
    return in_upper_nbhd(instance, b, a, v) and in_lower_nbhd(instance, b, a, v)


# ----------------------------------------------------------------------
# Boundedness
# ----------------------------------------------------------------------


def _search_start(instance: ConeInstance, floor: Scalar) -> Scalar:
    return max(floor, instance.coerce(MIN_PROBE))


def upper_bound_coefficient(
    instance: ConeInstance,
    a: Element,
    v: NeighborhoodElement,
    analytic: bool = True,
    floor: Optional[Scalar] = None,
) -> Optional[Scalar]:
    """Minimal lam > 0 with a <= lam*v, or None when a is not upper bounded.

    Args:
        instance: Owning instance
        a: Element to bound
        v: Neighborhood element
        analytic: Use the instance formula when it has one
        floor: Smallest coefficient returned (the minimum probe if None); the
            sampled search never starts below the minimum probe

    Returns:
        Minimal coefficient (at least floor) or None
    """
    instance.check(a, v.base)
    floor = instance.coerce(MIN_PROBE if floor is None else floor)

    if analytic and instance.analytic_bounds:
        t = instance._upper_magnitude(a.value)
        if t is None:
            return None
        return max(t / v.coefficient, floor)

    return minimal_coefficient(
        lambda lam: instance.leq(a, instance.scale(lam, v.base)), _search_start(instance, floor)
    )


def lower_bound_coefficient(
    instance: ConeInstance,
    a: Element,
    v: NeighborhoodElement,
    analytic: bool = True,
    floor: Optional[Scalar] = None,
) -> Scalar:
    """Minimal rho > 0 with 0 <= a + rho*v (full-cone requirement).

    Raises:
        InstanceArithmeticError: if a is not bounded below
    """
    instance.check(a, v.base)
    floor = instance.coerce(MIN_PROBE if floor is None else floor)

    if analytic and instance.analytic_bounds:
        return max(instance._lower_magnitude(a.value) / v.coefficient, floor)

    zero = instance.zero()
    rho = minimal_coefficient(
        lambda r: instance.leq(zero, instance.add(a, instance.scale(r, v.base))),
        _search_start(instance, floor),
    )
    if rho is None:
        raise InstanceArithmeticError(
            f"{a!r} is not bounded below in {instance.name}", witness={"a": repr(a)}
        )
    return rho


def is_bounded(instance: ConeInstance, a: Element, v: Optional[NeighborhoodElement] = None) -> bool:
    """Whether a is upper and lower bounded with respect to v (default w)."""
    v = v or instance.neighborhood(1)
    if upper_bound_coefficient(instance, a, v) is None:
        return False
    try:
        lower_bound_coefficient(instance, a, v)
    except InstanceArithmeticError:
        return False
    return True


def converges_to_zero(
    instance: ConeInstance, a: Element, v: NeighborhoodElement, scalars: Sequence
) -> Optional[int]:
    """First index from which scale(lam_n, a) stays inside v(0)v, or None.

    For a bounded element and lam_n -> 0 the answer is eventually an index;
    for unbounded elements (e.g. +inf) it is None.
    """
    zero = instance.zero()
    entered: Optional[int] = None
    for n, lam in enumerate(scalars):
        inside = in_symmetric_nbhd(instance, instance.scale(lam, a), zero, v)
        if inside and entered is None:
            entered = n
        elif not inside:
            entered = None
    return entered


# ----------------------------------------------------------------------
# Closure, separation, distance
# ----------------------------------------------------------------------


def closure_contains(
    instance: ConeInstance,
    x: Element,
    a: Element,
    probes: Sequence[NeighborhoodElement],
    analytic: bool = False,
) -> bool:
    """Membership of x in the closure of a (intersection of all v(a)).

    The sampled form checks x in v(a) for every probe; the analytic form
    uses the instance's exact characterization of "for all v".
    """
    if not probes:
        raise ValueError("closure_contains needs at least one probe")
    if analytic:
        instance.check(x, a)
        return instance._closure_leq(x.value, a.value)
    return all(in_upper_nbhd(instance, x, a, v) for v in probes)


def separation_check(
    instance: ConeInstance,
    a: Element,
    b: Element,
    probes: Optional[Sequence[NeighborhoodElement]] = None,
    analytic: bool = False,
) -> bool:
    """If a <= b+v and b <= a+v for every v, then a = b; report whether that holds.

    Returns True vacuously when the hypothesis fails.
    """
    if not instance.separated:
        raise ValueError(f"Instance {instance.name} is not separated")
    instance.check(a, b)

    if analytic:
        hypothesis = instance._closure_leq(a.value, b.value) and instance._closure_leq(
            b.value, a.value
        )
    else:
        probes = probes or instance.probes()
        hypothesis = all(
            instance.leq(a, instance.add(b, v.base)) and instance.leq(b, instance.add(a, v.base))
            for v in probes
        )

    if not hypothesis:
        return True
    return instance.equal(a, b)


def symmetric_gap(
    instance: ConeInstance, a: Element, b: Element, analytic: bool = True
) -> ExtendedScalar:
    """Least eps >= 0 with a in (eps w)(b)(eps w); +inf if none exists."""
    instance.check(a, b)
    if analytic and instance.analytic_bounds:
        return instance._gap(a.value, b.value)

    if instance.equal(a, b):
        return instance.coerce(0)
    eps = minimal_coefficient(
        lambda e: in_symmetric_nbhd(instance, a, b, instance.neighborhood(e)),
        instance.coerce(MIN_PROBE),
    )
    return INF if eps is None else eps


def gap_within(gap: ExtendedScalar, bound) -> bool:
    """gap <= bound, treating +inf as exceeding every bound."""
    return gap is not INF and gap <= bound


def max_gap(gaps: Iterable[ExtendedScalar], start=0) -> ExtendedScalar:
    """Largest of several gaps (+inf absorbs)."""
    worst = start
    for g in gaps:
        if g is INF:
            return INF
        if g > worst:
            worst = g
    return worst


# ----------------------------------------------------------------------
# Axiom checks
# ----------------------------------------------------------------------


class _LawRecorder:
    """Collects pass/fail per law and keeps the first witness."""

    def __init__(self, report: AxiomReport):
        self.report = report

    def run(
        self, law: str, cases: Iterable[tuple], predicate: Callable[..., Optional[bool]]
    ) -> None:
        checked = 0
        witness = None
        for case in cases:
            try:
                outcome = predicate(*case)
            except InstanceArithmeticError:
                outcome = False
            if outcome is None:
                # premise not met for this case
                continue
            checked += 1
            if not outcome and witness is None:
                witness = {f"arg{i}": repr(c) for i, c in enumerate(case)}
        result = LawResult(law=law, passed=witness is None, checked=checked, witness=witness)
        if not result.passed:
            logger.warning(f"Law {law} failed on {self.report.instance}: {witness}")
        self.report.results.append(result)


def check_axioms(
    instance: ConeInstance, sample: Sequence[Element], scalars: Sequence
) -> AxiomReport:
    """Evaluate the cone, preorder and neighborhood axioms on a sample.

    Args:
        instance: Instance under test
        sample: Nonempty list of elements
        scalars: Nonnegative scalars used by the scaling laws

    Returns:
        AxiomReport with one entry per law
    """
    if not sample:
        raise ValueError("check_axioms needs a nonempty sample")
    scalars = [instance.coerce(s) for s in scalars] or [instance.coerce(1)]

    I = instance
    n, m = len(sample), len(scalars)
    zero = I.zero()
    gens = I.nbhd_generators()
    g = len(gens)

    triples = [(sample[i], sample[(i + 1) % n], sample[(i + 2) % n]) for i in range(n)]
    scaled = [
        (sample[i], scalars[i % m], scalars[(7 * i + 3) % m]) for i in range(n)
    ]
    chains = [
        (sample[i], I.add(sample[i], gens[i % g].base), gens[(i + 1) % g]) for i in range(n)
    ]
    ordered_pairs = [
        (a, b, c, scalars[i % m]) for i, (a, b, c) in enumerate(triples) if I.leq(a, b)
    ]
    ordered_pairs += [
        (a, b, sample[(i + 3) % n], scalars[(i + 1) % m]) for i, (a, b, _) in enumerate(chains)
    ]
    gen_pairs = [(u, v) for u in gens for v in gens]

    report = AxiomReport(instance=I.name)
    rec = _LawRecorder(report)

    rec.run(
        "add_associative",
        triples,
        lambda a, b, c: I.equal(I.add(I.add(a, b), c), I.add(a, I.add(b, c))),
    )
    rec.run("add_commutative", triples, lambda a, b, _c: I.equal(I.add(a, b), I.add(b, a)))
    rec.run(
        "add_neutral",
        [(a,) for a in sample],
        lambda a: I.equal(I.add(a, zero), a) and I.equal(I.add(zero, a), a),
    )
    rec.run(
        "scale_associative",
        scaled,
        lambda a, lam, mu: I.equal(I.scale(lam, I.scale(mu, a)), I.scale(lam * mu, a)),
    )
    rec.run(
        "scale_distributes_over_scalars",
        scaled,
        lambda a, lam, mu: I.equal(I.scale(lam + mu, a), I.add(I.scale(lam, a), I.scale(mu, a))),
    )
    rec.run(
        "scale_distributes_over_elements",
        [(a, b, scalars[i % m]) for i, (a, b, _) in enumerate(triples)],
        lambda a, b, lam: I.equal(
            I.scale(lam, I.add(a, b)), I.add(I.scale(lam, a), I.scale(lam, b))
        ),
    )
    rec.run("scale_unit", [(a,) for a in sample], lambda a: I.equal(I.scale(1, a), a))
    rec.run("scale_zero", [(a,) for a in sample], lambda a: I.equal(I.scale(0, a), zero))

    rec.run("order_reflexive", [(a,) for a in sample], lambda a: I.leq(a, a))

    def transitive(a, b, c):
        if not (I.leq(a, b) and I.leq(b, c)):
            return None
        return I.leq(a, c)

    rec.run(
        "order_transitive",
        [(a, b, I.add(b, v.base)) for a, b, v in chains] + triples,
        transitive,
    )
    rec.run(
        "order_add_compatible",
        ordered_pairs,
        lambda a, b, c, _lam: I.leq(I.add(a, c), I.add(b, c)) if I.leq(a, b) else None,
    )
    rec.run(
        "order_scale_compatible",
        ordered_pairs,
        lambda a, b, _c, lam: I.leq(I.scale(lam, a), I.scale(lam, b)) if I.leq(a, b) else None,
    )

    rec.run(
        "nbhd_positive",
        [(v,) for v in gens],
        lambda v: I.leq(zero, v.base) and not I.leq(v.base, zero),
    )

    def directed(u, v):
        half = Fraction(1, 2)
        candidates = gens + [I.scale_neighborhood(half, u), I.scale_neighborhood(half, v)]
        return any(
            I.is_neighborhood(w.base) and I.leq(w.base, u.base) and I.leq(w.base, v.base)
            for w in candidates
        )

    rec.run("nbhd_directed", gen_pairs, directed)
    rec.run(
        "nbhd_closed",
        [(u, v, scalars[i % m]) for i, (u, v) in enumerate(gen_pairs)],
        lambda u, v, lam: I.is_neighborhood(I.add(u.base, v.base))
        and (lam == 0 or I.is_neighborhood(I.scale(lam, v.base))),
    )

    def bounded_below(a, v):
        rho = lower_bound_coefficient(I, a, v)
        return I.leq(zero, I.add(a, I.scale(rho, v.base)))

    rec.run("bounded_below", [(a, gens[i % g]) for i, a in enumerate(sample)], bounded_below)

    logger.info(
        f"Axiom check on {I.name}: {len(report.results) - len(report.failures)}/"
        f"{len(report.results)} laws passed over {n} elements"
    )
    return report
