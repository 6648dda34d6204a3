"""Order-theoretic stabilization of the Pexider equation f(x+y) = g(x) + h(y).

Given a triple whose residual lies in the symmetric neighborhood v(.)v of a
bounded v, build the additive approximant A(x) = lim f(2^n x)/2^n on a
sampled domain and certify the sandwich containments with
delta = 4(lambda + 2). No code path here subtracts or cancels.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import (
    CandidateRejectedError,
    DomainError,
    HypothesisViolationError,
    InstanceArithmeticError,
    InvalidScalarError,
    NonConvergenceError,
    NotUcConeError,
    UnboundedValueError,
)
from ..models.config import StabilizeConfig
from ..models.domain import (
    Point,
    PointPair,
    SampleDomain,
    add_points,
    double_point,
    point_to_json,
    scale_point,
)
from ..models.element import INF, Element, NeighborhoodElement, element_to_json
from ..models.report import (
    AdditivityReport,
    BoundCheckReport,
    HypothesisReport,
    StabilizationReport,
    Tabulation,
)
from .cone_core import (
    ConeInstance,
    gap_within,
    in_symmetric_nbhd,
    lower_bound_coefficient,
    max_gap,
    symmetric_gap,
    upper_bound_coefficient,
)

logger = logging.getLogger(__name__)

MapFn = Callable[[Point], object]

SANDWICH_KEYS = ("f", "g_plus_h0", "h_plus_g0")


@dataclass(frozen=True)
class PexiderInstance:
    """A triple (f, g, h) on a sampled domain with values in a target cone.

    Maps may return Elements of the target or raw carrier values. Evaluation
    outside the sampled domain raises DomainError.
    """

    target: ConeInstance
    domain: SampleDomain
    f: MapFn
    g: MapFn
    h: MapFn
    v: NeighborhoodElement
    _cache: Dict[Tuple[str, Point], Element] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        self.target.check(self.v.base)
        if not self.domain.contains(self.domain.zero):
            raise DomainError("The sampled domain must contain 0")
        if upper_bound_coefficient(self.target, self.v.base, self.target.neighborhood(1)) is None:
            raise UnboundedValueError("unbounded v")
        f0 = self.f_at(self.domain.zero)
        if upper_bound_coefficient(self.target, f0, self.target.neighborhood(1)) is None:
            raise UnboundedValueError("unbounded f(0)")

    def evaluate(self, name: str, point: Point) -> Element:
        """Evaluate one of f, g, h at a sampled point."""
        key = (name, point)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if not self.domain.contains(point):
            raise DomainError(f"{name}({point_to_json(point)}) is outside the sampled domain")
        value = getattr(self, name)(point)
        if not isinstance(value, Element):
            value = self.target.element(value)
        self.target.check(value)
        self._cache[key] = value
        return value

    def f_at(self, point: Point) -> Element:
        return self.evaluate("f", point)

    def g_at(self, point: Point) -> Element:
        return self.evaluate("g", point)

    def h_at(self, point: Point) -> Element:
        return self.evaluate("h", point)


def _pair_witness(x: Point, y: Point, **values: Element) -> dict:
    witness = {"x": point_to_json(x), "y": point_to_json(y)}
    witness.update({k: element_to_json(v) for k, v in values.items()})
    return witness


def verify_hypothesis(
    p: PexiderInstance, pairs: Optional[Iterable[PointPair]] = None
) -> HypothesisReport:
    """Check f(x+y) in v(g(x)+h(y))v on every pair.

    Args:
        p: Pexider triple
        pairs: Tested pairs (defaults to the domain's pairs)

    Returns:
        HypothesisReport listing each failing pair
    """
    T = p.target
    report = HypothesisReport()
    for x, y in p.domain.pairs if pairs is None else pairs:
        lhs = p.f_at(add_points(x, y))
        rhs = T.add(p.g_at(x), p.h_at(y))
        report.checked += 1
        if not in_symmetric_nbhd(T, lhs, rhs, p.v):
            report.failures.append(_pair_witness(x, y, f_of_sum=lhs, g_plus_h=rhs))

    if report.passed:
        logger.info(f"Hypothesis holds on {report.checked} pairs")
    else:
        logger.warning(f"Hypothesis fails on {len(report.failures)} of {report.checked} pairs")
    return report


def derive_single_function_bounds(
    p: PexiderInstance, pairs: Optional[Iterable[PointPair]] = None
) -> Tuple[Element, BoundCheckReport]:
    """Return w = 4v and recheck the two single-function inequalities.

    f(0) + f(x+y) <= 4v + f(x) + f(y) and f(x) + f(y) <= 4v + f(x+y) + f(0)
    follow from the hypothesis; a violation means instance arithmetic is broken.

    Raises:
        InstanceArithmeticError: on the first violated inequality
    """
    T = p.target
    w = T.scale(4, p.v.base)
    f0 = p.f_at(p.domain.zero)
    report = BoundCheckReport(name="single_function")

    for x, y in p.domain.pairs if pairs is None else pairs:
        fx, fy, fxy = p.f_at(x), p.f_at(y), p.f_at(add_points(x, y))
        report.checked += 2
        if not T.leq(T.add(f0, fxy), T.add(w, T.add(fx, fy))):
            report.violations.append({"inequality": "upper", **_pair_witness(x, y, fx=fx, fy=fy)})
        if not T.leq(T.add(fx, fy), T.add(w, T.add(fxy, f0))):
            report.violations.append({"inequality": "lower", **_pair_witness(x, y, fx=fx, fy=fy)})

    if not report.passed:
        raise InstanceArithmeticError(
            f"Single-function bound violated on {len(report.violations)} checks",
            witness=report.violations[0],
        )
    return w, report


def find_lambda(target: ConeInstance, f0: Element, w: NeighborhoodElement):
    """Minimal lambda >= 0 with f(0) <= lambda*w and 0 <= f(0) + lambda*w.

    Raises:
        UnboundedValueError: if f(0) is not upper bounded
    """
    zero = target.zero()
    floor = target.coerce(0)

    if target.leq(f0, zero):
        lam_upper = floor
    else:
        lam_upper = upper_bound_coefficient(target, f0, w, floor=floor)
        if lam_upper is None:
            raise UnboundedValueError("unbounded f(0)")

    if target.leq(zero, f0):
        lam_lower = floor
    else:
        lam_lower = lower_bound_coefficient(target, f0, w, floor=floor)

    lam = max(lam_upper, lam_lower)
    logger.info(f"lambda = {lam} for f(0) = {f0!r}")
    return lam


def hyers_term(p, x: Point, n: int) -> Element:
    """f(2^n x) / 2^n."""
    if n < 0:
        raise InvalidScalarError(f"Depth must be nonnegative, got {n}")
    return p.target.scale(Fraction(1, 2**n), p.f_at(double_point(x, n)))


def _base_points_for(p, x: Optional[Point], n_max: int) -> Sequence[Point]:
    if n_max > p.domain.depth:
        raise DomainError(f"Depth {n_max} exceeds the sampled depth {p.domain.depth}")
    return [x] if x is not None else p.domain.tabulated_points


def check_induction_bounds(
    p: PexiderInstance, lam, w: NeighborhoodElement, x: Optional[Point] = None, n_max: int = 20
) -> BoundCheckReport:
    """Check f(2^n x)/2^n <= f(x) + (1 - 2^-n)(lambda+1)w and the mirrored bound.

    Args:
        p: Pexider triple
        lam: lambda from find_lambda
        w: The neighborhood element 4v
        x: Single point to check (all tabulated points if None)
        n_max: Largest depth checked

    Raises:
        InstanceArithmeticError: on the first violated inequality
    """
    T = p.target
    report = BoundCheckReport(name="induction")

    for point in _base_points_for(p, x, n_max):
        fx = p.f_at(point)
        for n in range(1, n_max + 1):
            term = hyers_term(p, point, n)
            slack = T.scale((1 - Fraction(1, 2**n)) * (lam + 1), w.base)
            report.checked += 2
            if not T.leq(term, T.add(fx, slack)):
                report.violations.append({"x": point_to_json(point), "n": n, "direction": "upper"})
            if not T.leq(fx, T.add(term, slack)):
                report.violations.append({"x": point_to_json(point), "n": n, "direction": "lower"})

    if not report.passed:
        raise InstanceArithmeticError(
            f"Induction bound violated on {len(report.violations)} checks",
            witness=report.violations[0],
        )
    logger.debug(f"Induction bounds hold on {report.checked} checks")
    return report


def check_cauchy_rate(
    p: PexiderInstance,
    lam,
    w: NeighborhoodElement,
    x: Optional[Point] = None,
    m_max: int = 20,
    k_max: int = 4,
) -> BoundCheckReport:
    """Check that depths m and m+k stay within 2^-m (lambda+1)w in both directions.

    Raises:
        InstanceArithmeticError: on the first violated inequality
    """
    T = p.target
    report = BoundCheckReport(name="cauchy_rate")
    depth = p.domain.depth

    for point in _base_points_for(p, x, min(m_max, depth)):
        for m in range(0, min(m_max, depth) + 1):
            a_m = hyers_term(p, point, m)
            slack = T.scale(Fraction(1, 2**m) * (lam + 1), w.base)
            for k in range(1, k_max + 1):
                if m + k > depth:
                    break
                a_mk = hyers_term(p, point, m + k)
                report.checked += 2
                if not (T.leq(a_mk, T.add(a_m, slack)) and T.leq(a_m, T.add(a_mk, slack))):
                    report.violations.append({"x": point_to_json(point), "m": m, "k": k})

    if not report.passed:
        raise InstanceArithmeticError(
            f"Cauchy rate violated on {len(report.violations)} checks",
            witness=report.violations[0],
        )
    return report


@dataclass
class LimitResult:
    """Output of the dyadic iteration kernel."""

    table: Tabulation
    iterations: int
    residuals: List
    converged: bool
    final_residual: object


@dataclass
class _PointLimit:
    value: Element
    depth: int
    previous_depth: int
    residuals: List
    converged: bool


def _depth_schedule(depth: int) -> List[int]:
    schedule = list(range(2, depth + 1, 2))
    if depth % 2 or not schedule:
        schedule.append(depth)
    return schedule


def _iterate_point(
    target: ConeInstance,
    term: Callable[[Point, int], Element],
    x: Point,
    depth: int,
    tolerance,
) -> _PointLimit:
    previous = term(x, 0)
    residuals = []
    n = last = 0
    for step in _depth_schedule(depth):
        last, n = n, step
        current = term(x, n)
        gap = symmetric_gap(target, current, previous)
        residuals.append(gap)
        previous = current
        if gap_within(gap, tolerance):
            return _PointLimit(current, n, last, residuals, True)
    return _PointLimit(previous, n, last, residuals, False)


def dyadic_limit(
    target: ConeInstance,
    term: Callable[[Point, int], Element],
    points: Sequence[Point],
    depth: int,
    tolerance,
    certified: Callable[[int], object],
    workers: int = 1,
) -> LimitResult:
    """Run the dyadic iteration at every point until consecutive even depths agree.

    Args:
        target: Target instance
        term: (x, n) -> n-th iterate at x
        points: Points to tabulate, in report order
        depth: Depth cap N
        tolerance: Gap that stops the iteration at a point
        certified: m -> proven bound on the gap between depth m and any deeper iterate
        workers: Threads evaluating disjoint points

    Returns:
        LimitResult; converged is False when the cap was hit inside the certified bound

    Raises:
        NonConvergenceError: when a residual is infinite or exceeds its certified bound
    """
    tolerance = target.coerce(tolerance)

    def run_point(x: Point) -> _PointLimit:
        return _iterate_point(target, term, x, depth, tolerance)

    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_point, points))
    else:
        results = [run_point(x) for x in points]

    unit = target.neighborhood(1)
    table = Tabulation()
    worst = target.coerce(0)
    for x, r in zip(points, results):
        table[x] = r.value
        final = r.residuals[-1] if r.residuals else target.coerce(0)
        if upper_bound_coefficient(target, r.value, unit) is None:
            raise NonConvergenceError(
                f"Iterates at x = {point_to_json(x)} are unbounded", final_residual=INF
            )
        if not r.converged:
            bound = certified(r.previous_depth) + target.slack
            if not gap_within(final, bound):
                raise NonConvergenceError(
                    f"Residual {final} at x = {point_to_json(x)} exceeds certified bound {bound}",
                    final_residual=final,
                )
        worst = max_gap([final], worst)

    steps = max((len(r.residuals) for r in results), default=0)
    residuals = [
        max_gap(r.residuals[i] for r in results if i < len(r.residuals)) for i in range(steps)
    ]
    converged = all(r.converged for r in results)
    iterations = max((r.depth for r in results), default=0)
    if not converged:
        logger.warning(
            f"Depth cap {depth} reached before tolerance {tolerance}; final residual {worst}"
        )
    return LimitResult(table, iterations, residuals, converged, worst)


def check_sandwich(p: PexiderInstance, table: Tabulation, delta) -> Dict[str, bool]:
    """Evaluate the three containments of A against f, g + h(0) and h + g(0).

    A(x) in (delta v)(f(x))(delta v), and A(x) in ((1+delta)v)(g(x)+h(0))((1+delta)v)
    together with the same radius around h(x) + g(0).
    """
    T = p.target
    zero = p.domain.zero
    g0, h0 = p.g_at(zero), p.h_at(zero)
    inner = T.scale_neighborhood(delta, p.v)
    outer = T.scale_neighborhood(1 + delta, p.v)

    verdicts = {key: True for key in SANDWICH_KEYS}
    for x, a in table.items():
        checks = {
            "f": in_symmetric_nbhd(T, a, p.f_at(x), inner),
            "g_plus_h0": in_symmetric_nbhd(T, a, T.add(p.g_at(x), h0), outer),
            "h_plus_g0": in_symmetric_nbhd(T, a, T.add(p.h_at(x), g0), outer),
        }
        for key, ok in checks.items():
            if not ok and verdicts[key]:
                logger.warning(f"Sandwich {key} fails at x = {point_to_json(x)}")
            verdicts[key] = verdicts[key] and ok
    return verdicts


def verify_additivity(
    target: ConeInstance, table: Tabulation, pairs: Iterable[PointPair], tol
) -> AdditivityReport:
    """Largest symmetric gap between A(x+y) and A(x) + A(y).

    Raises:
        DomainError: if x, y or x+y is not tabulated
    """
    worst = target.coerce(0)
    worst_pair = None
    checked = 0
    for x, y in pairs:
        s = add_points(x, y)
        for point in (x, y, s):
            if point not in table:
                raise DomainError(f"A({point_to_json(point)}) is not tabulated")
        gap = symmetric_gap(target, table[s], target.add(table[x], table[y]))
        checked += 1
        if gap is INF or gap > worst:
            worst, worst_pair = gap, (x, y)
            if gap is INF:
                break
    return AdditivityReport(
        max_gap=worst, tolerance=target.coerce(tol), checked=checked, worst_pair=worst_pair
    )


def stabilize(p: PexiderInstance, config: Optional[StabilizeConfig] = None) -> StabilizationReport:
    """Construct the additive approximant and certify its bounds.

    Args:
        p: Pexider triple
        config: Depth cap, tolerance, additivity tolerance and worker count

    Returns:
        StabilizationReport

    Raises:
        HypothesisViolationError: if the hypothesis fails on a sampled pair
        UnboundedValueError: if f(0) is not bounded
        NonConvergenceError: if the iteration leaves its certified bound
        DomainError: if the sampled depth is below the depth cap
    """
    config = config or StabilizeConfig()
    T = p.target

    hypothesis = verify_hypothesis(p)
    if not hypothesis.passed:
        raise HypothesisViolationError(
            f"Hypothesis fails on {len(hypothesis.failures)} of {hypothesis.checked} pairs",
            report=hypothesis,
        )

    derive_single_function_bounds(p)
    w = T.scale_neighborhood(4, p.v)
    lam = find_lambda(T, p.f_at(p.domain.zero), w)
    delta = 4 * (lam + 2)

    depth = config.depth
    if p.domain.depth < depth:
        raise DomainError(f"Depth cap {depth} exceeds the sampled depth {p.domain.depth}")
    check_induction_bounds(p, lam, w, n_max=depth)

    limit = dyadic_limit(
        T,
        lambda x, n: hyers_term(p, x, n),
        p.domain.tabulated_points,
        depth,
        Fraction(config.tolerance),
        certified=lambda m: Fraction(1, 2**m) * (lam + 1) * w.coefficient,
        workers=config.workers,
    )
    verdicts = check_sandwich(p, limit.table, delta)
    additivity = verify_additivity(
        T, limit.table, p.domain.pairs, Fraction(config.additivity_tolerance)
    )

    logger.info(
        f"Stabilized {len(limit.table)} points on {T.name}: lambda={lam}, delta={delta}, "
        f"depth={limit.iterations}, additivity gap={additivity.max_gap}"
    )
    return StabilizationReport(
        table=limit.table,
        lam=lam,
        w=w.base,
        delta=delta,
        iterations=limit.iterations,
        cauchy_residuals=limit.residuals,
        verdicts=verdicts,
        additivity_max_violation=additivity.max_gap,
        converged=limit.converged,
        final_residual=limit.final_residual,
    )


def verify_uniqueness(
    p: PexiderInstance, a1: Tabulation, a2: Tabulation, tol, delta=None
) -> bool:
    """Whether two admissible candidates agree within tol on their common points.

    Each candidate must satisfy the delta-sandwich against (f, g, h) and be
    additive within tol on the domain's pairs it tabulates.

    Raises:
        CandidateRejectedError: if a candidate fails either precondition
    """
    T = p.target
    if delta is None:
        delta = 4 * (find_lambda(T, p.f_at(p.domain.zero), T.scale_neighborhood(4, p.v)) + 2)

    for label, candidate in (("first", a1), ("second", a2)):
        verdicts = check_sandwich(p, candidate, delta)
        if not all(verdicts.values()):
            failed = [k for k, ok in verdicts.items() if not ok]
            raise CandidateRejectedError(f"The {label} candidate fails the sandwich: {failed}")
        pairs = [
            (x, y)
            for x, y in p.domain.pairs
            if x in candidate and y in candidate and add_points(x, y) in candidate
        ]
        additivity = verify_additivity(T, candidate, pairs, tol)
        if not additivity.passed:
            raise CandidateRejectedError(
                f"The {label} candidate is not additive (gap {additivity.max_gap})"
            )

    common = [x for x in a1 if x in a2]
    gap = max_gap(symmetric_gap(T, a1[x], a2[x]) for x in common)
    return gap_within(gap, T.coerce(tol))


def jensen_adapter(
    f: MapFn, v: NeighborhoodElement, target: ConeInstance, domain: SampleDomain
) -> PexiderInstance:
    """Pexider triple (f, g, g) with g(x) = f(2x)/2 for a Jensen-type f.

    The triple lives on the domain with one doubling level less, so that
    2x stays sampled.

    Raises:
        DomainError: if the domain has no doubling level to spare
    """
    if domain.depth < 1:
        raise DomainError("Jensen reduction needs a domain closed under doubling")

    def half_doubled(x: Point) -> Element:
        doubled = double_point(x)
        if not domain.contains(doubled):
            raise DomainError(f"f({point_to_json(doubled)}) is outside the sampled domain")
        value = f(doubled)
        if not isinstance(value, Element):
            value = target.element(value)
        return target.scale(Fraction(1, 2), value)

    return PexiderInstance(target, domain.shrink(1), f, half_doubled, half_doubled, v)


def linear_adapter(
    f: MapFn, alpha, v: NeighborhoodElement, target: ConeInstance, domain: SampleDomain
) -> PexiderInstance:
    """Pexider triple (f, g, f) with g(x) = alpha * f(x/alpha).

    The domain must sample x/alpha for every point g is evaluated at;
    SampleDomain.with_points adds such points without tabulating them.

    Raises:
        InvalidScalarError: if alpha <= 0
        DomainError: when g is evaluated at x and x/alpha is not sampled
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise InvalidScalarError(f"alpha must be positive, got {alpha}")

    def rescaled(x: Point) -> Element:
        shrunk = scale_point(x, 1 / alpha)
        if not domain.contains(shrunk):
            raise DomainError(f"f({point_to_json(shrunk)}) is outside the sampled domain")
        value = f(shrunk)
        if not isinstance(value, Element):
            value = target.element(value)
        return target.scale(alpha, value)

    return PexiderInstance(target, domain, f, rescaled, f, v)


def uc_adapter(
    target: ConeInstance, f: MapFn, g: MapFn, h: MapFn, epsilon, domain: SampleDomain
) -> PexiderInstance:
    """Pexider triple with v = epsilon * w for a uc-cone (or epsilon in the extended reals).

    Raises:
        NotUcConeError: if the target is not generated by a single element
    """
    if not target.uc_cone:
        raise NotUcConeError(f"{target.name} is not a uc-cone")
    return PexiderInstance(target, domain, f, g, h, target.neighborhood(epsilon))
