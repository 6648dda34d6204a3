"""Classical normed route for uc-cones that are real vector spaces.

With a residual bound q(f(x+y) - g(x) - h(y)) <= eps the dyadic limit A
satisfies q(A(x) - f(x) + f(0)) <= 4 eps, and A sits inside neighborhoods
of radius 4r*eps + beta around f, 5r*eps + gamma around g and
5r*eps + delta_c around h. This is the only module that subtracts.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from ..constants import DEFAULT_R, MIN_PROBE
from ..errors import (
    HypothesisViolationError,
    InstanceArithmeticError,
    InvalidScalarError,
    NotVectorSpaceError,
)
from ..models.config import NormedConfig
from ..models.domain import Point, SampleDomain, add_points, double_point, point_to_json
from ..models.element import Element, Scalar, scalar_to_json
from ..models.report import HypothesisReport, NormedReport, Tabulation
from .cone_core import in_symmetric_nbhd
from .cone_instances import VectorUcCone
from .stabilizer import MapFn, PexiderInstance, dyadic_limit, hyers_term, uc_adapter
from .stabilizer import verify_additivity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormedPexiderInstance:
    """A triple (f, g, h) into a vector uc-cone with residual bound epsilon."""

    target: VectorUcCone
    domain: SampleDomain
    f: MapFn
    g: MapFn
    h: MapFn
    epsilon: Scalar
    r: Scalar = DEFAULT_R
    pexider: PexiderInstance = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not getattr(self.target, "vector_space", False):
            raise NotVectorSpaceError(f"{self.target.name} is not a real vector space")
        epsilon = self.target.coerce(self.epsilon)
        r = self.target.coerce(self.r)
        if epsilon <= 0:
            raise InvalidScalarError(f"epsilon must be positive, got {epsilon}")
        if r <= 1:
            raise InvalidScalarError(f"r must exceed 1, got {r}")
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "r", r)
        object.__setattr__(
            self, "pexider", uc_adapter(self.target, self.f, self.g, self.h, epsilon, self.domain)
        )

    def _vector(self, name: str, point: Point) -> Element:
        value = self.pexider.evaluate(name, point)
        if not value.value.is_vector:
            raise NotVectorSpaceError(f"{name}({point_to_json(point)}) is not a vector: {value!r}")
        return value

    def f_at(self, point: Point) -> Element:
        return self._vector("f", point)

    def g_at(self, point: Point) -> Element:
        return self._vector("g", point)

    def h_at(self, point: Point) -> Element:
        return self._vector("h", point)


@dataclass(frozen=True)
class DerivedResiduals:
    """The four specialized residuals at one point and their combination."""

    diagonal: Scalar  # q(f(2x) - g(x) - h(x))
    right_zero: Scalar  # q(f(x) - g(x) - h(0))
    left_zero: Scalar  # q(f(x) - g(0) - h(x))
    origin: Scalar  # q(f(0) - g(0) - h(0))
    combined: Scalar  # q(f(2x) - 2f(x) + f(0))

    def within(self, epsilon, slack=0) -> bool:
        """Each residual <= epsilon and the combination <= 4 epsilon (up to slack)."""
        singles = (self.diagonal, self.right_zero, self.left_zero, self.origin)
        return all(q <= epsilon + slack for q in singles) and self.combined <= 4 * epsilon + slack


def _residual(p: NormedPexiderInstance, fv: Element, gv: Element, hv: Element) -> Element:
    T = p.target
    return T.subtract(T.subtract(fv, gv), hv)


def q_residual(p: NormedPexiderInstance, x: Point, y: Point) -> Scalar:
    """q(f(x+y) - g(x) - h(y))."""
    return p.target.norm(_residual(p, p.f_at(add_points(x, y)), p.g_at(x), p.h_at(y)))


def derived_residuals(p: NormedPexiderInstance, x: Point) -> DerivedResiduals:
    """Residuals at (x, x), (x, 0), (0, x), (0, 0) and q(f(2x) - 2f(x) + f(0))."""
    T = p.target
    zero = p.domain.zero
    fx, f2x, f0 = p.f_at(x), p.f_at(double_point(x)), p.f_at(zero)
    gx, hx, g0, h0 = p.g_at(x), p.h_at(x), p.g_at(zero), p.h_at(zero)
    combined = T.add(T.subtract(f2x, T.scale(2, fx)), f0)
    return DerivedResiduals(
        diagonal=T.norm(_residual(p, f2x, gx, hx)),
        right_zero=T.norm(_residual(p, fx, gx, h0)),
        left_zero=T.norm(_residual(p, fx, g0, hx)),
        origin=T.norm(_residual(p, f0, g0, h0)),
        combined=T.norm(combined),
    )


def telescoping_check(p: NormedPexiderInstance, x: Point, m: int, n: int) -> bool:
    """Telescoped bound between depths m and n+1.

    q(f(2^(n+1) x)/2^(n+1) - f(2^m x)/2^m + sum_{k=m..n} f(0)/2^(k+1))
    <= sum_{k=m..n} 2 eps / 2^k
    """
    if not 0 <= m <= n:
        raise InvalidScalarError(f"Need 0 <= m <= n, got m={m}, n={n}")
    T = p.target
    f0 = p.f_at(p.domain.zero)
    origin_weight = Fraction(1, 2**m) - Fraction(1, 2 ** (n + 1))
    lhs = T.add(
        T.subtract(hyers_term(p, x, n + 1), hyers_term(p, x, m)),
        T.scale(origin_weight, f0),
    )
    rhs = sum((2 * p.epsilon / 2**k for k in range(m, n + 1)), T.coerce(0))
    return T.norm_within(lhs, rhs)


def telescoping_suite(p: NormedPexiderInstance, max_n: int) -> bool:
    """telescoping_check at every tabulated point for all 0 <= m <= n <= max_n."""
    max_n = min(max_n, p.domain.depth - 1)
    for x in p.domain.tabulated_points:
        for n in range(0, max_n + 1):
            for m in range(0, n + 1):
                if not telescoping_check(p, x, m, n):
                    logger.warning(f"Telescoping bound fails at x={point_to_json(x)}, m={m}, n={n}")
                    return False
    return True


def _positive_constant(T: VectorUcCone, r, value: Element):
    return max(r * T.norm(value), T.coerce(MIN_PROBE))


def classical_stabilize(
    p: NormedPexiderInstance, config: Optional[NormedConfig] = None
) -> NormedReport:
    """Dyadic limit with the normed-route constants and containments.

    Args:
        p: Normed Pexider triple
        config: Depth cap, tolerance, telescoping depth and worker count

    Returns:
        NormedReport

    Raises:
        HypothesisViolationError: if a sampled residual exceeds epsilon
        InstanceArithmeticError: if a derived residual bound fails
        NonConvergenceError: if the iteration leaves its certified bound
    """
    config = config or NormedConfig(r=float(p.r))
    T = p.target
    eps, r = p.epsilon, p.r
    zero = p.domain.zero

    hypothesis = HypothesisReport()
    for x, y in p.domain.pairs:
        hypothesis.checked += 1
        residual = _residual(p, p.f_at(add_points(x, y)), p.g_at(x), p.h_at(y))
        if not T.norm_within(residual, eps):
            hypothesis.failures.append(
                {
                    "x": point_to_json(x),
                    "y": point_to_json(y),
                    "q": scalar_to_json(T.norm(residual)),
                }
            )
    if not hypothesis.passed:
        raise HypothesisViolationError(
            f"Residual exceeds epsilon on {len(hypothesis.failures)} of {hypothesis.checked} pairs",
            report=hypothesis,
        )

    for x in p.domain.tabulated_points:
        if not p.domain.contains(double_point(x)):
            continue
        residuals = derived_residuals(p, x)
        if not residuals.within(eps, T.norm_slack):
            raise InstanceArithmeticError(
                f"Derived residual bound fails at x = {point_to_json(x)}",
                witness={"x": point_to_json(x), "residuals": repr(residuals)},
            )

    telescoping_passed = telescoping_suite(p, config.telescoping_depth)

    f0, g0, h0 = p.f_at(zero), p.g_at(zero), p.h_at(zero)
    q_f0 = T.norm(f0)
    limit = dyadic_limit(
        T,
        lambda x, n: hyers_term(p, x, n),
        p.domain.tabulated_points,
        config.depth,
        Fraction(config.tolerance),
        certified=lambda m: (4 * eps + q_f0) / 2**m,
        workers=config.workers,
    )

    beta = _positive_constant(T, r, f0)
    gamma = _positive_constant(T, r, T.subtract(f0, h0))
    delta_c = _positive_constant(T, r, T.subtract(f0, g0))
    radii = {
        "f": 4 * r * eps + beta,
        "g": 5 * r * eps + gamma,
        "h": 5 * r * eps + delta_c,
    }

    verdicts: Dict[str, bool] = {key: True for key in radii}
    sup_f = sup_g = sup_h = T.coerce(0)
    for x, a in limit.table.items():
        fx, gx, hx = p.f_at(x), p.g_at(x), p.h_at(x)
        centers = {"f": fx, "g": gx, "h": hx}
        for key, center in centers.items():
            ok = in_symmetric_nbhd(T, a, center, T.neighborhood(radii[key]))
            verdicts[key] = verdicts[key] and ok
        a_shift = T.add(a, f0)
        sup_f = max(sup_f, T.norm(T.subtract(a_shift, fx)))
        sup_g = max(sup_g, T.norm(T.subtract(a_shift, T.add(gx, h0))))
        sup_h = max(sup_h, T.norm(T.subtract(a_shift, T.add(hx, g0))))

    additivity = verify_additivity(
        T, limit.table, p.domain.pairs, Fraction(config.additivity_tolerance)
    )
    logger.info(
        f"Normed route on {T.name}: eps={eps}, sup_q_f={sup_f}, sup_q_g={sup_g}, "
        f"sup_q_h={sup_h}, verdicts={verdicts}"
    )
    return NormedReport(
        table=limit.table,
        epsilon=eps,
        r=r,
        beta=beta,
        gamma=gamma,
        delta_c=delta_c,
        sup_q_f=sup_f,
        sup_q_g=sup_g,
        sup_q_h=sup_h,
        verdicts=verdicts,
        iterations=limit.iterations,
        telescoping_passed=telescoping_passed,
        additivity_max_violation=additivity.max_gap,
    )


def tabulation_gap(T: VectorUcCone, a: Tabulation, b: Tabulation) -> Scalar:
    """Largest q(a(x) - b(x)) over the common points."""
    gaps = [T.norm(T.subtract(a[x], b[x])) for x in a if x in b]
    return max(gaps, default=T.coerce(0))
