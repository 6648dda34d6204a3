"""Report models produced by the checkers and engines."""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

from ..constants import SCHEMA_VERSION
from .domain import Point, point_to_json
from .element import INF, Element, element_to_json, scalar_to_json


@dataclass
class LawResult:
    """Outcome of one algebraic or order law over a sample."""

    law: str
    passed: bool
    checked: int
    witness: Optional[Dict[str, str]] = None

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        data = {"law": self.law, "passed": self.passed, "checked": self.checked}
        if self.witness is not None:
            data["witness"] = self.witness
        return data


@dataclass
class AxiomReport:
    """Per-law pass/fail listing for one cone instance."""

    instance: str
    results: List[LawResult] = field(default_factory=list)

    @property
    def failures(self) -> List[LawResult]:
        """Laws that failed on the sample."""
        return [r for r in self.results if not r.passed]

    @property
    def passed(self) -> bool:
        """Whether every law held."""
        return not self.failures

    def result(self, law: str) -> LawResult:
        """Look up the result of one law by name."""
        return next(r for r in self.results if r.law == law)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "schema": SCHEMA_VERSION,
            "instance": self.instance,
            "passed": self.passed,
            "laws": [r.to_dict() for r in self.results],
            "failures": [r.law for r in self.failures],
        }


@dataclass
class HypothesisReport:
    """Pairwise evaluation of f(x+y) in v(g(x)+h(y))v."""

    checked: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Whether every sampled pair satisfied the hypothesis."""
        return not self.failures

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {"passed": self.passed, "checked": self.checked, "failures": self.failures}


@dataclass
class BoundCheckReport:
    """Outcome of a family of implied inequalities (all must hold)."""

    name: str
    checked: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Whether no inequality was violated."""
        return not self.violations

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
        }


class Tabulation:
    """Values of a map on an ordered list of domain points."""

    def __init__(self, entries: Optional[List[Tuple[Point, Element]]] = None):
        self._points: List[Point] = []
        self._values: Dict[Point, Element] = {}
        for point, value in entries or []:
            self[point] = value

    def __setitem__(self, point: Point, value: Element) -> None:
        if point not in self._values:
            self._points.append(point)
        self._values[point] = value

    def __getitem__(self, point: Point) -> Element:
        return self._values[point]

    def __contains__(self, point: object) -> bool:
        return point in self._values

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __len__(self) -> int:
        return len(self._points)

    def items(self) -> List[Tuple[Point, Element]]:
        """(point, value) pairs in tabulation order."""
        return [(p, self._values[p]) for p in self._points]

    def to_rows(self) -> List[dict]:
        """Rows of the "table" field of the JSON reports."""
        return [{"x": point_to_json(p), "A_of_x": element_to_json(v)} for p, v in self.items()]


@dataclass
class AdditivityReport:
    """Largest symmetric gap between A(x+y) and A(x)+A(y)."""

    max_gap: Any
    tolerance: Any
    checked: int
    worst_pair: Optional[Tuple[Point, Point]] = None

    @property
    def passed(self) -> bool:
        """Whether the largest gap is within tolerance."""
        return self.max_gap is not INF and self.max_gap <= self.tolerance

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "max_gap": scalar_to_json(self.max_gap),
            "passed": self.passed,
            "checked": self.checked,
        }


@dataclass
class StabilizationReport:
    """Output of the order-theoretic stabilization engine."""

    table: Tabulation
    lam: Any
    w: Element
    delta: Any
    iterations: int
    cauchy_residuals: List[Any]
    verdicts: Dict[str, bool]
    additivity_max_violation: Any
    converged: bool = True
    final_residual: Any = 0

    @property
    def all_verdicts(self) -> bool:
        """Whether all three containments hold."""
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "lambda": scalar_to_json(self.lam),
            "w": element_to_json(self.w),
            "delta": scalar_to_json(self.delta),
            "iterations": self.iterations,
            "converged": self.converged,
            "final_residual": scalar_to_json(self.final_residual),
            "cauchy_residuals": [scalar_to_json(r) for r in self.cauchy_residuals],
            "verdicts": dict(self.verdicts),
            "additivity_max_violation": scalar_to_json(self.additivity_max_violation),
            "table": self.table.to_rows(),
        }


@dataclass
class NormedReport:
    """Output of the classical normed route."""

    table: Tabulation
    epsilon: Any
    r: Any
    beta: Any
    gamma: Any
    delta_c: Any
    sup_q_f: Any
    sup_q_g: Any
    sup_q_h: Any
    verdicts: Dict[str, bool]
    iterations: int
    telescoping_passed: bool
    additivity_max_violation: Any
    constants: str = "artifact-minimal"

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "epsilon": scalar_to_json(self.epsilon),
            "r": scalar_to_json(self.r),
            "beta": scalar_to_json(self.beta),
            "gamma": scalar_to_json(self.gamma),
            "delta_c": scalar_to_json(self.delta_c),
            "sup_q_f": scalar_to_json(self.sup_q_f),
            "sup_q_g": scalar_to_json(self.sup_q_g),
            "sup_q_h": scalar_to_json(self.sup_q_h),
            "verdicts": dict(self.verdicts),
            "iterations": self.iterations,
            "telescoping_passed": self.telescoping_passed,
            "additivity_max_violation": scalar_to_json(self.additivity_max_violation),
            "constants": self.constants,
            "table": self.table.to_rows(),
        }


@dataclass
class RunReport:
    """Everything one harness experiment produced."""

    config: dict
    exit_code: int = 0
    hypothesis: Optional[HypothesisReport] = None
    stabilization: Optional[StabilizationReport] = None
    normed: Optional[NormedReport] = None
    recovery_error: Any = None
    oracle_max_gap: Any = None
    cross_engine_gap: Any = None
    failure: Optional[dict] = None
    timing_seconds: Optional[float] = None

    @property
    def ok(self) -> bool:
        """Whether the pipeline finished without a structured failure."""
        return self.failure is None

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        data: Dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "status": "ok" if self.ok else "failure",
            "exit_code": self.exit_code,
            "config": self.config,
        }
        if self.hypothesis is not None:
            data["hypothesis"] = self.hypothesis.to_dict()
        if self.stabilization is not None:
            data["stabilization"] = self.stabilization.to_dict()
        if self.normed is not None:
            data["normed"] = self.normed.to_dict()
        if self.recovery_error is not None:
            data["recovery_error"] = scalar_to_json(self.recovery_error)
        if self.oracle_max_gap is not None:
            data["oracle_max_gap"] = scalar_to_json(self.oracle_max_gap)
        if self.cross_engine_gap is not None:
            data["cross_engine_gap"] = scalar_to_json(self.cross_engine_gap)
        if self.failure is not None:
            data["failure"] = self.failure
        if self.timing_seconds is not None:
            data["timing_seconds"] = self.timing_seconds
        return data
