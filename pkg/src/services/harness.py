"""Experiment runner: noisy Pexider triples, both engines, oracles and reports."""
import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from ..errors import (
    ConeStabError,
    ConfigError,
    HypothesisViolationError,
    InstanceArithmeticError,
    NonConvergenceError,
)
from ..models.config import BaseMapConfig, Engine, ExperimentConfig, NoiseConfig, NoiseKind
from ..models.domain import Point, SampleDomain, double_point, point_components, point_to_json
from ..models.element import INF, Element, Interval, element_to_json, scalar_to_json
from ..models.report import AxiomReport, RunReport, Tabulation
from ..utils.noise import NoiseSource
from .cone_core import ConeInstance, check_axioms, max_gap, symmetric_gap
from .cone_instances import (
    ExtendedRealsCone,
    IntervalCone,
    NormKind,
    VectorUcCone,
    instance_from_name,
)
from .normed_hyers import NormedPexiderInstance, classical_stabilize, tabulation_gap
from .stabilizer import PexiderInstance, stabilize, verify_hypothesis

logger = logging.getLogger(__name__)

RawMap = Callable[[Point], object]


def build_domain(config: ExperimentConfig) -> SampleDomain:
    """Grid domain closed under doubling up to the oracle depth N + offset."""
    return SampleDomain.grid(
        count=config.domain.count,
        spacing=Fraction(config.domain.spacing),
        depth=config.depth + config.oracle_offset,
        dimension=config.domain.dimension,
    )


def make_base_map(base: BaseMapConfig, instance: ConeInstance, dimension: int = 1) -> RawMap:
    """Additive base map x -> c*x (or matrix / interval variants) into the instance carrier.

    Raises:
        ConfigError: if the matrix shape does not fit the instance and domain
    """
    c = Fraction(base.coefficient)
    matrix = None
    if base.matrix is not None:
        matrix = [[Fraction(a) for a in row] for row in base.matrix]
        if len(matrix[0]) != dimension:
            raise ConfigError(
                f"Base matrix has {len(matrix[0])} columns, domain dimension is {dimension}"
            )

    if isinstance(instance, VectorUcCone):
        d = instance.dimension
        if matrix is not None and len(matrix) != d:
            raise ConfigError(f"Base matrix has {len(matrix)} rows, target dimension is {d}")

        def vector_map(x: Point) -> Tuple[Fraction, ...]:
            xs = point_components(x)
            if matrix is not None:
                return tuple(sum((a * b for a, b in zip(row, xs)), Fraction(0)) for row in matrix)
            return tuple(c * (i + 1) * xs[i % len(xs)] for i in range(d))

        return vector_map

    if isinstance(instance, IntervalCone):
        lo, hi = (Fraction(e) for e in base.interval) if base.interval else (c, c)

        def interval_map(x: Point) -> Interval:
            s = sum(point_components(x), Fraction(0))
            return Interval(s * lo, s * hi)

        return interval_map

    if matrix is not None and len(matrix) != 1:
        raise ConfigError("Scalar targets need a 1 x k base matrix")

    def scalar_map(x: Point) -> Fraction:
        xs = point_components(x)
        if matrix is not None:
            return sum((a * b for a, b in zip(matrix[0], xs)), Fraction(0))
        return c * sum(xs, Fraction(0))

    return scalar_map


def _shift(instance: ConeInstance, value, offset: Fraction, noise: Callable[[int], Fraction]):
    """Add a constant offset and per-component noise to a raw base value."""
    if isinstance(instance, VectorUcCone):
        return tuple(v + offset + noise(i) for i, v in enumerate(value))
    if isinstance(instance, IntervalCone):
        spread = abs(noise(0))
        return Interval(value.lo + offset - spread, value.hi + offset + spread)
    p = noise(0)
    if isinstance(instance, ExtendedRealsCone) and instance.nonneg:
        p = abs(p)
    return value + offset + p


def perturb(
    instance: ConeInstance,
    base: RawMap,
    noise: NoiseConfig,
    offsets: Sequence[float] = (0.0, 0.0),
    infinite_origin: bool = False,
) -> Tuple[RawMap, RawMap, RawMap]:
    """Noisy Pexider triple around an additive base.

    f = base + a + b + p_f, g = base + a + p_g, h = base + b + p_h with
    every |p| <= eps0, so the residual f(x+y) - g(x) - h(y) stays within 3 eps0.

    Args:
        instance: Target instance
        base: Additive base map
        noise: Noise family, magnitude and seed
        offsets: Pexider offsets (a, b)
        infinite_origin: Replace f(0) with +inf (extended reals only)

    Returns:
        (f, g, h) returning Elements of the instance
    """
    source = NoiseSource(noise)
    a, b = (Fraction(o) for o in offsets)
    channel_offsets = {"f": a + b, "g": a, "h": b}

    def channel(name: str) -> RawMap:
        def evaluate(x: Point) -> Element:
            if infinite_origin and name == "f" and all(c == 0 for c in point_components(x)):
                return instance.element(INF)
            raw = _shift(
                instance, base(x), channel_offsets[name], lambda i: source(name, i, x)
            )
            return instance.element(raw)

        return evaluate

    return channel("f"), channel("g"), channel("h")


def check_noise_margin(instance: ConeInstance, noise: NoiseConfig, v_scale) -> bool:
    """Whether v-scale covers the worst residual 3 eps0 (times sqrt(d) for Euclidean norms)."""
    needed = 3 * noise.magnitude
    if isinstance(instance, VectorUcCone) and instance.norm_kind is NormKind.EUCLIDEAN:
        needed *= math.sqrt(instance.dimension)
    if noise.kind is not NoiseKind.NONE and v_scale < needed:
        logger.warning(
            f"v-scale {v_scale} is below the worst residual {needed:.6g}; "
            "the hypothesis may fail"
        )
        return False
    return True


def oracle_limit(instance: ConeInstance, f: RawMap, x: Point, m: int) -> Element:
    """Direct f(2^M x) / 2^M, independent of the iteration kernel."""
    value = f(double_point(x, m))
    if not isinstance(value, Element):
        value = instance.element(value)
    return instance.scale(Fraction(1, 2**m), value)


def _table_gap(instance: ConeInstance, table: Tabulation, reference: Callable[[Point], Element]):
    return max_gap(symmetric_gap(instance, a, reference(x)) for x, a in table.items())


def _failure_entry(error: ConeStabError) -> dict:
    entry = error.to_dict()
    if isinstance(error, NonConvergenceError) and error.final_residual is not None:
        entry["final_residual"] = scalar_to_json(error.final_residual)
    if isinstance(error, InstanceArithmeticError) and error.witness:
        entry["witness"] = error.witness
    return entry


class ExperimentRunner:
    """Runs harness experiments and turns every library error into a structured failure."""

    def run(self, config: ExperimentConfig) -> RunReport:
        """Full pipeline for one configuration.

        Args:
            config: Validated experiment configuration

        Returns:
            RunReport (exit_code 0 on success)
        """
        started = time.perf_counter()
        report = RunReport(config=config.model_dump(mode="json", by_alias=True))
        try:
            self._execute(config, report)
        except ConeStabError as e:
            logger.error(f"Run failed ({e.kind}): {e}")
            report.failure = _failure_entry(e)
            report.exit_code = e.exit_code
            if isinstance(e, HypothesisViolationError) and e.report is not None:
                report.hypothesis = e.report
        except (ValueError, ArithmeticError) as e:
            logger.error(f"Run failed on invalid input: {e}")
            report.failure = {"error": "invalid input", "message": str(e), "exit_code": 1}
            report.exit_code = 1

        if config.include_timing:
            report.timing_seconds = time.perf_counter() - started
        return report

    def run_many(self, configs: Sequence[ExperimentConfig], workers: int = 1) -> List[RunReport]:
        """Run independent experiments, reports in input order."""
        if workers <= 1:
            return [self.run(c) for c in configs]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(self.run, configs))

    def _execute(self, config: ExperimentConfig, report: RunReport) -> None:
        instance = instance_from_name(config.instance_name, config.numeric_mode)
        domain = build_domain(config)
        base = make_base_map(config.base_map, instance, config.domain.dimension)
        check_noise_margin(instance, config.noise, config.v_scale)
        f, g, h = perturb(
            instance, base, config.noise, config.base_map.offsets, config.infinite_origin
        )

        wants_cone = config.engine in (Engine.CONE, Engine.BOTH)
        wants_normed = config.engine in (Engine.NORMED, Engine.BOTH)
        if wants_normed and not isinstance(instance, VectorUcCone):
            raise ConfigError(
                f"The normed engine needs a vector uc-cone, got {config.instance_name}"
            )

        pexider = PexiderInstance(instance, domain, f, g, h, instance.neighborhood(config.v_scale))
        report.hypothesis = verify_hypothesis(pexider)

        tables = []
        if wants_cone:
            report.stabilization = stabilize(pexider, config.stabilize_config())
            tables.append(report.stabilization.table)
        if wants_normed:
            normed = NormedPexiderInstance(
                instance, domain, f, g, h, epsilon=config.v_scale, r=config.r
            )
            report.normed = classical_stabilize(normed, config.normed_config())
            tables.append(report.normed.table)
        if wants_cone and wants_normed:
            report.cross_engine_gap = tabulation_gap(
                instance, report.stabilization.table, report.normed.table
            )

        table = tables[0]
        report.recovery_error = _table_gap(instance, table, lambda x: instance.element(base(x)))
        m = config.depth + config.oracle_offset
        report.oracle_max_gap = _table_gap(
            instance, table, lambda x: oracle_limit(instance, f, x, m)
        )
        logger.info(
            f"Run on {instance.name} finished: recovery error {report.recovery_error}, "
            f"oracle gap {report.oracle_max_gap}"
        )


def run(config: ExperimentConfig) -> RunReport:
    """Run one experiment with a fresh runner."""
    return ExperimentRunner().run(config)


def check_instance_axioms(
    name: str,
    sample_size: int = 200,
    scalar_count: int = 20,
    seed: int = 0,
    mode=None,
) -> AxiomReport:
    """check_axioms on a seeded sample of a named instance."""
    instance = instance_from_name(name) if mode is None else instance_from_name(name, mode)
    sample = instance.sample(sample_size, seed=seed)
    return check_axioms(instance, sample, instance.sample_scalars(scalar_count, seed=seed))


def report_to_json(report) -> str:
    """Serialize a RunReport or AxiomReport (stable key order)."""
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False)


def report_to_csv(report) -> str:
    """Tabulation rows (engine, x, A_of_x) of a RunReport, or one row per law of an AxiomReport."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if isinstance(report, AxiomReport):
        writer.writerow(["instance", "law", "passed", "checked"])
        for result in report.results:
            writer.writerow([report.instance, result.law, result.passed, result.checked])
        return buffer.getvalue()

    writer.writerow(["engine", "x", "A_of_x"])
    for engine, result in (("cone", report.stabilization), ("normed", report.normed)):
        if result is None:
            continue
        for x, a in result.table.items():
            writer.writerow(
                [engine, json.dumps(point_to_json(x)), json.dumps(element_to_json(a))]
            )
    return buffer.getvalue()


def export_report(report, filepath: Path, fmt: str = "json") -> None:
    """Write a report to a file.

    Args:
        report: RunReport or AxiomReport
        filepath: Output file path
        fmt: "json" or "csv"
    """
    text = report_to_csv(report) if fmt == "csv" else report_to_json(report)
    with open(filepath, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Exported report to {filepath}")
