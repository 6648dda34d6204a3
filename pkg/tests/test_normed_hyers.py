"""Tests for the classical normed route on vector uc-cones."""
from fractions import Fraction

import pytest

from src.errors import HypothesisViolationError, InvalidScalarError, NotVectorSpaceError
from src.models.config import NormedConfig
from src.services.cone_instances import NormKind, make_vector_uc
from src.services.normed_hyers import (
    NormedPexiderInstance,
    classical_stabilize,
    derived_residuals,
    q_residual,
    tabulation_gap,
    telescoping_check,
    telescoping_suite,
)
from tests.helpers import linear_triple

EPS = Fraction(1, 4)
SLACK = Fraction(1, 2**20)


def normed_instance(target, domain, epsilon=EPS, r=2, **kwargs):
    f, g, h = linear_triple(target, **kwargs)
    return NormedPexiderInstance(target, domain, f, g, h, epsilon, r=r)


class TestNormedInstance:
    def test_rejects_non_vector_targets(self, ext_reals, intervals, small_domain):
        for target in (ext_reals, intervals):
            with pytest.raises(NotVectorSpaceError):
                NormedPexiderInstance(target, small_domain, abs, abs, abs, EPS)

    @pytest.mark.parametrize("epsilon, r", [(0, 2), (-1, 2), (EPS, 1), (EPS, Fraction(1, 2))])
    def test_rejects_bad_scalars(self, vector_sup_1, small_domain, epsilon, r):
        f, g, h = linear_triple(vector_sup_1, magnitude=0)
        with pytest.raises(InvalidScalarError):
            NormedPexiderInstance(vector_sup_1, small_domain, f, g, h, epsilon, r=r)

    def test_scalars_are_coerced(self, vector_sup_1, small_domain):
        p = normed_instance(vector_sup_1, small_domain, epsilon=0.25)
        assert p.epsilon == EPS
        assert p.pexider.v.coefficient == EPS


class TestResiduals:
    def test_q_residual_of_square(self, vector_sup_1, small_domain):
        p = NormedPexiderInstance(
            vector_sup_1,
            small_domain,
            lambda x: x * x,
            lambda x: x * x / 2,
            lambda x: x * x / 2,
            EPS,
        )
        assert q_residual(p, Fraction(1), Fraction(1)) == 3
        assert q_residual(p, Fraction(0), Fraction(0)) == 0

    def test_exact_triple_has_zero_residuals(self, vector_sup_3, small_domain):
        p = normed_instance(vector_sup_3, small_domain, magnitude=0)
        for x in (Fraction(0), Fraction(1), Fraction(3)):
            residuals = derived_residuals(p, x)
            assert residuals.diagonal == residuals.right_zero == 0
            assert residuals.left_zero == residuals.origin == residuals.combined == 0

    def test_noisy_residuals_within_bounds(self, vector_sup_3, small_domain):
        p = normed_instance(vector_sup_3, small_domain, magnitude=0.08, anchor=False)
        for x in small_domain.tabulated_points:
            assert derived_residuals(p, x).within(EPS)


class TestTelescoping:
    def test_zero_span(self, vector_sup_1, small_domain):
        p = normed_instance(vector_sup_1, small_domain, magnitude=0.08)
        assert telescoping_check(p, Fraction(1), 0, 0)

    def test_rejects_reversed_depths(self, vector_sup_1, small_domain):
        p = normed_instance(vector_sup_1, small_domain, magnitude=0.08)
        with pytest.raises(InvalidScalarError):
            telescoping_check(p, Fraction(1), 3, 2)

    @pytest.mark.parametrize("dimension", [1, 3])
    def test_holds_up_to_twelve(self, small_domain, dimension):
        target = make_vector_uc(dimension, NormKind.SUP)
        p = normed_instance(target, small_domain, magnitude=0.08, anchor=False, offsets=(1, -2))
        assert telescoping_suite(p, 12)

    def test_detects_a_large_residual(self, vector_sup_1, small_domain):
        p = NormedPexiderInstance(
            vector_sup_1, small_domain, lambda x: x * x, lambda x: x, lambda x: x, EPS
        )
        assert not telescoping_check(p, Fraction(1), 0, 2)


class TestClassicalStabilize:
    @pytest.mark.parametrize("dimension", [1, 3])
    def test_bounds_on_noisy_instances(self, small_domain, dimension):
        target = make_vector_uc(dimension, NormKind.SUP)
        p = normed_instance(target, small_domain, magnitude=0.08)
        report = classical_stabilize(p, NormedConfig(depth=24))
        assert report.sup_q_f <= 4 * EPS + SLACK
        assert report.sup_q_g <= 5 * EPS + SLACK
        assert report.sup_q_h <= 5 * EPS + SLACK
        assert report.telescoping_passed
        assert all(report.verdicts.values())
        assert set(report.verdicts) == {"f", "g", "h"}

    def test_constants_use_the_origin_values(self, vector_sup_1, small_domain):
        p = normed_instance(vector_sup_1, small_domain, magnitude=0, offsets=(1, 2))
        report = classical_stabilize(p, NormedConfig(depth=24))
        # f(0) = 3, g(0) = 1, h(0) = 2
        assert report.beta == 6
        assert report.gamma == 2
        assert report.delta_c == 4
        assert report.sup_q_f <= SLACK
        assert report.to_dict()["constants"] == "artifact-minimal"

    def test_constants_are_floored(self, vector_sup_1, small_domain):
        p = normed_instance(vector_sup_1, small_domain, magnitude=0)
        report = classical_stabilize(p, NormedConfig(depth=24))
        assert report.beta == report.gamma == report.delta_c == SLACK

    def test_recovers_the_base_map(self, vector_sup_3, small_domain):
        p = normed_instance(vector_sup_3, small_domain, magnitude=0.08)
        report = classical_stabilize(p, NormedConfig(depth=24))
        for x, a in report.table.items():
            expected = vector_sup_3.vector((3 * x, 6 * x, 9 * x))
            assert vector_sup_3.norm(vector_sup_3.subtract(a, expected)) <= Fraction(1, 2**18)
        assert report.additivity_max_violation <= Fraction(1, 2**18)

    def test_hypothesis_violation(self, vector_sup_1, small_domain):
        p = NormedPexiderInstance(
            vector_sup_1, small_domain, lambda x: x * x, lambda x: x, lambda x: x, EPS
        )
        with pytest.raises(HypothesisViolationError) as info:
            classical_stabilize(p, NormedConfig(depth=24))
        assert info.value.report.failures

    def test_shallow_and_deep_runs_agree(self, vector_sup_3, small_domain):
        p = normed_instance(vector_sup_3, small_domain, magnitude=0.08, seed=5)
        shallow = classical_stabilize(p, NormedConfig(depth=18)).table
        deep = classical_stabilize(p, NormedConfig(depth=24)).table
        assert tabulation_gap(vector_sup_3, shallow, deep) <= Fraction(1, 2**15)
        assert tabulation_gap(vector_sup_3, deep, deep) == 0
