"""Tests for the shipped cone instances."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import (
    ConfigError,
    InstanceMismatchError,
    InvalidScalarError,
    NotUcConeError,
    NotVectorSpaceError,
)
from src.models.element import INF, Ball, Interval, NumericMode
from src.services.cone_core import check_axioms
from src.services.cone_instances import (
    ExtendedRealsCone,
    IntervalCone,
    NormKind,
    VectorUcCone,
    instance_from_name,
    make_extended_reals,
    make_vector_uc,
    seminorm_q,
    sqrt_upper,
)
from tests.helpers import dyadics, nonneg_dyadics

SHIPPED = ["ext-reals", "ext-reals-nonneg", "vector-uc:3:sup", "vector-uc:2:euclidean", "intervals"]


@pytest.mark.parametrize("name", SHIPPED)
def test_axioms_pass_on_seeded_sample(name):
    instance = instance_from_name(name)
    report = check_axioms(instance, instance.sample(200, seed=11), instance.sample_scalars(20))
    assert report.passed, report.to_dict()["failures"]
    assert all(r.checked > 0 for r in report.results if r.law != "order_transitive")


@pytest.mark.parametrize("name", ["ext-reals", "vector-uc:2:sup", "intervals"])
def test_axioms_pass_in_float_mode(name):
    instance = instance_from_name(name, NumericMode.FLOAT)
    report = check_axioms(instance, instance.sample(100, seed=3), instance.sample_scalars(12))
    assert report.passed, report.to_dict()["failures"]


class TestExtendedReals:
    def test_factory_flags(self):
        R = make_extended_reals()
        assert isinstance(R, ExtendedRealsCone)
        assert R.separated and R.complete and R.antisymmetric
        assert R.name == "ext-reals"

    def test_epsilon_is_positive(self, ext_reals):
        for eps in (Fraction(1, 2**30), Fraction(1), Fraction(10**6)):
            assert ext_reals.leq(ext_reals.zero(), ext_reals.element(eps))

    def test_float_infinity_maps_to_top(self, ext_reals):
        assert ext_reals.element(float("inf")).value is INF

    @pytest.mark.parametrize("bad", [float("nan"), float("-inf")])
    def test_rejects_nan_and_minus_infinity(self, ext_reals, bad):
        with pytest.raises(InvalidScalarError):
            ext_reals.element(bad)

    def test_nonneg_rejects_negatives(self, nonneg_reals):
        with pytest.raises(InvalidScalarError):
            nonneg_reals.element(-1)

    def test_natural_preorder_matches_order(self, nonneg_reals):
        R = nonneg_reals
        grid = [Fraction(k, 4) for k in range(17)] + [INF]
        for a in grid:
            for b in grid:
                ea, eb = R.element(a), R.element(b)
                witnessed = any(R.equal(R.add(ea, R.element(c)), eb) for c in grid)
                assert witnessed == R.leq(ea, eb), (a, b)


class TestVectorUc:
    def test_seminorm_examples(self):
        V1 = make_vector_uc(1, NormKind.SUP)
        assert seminorm_q(V1, V1.vector(3)) == 3
        assert seminorm_q(V1, V1.zero()) == 0
        V2 = make_vector_uc(2, NormKind.SUP)
        assert seminorm_q(V2, V2.vector((3, -4))) == 4
        E2 = make_vector_uc(2, NormKind.EUCLIDEAN)
        assert seminorm_q(E2, E2.vector((3, -4))) == 5

    def test_searched_seminorm_agrees(self, vector_sup_3):
        V = vector_sup_3
        a = V.vector((1, -Fraction(7, 2), 2))
        assert abs(seminorm_q(V, a, analytic=False) - Fraction(7, 2)) <= Fraction(1, 2**30)

    def test_dimension_checks(self):
        with pytest.raises(InvalidScalarError):
            make_vector_uc(0)
        V = make_vector_uc(2)
        with pytest.raises(InstanceMismatchError):
            V.vector((1, 2, 3))

    def test_order_is_ball_inclusion(self, vector_sup_3):
        V = vector_sup_3
        x = V.vector((1, 2, 3))
        y = V.vector((Fraction(3, 2), 2, 3))
        assert V.leq(x, V.add(y, V.scale(Fraction(1, 2), V.generator)))
        assert not V.leq(x, V.add(y, V.scale(Fraction(1, 4), V.generator)))
        # distinct vectors are incomparable
        assert not V.leq(x, y) and not V.leq(y, x)

    def test_subtraction_only_for_vectors(self, vector_sup_1):
        V = vector_sup_1
        assert V.subtract(V.vector(5), V.vector(2)).value == Ball((Fraction(3),), Fraction(0))
        with pytest.raises(NotVectorSpaceError):
            V.subtract(V.generator, V.vector(1))

    def test_sqrt_upper(self):
        assert sqrt_upper(Fraction(25)) == 5
        assert sqrt_upper(Fraction(9, 4)) == Fraction(3, 2)
        root = sqrt_upper(Fraction(2))
        assert root * root >= 2
        assert (root - Fraction(1, 2**64)) ** 2 < 2

    def test_norm_matches_numpy(self):
        rng = np.random.default_rng(5)
        for kind, order in ((NormKind.SUP, np.inf), (NormKind.EUCLIDEAN, 2)):
            V = make_vector_uc(4, kind)
            for _ in range(1000):
                coords = [Fraction(int(k), 64) for k in rng.integers(-4096, 4097, size=4)]
                q = seminorm_q(V, V.vector(coords))
                expected = np.linalg.norm(np.array([float(c) for c in coords]), ord=order)
                assert abs(float(q) - expected) <= 2.0**-30

    @settings(max_examples=60)
    @given(
        st.lists(dyadics(), min_size=3, max_size=3),
        st.lists(dyadics(), min_size=3, max_size=3),
        nonneg_dyadics(),
        st.sampled_from([NormKind.SUP, NormKind.EUCLIDEAN]),
    )
    def test_seminorm_properties(self, a, b, lam, kind):
        V = make_vector_uc(3, kind)
        ea, eb = V.vector(a), V.vector(b)
        slack = Fraction(1, 2**30)
        assert seminorm_q(V, V.add(ea, eb)) <= seminorm_q(V, ea) + seminorm_q(V, eb) + slack
        assert seminorm_q(V, V.negate(ea)) == seminorm_q(V, ea)
        assert abs(seminorm_q(V, V.scale(lam, ea)) - lam * seminorm_q(V, ea)) <= slack * (1 + lam)


class TestIntervals:
    def test_examples(self, intervals):
        I = intervals
        assert I.add(I.element((0, 1)), I.element((2, 5))).value == Interval(2, 6)
        assert I.leq(I.element((1, 2)), I.element((0, 3)))
        assert I.generator.value == Interval(-1, 1)

    def test_rejects_reversed_endpoints(self, intervals):
        with pytest.raises(InvalidScalarError):
            intervals.element((3, 1))

    def test_cancellative_but_not_invertible(self, intervals):
        I = intervals
        a, b, c = I.element((0, 1)), I.element((2, 2)), I.element((-1, 4))
        assert I.equal(I.add(a, c), I.add(I.element((0, 1)), c))
        assert not I.equal(I.add(a, c), I.add(b, c))
        # [0, 1] has no additive inverse: every sum keeps width >= 1
        total = I.add(a, I.element((-1, -1)))
        assert total.value.hi - total.value.lo == 1

    def test_seminorm(self, intervals):
        assert seminorm_q(intervals, intervals.element((-3, 2))) == 3
        assert seminorm_q(intervals, intervals.element((-3, 2)), analytic=False) == 3


class TestNames:
    @pytest.mark.parametrize(
        "name, cls",
        [
            ("ext-reals", ExtendedRealsCone),
            ("ext-reals-nonneg", ExtendedRealsCone),
            ("vector-uc:2:euclidean", VectorUcCone),
            ("intervals", IntervalCone),
        ],
    )
    def test_instance_from_name(self, name, cls):
        instance = instance_from_name(name)
        assert isinstance(instance, cls)
        assert instance.name == name

    @pytest.mark.parametrize("name", ["reals", "vector-uc:0:sup", "vector-uc:2:taxicab"])
    def test_unknown_names(self, name):
        with pytest.raises(ConfigError):
            instance_from_name(name)

    def test_non_uc_cone_has_no_seminorm(self):
        class Plain(ExtendedRealsCone):
            uc_cone = False

        plain = Plain()
        with pytest.raises(NotUcConeError):
            seminorm_q(plain, plain.element(1))

    def test_float_mode_coerces(self):
        R = make_extended_reals(mode=NumericMode.FLOAT)
        assert isinstance(R.element(Fraction(1, 3)).value, float)
        assert math.isclose(R.element(Fraction(1, 3)).value, 1 / 3)
