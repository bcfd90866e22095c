import random

import pytest

from bottrig.extension import (
    DoesNotExtend,
    ExtensionResult,
    HirzebruchBundleData,
    enumerate_algebra_automorphisms,
    extension_condition,
    oracle_comparison,
    predicted_automorphism_set,
    required_box,
)
from bottrig.fiber import FiberAutomorphism, IDENTITY, hirzebruch_automorphisms
from bottrig.ring import BottTower, ClassDeg2, is_ring_iso

from conftest import random_class, random_tower

CP1 = BottTower.cp1()
POINT = BottTower.point()


def over_cp1(c, a, y):
    return HirzebruchBundleData(CP1, ClassDeg2((c,)), a, ClassDeg2((y,)))


def trivial_over(base):
    n = base.n
    return HirzebruchBundleData(base, ClassDeg2.zero(n), 0, ClassDeg2.zero(n))


class TestBundleData:
    def test_tower_round_trip(self):
        d = over_cp1(2, -3, 1)
        assert d.tower().rows == ((), (2,), (1, -3))
        assert HirzebruchBundleData.from_tower(d.tower()) == d

    def test_point_base(self):
        d = HirzebruchBundleData(POINT, ClassDeg2(()), 5, ClassDeg2(()))
        assert d.tower() == BottTower.hirzebruch(5)

    def test_json_round_trip(self):
        d = over_cp1(1, 2, -2)
        assert HirzebruchBundleData.from_json_dict(d.to_json_dict()) == d

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            HirzebruchBundleData(CP1, ClassDeg2(()), 0, ClassDeg2((1,)))


class TestExtensionCondition:
    def test_identity_always_extends_trivially(self):
        for d in (over_cp1(2, 3, -1), over_cp1(0, 0, 0), trivial_over(POINT)):
            ext = extension_condition(d, IDENTITY)
            assert isinstance(ext, ExtensionResult)
            assert ext.shift1.is_zero() and ext.shift2.is_zero()

    def test_fiberwise_flip_extends_with_second_shift_y(self):
        d = over_cp1(1, 4, -2)
        ext = extension_condition(d, hirzebruch_automorphisms(4)[2])
        assert isinstance(ext, ExtensionResult)
        assert ext.shift1.is_zero() and ext.shift2 == d.stage2_class

    def test_antidiagonal_with_equal_classes(self):
        # fiber index 0 and c1 = y: the swap extends with both shifts equal.
        d = over_cp1(1, 0, 1)
        p = FiberAutomorphism.from_entries(0, -1, -1, 0)
        ext = extension_condition(d, p)
        assert isinstance(ext, ExtensionResult)
        assert ext.shift1 == ext.shift2 == ClassDeg2((1,))

    def test_minus_identity_needs_matching_second_class(self):
        d = over_cp1(1, 2, 0)
        decision = extension_condition(d, -IDENTITY)
        assert isinstance(decision, DoesNotExtend)
        assert "y = -(a/2)*c1" in decision.reason

    def test_odd_index_needs_even_first_class(self):
        d = over_cp1(1, 3, 0)
        decision = extension_condition(d, -IDENTITY)
        assert isinstance(decision, DoesNotExtend)
        assert "even" in decision.reason

    def test_reflection_case_with_zero_shifts(self):
        # index 1, c1 = 2x1, y = -x1: the non-triangular reflection extends
        # with both shifts zero (confirmed by the exhaustive oracle below).
        d = over_cp1(2, 1, -1)
        ext = extension_condition(d, FiberAutomorphism.from_entries(1, 0, -2, -1))
        assert isinstance(ext, ExtensionResult)
        assert ext.shift1.is_zero() and ext.shift2.is_zero()

    def test_rejects_non_automorphism(self):
        with pytest.raises(ValueError):
            extension_condition(over_cp1(0, 2, 0), FiberAutomorphism.from_entries(1, 1, 0, 1))

    def test_every_result_is_a_base_fixing_automorphism(self):
        rng = random.Random(5)
        for _ in range(30):
            base = random_tower(rng, max_n=2, bound=2)
            d = HirzebruchBundleData(
                base,
                random_class(rng, base.n, 2),
                rng.randint(-3, 3),
                random_class(rng, base.n, 2),
            )
            for ext in predicted_automorphism_set(d):
                assert ext.verify()
                gm = ext.as_graded_map()
                t = d.tower()
                assert gm.fixes_prefix(base.n)
                assert is_ring_iso(t, t, gm)


class TestPredictedSet:
    def test_all_eight_for_fully_trivial_data(self):
        assert len(predicted_automorphism_set(trivial_over(CP1))) == 8

    def test_exactly_two_when_even_condition_fails(self):
        assert len(predicted_automorphism_set(over_cp1(1, 2, 0))) == 2

    def test_exactly_four_at_index_zero_with_distinct_squares(self):
        base = BottTower.from_entries(2, {(2, 1): 0})
        d = HirzebruchBundleData(base, ClassDeg2((1, 0)), 0, ClassDeg2((0, 0)))
        # squares differ in degree 4, so only the four triangular cases stay.
        assert len(predicted_automorphism_set(d)) == 4

    def test_group_closure(self):
        for d in (over_cp1(2, 1, -1), over_cp1(1, 2, 0), trivial_over(CP1), over_cp1(0, 3, 0)):
            exts = predicted_automorphism_set(d)
            matrices = {ext.as_graded_map().matrix() for ext in exts}
            for e1 in exts:
                for e2 in exts:
                    composite = e1.as_graded_map().compose(e2.as_graded_map())
                    assert composite.matrix() in matrices


class TestOracle:
    def test_box_precondition_enforced(self):
        d = over_cp1(0, 3, 0)
        with pytest.raises(ValueError):
            enumerate_algebra_automorphisms(d, 2)

    def test_required_box_covers_matrix_entries(self):
        assert required_box(over_cp1(0, 3, 0)) >= 3

    def test_identity_always_found(self):
        d = over_cp1(1, 1, 2)
        maps = enumerate_algebra_automorphisms(d, 7)
        from bottrig.ring import GradedMap

        assert GradedMap.identity(3).matrix() in {m.matrix() for m in maps}

    def test_trivial_data_has_eight(self):
        assert len(enumerate_algebra_automorphisms(trivial_over(CP1), 6)) == 8

    def test_index3_with_odd_class_has_two(self):
        maps = enumerate_algebra_automorphisms(over_cp1(1, 3, 0), 15)
        assert len(maps) == 2

    def test_uniqueness_per_fiber_matrix(self):
        for d in (over_cp1(2, 1, -1), over_cp1(0, 0, 0), over_cp1(2, 2, -2)):
            maps = enumerate_algebra_automorphisms(d, d.fiber_index ** 2 + 6)
            blocks = [
                tuple(tuple(row[1:]) for row in m.matrix()[1:]) for m in maps
            ]
            assert len(blocks) == len(set(blocks))


class TestOracleEquality:
    def test_point_base_full_box(self):
        for a in range(-3, 4):
            d = HirzebruchBundleData(POINT, ClassDeg2(()), a, ClassDeg2(()))
            assert oracle_comparison(d)["agree"]

    def test_cp1_base_sampled(self):
        rng = random.Random(31)
        for _ in range(25):
            d = over_cp1(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3))
            assert oracle_comparison(d)["agree"], d

    def test_height_two_base_sampled(self):
        rng = random.Random(37)
        for _ in range(6):
            base = random_tower(rng, max_n=2, bound=3)
            if base.n != 2:
                continue
            d = HirzebruchBundleData(
                base,
                random_class(rng, 2, 3),
                rng.randint(-3, 3),
                random_class(rng, 2, 3),
            )
            report = oracle_comparison(d)
            assert report["agree"], report["data"]

    def test_report_shape(self):
        report = oracle_comparison(over_cp1(1, 0, 1))
        assert set(report) == {"data", "box", "predicted", "enumerated", "agree"}
        assert report["agree"] is True
