import itertools

import pytest

from bottrig.fiber import (
    DiffeoType,
    FiberAutomorphism,
    diffeo_type,
    hirzebruch_automorphisms,
    primitive_square_zero,
)
from bottrig.harness import brute_force_fiber_automorphisms
from bottrig.ring import BottTower, ClassDeg2, pair_product


def entry_bound(a: int) -> int:
    return a * a // 2 + 2


class TestAutomorphismTables:
    def test_index_zero_gives_signed_permutations(self):
        autos = {m.rows for m in hirzebruch_automorphisms(0)}
        signed = set()
        for d1, d2 in itertools.product((1, -1), repeat=2):
            signed.add(((d1, 0), (0, d2)))
            signed.add(((0, d1), (d2, 0)))
        assert autos == signed

    def test_known_entries(self):
        assert FiberAutomorphism.from_entries(1, 0, -2, -1) in hirzebruch_automorphisms(1)
        assert FiberAutomorphism.from_entries(1, 0, -1, -1) in hirzebruch_automorphisms(2)

    def test_each_is_an_automorphism(self):
        for a in range(-8, 9):
            for m in hirzebruch_automorphisms(a):
                assert m.det() in (1, -1)
                assert m.preserves_relations(a)

    def test_group_of_order_eight(self):
        for a in (-5, -2, 0, 1, 4):
            autos = hirzebruch_automorphisms(a)
            assert len(set(m.rows for m in autos)) == 8
            table = {m.rows for m in autos}
            for f, g in itertools.product(autos, repeat=2):
                assert f.compose(g).rows in table
            for f in autos:
                assert f.inverse().rows in table

    def test_brute_force_search_finds_exactly_the_table(self):
        for a in range(-3, 4):
            found = {m.rows for m in brute_force_fiber_automorphisms(a, entry_bound(a))}
            assert found == {m.rows for m in hirzebruch_automorphisms(a)}


class TestDiffeoType:
    @pytest.mark.parametrize(
        "a,expected",
        [(0, DiffeoType.EVEN), (-3, DiffeoType.ODD), (4, DiffeoType.EVEN), (7, DiffeoType.ODD)],
    )
    def test_parity(self, a, expected):
        assert diffeo_type(a) is expected

    def test_representative_indices(self):
        assert diffeo_type(6).representative_index == 0
        assert diffeo_type(-5).representative_index == 1


class TestPrimitiveSquareZero:
    def test_examples(self):
        assert set(c.coords for c in primitive_square_zero(0)) == {
            (1, 0), (-1, 0), (0, 1), (0, -1)
        }
        assert set(c.coords for c in primitive_square_zero(1)) == {
            (1, 0), (-1, 0), (-1, 2), (1, -2)
        }
        assert set(c.coords for c in primitive_square_zero(2)) == {
            (1, 0), (-1, 0), (-1, 1), (1, -1)
        }

    def test_all_square_to_zero(self):
        for a in range(-6, 7):
            t = BottTower.hirzebruch(a)
            for z in primitive_square_zero(a):
                assert not pair_product(t, z, z)

    def test_brute_force_completeness(self):
        import math

        for a in range(-6, 7):
            t = BottTower.hirzebruch(a)
            table = {c.coords for c in primitive_square_zero(a)}
            for p in range(-10, 11):
                for q in range(-10, 11):
                    z = ClassDeg2((p, q))
                    if (p, q) == (0, 0) or math.gcd(p, q) != 1:
                        continue
                    if not pair_product(t, z, z):
                        assert (p, q) in table, (a, p, q)
