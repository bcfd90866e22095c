"""Which fiber automorphisms extend over the base, with exact correction terms.

A surface bundle over a height-n tower is recorded by the twisting class c1
of the first added stage, the fiber index a, and the base component y of the
second stage's twisting class.  For each of the 8 cohomology automorphisms of
the fiber, there is a closed-form criterion deciding whether it extends to an
automorphism of the total ring fixing the base, and when it does the base
corrections of the two fiber-generator images are unique.

``enumerate_algebra_automorphisms`` is the independent oracle: a bounded
exhaustive search over all base-fixing degree-2 maps, kept when they pass the
exact isomorphism test.  It shares only the ring arithmetic with the
closed-form table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from . import gridsearch
from .fiber import FiberAutomorphism, IDENTITY, hirzebruch_automorphisms
from .ring import (
    BottTower,
    ClassDeg2,
    GradedMap,
    InternalInconsistencyError,
    is_ring_iso,
    pair_product,
)


@dataclass(frozen=True)
class HirzebruchBundleData:
    """A surface bundle over a Bott manifold, in degree-2 coordinates.

    The height-(n+2) tower it determines appends the row ``stage1_class`` and
    the row ``stage2_class + (fiber_index,)``; ``from_tower`` inverts this.
    """

    base: BottTower
    stage1_class: ClassDeg2
    fiber_index: int
    stage2_class: ClassDeg2

    def __post_init__(self):
        n = self.base.n
        if len(self.stage1_class) != n or len(self.stage2_class) != n:
            raise ValueError("degree-2 data must have one coordinate per base stage")

    @property
    def n(self) -> int:
        return self.base.n

    def tower(self) -> BottTower:
        return self.base.extend(self.stage1_class.coords).extend(
            self.stage2_class.coords + (self.fiber_index,)
        )

    @staticmethod
    def from_tower(tower: BottTower) -> "HirzebruchBundleData":
        if tower.n < 2:
            raise ValueError("need at least two stages above the base")
        n = tower.n - 2
        base = BottTower(tower.rows[:n])
        row1 = tower.rows[n]
        row2 = tower.rows[n + 1]
        return HirzebruchBundleData(
            base, ClassDeg2(row1), row2[n], ClassDeg2(row2[:n])
        )

    def stage1_tower(self) -> BottTower:
        return self.base.extend(self.stage1_class.coords)

    def to_json_dict(self) -> dict:
        return {
            "base": self.base.to_json_dict(),
            "c1": list(self.stage1_class.coords),
            "a": self.fiber_index,
            "y": list(self.stage2_class.coords),
        }

    @staticmethod
    def from_json_dict(d: Mapping) -> "HirzebruchBundleData":
        base = BottTower.from_json_dict(d["base"])
        return HirzebruchBundleData(
            base,
            ClassDeg2(tuple(int(v) for v in d["c1"])),
            int(d["a"]),
            ClassDeg2(tuple(int(v) for v in d["y"])),
        )


@dataclass(frozen=True)
class ExtensionResult:
    """An extending automorphism: fiber matrix plus base corrections.

    The induced map sends the first fiber generator to its fiber-matrix image
    plus ``shift1`` (a base class), the second likewise with ``shift2``, and
    fixes every base generator.
    """

    data: HirzebruchBundleData
    fiber_matrix: FiberAutomorphism
    shift1: ClassDeg2
    shift2: ClassDeg2

    def as_graded_map(self) -> GradedMap:
        n = self.data.n
        m = n + 2
        images = [ClassDeg2.basis(m, j) for j in range(1, n + 1)]
        for col, shift in ((0, self.shift1), (1, self.shift2)):
            p, q = self.fiber_matrix.column(col)
            images.append(shift.append(p, q))
        return GradedMap(tuple(images))

    def verify(self) -> bool:
        t = self.data.tower()
        gm = self.as_graded_map()
        return gm.fixes_prefix(self.data.n) and is_ring_iso(t, t, gm)

    def sort_key(self):
        return (self.fiber_matrix.rows, self.shift1.coords, self.shift2.coords)

    def to_json_dict(self) -> dict:
        return {
            "matrix": self.fiber_matrix.to_json_list(),
            "u1": list(self.shift1.coords),
            "u2": list(self.shift2.coords),
        }


@dataclass(frozen=True)
class DoesNotExtend:
    reason: str


ExtensionDecision = Union[ExtensionResult, DoesNotExtend]


def _scaled_square(base: BottTower, c: ClassDeg2, factor: int) -> dict:
    return {k: factor * v for k, v in pair_product(base, c, c).items() if factor * v}


def _checked(data: HirzebruchBundleData, p, shift1, shift2) -> ExtensionResult:
    result = ExtensionResult(data, p, shift1, shift2)
    if not result.verify():
        raise InternalInconsistencyError(
            f"predicted extension fails the relation check: {p.rows}, "
            f"{shift1.coords}, {shift2.coords}"
        )
    return result


def _compose(data, outer: ExtensionResult, inner: ExtensionResult) -> ExtensionResult:
    gm = outer.as_graded_map().compose(inner.as_graded_map())
    n = data.n
    i1, i2 = gm.images[n], gm.images[n + 1]
    matrix = FiberAutomorphism.from_entries(
        i1.coords[n], i2.coords[n], i1.coords[n + 1], i2.coords[n + 1]
    )
    return _checked(
        data, matrix, ClassDeg2(i1.coords[:n]), ClassDeg2(i2.coords[:n])
    )


def extension_condition(
    data: HirzebruchBundleData, p: FiberAutomorphism
) -> ExtensionDecision:
    """Decide whether the fiber automorphism extends over the base.

    Returns the unique ExtensionResult when it does; every returned result is
    re-verified against the ring relations before being handed out.
    """
    a = data.fiber_index
    autos = hirzebruch_automorphisms(a)
    if p not in autos:
        raise ValueError(f"{p.rows} is not an automorphism of the index-{a} fiber")

    c = data.stage1_class
    y = data.stage2_class
    n = data.n
    zero = ClassDeg2.zero(n)
    minus_identity, g1, g2 = autos[1], autos[2], autos[3]

    # The two unconditional upper-triangular cases.
    if p == IDENTITY:
        return _checked(data, p, zero, zero)
    if p == g1:
        return _checked(data, p, zero, y)

    def halves_condition() -> Optional[str]:
        # y = -(a/2) c1, as an exact identity: 2y + a*c1 = 0.
        if any(2 * yv + a * cv for yv, cv in zip(y.coords, c.coords)):
            return "requires y = -(a/2)*c1"
        return None

    if p == minus_identity or p == g2:
        if a == 0:
            ext = _checked(data, minus_identity, c, y)
        else:
            reasons = []
            if a % 2 and not c.is_even():
                reasons.append("requires c1 even")
            bad = halves_condition()
            if bad:
                reasons.append(bad)
            if reasons:
                return DoesNotExtend("; ".join(reasons))
            ext = _checked(data, minus_identity, c, zero)
        if p == minus_identity:
            return ext
        # g2 factors as (-identity) composed with g1.
        inner = extension_condition(data, g1)
        assert isinstance(inner, ExtensionResult)
        return _compose(data, ext, inner)

    # Non-upper-triangular cases, by parity of the fiber index.
    first, second = autos[4], autos[6]
    reasons = []
    if a == 0:
        if pair_product(data.base, c, c) != pair_product(data.base, y, y):
            reasons.append("requires c1^2 = y^2")
        if not (c + y).is_even() or not (c - y).is_even():
            reasons.append("requires c1 + y and c1 - y even")
        if reasons:
            return DoesNotExtend("; ".join(reasons))
        u = (c + y).halve()
        ext_first = _checked(data, first, u, u)
        if p == first:
            return ext_first
        inner_minus = extension_condition(data, minus_identity)
        assert isinstance(inner_minus, ExtensionResult)
        ext_swap = _compose(data, ext_first, inner_minus)  # the unsigned swap
        if p == -first:
            return ext_swap
        inner_g1 = extension_condition(data, g1)
        assert isinstance(inner_g1, ExtensionResult)
        if p == second:
            return _compose(data, ext_first, inner_g1)
        return _compose(data, ext_swap, inner_g1)

    if a % 2 == 0:
        if any((2 - a) * v % 4 or (2 + a) * v % 4 for v in c.coords):
            reasons.append("requires (2-a)/4*c1 and (2+a)/4*c1 integral")
        bad = halves_condition()
        if bad:
            reasons.append(bad)
        if _scaled_square(data.base, c, 4 - a * a):
            reasons.append("requires (4-a^2)*c1^2 = 0")
        if reasons:
            return DoesNotExtend("; ".join(reasons))
        ext_plus = _checked(
            data, first, c.scale_exact(2 - a, 4), c.scale_exact(4 - a * a, 8)
        )
        ext_minus = _checked(
            data, -first, c.scale_exact(2 + a, 4), c.scale_exact(a * a - 4, 8)
        )
    else:
        if not c.is_even():
            reasons.append("requires c1 even")
        bad = halves_condition()
        if bad:
            reasons.append(bad)
        if _scaled_square(data.base, c, 1 - a * a):
            reasons.append("requires (1-a^2)*c1^2 = 0")
        if reasons:
            return DoesNotExtend("; ".join(reasons))
        ext_plus = _checked(
            data, first, c.scale_exact(1 - a, 2), c.scale_exact(1 - a * a, 4)
        )
        ext_minus = _checked(
            data, -first, c.scale_exact(1 + a, 2), c.scale_exact(a * a - 1, 4)
        )

    if p == first:
        return ext_plus
    if p == -first:
        return ext_minus
    # The remaining family factors through g1.
    inner_g1 = extension_condition(data, g1)
    assert isinstance(inner_g1, ExtensionResult)
    if p == second:
        return _compose(data, ext_plus, inner_g1)
    assert p == -second
    return _compose(data, ext_minus, inner_g1)


def predicted_automorphism_set(data: HirzebruchBundleData) -> tuple[ExtensionResult, ...]:
    """All extending fiber automorphisms with their unique corrections."""
    results = []
    for p in hirzebruch_automorphisms(data.fiber_index):
        decision = extension_condition(data, p)
        if isinstance(decision, ExtensionResult):
            results.append(decision)
    return tuple(sorted(results, key=lambda r: r.sort_key()))


def required_box(data: HirzebruchBundleData) -> int:
    """Smallest admissible oracle box: must cover every table-predicted image."""
    bound = abs(data.fiber_index)
    for ext in predicted_automorphism_set(data):
        for row in ext.fiber_matrix.rows:
            bound = max(bound, max(abs(v) for v in row))
        for shift in (ext.shift1, ext.shift2):
            if shift.coords:
                bound = max(bound, max(abs(v) for v in shift.coords))
    return bound


def enumerate_algebra_automorphisms(
    data: HirzebruchBundleData, box: int
) -> tuple[GradedMap, ...]:
    """Exhaustive oracle: all base-fixing automorphisms with coordinates in
    [-box, box], filtered by the exact isomorphism test.
    """
    need = required_box(data)
    if box < need:
        raise ValueError(f"box {box} below the sound minimum {need} for this data")
    t = data.tower()
    return tuple(gridsearch.algebra_isos_fixing_base(t, t, data.n, box))


def oracle_comparison(data: HirzebruchBundleData, box: Optional[int] = None) -> dict:
    """Table-vs-oracle report for one bundle datum (JSON-ready)."""
    if box is None:
        box = data.fiber_index ** 2 + 6
    predicted = predicted_automorphism_set(data)
    enumerated = enumerate_algebra_automorphisms(data, box)
    predicted_m = sorted(ext.as_graded_map().matrix() for ext in predicted)
    enumerated_m = sorted(g.matrix() for g in enumerated)
    return {
        "data": data.to_json_dict(),
        "box": box,
        "predicted": [[list(r) for r in m] for m in predicted_m],
        "enumerated": [[list(r) for r in m] for m in enumerated_m],
        "agree": predicted_m == enumerated_m,
    }
