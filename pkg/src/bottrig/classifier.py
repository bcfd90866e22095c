"""Bundle-isomorphism certificates for surface bundles over a common base.

Every conclusion is assembled from four kinds of cohomologically checkable
moves:

  * TensorTwist      -- twisting a rank-2 sum by a line bundle leaves the
                        projectivization unchanged (no side condition);
  * DecomposableSwap -- two rank-2 sums of line bundles with equal total
                        Chern class are isomorphic (checked: equal c_1 sums
                        and equal, i.e. zero, products);
  * UpperTriangularRealization -- a base-fixing isomorphism whose degree-2
                        matrix is upper triangular is induced by a tower map;
  * TrivializationViaSquareZero / S1EquivariantFiberMap -- the two terminal
                        moves for odd fibers.

The last three tags carry geometric content that is taken as given; the
arithmetic side conditions of every step re-verify under exact ring
arithmetic, and a failed re-verification is an internal error, never a
mathematical outcome.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .extension import ExtensionResult, HirzebruchBundleData, extension_condition
from .fiber import FiberAutomorphism, hirzebruch_automorphisms
from .ring import (
    BottTower,
    ClassDeg2,
    GradedMap,
    InternalInconsistencyError,
    is_ring_iso,
    pair_product,
)


@dataclass(frozen=True)
class TensorTwist:
    """P(C + L_source) ~ P(L_twist + L_{twist+source}) over ``stage``."""

    stage: BottTower
    twist: ClassDeg2
    source: ClassDeg2

    def verify(self) -> bool:
        return len(self.twist) == self.stage.n and len(self.source) == self.stage.n

    def explain(self) -> str:
        return (
            f"twist the rank-2 sum C + L({self.source.coords}) by the line bundle "
            f"L({self.twist.coords}); projectivizations are unchanged by twisting"
        )

    def to_json_dict(self) -> dict:
        return {
            "move": "tensor-twist",
            "ring": self.stage.to_json_dict(),
            "twist": list(self.twist.coords),
            "source": list(self.source.coords),
        }


@dataclass(frozen=True)
class DecomposableSwap:
    """L_left + L_right ~ C + L_target (possibly orientation-flipped).

    Rank-2 sums of line bundles over a Bott manifold are matched by total
    Chern class: left + right must equal the (possibly negated) target and
    left * right must vanish.
    """

    stage: BottTower
    left: ClassDeg2
    right: ClassDeg2
    target: ClassDeg2
    flipped: bool = False

    def verify(self) -> bool:
        goal = -self.target if self.flipped else self.target
        if (self.left + self.right).coords != goal.coords:
            return False
        return not pair_product(self.stage, self.left, self.right)

    def explain(self) -> str:
        sign = "-" if self.flipped else ""
        return (
            f"match L({self.left.coords}) + L({self.right.coords}) with "
            f"C + L({sign}{self.target.coords}) by total Chern class "
            "(rank-2 decomposable bundles are determined by it)"
        )

    def to_json_dict(self) -> dict:
        return {
            "move": "decomposable-swap",
            "ring": self.stage.to_json_dict(),
            "left": list(self.left.coords),
            "right": list(self.right.coords),
            "target": list(self.target.coords),
            "flipped": self.flipped,
        }


@dataclass(frozen=True)
class UpperTriangularRealization:
    src: BottTower
    dst: BottTower
    matrix_map: GradedMap

    def verify(self) -> bool:
        return self.matrix_map.is_upper_triangular() and is_ring_iso(
            self.src, self.dst, self.matrix_map
        )

    def explain(self) -> str:
        return (
            "the degree-2 matrix is upper triangular in the standard "
            "generators, so the isomorphism is induced stage by stage by a "
            "tower map"
        )

    def to_json_dict(self) -> dict:
        return {"move": "upper-triangular-realization", "matrix": [list(r) for r in self.matrix_map.matrix()]}


@dataclass(frozen=True)
class TrivializationViaSquareZero:
    side: str
    data: HirzebruchBundleData

    def verify(self) -> bool:
        c = self.data.stage1_class
        y = self.data.stage2_class
        a = self.data.fiber_index
        if not c.is_even():
            return False
        if pair_product(self.data.base, c, c):
            return False
        return not any(2 * yv + a * cv for yv, cv in zip(y.coords, c.coords))

    def explain(self) -> str:
        return (
            f"{self.side}: the first-stage class is even with square zero, so "
            "that stage trivializes; the matching second-stage condition then "
            "makes the whole bundle a product with a fixed surface fiber"
        )

    def to_json_dict(self) -> dict:
        return {
            "move": "trivialization-via-square-zero",
            "side": self.side,
            "data": self.data.to_json_dict(),
        }


@dataclass(frozen=True)
class S1EquivariantFiberMap:
    data: HirzebruchBundleData
    matrix: FiberAutomorphism

    def verify(self) -> bool:
        a = self.data.fiber_index
        if a not in (1, -1):
            return False
        c = self.data.stage1_class
        y = self.data.stage2_class
        if not c.is_even():
            return False
        if any(2 * yv + a * cv for yv, cv in zip(y.coords, c.coords)):
            return False
        return self.matrix in hirzebruch_automorphisms(a)

    def explain(self) -> str:
        return (
            "for fiber index +-1 every fiber automorphism is realized by a "
            "circle-equivariant surface diffeomorphism, and the structure "
            "group reduces to that circle action"
        )

    def to_json_dict(self) -> dict:
        return {
            "move": "s1-equivariant-fiber-map",
            "matrix": self.matrix.to_json_list(),
        }


CertStep = Union[
    TensorTwist,
    DecomposableSwap,
    UpperTriangularRealization,
    TrivializationViaSquareZero,
    S1EquivariantFiberMap,
]


class Conclusion(enum.Enum):
    ISOMORPHIC_OVER_BASE = "isomorphic-over-base"
    NOT_DECIDED = "not-decided-isomorphic"


@dataclass(frozen=True)
class IsoCertificate:
    steps: tuple[CertStep, ...]
    conclusion: Conclusion

    def verify(self) -> bool:
        return all(step.verify() for step in self.steps)

    def to_json_dict(self) -> dict:
        return {
            "steps": [s.to_json_dict() for s in self.steps],
            "conclusion": self.conclusion.value,
        }

    def explain(self) -> list[str]:
        return [s.explain() for s in self.steps]


@dataclass(frozen=True)
class ProjIso:
    """Certified isomorphism P(C + L_alpha) ~ P(C + L_beta) over ``stage``.

    ``twist`` is the unique class with 2*twist = epsilon*beta - alpha and
    twist*(twist + alpha) = 0.  The pullback of the new stage generator is
    epsilon * (old generator + twist), which ``induced_stage_map`` realizes
    on the extended towers.
    """

    stage: BottTower
    alpha: ClassDeg2
    beta: ClassDeg2
    epsilon: int
    twist: ClassDeg2

    @property
    def steps(self) -> tuple[CertStep, ...]:
        return (
            TensorTwist(self.stage, self.twist, self.alpha),
            DecomposableSwap(
                self.stage,
                self.twist,
                self.twist + self.alpha,
                self.beta,
                flipped=self.epsilon < 0,
            ),
        )

    def induced_stage_map(self) -> GradedMap:
        """Pullback from the beta-extended tower to the alpha-extended tower."""
        m = self.stage.n + 1
        images = [ClassDeg2.basis(m, j) for j in range(1, m)]
        images.append(self.epsilon * self.twist.append(1))
        return GradedMap(tuple(images))


def proj_iso_over(
    stage: BottTower, alpha: ClassDeg2, beta: ClassDeg2
) -> Optional[ProjIso]:
    """Sufficient criterion for P(C + L_alpha) ~ P(C + L_beta) over ``stage``.

    Tries both orientations of the target; returns None when neither halved
    twist exists or its product condition fails.  One-sided: absence is not
    a proof of non-isomorphism.
    """
    for eps in (1, -1):
        scaled = (eps * beta) - alpha
        twist = scaled.halve()
        if twist is None:
            continue
        if not pair_product(stage, twist, twist + alpha):
            return ProjIso(stage, alpha, beta, eps, twist)
    return None


def _require(condition: bool, message: str):
    if not condition:
        raise InternalInconsistencyError(message)


def _stage2_row(data: HirzebruchBundleData) -> ClassDeg2:
    return data.stage2_class.append(data.fiber_index)


def _twist_to_zero_index(data: HirzebruchBundleData) -> tuple[ProjIso, HirzebruchBundleData, GradedMap]:
    """Normalize an even-index bundle to fiber index 0 over its first stage.

    Requires 2y = -a c1 (already certified by the caller); the twisted datum
    keeps the same first stage and second-stage base class.
    """
    a = data.fiber_index
    zero_data = HirzebruchBundleData(
        data.base, data.stage1_class, 0, data.stage2_class
    )
    pi = proj_iso_over(
        data.stage1_tower(), _stage2_row(data), _stage2_row(zero_data)
    )
    _require(pi is not None, "even-index normalization twist does not certify")
    big = pi.induced_stage_map()
    # The induced map goes from the index-0 tower to the original one.
    _require(
        is_ring_iso(zero_data.tower(), data.tower(), big),
        "normalization twist map is not an isomorphism",
    )
    return pi, zero_data, big


def realize_automorphism(
    data: HirzebruchBundleData, ext: ExtensionResult, _depth: int = 0
) -> IsoCertificate:
    """Certify that an extending automorphism is induced by a bundle map.

    ``ext`` must come from ``extension_condition`` on ``data``; every branch
    re-verifies its side conditions exactly and raises on any failure.
    """
    _require(_depth <= 2, "realization recursion exceeded its bound")
    gm = ext.as_graded_map()
    t = data.tower()
    _require(
        gm.fixes_prefix(data.n) and is_ring_iso(t, t, gm),
        "input is not a base-fixing ring automorphism",
    )

    if ext.fiber_matrix.is_upper_triangular():
        step = UpperTriangularRealization(t, t, gm)
        _require(step.verify(), "upper-triangular step failed to re-verify")
        return IsoCertificate((step,), Conclusion.ISOMORPHIC_OVER_BASE)

    a = data.fiber_index
    c = data.stage1_class
    y = data.stage2_class

    if a == 0:
        # Fiber product of two projective-line bundles; swapping the factors
        # realizes the antidiagonal fiber matrices once the factors match.
        pi1 = proj_iso_over(data.base, c, y)
        pi2 = proj_iso_over(data.base, y, c)
        _require(
            pi1 is not None and pi2 is not None,
            "factor-swap certificates missing although the automorphism extends",
        )
        return IsoCertificate(
            pi1.steps + pi2.steps, Conclusion.ISOMORPHIC_OVER_BASE
        )

    if a % 2 == 0:
        pi, zero_data, big = _twist_to_zero_index(data)
        conj = big.inverse().compose(gm.compose(big))
        n = data.n
        i1, i2 = conj.images[n], conj.images[n + 1]
        ext0 = ExtensionResult(
            zero_data,
            FiberAutomorphism.from_entries(
                i1.coords[n], i2.coords[n], i1.coords[n + 1], i2.coords[n + 1]
            ),
            ClassDeg2(i1.coords[:n]),
            ClassDeg2(i2.coords[:n]),
        )
        _require(ext0.verify(), "conjugated automorphism fails the relation check")
        sub = realize_automorphism(zero_data, ext0, _depth + 1)
        return IsoCertificate(pi.steps + sub.steps, sub.conclusion)

    # Odd fiber index: the extension conditions force an even first-stage
    # class with 2y = -a c1.
    _require(c.is_even(), "odd-index realization requires an even first-stage class")
    _require(
        not any(2 * yv + a * cv for yv, cv in zip(y.coords, c.coords)),
        "odd-index realization requires 2y = -a*c1",
    )
    if a in (1, -1):
        step = S1EquivariantFiberMap(data, ext.fiber_matrix)
        _require(step.verify(), "equivariant fiber step failed to re-verify")
        return IsoCertificate((step,), Conclusion.ISOMORPHIC_OVER_BASE)

    _require(
        not pair_product(data.base, c, c),
        "odd-index realization requires a square-zero first-stage class",
    )
    pi = proj_iso_over(data.base, c, ClassDeg2.zero(data.n))
    _require(pi is not None, "first-stage trivialization does not certify")
    step = TrivializationViaSquareZero("bundle", data)
    _require(step.verify(), "trivialization step failed to re-verify")
    return IsoCertificate(pi.steps + (step,), Conclusion.ISOMORPHIC_OVER_BASE)


def _descent_parts(
    n: int, iso: GradedMap
) -> tuple[FiberAutomorphism, ClassDeg2, ClassDeg2]:
    i1, i2 = iso.images[n], iso.images[n + 1]
    matrix = FiberAutomorphism.from_entries(
        i1.coords[n], i2.coords[n], i1.coords[n + 1], i2.coords[n + 1]
    )
    return matrix, ClassDeg2(i1.coords[:n]), ClassDeg2(i2.coords[:n])


def bundles_isomorphic(
    d1: HirzebruchBundleData,
    d2: HirzebruchBundleData,
    iso: GradedMap,
    _depth: int = 0,
) -> IsoCertificate:
    """Certify that a base-fixing algebra isomorphism comes from a bundle map.

    ``iso`` maps the ring of ``d1`` to the ring of ``d2`` and must fix the
    base generators; invalid inputs raise ValueError.  A failed derived
    condition raises InternalInconsistencyError and must never happen for a
    genuine isomorphism.
    """
    _require(_depth <= 2, "classification recursion exceeded its bound")
    if d1.base != d2.base:
        raise ValueError("bundle data do not share a base tower")
    t1, t2 = d1.tower(), d2.tower()
    n = d1.n
    if not iso.fixes_prefix(n):
        raise ValueError("isomorphism does not fix the base generators")
    if not is_ring_iso(t1, t2, iso):
        raise ValueError("map is not a graded ring isomorphism")

    psi, v1, v2 = _descent_parts(n, iso)
    if psi.is_upper_triangular():
        step = UpperTriangularRealization(t1, t2, iso)
        _require(step.verify(), "upper-triangular step failed to re-verify")
        return IsoCertificate((step,), Conclusion.ISOMORPHIC_OVER_BASE)

    a, a2 = d1.fiber_index, d2.fiber_index
    _require(
        (a - a2) % 2 == 0,
        "descent isomorphism between fibers of different parity",
    )
    c = d1.stage1_class
    b = d2.stage1_class
    y = d1.stage2_class
    y2 = d2.stage2_class
    base = d1.base

    if a % 2 == 0:
        if a != 0 or a2 != 0:
            # Normalize both sides to fiber index 0, conjugate, and recurse.
            steps: list[CertStep] = []
            if a != 0:
                _require(
                    not any(2 * yv + a * cv for yv, cv in zip(y.coords, c.coords)),
                    "nonzero even index requires 2y = -a*c1",
                )
                pi1, d1z, big1 = _twist_to_zero_index(d1)
                steps.extend(pi1.steps)
            else:
                d1z, big1 = d1, GradedMap.identity(n + 2)
            if a2 != 0:
                _require(
                    not any(2 * yv + a2 * cv for yv, cv in zip(y2.coords, b.coords)),
                    "nonzero even index requires 2y = -a*c1",
                )
                pi2, d2z, big2 = _twist_to_zero_index(d2)
                steps.extend(pi2.steps)
            else:
                d2z, big2 = d2, GradedMap.identity(n + 2)
            conj = big2.inverse().compose(iso.compose(big1))
            _require(
                is_ring_iso(d1z.tower(), d2z.tower(), conj),
                "conjugated map is not an isomorphism",
            )
            sub = bundles_isomorphic(d1z, d2z, conj, _depth + 1)
            return IsoCertificate(tuple(steps) + sub.steps, sub.conclusion)

        # Both indices zero: crossed factor matching.
        s1, s2 = psi.rows[1][0], psi.rows[0][1]
        _require(
            psi.rows[0][0] == 0 and psi.rows[1][1] == 0 and abs(s1) == 1 and abs(s2) == 1,
            "index-0 descent matrix is not a signed swap",
        )
        _require(
            (2 * v1).coords == (c - s1 * y2).coords,
            "first fiber image has the wrong base correction",
        )
        # Expanding the second relation gives coefficient b + s2*(2v2 - y)
        # on the first new generator, so 2v2 = y - s2*b.
        _require(
            (2 * v2).coords == (y - s2 * b).coords,
            "second fiber image has the wrong base correction",
        )
        _require(
            pair_product(base, y2, y2) == pair_product(base, c, c),
            "squares of the crossed first-stage classes disagree",
        )
        _require(
            pair_product(base, b, b) == pair_product(base, y, y),
            "squares of the crossed second-stage classes disagree",
        )
        pi_a = proj_iso_over(base, c, y2)
        pi_b = proj_iso_over(base, b, y)
        _require(
            pi_a is not None and pi_b is not None,
            "crossed factor certificates missing for a genuine isomorphism",
        )
        return IsoCertificate(
            pi_a.steps + pi_b.steps, Conclusion.ISOMORPHIC_OVER_BASE
        )

    # Both fiber indices odd.
    _require(c.is_even(), "odd index requires an even first-stage class")
    _require(b.is_even(), "odd index requires an even first-stage class")
    _require(
        not any(2 * yv + a * cv for yv, cv in zip(y.coords, c.coords)),
        "odd index requires 2y = -a*c1",
    )
    _require(
        not any(2 * yv + a2 * cv for yv, cv in zip(y2.coords, b.coords)),
        "odd index requires 2y = -a*c1",
    )
    # Match the primitive square-zero classes of the two fibers.
    s1, rem = divmod(psi.rows[1][0], 2)
    _require(rem == 0 and abs(s1) == 1, "fiber image is not a primitive square-zero match")
    _require(psi.rows[0][0] == -s1 * a2, "fiber image is not a primitive square-zero match")
    _require(psi.rows[1][1] == a * s1, "second fiber image has the wrong top part")
    s2 = 2 * psi.rows[0][1] + s1 * a * a2
    _require(abs(s2) == 1, "second fiber image is not a primitive square-zero match")
    _require(
        (2 * v1).coords == (s1 * a2 * b + c).coords,
        "first fiber image has the wrong base correction",
    )
    _require(
        _scaled(pair_product(base, b, b), a2 * a2) == pair_product(base, c, c),
        "scaled squares of the first-stage classes disagree",
    )
    _require(
        (4 * v2).coords == ((s1 * a * a2 - s2) * b).coords,
        "second fiber image has the wrong base correction",
    )
    _require(
        not _scaled(pair_product(base, b, b), a * a * a2 * a2 - 1),
        "first-stage square obstruction is nonzero",
    )

    if a * a * a2 * a2 == 1:
        pi1 = proj_iso_over(base, c, b)
        _require(pi1 is not None, "first-stage matching does not certify")
        # Pull the second stage back along the first-stage isomorphism.
        a_new = pi1.epsilon * a2
        y_new = a_new * pi1.twist + y2
        _require(a_new in (1, -1), "pulled-back fiber index must be +-1")
        _require(
            not any(2 * yv + a_new * cv for yv, cv in zip(y_new.coords, c.coords)),
            "pulled-back second stage violates 2y = -a*c1",
        )
        pulled = HirzebruchBundleData(base, c, a_new, y_new)
        pi2 = proj_iso_over(
            d1.stage1_tower(), _stage2_row(d1), _stage2_row(pulled)
        )
        _require(pi2 is not None, "second-stage matching does not certify")
        return IsoCertificate(
            pi1.steps + pi2.steps, Conclusion.ISOMORPHIC_OVER_BASE
        )

    # Distinct odd indices of modulus > 1 on at least one side: both bundles
    # trivialize, and fibers of equal parity are diffeomorphic.
    _require(not pair_product(base, c, c), "first-stage square must vanish")
    _require(not pair_product(base, b, b), "first-stage square must vanish")
    left = TrivializationViaSquareZero("first bundle", d1)
    right = TrivializationViaSquareZero("second bundle", d2)
    _require(left.verify() and right.verify(), "trivialization steps failed to re-verify")
    fiber_match = proj_iso_over(
        BottTower.cp1(), ClassDeg2((a,)), ClassDeg2((a2,))
    )
    _require(fiber_match is not None, "fibers of equal parity must match")
    return IsoCertificate(
        (left, right) + fiber_match.steps, Conclusion.ISOMORPHIC_OVER_BASE
    )


def _scaled(d: dict, factor: int) -> dict:
    return {k: factor * v for k, v in d.items() if factor * v}
