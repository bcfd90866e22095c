"""The Hirzebruch surface fiber: automorphism tables, parity type, square zeros.

The surface with index a is the height-2 tower with relation
x_2^2 = a x_1 x_2.  Its cohomology automorphism group has order 8; the
explicit matrices depend only on the parity of a, as does the diffeomorphism
type of the surface itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ring import BottTower, ClassDeg2, GradedMap, is_ring_iso


@dataclass(frozen=True)
class FiberAutomorphism:
    """A 2x2 integer matrix acting on the fiber generators, columns-are-images.

    ``rows`` is row-major: the image of the first generator is
    (rows[0][0], rows[1][0]).
    """

    rows: tuple[tuple[int, int], tuple[int, int]]

    @staticmethod
    def from_entries(m11: int, m12: int, m21: int, m22: int) -> "FiberAutomorphism":
        return FiberAutomorphism(((m11, m12), (m21, m22)))

    def det(self) -> int:
        (a, b), (c, d) = self.rows
        return a * d - b * c

    def is_upper_triangular(self) -> bool:
        return self.rows[1][0] == 0

    def column(self, j: int) -> tuple[int, int]:
        return (self.rows[0][j], self.rows[1][j])

    def __neg__(self) -> "FiberAutomorphism":
        (a, b), (c, d) = self.rows
        return FiberAutomorphism(((-a, -b), (-c, -d)))

    def compose(self, inner: "FiberAutomorphism") -> "FiberAutomorphism":
        """self o inner as maps (matrix product self.rows @ inner.rows)."""
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = inner.rows
        return FiberAutomorphism(
            ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        )

    def inverse(self) -> "FiberAutomorphism":
        d = self.det()
        if d not in (1, -1):
            raise ValueError("matrix is not unimodular")
        (a, b), (c, g) = self.rows
        return FiberAutomorphism(((g * d, -b * d), (-c * d, a * d)))

    def as_graded_map(self) -> GradedMap:
        return GradedMap.from_matrix([list(r) for r in self.rows])

    def preserves_relations(self, a: int) -> bool:
        t = BottTower.hirzebruch(a)
        return is_ring_iso(t, t, self.as_graded_map())

    def to_json_list(self) -> list:
        return [list(self.rows[0]), list(self.rows[1])]


IDENTITY = FiberAutomorphism.from_entries(1, 0, 0, 1)


def _ut_family(a: int) -> list[FiberAutomorphism]:
    # The fourth matrix must carry -a off the diagonal: with columns-as-images
    # it sends the second generator to -a*g1 + g2, and only that sign choice
    # kills the relation g2*(g2 - a*g1) for a != 0.
    return [
        IDENTITY,
        -IDENTITY,
        FiberAutomorphism.from_entries(1, a, 0, -1),
        FiberAutomorphism.from_entries(-1, -a, 0, 1),
    ]


def hirzebruch_automorphisms(a: int) -> list[FiberAutomorphism]:
    """The 8 automorphisms of the index-a surface's cohomology, fixed order.

    Four upper-triangular matrices plus a parity-dependent non-triangular
    family; the returned list is closed under composition and inverse.
    """
    autos = _ut_family(a)
    if a % 2 == 0:
        h = a // 2
        first = FiberAutomorphism.from_entries(h, h * h - 1, -1, -h)
        second = FiberAutomorphism.from_entries(h, h * h + 1, -1, -h)
    else:
        first = FiberAutomorphism.from_entries(a, (a * a - 1) // 2, -2, -a)
        second = FiberAutomorphism.from_entries(a, (a * a + 1) // 2, -2, -a)
    autos += [first, -first, second, -second]
    return autos


class DiffeoType(enum.Enum):
    """Diffeomorphism type of the surface, determined by the parity of a."""

    EVEN = "even"  # product of two projective lines
    ODD = "odd"    # the index-1 surface

    @property
    def representative_index(self) -> int:
        return 0 if self is DiffeoType.EVEN else 1


def diffeo_type(a: int) -> DiffeoType:
    return DiffeoType.EVEN if a % 2 == 0 else DiffeoType.ODD


def primitive_square_zero(a: int) -> tuple[ClassDeg2, ...]:
    """The four primitive degree-2 classes with square zero.

    Writing z = p*g1 + q*g2, the square is q(aq + 2p) times the top class, so
    either q = 0 (giving +-g1) or aq + 2p = 0, whose primitive solutions are
    +-(g2 - (a/2) g1) for even a and +-(2 g2 - a g1) for odd a.
    """
    first = ClassDeg2((1, 0))
    if a % 2 == 0:
        other = ClassDeg2((-a // 2, 1))
    else:
        other = ClassDeg2((-a, 2))
    return (first, -first, other, -other)


# Degree-2 matrices induced by the three explicit surface diffeomorphisms,
# recorded as certificate labels only (the first is defined for index +-1).
def reflection_map_matrix(a: int) -> FiberAutomorphism:
    return FiberAutomorphism.from_entries(1, 0, -2 * a, -1)


def fiberwise_flip_matrix(a: int) -> FiberAutomorphism:
    return FiberAutomorphism.from_entries(1, a, 0, -1)


def base_flip_matrix(a: int) -> FiberAutomorphism:
    # Sign of the off-diagonal entry forced by relation preservation.
    return FiberAutomorphism.from_entries(-1, -a, 0, 1)
