"""Exact arithmetic in the cohomology ring of a Bott manifold.

The height-n tower determines the graded ring

    Z[x_1, ..., x_n] / (x_j^2 - alpha_j x_j,  j = 1..n)

where alpha_j is an integer combination of x_1, ..., x_{j-1}.  Since every
relation rewrites a square into lower-index terms, the square-free monomials
x_S = prod_{i in S} x_i (S a subset of {1..n}) form a Z-basis; elements are
stored as sparse maps from bitmask-encoded subsets to nonzero coefficients.

All values are immutable and all operations pure; everything here is safe to
share across worker processes.  Coefficients are Python ints, so arithmetic
never wraps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class HeightMismatchError(ValueError):
    """Operands live over towers of different heights."""


class InternalInconsistencyError(RuntimeError):
    """A condition that must hold for every genuine input failed.

    Raised when a re-verified side condition fails even though the inputs
    were produced by a sound path; this signals an implementation bug, never
    a mathematical outcome.
    """


@dataclass(frozen=True)
class BottTower:
    """Strictly lower-triangular integer data of an iterated CP^1-bundle.

    ``rows[j-1]`` holds the coefficients (a_j^1, ..., a_j^{j-1}) of
    alpha_j = sum_l a_j^l x_l; in particular ``rows[0] == ()`` always
    (alpha_1 = 0).  Height 0 is the point, whose ring is Z.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for j, row in enumerate(self.rows):
            if len(row) != j:
                raise ValueError(
                    f"row {j + 1} must have {j} entries, got {len(row)}"
                )
            if not all(isinstance(v, int) for v in row):
                raise ValueError("tower coefficients must be integers")

    @property
    def n(self) -> int:
        return len(self.rows)

    @staticmethod
    def point() -> "BottTower":
        return BottTower(())

    @staticmethod
    def cp1() -> "BottTower":
        return BottTower(((),))

    @staticmethod
    def hirzebruch(a: int) -> "BottTower":
        """The height-2 tower with x_2^2 = a x_1 x_2 (the surface Sigma_a)."""
        return BottTower(((), (a,)))

    @staticmethod
    def from_entries(n: int, entries: Mapping[tuple[int, int], int]) -> "BottTower":
        """Build from sparse 1-indexed entries {(j, l): a_j^l} with l < j."""
        rows = [[0] * (j - 1) for j in range(1, n + 1)]
        for (j, l), a in entries.items():
            if not (1 <= l < j <= n):
                raise ValueError(f"entry ({j}, {l}) out of range for height {n}")
            rows[j - 1][l - 1] = int(a)
        return BottTower(tuple(tuple(r) for r in rows))

    def alpha(self, j: int) -> "ClassDeg2":
        """The class alpha_j (1-indexed) as a degree-2 vector."""
        row = self.rows[j - 1]
        return ClassDeg2(row + (0,) * (self.n - len(row)))

    def extend(self, new_row: Sequence[int]) -> "BottTower":
        """Append one stage whose twisting class has the given coordinates."""
        if len(new_row) != self.n:
            raise ValueError("new row must have one entry per existing stage")
        return BottTower(self.rows + (tuple(int(v) for v in new_row),))

    def to_json_dict(self) -> dict:
        coeffs = [
            [j + 1, l + 1, a]
            for j, row in enumerate(self.rows)
            for l, a in enumerate(row)
            if a != 0
        ]
        return {"n": self.n, "coeffs": coeffs}

    @staticmethod
    def from_json_dict(d: Mapping) -> "BottTower":
        n = int(d["n"])
        entries = {}
        for j, l, a in d.get("coeffs", ()):
            if not l < j:
                raise ValueError(f"coefficient ({j}, {l}) violates l < j")
            entries[(int(j), int(l))] = int(a)
        return BottTower.from_entries(n, entries)


@dataclass(frozen=True)
class ClassDeg2:
    """A degree-2 class, as integer coordinates in the basis x_1..x_n."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not all(isinstance(v, int) for v in self.coords):
            raise ValueError("coordinates must be integers")

    @staticmethod
    def zero(n: int) -> "ClassDeg2":
        return ClassDeg2((0,) * n)

    @staticmethod
    def basis(n: int, j: int) -> "ClassDeg2":
        """The generator x_j (1-indexed) of a height-n ring."""
        return ClassDeg2(tuple(1 if i == j - 1 else 0 for i in range(n)))

    def __len__(self) -> int:
        return len(self.coords)

    def __add__(self, other: "ClassDeg2") -> "ClassDeg2":
        self._match(other)
        return ClassDeg2(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ClassDeg2") -> "ClassDeg2":
        self._match(other)
        return ClassDeg2(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ClassDeg2":
        return ClassDeg2(tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "ClassDeg2":
        return ClassDeg2(tuple(k * a for a in self.coords))

    def _match(self, other: "ClassDeg2"):
        if len(self.coords) != len(other.coords):
            raise HeightMismatchError(
                f"degree-2 classes of length {len(self.coords)} vs {len(other.coords)}"
            )

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_even(self) -> bool:
        return all(a % 2 == 0 for a in self.coords)

    def halve(self) -> Optional["ClassDeg2"]:
        """Exact division by 2; None when any coordinate is odd."""
        if not self.is_even():
            return None
        return ClassDeg2(tuple(a // 2 for a in self.coords))

    def scale_exact(self, num: int, den: int) -> "ClassDeg2":
        """Multiply by num/den, requiring exact divisibility coordinatewise."""
        out = []
        for a in self.coords:
            q, r = divmod(num * a, den)
            if r:
                raise InternalInconsistencyError(
                    f"class {self.coords} not divisible by {den}/{num}"
                )
            out.append(q)
        return ClassDeg2(tuple(out))

    def pad(self, n: int) -> "ClassDeg2":
        """Embed into a taller ring by appending zero coordinates."""
        if n < len(self.coords):
            raise ValueError("cannot pad to a smaller height")
        return ClassDeg2(self.coords + (0,) * (n - len(self.coords)))

    def append(self, *extra: int) -> "ClassDeg2":
        return ClassDeg2(self.coords + tuple(int(v) for v in extra))


def halve(c: ClassDeg2) -> Optional[ClassDeg2]:
    """Module-level alias for ClassDeg2.halve."""
    return c.halve()


def _mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError("repeated generator in square-free monomial")
        mask |= bit
    return mask


def _indices_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class RingElement:
    """An element of H*(B_n) in canonical square-free normal form.

    ``terms`` maps a bitmask (bit i-1 set iff x_i divides the monomial) to a
    nonzero integer coefficient.  Two elements are equal iff their towers and
    term maps agree; this is sound because the square-free monomials are a
    basis.
    """

    __slots__ = ("tower", "terms")

    def __init__(self, tower: BottTower, terms: Mapping[int, int]):
        clean = {m: int(c) for m, c in terms.items() if c != 0}
        for m in clean:
            if m < 0 or m >= (1 << tower.n):
                raise ValueError(f"monomial mask {m} out of range for height {tower.n}")
        self.tower = tower
        self.terms = clean

    @staticmethod
    def zero(tower: BottTower) -> "RingElement":
        return RingElement(tower, {})

    @staticmethod
    def one(tower: BottTower) -> "RingElement":
        return RingElement(tower, {0: 1})

    @staticmethod
    def generator(tower: BottTower, j: int) -> "RingElement":
        if not 1 <= j <= tower.n:
            raise ValueError(f"generator index {j} out of range")
        return RingElement(tower, {1 << (j - 1): 1})

    @staticmethod
    def monomial(tower: BottTower, indices: Iterable[int], coeff: int = 1) -> "RingElement":
        return RingElement(tower, {_mask_from_indices(indices): coeff})

    @staticmethod
    def from_class(tower: BottTower, c: ClassDeg2) -> "RingElement":
        if len(c) != tower.n:
            raise HeightMismatchError("class length does not match tower height")
        return RingElement(tower, {1 << i: a for i, a in enumerate(c.coords) if a})

    def as_class(self) -> ClassDeg2:
        """Inverse of from_class; requires the element to be homogeneous of degree 2."""
        coords = [0] * self.tower.n
        for mask, c in self.terms.items():
            if mask.bit_count() != 1:
                raise ValueError("element is not homogeneous of degree 2")
            coords[mask.bit_length() - 1] = c
        return ClassDeg2(tuple(coords))

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self, degree: int) -> bool:
        return all(2 * m.bit_count() == degree for m in self.terms)

    def _match(self, other: "RingElement"):
        if self.tower != other.tower:
            raise HeightMismatchError("elements over different towers")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.tower == other.tower and self.terms == other.terms

    def __hash__(self):
        return hash((self.tower, frozenset(self.terms.items())))

    def __add__(self, other: "RingElement") -> "RingElement":
        self._match(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return RingElement(self.tower, out)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._match(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return RingElement(self.tower, out)

    def __neg__(self) -> "RingElement":
        return RingElement(self.tower, {m: -c for m, c in self.terms.items()})

    def __rmul__(self, k: int) -> "RingElement":
        if not isinstance(k, int):
            return NotImplemented
        return RingElement(self.tower, {m: k * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.__rmul__(other)
        self._match(other)
        return mul(self.tower, self, other)

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = RingElement.one(self.tower)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mask in sorted(self.terms):
            c = self.terms[mask]
            mono = "*".join(f"x{i}" for i in _indices_from_mask(mask)) or "1"
            bits.append(f"{c}*{mono}" if mono != "1" else f"{c}")
        return " + ".join(bits)

    def to_json_list(self) -> list:
        return [
            [list(_indices_from_mask(mask)), c]
            for mask, c in sorted(self.terms.items())
        ]

    @staticmethod
    def from_json_list(tower: BottTower, data: Sequence) -> "RingElement":
        terms: dict[int, int] = {}
        for indices, c in data:
            mask = _mask_from_indices(indices)
            terms[mask] = terms.get(mask, 0) + int(c)
        return RingElement(tower, terms)


def normalize(tower: BottTower, expr: Mapping[tuple[int, ...], int]) -> RingElement:
    """Canonical normal form of a formal polynomial in x_1..x_n.

    ``expr`` maps exponent vectors (length n) to integer coefficients.  Each
    reduction replaces the highest repeated generator first, rewriting
    x_j^2 -> alpha_j x_j; since alpha_j only involves smaller indices this
    terminates, and the result is independent of the order taken.
    """
    n = tower.n
    out: dict[int, int] = {}
    work: list[tuple[tuple[int, ...], int]] = []
    for e, c in expr.items():
        if len(e) != n:
            raise HeightMismatchError("exponent vector length does not match height")
        if any(v < 0 for v in e):
            raise ValueError("negative exponents are not allowed")
        if c:
            work.append((tuple(e), int(c)))
    while work:
        e, c = work.pop()
        j = -1
        for i in range(n - 1, -1, -1):
            if e[i] >= 2:
                j = i
                break
        if j < 0:
            mask = 0
            for i, v in enumerate(e):
                if v:
                    mask |= 1 << i
            out[mask] = out.get(mask, 0) + c
            continue
        row = tower.rows[j]
        for l, a in enumerate(row):
            if a:
                e2 = list(e)
                e2[j] -= 1
                e2[l] += 1
                work.append((tuple(e2), c * a))
    return RingElement(tower, out)


def mul(tower: BottTower, e1: RingElement, e2: RingElement) -> RingElement:
    """Product in canonical normal form."""
    if e1.tower != tower or e2.tower != tower:
        raise HeightMismatchError("operands do not live over the given tower")
    n = tower.n
    out: dict[int, int] = {}
    pending: dict[tuple[int, ...], int] = {}
    for m1, c1 in e1.terms.items():
        for m2, c2 in e2.terms.items():
            common = m1 & m2
            if common == 0:
                m = m1 | m2
                out[m] = out.get(m, 0) + c1 * c2
            else:
                e = tuple(
                    ((m1 >> i) & 1) + ((m2 >> i) & 1) for i in range(n)
                )
                pending[e] = pending.get(e, 0) + c1 * c2
    result = RingElement(tower, out)
    if pending:
        result = result + normalize(tower, pending)
    return result


def pair_product(tower: BottTower, z: ClassDeg2, w: ClassDeg2) -> dict[tuple[int, int], int]:
    """The degree-4 product z*w in the basis {x_i x_j : i < j} (0-indexed pairs).

    A product of two degree-2 classes needs a single reduction step:
    x_i^2 contributes a_i^l x_l x_i, so the (l, i) coefficient is
    z_l w_i + z_i w_l + a_i^l z_i w_i.  Only nonzero entries are returned.
    """
    if len(z) != tower.n or len(w) != tower.n:
        raise HeightMismatchError("class length does not match tower height")
    zc, wc = z.coords, w.coords
    out: dict[tuple[int, int], int] = {}
    for i, row in enumerate(tower.rows):
        for l in range(i):
            v = zc[l] * wc[i] + zc[i] * wc[l] + row[l] * zc[i] * wc[i]
            if v:
                out[(l, i)] = v
    return out


def squares_to_zero(tower: BottTower, z: ClassDeg2) -> bool:
    return not pair_product(tower, z, z)


@dataclass(frozen=True)
class GradedMap:
    """A degree-2 substitution between two towers, columns-are-images.

    ``images[j-1]`` is the degree-2 class the generator x_j of the source is
    sent to.  Written as a matrix (target height x source height), the j-th
    column is that image; compositions multiply matrices accordingly.
    """

    images: tuple[ClassDeg2, ...]

    @property
    def src_n(self) -> int:
        return len(self.images)

    @property
    def dst_n(self) -> int:
        return len(self.images[0]) if self.images else 0

    @staticmethod
    def identity(n: int) -> "GradedMap":
        return GradedMap(tuple(ClassDeg2.basis(n, j) for j in range(1, n + 1)))

    @staticmethod
    def from_matrix(rows: Sequence[Sequence[int]]) -> "GradedMap":
        """Build from a (dst x src) integer matrix whose columns are images."""
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        return GradedMap(
            tuple(
                ClassDeg2(tuple(int(rows[i][j]) for i in range(nrows)))
                for j in range(ncols)
            )
        )

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(img.coords[i] for img in self.images)
            for i in range(self.dst_n)
        )

    def apply_class(self, c: ClassDeg2) -> ClassDeg2:
        if len(c) != self.src_n:
            raise HeightMismatchError("class length does not match map source")
        out = ClassDeg2.zero(self.dst_n)
        for coeff, img in zip(c.coords, self.images):
            if coeff:
                out = out + coeff * img
        return out

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """self o inner (apply ``inner`` first)."""
        if inner.dst_n != self.src_n:
            raise HeightMismatchError("composition heights do not match")
        return GradedMap(tuple(self.apply_class(img) for img in inner.images))

    def det(self) -> int:
        if self.src_n != self.dst_n:
            raise HeightMismatchError("determinant of a non-square map")
        return int_det([list(r) for r in self.matrix()])

    def inverse(self) -> "GradedMap":
        """Exact inverse; requires determinant +-1."""
        d = self.det()
        if d not in (1, -1):
            raise ValueError("map is not unimodular")
        m = self.matrix()
        n = self.src_n
        adj = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [
                    [m[r][c] for c in range(n) if c != j]
                    for r in range(n) if r != i
                ]
                cof = int_det(minor) if minor else 1
                if (i + j) % 2:
                    cof = -cof
                adj[j][i] = cof * d
        return GradedMap.from_matrix(adj)

    def fixes_prefix(self, k: int) -> bool:
        """True when x_1..x_k map identically (square maps only)."""
        for j in range(k):
            expect = tuple(1 if i == j else 0 for i in range(self.dst_n))
            if self.images[j].coords != expect:
                return False
        return True

    def is_upper_triangular(self) -> bool:
        m = self.matrix()
        return all(m[i][j] == 0 for i in range(len(m)) for j in range(i) )

    def to_json_dict(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix()]}

    @staticmethod
    def from_json_dict(d: Mapping) -> "GradedMap":
        return GradedMap.from_matrix(d["matrix"])


def int_det(m: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def apply_graded_map(
    src: BottTower, dst: BottTower, m: GradedMap, e: RingElement
) -> RingElement:
    """Substitute each generator by its image class and normalize in dst.

    This is a well-defined ring map only when is_ring_iso holds (or, more
    generally, when the images satisfy the source relations); callers that
    need homomorphy must check first.
    """
    if e.tower != src:
        raise HeightMismatchError("element does not live over the source tower")
    if m.src_n != src.n or m.dst_n != dst.n:
        raise HeightMismatchError("map shape does not match the towers")
    out = RingElement.zero(dst)
    for mask, c in e.terms.items():
        term = RingElement.one(dst)
        for j in _indices_from_mask(mask):
            term = term * RingElement.from_class(dst, m.images[j - 1])
        out = out + c * term
    return out


def is_ring_hom(src: BottTower, dst: BottTower, m: GradedMap) -> bool:
    """True iff the substitution kills every source relation x_j(x_j - alpha_j)."""
    if m.src_n != src.n or m.dst_n != dst.n:
        raise HeightMismatchError("map shape does not match the towers")
    for j in range(1, src.n + 1):
        z = m.images[j - 1]
        t = m.apply_class(src.alpha(j))
        if pair_product(dst, z, z - t):
            return False
    return True


def is_ring_iso(src: BottTower, dst: BottTower, m: GradedMap) -> bool:
    """Graded ring isomorphism test.

    Both rings are generated in degree 2 with the quotient presentations
    above, so m induces an isomorphism iff its degree-2 matrix is unimodular
    and every source relation maps to zero.
    """
    if src.n != dst.n:
        raise HeightMismatchError("isomorphism requires equal heights")
    if m.src_n != src.n or m.dst_n != dst.n:
        raise HeightMismatchError("map shape does not match the towers")
    if m.det() not in (1, -1):
        return False
    return is_ring_hom(src, dst, m)
