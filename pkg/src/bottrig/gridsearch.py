"""Vectorized enumeration of base-fixing degree-2 maps between two towers.

The maps of interest fix the common base generators and send the two fiber
generators into a bounded coordinate box.  Such a map is a graded ring
isomorphism iff

  * the image z of the first fiber generator satisfies z(z - t1) = 0, where
    t1 is the twisting class of the source's first added stage,
  * the image w of the second satisfies w(w - a z - t2) = 0, and
  * the 2x2 fiber block of the matrix is unimodular

(the base relations hold automatically and the full matrix is block
triangular).  Each condition is necessary, so filtering generator by
generator is equivalent to enumerating the full grid; the numpy filters act
on int64 and are guarded against overflow, and every surviving candidate is
re-checked with the exact integer path before being returned.
"""

from __future__ import annotations

import numpy as np

from .ring import (
    BottTower,
    ClassDeg2,
    GradedMap,
    InternalInconsistencyError,
    is_ring_iso,
)

# Residuals are sums of three products of entries bounded by SAFE_BOUND, far
# below 2^63; the guard keeps the int64 fast path exact.
SAFE_BOUND = 1_000_000

_GRID_CACHE: dict = {}
_STAGE_CACHE: dict = {}
_STAGE_CACHE_LIMIT = 100_000


def _coordinate_grid(m: int, box: int) -> np.ndarray:
    key = (m, box)
    grid = _GRID_CACHE.get(key)
    if grid is None:
        axes = [np.arange(-box, box + 1, dtype=np.int64)] * m
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m)
        if len(_GRID_CACHE) > 32:
            _GRID_CACHE.clear()
        _GRID_CACHE[key] = grid
    return grid


def _relation_mask(rows, Z: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Rows where the degree-4 product of the degree-2 vectors is zero."""
    ok = np.ones(Z.shape[0], dtype=bool)
    for j, row in enumerate(rows):
        zj, wj = Z[:, j], W[:, j]
        for l in range(j):
            v = Z[:, l] * wj + zj * W[:, l]
            if row[l]:
                v = v + row[l] * (zj * wj)
            ok &= v == 0
    return ok


def _square_zero_survivors(rows, t: tuple[int, ...], box: int) -> np.ndarray:
    """All vectors z in the box with z(z - t) = 0 over the given tower rows."""
    key = (rows, t, box)
    hit = _STAGE_CACHE.get(key)
    if hit is not None:
        return hit
    m = len(rows)
    grid = _coordinate_grid(m, box)
    tv = np.asarray(t, dtype=np.int64)
    survivors = grid[_relation_mask(rows, grid, grid - tv)]
    if len(_STAGE_CACHE) >= _STAGE_CACHE_LIMIT:
        _STAGE_CACHE.clear()
    _STAGE_CACHE[key] = survivors
    return survivors


def _check_bounds(rows, box: int):
    if box < 0:
        raise ValueError("box must be non-negative")
    if box > SAFE_BOUND:
        raise OverflowError(f"box {box} exceeds the checked-arithmetic bound")
    for row in rows:
        for v in row:
            if abs(v) > SAFE_BOUND:
                raise OverflowError("tower coefficient exceeds the checked-arithmetic bound")


def algebra_isos_fixing_base(
    src: BottTower, dst: BottTower, base_n: int, box: int
) -> list[GradedMap]:
    """All graded ring isomorphisms src -> dst fixing x_1..x_{base_n}, with
    the images of the two fiber generators in [-box, box] coordinates.

    Deterministic (lexicographic) output order.
    """
    m = src.n
    if m != base_n + 2 or dst.n != m:
        raise ValueError("towers must have height base_n + 2")
    if src.rows[:base_n] != dst.rows[:base_n]:
        raise ValueError("towers do not share the base")
    _check_bounds(src.rows, box)
    _check_bounds(dst.rows, box)

    t1 = src.rows[base_n] + (0, 0)
    y = src.rows[base_n + 1][:base_n]
    a = src.rows[base_n + 1][base_n]
    ty = np.asarray(y + (0, 0), dtype=np.int64)

    maps: list[GradedMap] = []
    prefix = tuple(ClassDeg2.basis(m, j) for j in range(1, base_n + 1))
    for z in _square_zero_survivors(dst.rows, t1, box):
        t2 = a * z + ty
        if np.abs(t2).max(initial=0) > SAFE_BOUND:
            raise OverflowError("intermediate class exceeds the checked-arithmetic bound")
        ws = _square_zero_survivors(dst.rows, tuple(int(v) for v in t2), box)
        if not len(ws):
            continue
        dets = z[base_n] * ws[:, base_n + 1] - z[base_n + 1] * ws[:, base_n]
        for w in ws[np.abs(dets) == 1]:
            gm = GradedMap(
                prefix
                + (
                    ClassDeg2(tuple(int(v) for v in z)),
                    ClassDeg2(tuple(int(v) for v in w)),
                )
            )
            if not is_ring_iso(src, dst, gm):
                raise InternalInconsistencyError(
                    "vectorized filter admitted a map the exact check rejects"
                )
            maps.append(gm)
    maps.sort(key=lambda g: g.matrix())
    return maps


def clear_caches():
    _GRID_CACHE.clear()
    _STAGE_CACHE.clear()
