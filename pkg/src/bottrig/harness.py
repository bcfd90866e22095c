"""Desk-scale exhaustive verification sweeps with reproducible reports.

Instances are enumerated in lexicographic order over bounded integer boxes;
work may be split into contiguous chunks across processes and is merged in
chunk order, so identical configurations give identical reports (up to wall
time).  Bounded search is explicitly incomplete as an existence decider: a
report only speaks about its box.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from multiprocessing import get_context
from typing import Iterator, Optional

from . import gridsearch
from .classifier import Conclusion, bundles_isomorphic
from .extension import (
    HirzebruchBundleData,
    enumerate_algebra_automorphisms,
    predicted_automorphism_set,
)
from .fiber import FiberAutomorphism, hirzebruch_automorphisms
from .ring import BottTower, ClassDeg2, GradedMap, InternalInconsistencyError


@dataclass(frozen=True)
class SearchConfig:
    base_height: int = 1
    coeff_bound: int = 2
    matrix_bound: Optional[int] = None
    parallel_chunks: int = 1

    def __post_init__(self):
        if self.base_height < 0 or self.coeff_bound < 0 or self.parallel_chunks < 1:
            raise ValueError("bounds must be non-negative and chunks positive")
        # Oracle soundness: the image box must cover every predicted image
        # for every fiber index in the scanned box.
        minimum = self.coeff_bound ** 2 + 6
        if self.matrix_bound is not None and self.matrix_bound < minimum:
            raise ValueError(
                f"matrix_bound {self.matrix_bound} below the sound minimum {minimum}"
            )

    @property
    def box(self) -> int:
        return self.matrix_bound if self.matrix_bound is not None else self.coeff_bound ** 2 + 6

    def to_json_dict(self) -> dict:
        return {
            "base_height": self.base_height,
            "coeff_bound": self.coeff_bound,
            "matrix_bound": self.box,
            "parallel_chunks": self.parallel_chunks,
        }


@dataclass
class RigidityReport:
    config: dict
    kind: str
    instances_scanned: int = 0
    isos_found: int = 0
    certificates_emitted: int = 0
    counterexamples: list = field(default_factory=list)
    wall_time: float = 0.0

    def merge(self, other: "RigidityReport"):
        self.instances_scanned += other.instances_scanned
        self.isos_found += other.isos_found
        self.certificates_emitted += other.certificates_emitted
        self.counterexamples.extend(other.counterexamples)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "kind": self.kind,
            "instances_scanned": self.instances_scanned,
            "isos_found": self.isos_found,
            "certificates_emitted": self.certificates_emitted,
            "counterexamples": self.counterexamples,
            "wall_time_s": round(self.wall_time, 3),
        }

    def summary_table(self) -> str:
        rows = [
            ("kind", self.kind),
            ("instances scanned", self.instances_scanned),
            ("isos found", self.isos_found),
            ("certificates emitted", self.certificates_emitted),
            ("counterexamples", len(self.counterexamples)),
            ("wall time [s]", round(self.wall_time, 3)),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def enumerate_towers(n: int, bound: int) -> Iterator[BottTower]:
    """All height-n towers with coefficients in [-bound, bound], lex order."""
    if n < 0:
        raise ValueError("height must be non-negative")
    slots = [(j, l) for j in range(2, n + 1) for l in range(1, j)]
    values = range(-bound, bound + 1)
    for combo in itertools.product(values, repeat=len(slots)):
        yield BottTower.from_entries(n, dict(zip(slots, combo)))


def enumerate_bundle_data(
    base: BottTower, bound: int
) -> Iterator[HirzebruchBundleData]:
    """All bundle data over ``base`` with integer data in [-bound, bound]."""
    n = base.n
    values = range(-bound, bound + 1)
    for c in itertools.product(values, repeat=n):
        for a in values:
            for y in itertools.product(values, repeat=n):
                yield HirzebruchBundleData(base, ClassDeg2(c), a, ClassDeg2(y))


def search_algebra_isos(
    d1: HirzebruchBundleData, d2: HirzebruchBundleData, cfg: SearchConfig
) -> tuple[GradedMap, ...]:
    """All base-fixing algebra isomorphisms between the two total rings with
    fiber-generator images in the config box.  Images of the first new
    generator are pruned by their quadratic relation before the second is
    scanned; both constraints are necessary, so no isomorphism in the box is
    missed.
    """
    if d1.base != d2.base:
        raise ValueError("bundle data do not share a base tower")
    return tuple(
        gridsearch.algebra_isos_fixing_base(d1.tower(), d2.tower(), d1.n, cfg.box)
    )


def brute_force_fiber_automorphisms(a: int, bound: int) -> tuple[FiberAutomorphism, ...]:
    """Unimodular 2x2 matrices with entries in [-bound, bound] passing the
    exact ring-isomorphism test on the index-a surface."""
    point = HirzebruchBundleData(
        BottTower.point(), ClassDeg2(()), a, ClassDeg2(())
    )
    t = point.tower()
    found = []
    for gm in gridsearch.algebra_isos_fixing_base(t, t, 0, bound):
        m = gm.matrix()
        found.append(
            FiberAutomorphism.from_entries(m[0][0], m[0][1], m[1][0], m[1][1])
        )
    return tuple(found)


def _table_instances(cfg: SearchConfig) -> list[HirzebruchBundleData]:
    out = []
    for base in enumerate_towers(cfg.base_height, cfg.coeff_bound):
        out.extend(enumerate_bundle_data(base, cfg.coeff_bound))
    return out


def _tables_chunk(cfg: SearchConfig, lo: int, hi: int) -> RigidityReport:
    report = RigidityReport(cfg.to_json_dict(), "extension-tables")
    for data in _table_instances(cfg)[lo:hi]:
        box = data.fiber_index ** 2 + 6
        predicted = predicted_automorphism_set(data)
        enumerated = enumerate_algebra_automorphisms(data, box)
        pm = sorted(ext.as_graded_map().matrix() for ext in predicted)
        em = sorted(g.matrix() for g in enumerated)
        report.instances_scanned += 1
        report.isos_found += len(em)
        report.certificates_emitted += len(pm)
        if pm != em or 8 % max(len(pm), 1):
            report.counterexamples.append(
                {
                    "data": data.to_json_dict(),
                    "box": box,
                    "predicted": [[list(r) for r in m] for m in pm],
                    "enumerated": [[list(r) for r in m] for m in em],
                    "agree": False,
                }
            )
    return report


def _rigidity_pairs(cfg: SearchConfig) -> list[tuple[HirzebruchBundleData, HirzebruchBundleData]]:
    pairs = []
    for base in enumerate_towers(cfg.base_height, cfg.coeff_bound):
        data = list(enumerate_bundle_data(base, cfg.coeff_bound))
        pairs.extend(itertools.product(data, data))
    return pairs


def _rigidity_chunk(cfg: SearchConfig, lo: int, hi: int) -> RigidityReport:
    report = RigidityReport(cfg.to_json_dict(), "rigidity")
    for d1, d2 in _rigidity_pairs(cfg)[lo:hi]:
        report.instances_scanned += 1
        isos = search_algebra_isos(d1, d2, cfg)
        report.isos_found += len(isos)
        if isos and (d1.fiber_index - d2.fiber_index) % 2:
            report.counterexamples.append(
                {
                    "kind": "parity",
                    "d1": d1.to_json_dict(),
                    "d2": d2.to_json_dict(),
                    "isos": len(isos),
                }
            )
            continue
        for iso in isos:
            entry = {
                "d1": d1.to_json_dict(),
                "d2": d2.to_json_dict(),
                "iso": [list(r) for r in iso.matrix()],
            }
            try:
                cert = bundles_isomorphic(d1, d2, iso)
            except InternalInconsistencyError as exc:
                report.counterexamples.append(
                    dict(entry, kind="internal-inconsistency", error=str(exc))
                )
                continue
            if cert.conclusion is not Conclusion.ISOMORPHIC_OVER_BASE:
                report.counterexamples.append(dict(entry, kind="not-certified"))
            elif not cert.verify():
                report.counterexamples.append(dict(entry, kind="unsound-certificate"))
            else:
                report.certificates_emitted += 1
    return report


_CHUNK_RUNNERS = {"extension-tables": _tables_chunk, "rigidity": _rigidity_chunk}


def _run_chunk(args) -> RigidityReport:
    kind, cfg, lo, hi = args
    return _CHUNK_RUNNERS[kind](cfg, lo, hi)


def _run_sweep(kind: str, cfg: SearchConfig, total: int) -> RigidityReport:
    start = time.monotonic()
    chunks = min(cfg.parallel_chunks, max(total, 1))
    bounds = [
        (kind, cfg, (total * i) // chunks, (total * (i + 1)) // chunks)
        for i in range(chunks)
    ]
    if chunks == 1:
        parts = [_run_chunk(bounds[0])]
    else:
        with get_context("fork").Pool(processes=chunks) as pool:
            parts = pool.map(_run_chunk, bounds)
    report = RigidityReport(cfg.to_json_dict(), kind)
    for part in parts:
        report.merge(part)
    report.wall_time = time.monotonic() - start
    return report


def verify_extension_tables(cfg: SearchConfig) -> RigidityReport:
    """Closed-form table versus exhaustive oracle over the whole box."""
    return _run_sweep("extension-tables", cfg, len(_table_instances(cfg)))


def verify_rigidity(cfg: SearchConfig) -> RigidityReport:
    """Every algebra isomorphism found in the box must certify as a bundle
    isomorphism, with no internal inconsistencies and no cross-parity isos."""
    return _run_sweep("rigidity", cfg, len(_rigidity_pairs(cfg)))


def census(cfg: SearchConfig) -> list[dict]:
    """Group bundle data over each base by algebra-isomorphism (in the box)."""
    groups_out = []
    for base in enumerate_towers(cfg.base_height, cfg.coeff_bound):
        data = list(enumerate_bundle_data(base, cfg.coeff_bound))
        labels = list(range(len(data)))

        def find(i):
            while labels[i] != i:
                labels[i] = labels[labels[i]]
                i = labels[i]
            return i

        for i in range(len(data)):
            for j in range(i + 1, len(data)):
                if find(i) == find(j):
                    continue
                if (data[i].fiber_index - data[j].fiber_index) % 2:
                    continue
                if search_algebra_isos(data[i], data[j], cfg):
                    labels[find(j)] = find(i)
        groups: dict[int, list] = {}
        for i, d in enumerate(data):
            groups.setdefault(find(i), []).append(d.to_json_dict())
        groups_out.append(
            {
                "base": base.to_json_dict(),
                "classes": sorted(groups.values(), key=json.dumps),
            }
        )
    return groups_out
