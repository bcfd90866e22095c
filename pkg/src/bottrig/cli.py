"""Command-line front end.

Matrices are given row-major; everywhere the convention is that the columns
of a matrix are the images of the generators.  Inputs may be file paths or
inline JSON.  Exit codes: 0 success, 1 counterexamples found, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classifier import bundles_isomorphic
from .extension import (
    DoesNotExtend,
    ExtensionResult,
    HirzebruchBundleData,
    extension_condition,
)
from .fiber import FiberAutomorphism, diffeo_type, hirzebruch_automorphisms
from .harness import (
    RigidityReport,
    SearchConfig,
    census,
    verify_rigidity,
    verify_extension_tables,
)
from .ring import BottTower, GradedMap, InternalInconsistencyError, RingElement, mul


def _load_json(arg: str):
    text = arg.strip()
    if text.startswith("{") or text.startswith("["):
        return json.loads(text)
    with open(arg) as fh:
        return json.load(fh)


def _print(payload, fmt: str, table_renderer):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        table_renderer(payload)


def _add_format(parser):
    parser.add_argument(
        "--format", choices=("json", "table"), default="table", help="output format"
    )


def _default_jobs() -> int:
    env = os.environ.get("BOTTRIG_JOBS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _add_sweep_flags(parser):
    parser.add_argument("--base-height", type=int, default=1)
    parser.add_argument("--coeff-bound", type=int, default=2)
    parser.add_argument(
        "--matrix-bound",
        type=int,
        default=None,
        help="image box for isomorphism search (default: coeff_bound^2 + 6)",
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=_default_jobs(),
        help="parallel chunks (default from BOTTRIG_JOBS, else 1)",
    )
    _add_format(parser)


def _config(args) -> SearchConfig:
    return SearchConfig(
        base_height=args.base_height,
        coeff_bound=args.coeff_bound,
        matrix_bound=args.matrix_bound,
        parallel_chunks=args.jobs,
    )


def _cmd_ring_mul(args) -> int:
    doc = _load_json(args.input)
    tower = BottTower.from_json_dict(doc["tower"])
    e1 = RingElement.from_json_list(tower, doc["e1"])
    e2 = RingElement.from_json_list(tower, doc["e2"])
    product = mul(tower, e1, e2)
    payload = {"product": product.to_json_list()}
    _print(payload, args.format, lambda p: print(product))
    return 0


def _cmd_autos(args) -> int:
    autos = hirzebruch_automorphisms(args.a)
    kind = diffeo_type(args.a)
    payload = {
        "a": args.a,
        "surface_type": kind.value,
        "automorphisms": [
            {
                "matrix": m.to_json_list(),
                "det": m.det(),
                "upper_triangular": m.is_upper_triangular(),
            }
            for m in autos
        ],
    }

    def render(p):
        print(f"index {args.a} surface ({kind.value} type), 8 automorphisms")
        print("(columns are images of the fiber generators)")
        for entry in p["automorphisms"]:
            (r1, r2) = entry["matrix"]
            tag = "upper-triangular" if entry["upper_triangular"] else "non-triangular"
            print(f"  ({r1[0]:>3} {r1[1]:>3}; {r2[0]:>3} {r2[1]:>3})   det {entry['det']:+d}  {tag}")

    _print(payload, args.format, render)
    return 0


def _cmd_extend(args) -> int:
    data = HirzebruchBundleData.from_json_dict(_load_json(args.input))
    p11, p12, p21, p22 = args.matrix
    p = FiberAutomorphism.from_entries(p11, p12, p21, p22)
    decision = extension_condition(data, p)
    if isinstance(decision, DoesNotExtend):
        payload = {"extends": False, "reason": decision.reason}
        _print(payload, args.format, lambda _: print(f"DoesNotExtend: {decision.reason}"))
    else:
        payload = {"extends": True, **decision.to_json_dict()}

        def render(_):
            print("Extends")
            print(f"  u1 = {list(decision.shift1.coords)}")
            print(f"  u2 = {list(decision.shift2.coords)}")

        _print(payload, args.format, render)
    return 0


def _cmd_classify(args) -> int:
    doc = _load_json(args.input)
    d1 = HirzebruchBundleData.from_json_dict(doc["d1"])
    d2 = HirzebruchBundleData.from_json_dict(doc["d2"])
    iso_doc = doc["iso"]
    matrix = iso_doc["matrix"] if isinstance(iso_doc, dict) else iso_doc
    iso = GradedMap.from_matrix(matrix)
    cert = bundles_isomorphic(d1, d2, iso)
    payload = cert.to_json_dict()
    if args.explain:
        payload["explanations"] = cert.explain()

    def render(p):
        print(f"conclusion: {p['conclusion']}")
        for i, step in enumerate(p["steps"]):
            print(f"  step {i + 1}: {step['move']}")
            if args.explain:
                print(f"    {cert.explain()[i]}")

    _print(payload, args.format, render)
    return 0


def _report_exit(report: RigidityReport, fmt: str) -> int:
    _print(report.to_json_dict(), fmt, lambda _: print(report.summary_table()))
    return 0 if report.ok else 1


def _cmd_verify_s4(args) -> int:
    return _report_exit(verify_extension_tables(_config(args)), args.format)


def _cmd_verify_main(args) -> int:
    return _report_exit(verify_rigidity(_config(args)), args.format)


def _cmd_census(args) -> int:
    groups = census(_config(args))

    def render(gs):
        for entry in gs:
            print(f"base {entry['base']}")
            for i, cls in enumerate(entry["classes"]):
                print(f"  class {i + 1}: {len(cls)} bundle data")

    _print(groups, args.format, render)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bottrig",
        description=(
            "exact cohomology arithmetic, automorphism tables, extension "
            "decisions, bundle-isomorphism certificates, and verification "
            "sweeps for surface bundles in Bott towers"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring-mul", help="multiply two ring elements")
    p.add_argument("input", help='path or inline JSON {"tower":…,"e1":…,"e2":…}')
    _add_format(p)
    p.set_defaults(func=_cmd_ring_mul)

    p = sub.add_parser("autos", help="the 8 fiber automorphisms for an index")
    p.add_argument("a", type=int)
    _add_format(p)
    p.set_defaults(func=_cmd_autos)

    p = sub.add_parser("extend", help="decide extension of a fiber automorphism")
    p.add_argument("input", help="bundle data (path or inline JSON)")
    p.add_argument(
        "--matrix",
        type=int,
        nargs=4,
        required=True,
        metavar=("P11", "P12", "P21", "P22"),
        help="fiber matrix, row-major; columns are the generator images",
    )
    _add_format(p)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("classify", help="certify a supplied algebra isomorphism")
    p.add_argument("input", help='path or inline JSON {"d1":…,"d2":…,"iso":…}')
    p.add_argument("--explain", action="store_true", help="describe each move")
    _add_format(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify-s4", help="table-vs-oracle extension sweep")
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_verify_s4)

    p = sub.add_parser("verify-main", help="certify every iso found in the box")
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_verify_main)

    p = sub.add_parser("census", help="group bundle data by algebra isomorphism")
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_census)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
