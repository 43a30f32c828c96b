"""Command line interface: ``spunnorm <command> <triangulation file> ...``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import export
from .boundary import BoundaryMaps, ends_embeddable, num_boundary_components
from .errors import InputError, SpunNormError
from .export import fraction_str
from .normball import Pipeline, compute_norm_ball
from .quads import check_vector, forget_orientation
from .snappea import import_snappea
from .surfaces import analyze, is_embedded, orientation_lifts, reconstruct
from .triangulation import Triangulation, load_native

EXIT_UNCERTIFIED = 4


def load_triangulation(path: str) -> Triangulation:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("% Triangulation"):
        return import_snappea(text)
    return load_native(text)


def _read_vector(path: str) -> list:
    try:
        text = Path(path).read_text(encoding="utf-8").strip()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text.replace(",", " ").split()
    try:
        return [int(v) for v in data]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: expected a list of integers") from exc


def _emit(data, out=None):
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _pairs(pairs):
    return [[fraction_str(a), fraction_str(b)] for a, b in pairs]


def cmd_info(args) -> int:
    pipe = Pipeline(load_triangulation(args.file))
    tri, h = pipe.tri, pipe.homology
    _emit({
        "manifold": tri.name,
        "tetrahedra": tri.num_tets,
        "edges": len(tri.edges),
        "cusps": tri.num_cusps,
        "cusp_triangles": [len(c.corners) for c in tri.cusps],
        "cusp_basis": "derived" if pipe.derived_bases else "input",
        "b1": h.b1,
        "torsion": h.torsion,
        "h2_dimension": h.h2.dim,
        "homology_map": "peripheral" if h.peripheral_available else "simplicial",
        "longitudes": {str(k): {"class": list(v), "order": h.orders[k]} for k, v in sorted(h.longitudes.items())},
        "basis_id": export.basis_id(pipe),
    })
    return 0


def cmd_normball(args) -> int:
    pipe = Pipeline(load_triangulation(args.file))
    ball = compute_norm_ball(pipe, threads=args.threads)
    report = export.to_json(pipe, ball)
    if args.json:
        Path(args.json).write_text(report, encoding="utf-8")
    else:
        sys.stdout.write(report)
    if args.off:
        Path(args.off).write_text(export.to_off(ball), encoding="utf-8")
    if args.svg:
        Path(args.svg).write_text(export.to_svg(pipe, ball), encoding="utf-8")
    for v in ball.vertices:
        print(v.label, file=sys.stderr)
    if not ball.certified:
        print("warning: b1 = 1, reporting an upper bound only", file=sys.stderr)
        return EXIT_UNCERTIFIED
    return 0


def _entry_dict(pipe: Pipeline, i: int, full: bool) -> dict:
    e = pipe.qtons[i]
    out = {
        "index": e.index,
        "euler": fraction_str(e.euler),
        "homology": [fraction_str(c) for c in e.coordinates],
        "outward": _pairs(e.outward),
        "inward": _pairs(e.inward),
        "spinning_slopes": _pairs(e.spinning),
        "boundary": e.boundary_components,
        "ends_embedded": e.ends_embedded,
    }
    if full:
        data = pipe.qtons.surface(i)
        out["vector"] = list(e.vector)
        out["surface"] = data["report"].as_dict()
        out["embedded"] = data["embedded"]
    return out


def cmd_qtons(args) -> int:
    pipe = Pipeline(load_triangulation(args.file))
    table = pipe.qtons
    if args.index is not None:
        if not 0 <= args.index < len(table):
            raise InputError(f"index {args.index} out of range (table has {len(table)} entries)")
        _emit(_entry_dict(pipe, args.index, True))
    else:
        _emit({"count": len(table), "qtons": [_entry_dict(pipe, i, False) for i in range(len(table))]})
    return 0


def cmd_surface(args) -> int:
    pipe = Pipeline(load_triangulation(args.file))
    tri = pipe.tri
    vec = _read_vector(args.vector)
    bm = BoundaryMaps(tri, pipe.bases)
    if args.oriented:
        xo = check_vector(vec, 6 * tri.num_tets, "oriented vector")
        x = forget_orientation(xo)
        complex_ = reconstruct(tri, xo=xo, expected_euler=pipe.angles.chi(xo, oriented=True))
        lifts = [xo]
        embedded = is_embedded(tri, xo)
    else:
        x = check_vector(vec, 3 * tri.num_tets, "unoriented vector")
        complex_ = reconstruct(tri, x=x, expected_euler=pipe.angles.chi(x))
        lifts = orientation_lifts(tri, x, complex_)
        embedded = True
    report = analyze(complex_).as_dict()
    if lifts:
        bc = bm.classes(lifts[0])
        report["slopes"] = {"outward": _pairs(bc.outward), "inward": _pairs(bc.inward)}
        report["ends_embedded"] = ends_embeddable(bc)
        report["boundary_from_slopes"] = num_boundary_components(bc)[1]
    else:
        report["slopes"] = None
        report["ends_embedded"] = None
    report["spinning_slopes"] = _pairs(bm.spinning(x))
    report["embedded"] = embedded
    report["euler_functional"] = fraction_str(pipe.angles.chi(x))
    _emit(report)
    return 0


def cmd_angles(args) -> int:
    pipe = Pipeline(load_triangulation(args.file))
    a = pipe.angles
    t = pipe.tri.num_tets
    _emit({
        "units": "pi",
        "cusp_basis": "derived" if pipe.derived_bases else "input",
        "angles": [[fraction_str(v) for v in a.angles[3 * i:3 * i + 3]] for i in range(t)],
        "holonomy": {str(k): [fraction_str(v) for v in pair] for k, pair in sorted(a.ledger.items())},
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spunnorm", description="Thurston norm balls from spun-normal surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="homology and cusp data")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("normball", help="compute the Thurston norm unit ball")
    s.add_argument("file")
    s.add_argument("--json", metavar="OUT")
    s.add_argument("--off", metavar="OUT")
    s.add_argument("--svg", metavar="OUT")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_normball)

    s = sub.add_parser("qtons", help="list admissible extreme rays")
    s.add_argument("file")
    s.add_argument("--index", type=int)
    s.set_defaults(func=cmd_qtons)

    s = sub.add_parser("surface", help="analyse one quad vector")
    s.add_argument("file")
    s.add_argument("--vector", required=True)
    s.add_argument("--oriented", action="store_true")
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("angles", help="generalized angle structure with zero holonomy")
    s.add_argument("file")
    s.set_defaults(func=cmd_angles)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except SpunNormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
