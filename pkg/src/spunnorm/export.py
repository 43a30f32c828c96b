"""Serialising norm balls: JSON report, OFF polyhedron, SVG drawing."""

from __future__ import annotations

import hashlib
import io
import json
import math
from fractions import Fraction

from .errors import InputError
from .exact import Polytope, kernel_basis
from .normball import NormBall, Pipeline


def fraction_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pairs(pairs) -> list:
    return [[fraction_str(a), fraction_str(b)] for a, b in pairs]


def basis_id(pipe: Pipeline) -> str:
    """Short digest identifying the homology basis used for coordinates."""
    h = pipe.homology
    if h.peripheral_available:
        payload = {"longitudes": [list(h.longitudes[i]) for i in sorted(h.longitudes)],
                   "orders": [h.orders[i] for i in sorted(h.orders)]}
    else:
        payload = {"cycles": h.h2.cycles}
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def report_dict(pipe: Pipeline, ball: NormBall) -> dict:
    tri = pipe.tri
    out = {
        "manifold": tri.name,
        "tetrahedra": tri.num_tets,
        "cusps": tri.num_cusps,
        "b1": pipe.homology.b1,
        "certified": ball.certified,
        "basis": ball.basis,
        "basis_id": basis_id(pipe),
        "cusp_basis": "derived" if pipe.derived_bases else "input",
        "qtons": len(pipe.qtons),
        "vertices": [
            {
                "coordinates": [fraction_str(c) for c in v.coordinates],
                "qtons": v.index,
                "scale": fraction_str(v.scale),
                "surface": v.surface,
                "embedded": v.embedded,
                "outward": _pairs(v.outward),
                "inward": _pairs(v.inward),
                "label": v.label,
            }
            for v in ball.vertices
        ],
        "notes": list(ball.notes),
    }
    if ball.polytope is not None:
        out["facets"] = [
            {"normal": [fraction_str(c) for c in nrm], "offset": fraction_str(off)}
            for nrm, off in ball.polytope.facets
        ]
    if not ball.certified:
        out["upper_bound"] = fraction_str(ball.bound) if ball.bound is not None else None
    return out


def to_json(pipe: Pipeline, ball: NormBall) -> str:
    return json.dumps(report_dict(pipe, ball), indent=2, sort_keys=True) + "\n"


# -- geometry helpers ---------------------------------------------------------

def edges(poly: Polytope) -> list[tuple[int, int]]:
    """Pairs of vertices spanning an edge: no third vertex lies on all their common facets."""
    on = [set() for _ in poly.vertices]
    for f, verts in enumerate(poly.face_vertices):
        for v in verts:
            on[v].add(f)
    out = []
    n = len(poly.vertices)
    for i in range(n):
        for j in range(i + 1, n):
            common = on[i] & on[j]
            if len(common) < poly.affine_dim - 1:
                continue
            if not any(k not in (i, j) and common <= on[k] for k in range(n)):
                out.append((i, j))
    return out


def _ordered_face(poly: Polytope, facet: int) -> list[int]:
    """Vertices of a facet of a 3-polytope, counter-clockwise seen from outside."""
    verts = poly.face_vertices[facet]
    pts = [[float(c) for c in poly.vertices[v]] for v in verts]
    normal = [float(c) for c in poly.facets[facet][0]]
    centre = [sum(col) / len(pts) for col in zip(*pts)]
    u = [a - b for a, b in zip(pts[0], centre)]
    w = [normal[1] * u[2] - normal[2] * u[1], normal[2] * u[0] - normal[0] * u[2], normal[0] * u[1] - normal[1] * u[0]]

    def angle(p):
        d = [a - b for a, b in zip(p, centre)]
        return math.atan2(sum(a * b for a, b in zip(d, w)), sum(a * b for a, b in zip(d, u)))

    return [v for _, v in sorted(zip(map(angle, pts), verts))]


def to_off(ball: NormBall) -> str:
    poly = ball.polytope
    if poly is None or poly.dim != 3 or poly.affine_dim != 3:
        raise InputError("OFF export needs a 3-dimensional ball")
    lines = ["OFF", f"{len(poly.vertices)} {len(poly.facets)} 0"]
    for v in poly.vertices:
        lines.append(" ".join(repr(float(c)) for c in v))
    for f in range(len(poly.facets)):
        cyc = _ordered_face(poly, f)
        lines.append(" ".join(str(x) for x in [len(cyc)] + cyc))
    return "\n".join(lines) + "\n"


def _project(poly: Polytope) -> list[tuple[float, float]]:
    """Plane positions: identity in 2D, a fixed oblique view in 3D, Schlegel then oblique in 4D."""
    pts = [[float(c) for c in v] for v in poly.vertices]
    d = poly.dim
    if d == 1:
        return [(p[0], 0.0) for p in pts]
    if d == 2:
        return [(p[0], p[1]) for p in pts]
    if d == 4:
        # perspective from just outside the first facet onto its hyperplane
        normal = [float(c) for c in poly.facets[0][0]]
        offset = float(poly.facets[0][1])
        scale = math.sqrt(sum(c * c for c in normal))
        n = [c / scale for c in normal]
        h = offset / scale
        eye = [1.1 * h * c for c in n]
        span = [[float(c) for c in row] for row in kernel_basis([poly.facets[0][0]], 4)]
        span = _orthonormal(span)
        flat = []
        for p in pts:
            direction = [a - b for a, b in zip(p, eye)]
            t = (h - sum(a * b for a, b in zip(eye, n))) / sum(a * b for a, b in zip(direction, n))
            q = [e + t * c for e, c in zip(eye, direction)]
            flat.append([sum(a * b for a, b in zip(q, s)) for s in span])
        pts = flat
    if len(pts[0]) != 3:
        raise InputError(f"SVG export supports dimensions 1 to 4, not {d}")
    yaw, pitch = math.radians(35), math.radians(25)
    out = []
    for x, y, z in pts:
        x1 = x * math.cos(yaw) - y * math.sin(yaw)
        y1 = x * math.sin(yaw) + y * math.cos(yaw)
        out.append((x1, z * math.cos(pitch) - y1 * math.sin(pitch)))
    return out


def _orthonormal(vectors):
    basis = []
    for v in vectors:
        w = list(v)
        for b in basis:
            dot = sum(a * c for a, c in zip(w, b))
            w = [a - dot * c for a, c in zip(w, b)]
        norm = math.sqrt(sum(a * a for a in w))
        basis.append([a / norm for a in w])
    return basis


def to_svg(pipe: Pipeline, ball: NormBall) -> str:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if ball.polytope is not None:
        poly = ball.polytope
        pos = _project(poly)
        segs = edges(poly) if poly.affine_dim > 1 else [(0, 1)]
    else:
        pos = [(float(v.coordinates[0]), 0.0) for v in ball.vertices]
        segs = [(0, 1)] if len(pos) == 2 else []
    matplotlib.rcParams["svg.hashsalt"] = "spunnorm"
    fig, ax = plt.subplots(figsize=(5, 5))
    for i, j in segs:
        ax.plot([pos[i][0], pos[j][0]], [pos[i][1], pos[j][1]], color="black", linewidth=1)
    ax.scatter([p[0] for p in pos], [p[1] for p in pos], color="tab:red", s=12, zorder=3)
    title = pipe.tri.name or "norm ball"
    if not ball.certified:
        title += " (upper bound, not certified)"
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.axis("off")
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()
