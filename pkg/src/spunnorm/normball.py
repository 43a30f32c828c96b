"""Thurston norm unit ball from the admissible extreme rays of the oriented quad cone."""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .angles import solve_gas
from .boundary import BoundaryMaps, ends_embeddable, num_boundary_components
from .cusps import CuspTorus, cusp_bases
from .errors import ContractViolation
from .exact import Polytope, convex_hull, extreme_rays
from .homology import Homology
from .quads import admissible_support, build_matching, forget_orientation
from .surfaces import analyze, is_embedded, reconstruct
from .triangulation import Triangulation


class Pipeline:
    """Everything derived from one triangulation, computed on first use."""

    def __init__(self, tri: Triangulation):
        self.tri = tri
        self.bases, self.derived_bases = cusp_bases(tri)

    @cached_property
    def matching(self):
        return build_matching(self.tri)

    @cached_property
    def angles(self):
        return solve_gas(self.tri, self.bases)

    @cached_property
    def boundary(self) -> BoundaryMaps:
        return BoundaryMaps(self.tri, self.bases)

    @cached_property
    def homology(self) -> Homology:
        return Homology(self.tri, self.bases)

    @cached_property
    def tori(self) -> list[CuspTorus]:
        return [CuspTorus(self.tri, k) for k in range(self.tri.num_cusps)]

    @cached_property
    def qtons(self) -> "QtonsTable":
        return enumerate_qtons(self)

    def euler(self, xo) -> Fraction:
        return self.angles.chi(xo, oriented=True)

    def coordinates(self, xo) -> tuple[Fraction, ...]:
        h = self.homology
        total = self.boundary.classes(xo).total if h.peripheral_available else None
        return tuple(h.coordinates(xo, total))


@dataclass
class QtonsEntry:
    index: int
    vector: tuple[int, ...]
    euler: Fraction
    outward: tuple
    inward: tuple
    spinning: list
    coordinates: tuple[Fraction, ...]
    ends_embedded: bool
    boundary_components: int
    _surface: dict | None = field(default=None, repr=False)

    @property
    def point(self) -> tuple[Fraction, ...] | None:
        if self.euler >= 0:
            return None
        return tuple(c / -self.euler for c in self.coordinates)


class QtonsTable:
    """Admissible extreme rays in lexicographic order, with lazily computed surface data."""

    def __init__(self, pipe: Pipeline, rays):
        self.pipe = pipe
        self.entries = []
        bm = pipe.boundary
        for i, r in enumerate(rays):
            bc = bm.classes(r)
            self.entries.append(QtonsEntry(
                index=i,
                vector=tuple(r),
                euler=pipe.euler(r),
                outward=bc.outward,
                inward=bc.inward,
                spinning=bm.spinning(forget_orientation(r)),
                coordinates=pipe.coordinates(r),
                ends_embedded=ends_embeddable(bc),
                boundary_components=num_boundary_components(bc)[1],
            ))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i) -> QtonsEntry:
        return self.entries[i]

    def surface(self, i: int) -> dict:
        e = self.entries[i]
        if e._surface is None:
            e._surface = _surface_data(self.pipe.tri, e.vector, e.euler)
        return e._surface

    def annotate(self, indices, threads: int = 1):
        todo = [i for i in dict.fromkeys(indices) if self.entries[i]._surface is None]
        if threads > 1 and len(todo) > 1:
            args = [(self.pipe.tri, self.entries[i].vector, self.entries[i].euler) for i in todo]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                for i, data in zip(todo, pool.map(_surface_star, args)):
                    self.entries[i]._surface = data
        for i in indices:
            self.surface(i)


def _surface_data(tri, vector, euler) -> dict:
    report = analyze(reconstruct(tri, xo=list(vector), expected_euler=euler))
    return {"report": report, "embedded": is_embedded(tri, vector)}


def _surface_star(args):
    return _surface_data(*args)


def enumerate_qtons(pipe: Pipeline) -> QtonsTable:
    t = pipe.tri.num_tets
    rays = extreme_rays(pipe.matching.oriented, 6 * t, admissible_support(t))
    return QtonsTable(pipe, rays)


# -- the ball -------------------------------------------------------------

@dataclass
class VertexRecord:
    coordinates: tuple[Fraction, ...]
    index: int | None
    scale: Fraction
    surface: str
    embedded: bool
    outward: tuple = ()
    inward: tuple = ()

    @property
    def label(self) -> str:
        coords = ",".join(_fmt(c) for c in self.coordinates)
        name = self.surface if self.scale == 1 else f"({_fmt(self.scale)})*{self.surface}"
        return f"{name} at ({coords})"


@dataclass
class NormBall:
    certified: bool
    basis: str
    polytope: Polytope | None
    vertices: list[VertexRecord]
    bound: Fraction | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.vertices[0].coordinates) if self.vertices else 0


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check_euler_signs(table: QtonsTable):
    for e in table.entries:
        if e.euler > 0:
            raise ContractViolation(
                f"qtons {e.index} has positive Euler characteristic: "
                "triangulation not 0-efficient or manifold not hyperbolic"
            )


def _zero_euler_notes(table: QtonsTable) -> list[str]:
    notes = []
    zero = [e for e in table.entries if e.euler == 0]
    if zero:
        notes.append(f"{len(zero)} qtons with Euler characteristic 0 contribute no point")
    for e in zero:
        if any(e.coordinates):
            msg = f"qtons {e.index} has Euler characteristic 0 but nonzero homology class: manifold may be toroidal"
            warnings.warn(msg)
            notes.append(msg)
    return notes


def _representative(table: QtonsTable, point, threads: int) -> VertexRecord:
    hits = [e for e in table.entries if e.point == point]
    least = min(-e.euler for e in hits)
    hits = [e for e in hits if -e.euler == least]
    table.annotate([e.index for e in hits], threads)
    best = min(hits, key=lambda e: (
        not table.surface(e.index)["embedded"],
        not e.ends_embedded,
        e.boundary_components,
        e.index,
    ))
    data = table.surface(best.index)
    return VertexRecord(point, best.index, Fraction(1) / least, data["report"].type, data["embedded"],
                        best.outward, best.inward)


def compute_norm_ball(pipe: Pipeline, threads: int = 1) -> NormBall:
    """Unit ball of the Thurston norm; an uncertified upper bound when b1 = 1."""
    if pipe.homology.b1 < 2:
        return knot_upper_bound(pipe, threads)
    table = pipe.qtons
    _check_euler_signs(table)
    notes = _zero_euler_notes(table)
    points = sorted({e.point for e in table.entries if e.point is not None})
    if not points:
        raise ContractViolation("no qtons with negative Euler characteristic")
    hull = convex_hull(points)
    verts = set(hull.vertices)
    if {tuple(-c for c in v) for v in verts} != verts:
        raise ContractViolation("computed ball is not centrally symmetric")
    if hull.affine_dim < len(points[0]):
        notes.append(f"ball spans only {hull.affine_dim} of {len(points[0])} dimensions")
    records = [_representative(table, v, threads) for v in hull.vertices]
    basis = "longitude" if pipe.homology.peripheral_available else "simplicial"
    return NormBall(True, basis, hull, records, None, notes)


def knot_upper_bound(pipe: Pipeline, threads: int = 1) -> NormBall:
    """For b1 = 1: the largest |H|/|chi*| over qtons bounds the unit ball from inside."""
    table = pipe.qtons
    _check_euler_signs(table)
    notes = _zero_euler_notes(table)
    notes.append("b1 = 1: not a certified norm ball; the generator's norm is at most the reported bound")
    basis = "longitude" if pipe.homology.peripheral_available else "simplicial"
    candidates = [e.point for e in table.entries if e.point is not None and any(e.point)]
    if not candidates:
        notes.append("no bound available: no qtons has nonzero homology class")
        return NormBall(False, basis, None, [], None, notes)
    reach = max(abs(p[0]) for p in candidates)
    ends = [(-reach,), (reach,)]
    records = [_representative(table, p, threads) for p in ends if p in set(candidates)]
    return NormBall(False, basis, None, records, 1 / reach, notes)
