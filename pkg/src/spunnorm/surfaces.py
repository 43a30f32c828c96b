"""Reconstruction of the compact core of a spun-normal surface from quad coordinates.

Cells are quadrilateral copies and normal triangle copies.  Every cell
boundary arc lies in a face of a tetrahedron, cuts off one vertex of that
face and carries an integer label; arcs in glued faces with equal labels
are glued.  Two labelling schemes are used:

* immersed (transversely oriented vector): an arc is tagged ``+`` when the
  transverse orientation points at the vertex it cuts off, ``-`` otherwise.
  ``+`` arcs dual to ``a`` in the face opposite ``f`` are numbered 0, 1, ...
  starting with the copies of q_af, then the small triangles at ``a``;
  ``-`` arcs are numbered -1, -2, ... through the copies of the reversed
  quad, then the large triangles.
* embedded (unoriented vector): arcs dual to ``a`` are numbered by their
  position counted from the opposite side of the face, quads first.

Triangles exist at every level, so the surface is explored from the quads
and triangles above a cutoff level are left out; the arcs leading to them
form the boundary circles of the compact core.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError, ReconstructionError
from .quads import (
    ORIENTED,
    UNORIENTED,
    build_matching,
    forget_orientation,
    is_admissible,
    oriented_index,
    partition_of,
    reverse_type,
)
from .triangulation import VERTICES, Triangulation, other_two

QUAD, SMALL, LARGE, TRI = "quad", "small", "large", "tri"
MAX_DOUBLINGS = 8


def _face_others(f: int, v: int) -> tuple[int, int]:
    return tuple(x for x in VERTICES if x not in (f, v))


class _Scheme:
    """Cells and arc labels for one of the two labelling schemes."""

    def __init__(self, tri: Triangulation, x: Sequence[int], oriented: bool):
        self.tri = tri
        self.x = list(x)
        self.oriented = oriented

    def quads(self):
        width = 6 if self.oriented else 3
        for i, n in enumerate(self.x):
            t, k = divmod(i, width)
            for j in range(n):
                yield (QUAD, t, k, j)

    def arcs(self, cell):
        """(face, cut-off vertex, tag, label) for each boundary arc of ``cell``."""
        kind, t = cell[0], cell[1]
        x = self.x
        if self.oriented:
            if kind == QUAD:
                _, _, k, j = cell
                a, b = ORIENTED[k]
                c, d = other_two(a, b)
                n = x[6 * t + k]
                return [(b, a, 1, j), (a, b, 1, j), (d, c, 0, j - n), (c, d, 0, j - n)]
            _, _, a, m = cell
            out = []
            for f in VERTICES:
                if f == a:
                    continue
                k = oriented_index(a, f)
                if kind == SMALL:
                    out.append((f, a, 1, m + x[6 * t + k]))
                else:
                    out.append((f, a, 0, -(m + 1 + x[6 * t + reverse_type(k)])))
            return out
        if kind == QUAD:
            _, _, k, j = cell
            s1, s2 = UNORIENTED[k]
            n = x[3 * t + k]
            out = []
            for side, pos in ((s1, j), (s2, n - 1 - j)):
                v, w = side
                out.append((w, v, 0, pos))
                out.append((v, w, 0, pos))
            return out
        _, _, a, m = cell
        return [(f, a, 0, m + x[3 * t + partition_of(a, f)]) for f in VERTICES if f != a]

    def owner(self, t: int, f: int, a: int, tag: int, label: int):
        """Cell of tetrahedron ``t`` owning the arc with these data."""
        x = self.x
        if self.oriented:
            k = oriented_index(a, f)
            if tag:
                n = x[6 * t + k]
                return (QUAD, t, k, label) if label < n else (SMALL, t, a, label - n)
            r = reverse_type(k)
            n = x[6 * t + r]
            return (QUAD, t, r, label + n) if label >= -n else (LARGE, t, a, -label - 1 - n)
        k = partition_of(a, f)
        n = x[3 * t + k]
        if label >= n:
            return (TRI, t, a, label - n)
        j = label if a in UNORIENTED[k][0] else n - 1 - label
        return (QUAD, t, k, j)

    def points_at(self, cell, vertex: int, tag: int) -> int:
        """1 if the cell's reference transverse direction points at ``vertex`` across this arc."""
        if self.oriented:
            return tag
        kind = cell[0]
        if kind == QUAD:
            return int(vertex in UNORIENTED[cell[2]][0])
        return 1


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        parent = self.parent
        parent.setdefault(a, a)
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class BoundaryCircle:
    cusp: int
    side: str  # "outward", "inward" or "unoriented"
    kind: str  # "spun-end" once the window has stabilized, "truncation" otherwise
    arcs: int


@dataclass
class SurfaceComplex:
    oriented: bool
    cutoff: int
    cells: list
    gluings: list  # ((cell, arc), (cell, arc))
    cut_arcs: list  # (cell, arc) leading past the cutoff
    vertices: int
    circles: list
    components: list  # lists of cell indices
    component_counts: list  # (V, E, F, boundary circles) per component
    orientation: list | None  # per cell +-1, None if some component is one-sided
    one_sided: list  # per component

    @property
    def euler(self) -> int:
        return sum(v - e + f for v, e, f, _ in self.component_counts)


def _level(cell) -> int:
    return -1 if cell[0] == QUAD else cell[3]


class _Surface:
    """Neighbour lookups on the full (infinite) surface of one vector."""

    def __init__(self, tri: Triangulation, scheme: _Scheme):
        self.tri = tri
        self.scheme = scheme
        self._arcs: dict = {}

    def arcs(self, cell):
        arcs = self._arcs.get(cell)
        if arcs is None:
            arcs = {arc[0]: arc for arc in self.scheme.arcs(cell)}
            self._arcs[cell] = arcs
        return arcs

    def across(self, cell, face: int):
        """Cell glued to ``cell`` along its arc in ``face``."""
        f, a, tag, label = self.arcs(cell)[face]
        u, p = self.tri.glue(cell[1], f)
        return self.scheme.owner(u, p[f], p[a], tag, label)

    def corners(self, cell) -> list[tuple[int, int]]:
        """Tetrahedron edges carrying a corner of ``cell``."""
        out = set()
        for f, a, _, _ in self.arcs(cell).values():
            for w in _face_others(f, a):
                out.add((min(a, w), max(a, w)))
        return sorted(out)

    def around(self, cell, edge: tuple[int, int], limit: int):
        """Cells and corner edges met walking once around the surface vertex at ``edge`` of ``cell``."""
        v, w = edge
        c, _ = other_two(v, w)
        state = (cell, edge)
        seen = [state]
        face = c
        while True:
            t = cell[1]
            _, p = self.tri.glue(t, face)
            nxt = self.across(cell, face)
            v, w = p[v], p[w]
            entered = p[face]
            face = next(x for x in VERTICES if x not in (v, w, entered))
            cell = nxt
            state = (cell, (min(v, w), max(v, w)))
            if state == seen[0]:
                return seen
            seen.append(state)
            if len(seen) > limit:
                raise ReconstructionError("surface vertex link does not close up")


def _build(tri: Triangulation, scheme: _Scheme, cutoff: int) -> SurfaceComplex:
    surf = _Surface(tri, scheme)
    band = 2 * cutoff + 2

    def explore(seeds, allowed, blocked):
        found = dict.fromkeys(seeds)
        stack = list(seeds)
        escaped = False
        while stack:
            cell = stack.pop()
            for f in surf.arcs(cell):
                nb = surf.across(cell, f)
                if nb in found or nb in blocked:
                    continue
                if not allowed(nb):
                    escaped = True
                    continue
                found[nb] = None
                stack.append(nb)
        return found, escaped

    core, _ = explore(list(scheme.quads()), lambda c: _level(c) <= cutoff, ())
    # complement pieces next to the window: bounded ones are absorbed, the others are ends
    outside: set = set()
    ends = []
    absorbed = []
    for cell in list(core):
        for f in surf.arcs(cell):
            nb = surf.across(cell, f)
            if nb in core or nb in outside:
                continue
            piece, escaped = explore([nb], lambda c: _level(c) <= band, core)
            outside.update(piece)
            (ends if escaped else absorbed).append((cell, piece))
    for _, piece in absorbed:
        core.update(piece)

    cells = sorted(core)
    index = {c: i for i, c in enumerate(cells)}
    arcs_of = [list(surf.arcs(c).values()) for c in cells]
    gluings = []
    cut = []
    for i, cell in enumerate(cells):
        for n, (f, a, tag, label) in enumerate(arcs_of[i]):
            nb = surf.across(cell, f)
            j = index.get(nb)
            if j is None:
                cut.append((i, n))
                continue
            _, p = tri.glue(cell[1], f)
            m = next(k for k, arc in enumerate(arcs_of[j]) if arc[0] == p[f])
            if (i, n) < (j, m):
                gluings.append(((i, n), (j, m)))

    cell_uf = _UnionFind()
    for i in range(len(cells)):
        cell_uf.find(i)
    for (ca, _), (cb, _) in gluings:
        cell_uf.union(ca, cb)
    roots = sorted({cell_uf.find(i) for i in range(len(cells))})
    comp_of = {r: k for k, r in enumerate(roots)}
    components = [[] for _ in roots]
    for i in range(len(cells)):
        components[comp_of[cell_uf.find(i)]].append(i)

    V = [0] * len(roots)
    E = [0] * len(roots)
    F = [len(c) for c in components]
    limit = 8 * max(len(e.around) for e in tri.edges)
    named = set()
    for i, cell in enumerate(cells):
        for edge in surf.corners(cell):
            if (cell, edge) in named:
                continue
            named.update(surf.around(cell, edge, limit))
            V[comp_of[cell_uf.find(i)]] += 1
    for (ca, _), _ in gluings:
        E[comp_of[cell_uf.find(ca)]] += 1
    for ca, _ in cut:
        E[comp_of[cell_uf.find(ca)]] += 1

    circles = []
    per_comp = [0] * len(roots)
    for kind, group in (("spun-end", ends), ("truncation", absorbed)):
        for cell, piece in group:
            sample = min(piece)
            cusp = tri.vertex_class[(sample[1], sample[2])]
            side = {SMALL: "outward", LARGE: "inward"}.get(sample[0], "unoriented")
            circles.append(BoundaryCircle(cusp, side, kind, len(piece)))
            if kind == "spun-end":
                per_comp[comp_of[cell_uf.find(index[cell])]] += 1

    orientation, one_sided = _orient(tri, scheme, cells, arcs_of, gluings, components, comp_of, cell_uf)
    counts = [(V[k], E[k], F[k], per_comp[k]) for k in range(len(roots))]
    return SurfaceComplex(scheme.oriented, cutoff, cells, gluings, cut, sum(V), circles,
                          components, counts, orientation, one_sided)


def _orient(tri, scheme, cells, arcs_of, gluings, components, comp_of, cell_uf):
    adj = [[] for _ in cells]
    for (ca, na), (cb, nb) in gluings:
        fa, va, tag_a, _ = arcs_of[ca][na]
        fb, vb, tag_b, _ = arcs_of[cb][nb]
        flip = scheme.points_at(cells[ca], va, tag_a) ^ scheme.points_at(cells[cb], vb, tag_b)
        adj[ca].append((cb, flip))
        adj[cb].append((ca, flip))
    colour = [None] * len(cells)
    one_sided = [False] * len(components)
    for k, comp in enumerate(components):
        start = comp[0]
        colour[start] = 0
        stack = [start]
        while stack:
            c = stack.pop()
            for d, flip in adj[c]:
                want = colour[c] ^ flip
                if colour[d] is None:
                    colour[d] = want
                    stack.append(d)
                elif colour[d] != want:
                    one_sided[k] = True
    if any(one_sided):
        return None, one_sided
    return [1 - 2 * c for c in colour], one_sided


# -- public operations --------------------------------------------------------

def _check_matching(tri: Triangulation, x, oriented: bool):
    m = build_matching(tri)
    values = m.oriented_values(x) if oriented else m.unoriented_values(x)
    if any(values):
        raise InputError("not a normal coordinate: matching equations fail")
    if not is_admissible(x, oriented=oriented):
        raise InputError("coordinate vector is not admissible")


def _integral(x) -> list[int]:
    out = []
    for v in x:
        v = Fraction(v)
        if v.denominator != 1:
            raise InputError("surface reconstruction needs an integral vector")
        out.append(int(v))
    return out


def _signature(c: SurfaceComplex):
    return (len(c.components), tuple(sorted(c.one_sided)), c.euler, len(c.circles))


def reconstruct(tri: Triangulation, x: Sequence | None = None, xo: Sequence | None = None,
                expected_euler=None, margin: int = 2) -> SurfaceComplex:
    """Compact core of the immersed (``xo`` given) or embedded (``x`` only) surface.

    The window grows until the topology repeats and, when ``expected_euler``
    is given, the Euler characteristic equals it.
    """
    oriented = xo is not None
    vec = _integral(xo if oriented else x)
    width = 6 if oriented else 3
    if len(vec) != width * tri.num_tets:
        raise InputError(f"vector has length {len(vec)}, expected {width * tri.num_tets}")
    if oriented and x is not None and list(forget_orientation(vec)) != _integral(x):
        raise InputError("oriented refinement does not forget to the given vector")
    _check_matching(tri, vec, oriented)
    scheme = _Scheme(tri, vec, oriented)
    top = max(vec, default=0)
    previous = None
    history = []
    for _ in range(MAX_DOUBLINGS + 1):
        c = _build(tri, scheme, top + margin)
        sig = _signature(c)
        history.append((c.cutoff, sig))
        if previous == sig and (expected_euler is None or c.euler == expected_euler):
            return c
        previous = sig
        margin *= 2
    raise ReconstructionError(
        f"surface window did not stabilize: (cutoff, (components, one-sided, euler, circles)) = {history}"
        + (f", expected euler {expected_euler}" if expected_euler is not None else "")
    )


@dataclass
class SurfaceReport:
    connected: bool
    orientable: bool
    euler: int
    boundary_components: int
    genus: int | None
    type: str
    components: list = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {
            "connected": self.connected,
            "orientable": self.orientable,
            "euler": self.euler,
            "boundary": self.boundary_components,
            "genus": self.genus,
            "type": self.type,
        }
        if len(self.components) > 1:
            out["components"] = [c.as_dict() for c in self.components]
        return out


def surface_type(euler: int, boundary: int, orientable: bool) -> tuple[int, str]:
    if orientable:
        g2 = 2 - boundary - euler
        if g2 % 2:
            raise ReconstructionError(f"odd genus defect for chi={euler}, n={boundary}")
        return g2 // 2, f"S_{g2 // 2},{boundary}"
    k = 2 - boundary - euler
    return k, f"N_{k},{boundary}"


def analyze(c: SurfaceComplex) -> SurfaceReport:
    parts = []
    for (v, e, f, n), one_sided in zip(c.component_counts, c.one_sided):
        chi = v - e + f
        g, name = surface_type(chi, n, not one_sided)
        parts.append(SurfaceReport(True, not one_sided, chi, n, g, name))
    if not parts:
        return SurfaceReport(True, True, 0, 0, 0, "empty")
    if len(parts) == 1:
        return parts[0]
    parts.sort(key=lambda r: (r.type, r.euler))
    return SurfaceReport(
        False,
        all(p.orientable for p in parts),
        sum(p.euler for p in parts),
        sum(p.boundary_components for p in parts),
        None,
        " + ".join(p.type for p in parts),
        parts,
    )


def orientation_lifts(tri: Triangulation, x: Sequence, complex_: SurfaceComplex | None = None) -> list[list[int]]:
    """Oriented vectors of all transverse orientations of the embedded surface of ``x``.

    Empty when some component is one-sided.
    """
    c = complex_ or reconstruct(tri, x=x)
    if c.orientation is None:
        return []
    parts = []
    for comp in c.components:
        vec = [0] * (6 * tri.num_tets)
        for ci in comp:
            cell = c.cells[ci]
            if cell[0] != QUAD:
                continue
            _, t, k, _ = cell
            s1, s2 = UNORIENTED[k]
            side = s1 if c.orientation[ci] == 1 else s2
            vec[6 * t + oriented_index(*side)] += 1
        parts.append(vec)
    lifts = set()
    for signs in itertools.product((0, 1), repeat=len(parts)):
        total = [0] * (6 * tri.num_tets)
        for s, vec in zip(signs, parts):
            src = vec if s == 0 else _reverse(vec)
            for i, v in enumerate(src):
                total[i] += v
        lifts.add(tuple(total))
    return [list(v) for v in sorted(lifts)]


def _reverse(vec):
    out = [0] * len(vec)
    for i, v in enumerate(vec):
        if v:
            out[6 * (i // 6) + reverse_type(i % 6)] += v
    return out


def is_embedded(tri: Triangulation, xo: Sequence) -> bool:
    """Whether the transversely oriented vector is carried by the embedded surface with its quads."""
    xo = _integral(xo)
    x = forget_orientation(xo)
    return list(xo) in orientation_lifts(tri, x)


def haken_sum(x1: Sequence, x2: Sequence) -> list:
    if len(x1) != len(x2):
        raise InputError("vectors have different lengths")
    total = [a + b for a, b in zip(x1, x2)]
    if not is_admissible(total):
        raise InputError("non-admissible sum")
    return total
