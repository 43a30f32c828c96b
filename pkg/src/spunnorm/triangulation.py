"""Ideal triangulations: gluing tables, edge classes, cusp cross-sections.

Tetrahedron vertices are labelled 0..3.  A gluing of face ``f`` of
tetrahedron ``t`` is a pair ``(t', perm)`` where ``perm[i]`` is the vertex of
``t'`` that vertex ``i`` of ``t`` is identified with; ``perm[f]`` is the face
of ``t'`` receiving the glued face.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations

from .errors import ContractViolation, InputError

VERTICES = (0, 1, 2, 3)


def perm_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def perm_inverse(p) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def other_two(a: int, b: int) -> tuple[int, int]:
    c, d = (v for v in VERTICES if v not in (a, b))
    return c, d


def remaining(*used: int) -> int:
    (x,) = (v for v in VERTICES if v not in used)
    return x


@dataclass(frozen=True)
class EdgeStep:
    """One tetrahedron met on a trip around an edge class."""

    tet: int
    tail: int
    head: int
    enter: int
    leave: int


@dataclass(frozen=True)
class EdgeClass:
    index: int
    around: tuple[EdgeStep, ...]
    endpoints: tuple[int, int]

    @property
    def valence(self) -> int:
        return len(self.around)


@dataclass(frozen=True)
class CurveStep:
    """A normal arc in the cusp triangle at corner (tet, vertex)."""

    tet: int
    vertex: int
    enter: int
    exit: int

    def cut_off(self) -> int:
        return remaining(self.vertex, self.enter, self.exit)


@dataclass(frozen=True)
class PeripheralCurve:
    cusp: int
    steps: tuple[CurveStep, ...]

    def reversed(self) -> "PeripheralCurve":
        return PeripheralCurve(
            self.cusp,
            tuple(CurveStep(s.tet, s.vertex, s.exit, s.enter) for s in reversed(self.steps)),
        )


@dataclass
class CuspCrossSection:
    index: int
    corners: tuple[tuple[int, int], ...]
    num_vertices: int

    @property
    def euler(self) -> int:
        f = len(self.corners)
        return self.num_vertices - (3 * f) // 2 + f


@dataclass
class Triangulation:
    """A validated, coherently oriented ideal triangulation."""

    neighbors: tuple[tuple[int, ...], ...]
    perms: tuple[tuple[tuple[int, ...], ...], ...]
    name: str = ""
    peripheral: dict[int, tuple[PeripheralCurve, PeripheralCurve]] | None = None
    orientation: tuple[int, ...] = field(init=False)
    edges: list[EdgeClass] = field(init=False)
    edge_of: dict = field(init=False, repr=False)
    vertex_class: dict = field(init=False, repr=False)
    cusps: list[CuspCrossSection] = field(init=False)

    def __post_init__(self):
        if len(self.neighbors) == 0:
            raise InputError("empty triangulation")
        self._check_gluings()
        self._orient()
        self._build_edges()
        self._build_cusps()
        if self.peripheral is not None:
            for mu, lam in self.peripheral.values():
                for curve in (mu, lam):
                    check_curve(self, curve)

    @property
    def num_tets(self) -> int:
        return len(self.neighbors)

    @property
    def num_cusps(self) -> int:
        return len(self.cusps)

    def glue(self, tet: int, face: int) -> tuple[int, tuple[int, ...]]:
        return self.neighbors[tet][face], self.perms[tet][face]

    # -- validation -----------------------------------------------------

    def _check_gluings(self):
        n = self.num_tets
        if len(self.perms) != n:
            raise InputError("gluing table has mismatched lengths")
        for t in range(n):
            if len(self.neighbors[t]) != 4 or len(self.perms[t]) != 4:
                raise InputError(f"tetrahedron {t}: need four face gluings")
            for f in VERTICES:
                u, p = self.glue(t, f)
                if not 0 <= u < n:
                    raise InputError(f"tetrahedron {t} face {f}: no tetrahedron {u}")
                if sorted(p) != [0, 1, 2, 3]:
                    raise InputError(f"tetrahedron {t} face {f}: {list(p)} is not a permutation")
                if (u, p[f]) == (t, f):
                    raise InputError(f"tetrahedron {t} face {f}: glued to itself")
                back_t, back_p = self.glue(u, p[f])
                if back_t != t or tuple(back_p) != perm_inverse(p):
                    raise InputError(
                        f"tetrahedron {t} face {f}: involution violated "
                        f"(partner face {u}.{p[f]} does not glue back)"
                    )

    def _orient(self):
        signs = [0] * self.num_tets
        for start in range(self.num_tets):
            if signs[start]:
                continue
            signs[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for f in VERTICES:
                    u, p = self.glue(t, f)
                    want = -signs[t] * perm_sign(p)
                    if signs[u] == 0:
                        signs[u] = want
                        stack.append(u)
                    elif signs[u] != want:
                        raise InputError(f"non-orientable: tetrahedron {t} face {f}")
        self.orientation = tuple(signs)

    def _build_edges(self):
        self.edge_of = {}
        self.edges = []
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(self.num_tets):
            for v in VERTICES:
                parent[(t, v)] = (t, v)
        for t in range(self.num_tets):
            for f in VERTICES:
                u, p = self.glue(t, f)
                for v in VERTICES:
                    if v != f:
                        a, b = find((t, v)), find((u, p[v]))
                        if a != b:
                            parent[max(a, b)] = min(a, b)
        roots = sorted({find(x) for x in parent})
        root_index = {r: i for i, r in enumerate(roots)}
        if self.peripheral is not None:
            # the peripheral curves name the cusps
            wanted = {}
            for k, (mu, _) in self.peripheral.items():
                if not mu.steps:
                    raise InputError(f"cusp {k}: empty peripheral curve")
                s = mu.steps[0]
                if (s.tet, s.vertex) not in parent:
                    raise InputError(f"cusp {k}: bad curve step {s}")
                wanted[find((s.tet, s.vertex))] = k
            if sorted(wanted.values()) != list(range(len(roots))) or len(wanted) != len(roots):
                raise InputError("peripheral curves must be given for every cusp, one pair each")
            root_index = wanted
        self.vertex_class = {x: root_index[find(x)] for x in parent}

        for t in range(self.num_tets):
            for a in VERTICES:
                for b in VERTICES:
                    if a < b and (t, a, b) not in self.edge_of:
                        self._walk_edge(t, a, b)

    def _walk_edge(self, t, a, b):
        c, d = other_two(a, b)
        index = len(self.edges)
        start = (t, a, b, c, d)
        state = start
        steps = []
        while True:
            tt, aa, bb, fin, fout = state
            if (tt, min(aa, bb), max(aa, bb)) in self.edge_of:
                raise InputError(f"edge walk from tetrahedron {t} did not close up")
            steps.append(EdgeStep(tt, aa, bb, fin, fout))
            self.edge_of[(tt, min(aa, bb), max(aa, bb))] = (index, (aa, bb))
            u, p = self.glue(tt, fout)
            state = (u, p[aa], p[bb], p[fout], p[fin])
            if state == start:
                break
            if state[0] == t and {state[1], state[2]} == {a, b}:
                raise InputError(f"edge of tetrahedron {t} is identified with itself reversed")
        ends = (self.vertex_class[(t, a)], self.vertex_class[(t, b)])
        self.edges.append(EdgeClass(index, tuple(steps), ends))

    def _build_cusps(self):
        groups: dict[int, list] = {}
        for (t, v), k in sorted(self.vertex_class.items()):
            groups.setdefault(k, []).append((t, v))
        self.cusps = []
        for k in sorted(groups):
            corners = tuple(groups[k])
            ends = set()
            for t, v in corners:
                for g in VERTICES:
                    if g != v:
                        ends.add(self.edge_end(t, v, g))
            cusp = CuspCrossSection(k, corners, len(ends))
            if cusp.euler != 0:
                raise ContractViolation(f"cusp {k} is not a torus (Euler characteristic {cusp.euler})")
            self.cusps.append(cusp)

    # -- derived lookups ------------------------------------------------

    def edge_index(self, t: int, a: int, b: int) -> int:
        return self.edge_of[(t, min(a, b), max(a, b))][0]

    def edge_direction(self, t: int, a: int, b: int) -> int:
        """+1 if the tetrahedron edge a->b agrees with its class orientation."""
        _, (tail, head) = self.edge_of[(t, min(a, b), max(a, b))]
        return 1 if (tail, head) == (a, b) else -1

    def edge_end(self, t: int, v: int, g: int) -> tuple[int, int]:
        """(edge class, end) of the cusp-triangle vertex at corner (t, v) on edge vg.

        End 1 is the head of the class orientation, end 0 the tail.
        """
        e = self.edge_index(t, v, g)
        return e, 1 if self.edge_direction(t, g, v) == 1 else 0

    def corner_neighbor(self, t: int, v: int, side: int) -> tuple[int, int, int]:
        """Cusp triangle across ``side`` of corner (t, v), and the matching side there."""
        u, p = self.glue(t, side)
        return u, p[v], p[side]

    def triangle_orientation(self, t: int, v: int, g1: int, g2: int, g3: int) -> int:
        """+1 if (g1, g2, g3) runs positively around the cusp triangle at corner (t, v)."""
        return self.orientation[t] * perm_sign((v, g1, g2, g3))

    def cuts_left(self, step: CurveStep) -> bool:
        g = step.cut_off()
        return self.triangle_orientation(step.tet, step.vertex, g, step.exit, step.enter) == 1

    # -- serialization --------------------------------------------------

    def to_native(self) -> dict:
        data = {
            "format": "tnorm-tri/1",
            "num_tetrahedra": self.num_tets,
            "gluings": [
                [{"tet": self.neighbors[t][f], "perm": list(self.perms[t][f])} for f in VERTICES]
                for t in range(self.num_tets)
            ],
        }
        if self.name:
            data["name"] = self.name
        if self.peripheral is not None:
            data["peripheral_curves"] = [
                {"cusp": k, "meridian": _steps_json(mu), "longitude": _steps_json(lam)}
                for k, (mu, lam) in sorted(self.peripheral.items())
            ]
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_native(), indent=1)


def _steps_json(curve: PeripheralCurve) -> list:
    return [{"tet": s.tet, "vertex": s.vertex, "enter": s.enter, "exit": s.exit} for s in curve.steps]


def check_curve(tri: Triangulation, curve: PeripheralCurve):
    if not curve.steps:
        raise InputError(f"cusp {curve.cusp}: empty peripheral curve")
    n = len(curve.steps)
    for i, s in enumerate(curve.steps):
        if not (0 <= s.tet < tri.num_tets) or s.vertex not in VERTICES:
            raise InputError(f"cusp {curve.cusp}: bad curve step {s}")
        if s.enter == s.exit or s.vertex in (s.enter, s.exit) or {s.enter, s.exit} - set(VERTICES):
            raise InputError(f"cusp {curve.cusp}: step {i} is not a normal arc")
        if tri.vertex_class[(s.tet, s.vertex)] != curve.cusp:
            raise InputError(f"cusp {curve.cusp}: step {i} lies on another cusp")
        nxt = curve.steps[(i + 1) % n]
        u, w, side = tri.corner_neighbor(s.tet, s.vertex, s.exit)
        if (u, w, side) != (nxt.tet, nxt.vertex, nxt.enter):
            raise InputError(f"cusp {curve.cusp}: steps {i} and {(i + 1) % n} do not share a cusp edge")


def from_gluings(gluings, name="", peripheral=None) -> Triangulation:
    neighbors = tuple(tuple(int(g[0]) for g in row) for row in gluings)
    perms = tuple(tuple(tuple(int(x) for x in g[1]) for g in row) for row in gluings)
    return Triangulation(neighbors, perms, name=name, peripheral=peripheral)


def load_native(text: str | bytes) -> Triangulation:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != "tnorm-tri/1":
        raise InputError("malformed JSON: expected format tnorm-tri/1")
    try:
        n = int(data["num_tetrahedra"])
        rows = data["gluings"]
        if n == 0 or not rows:
            raise InputError("empty triangulation")
        if len(rows) != n:
            raise InputError("malformed JSON: gluings length differs from num_tetrahedra")
        gluings = [[(g["tet"], g["perm"]) for g in row] for row in rows]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    peripheral = None
    if data.get("peripheral_curves"):
        peripheral = {}
        for entry in data["peripheral_curves"]:
            k = int(entry["cusp"])
            curves = []
            for key in ("meridian", "longitude"):
                steps = tuple(
                    CurveStep(int(s["tet"]), int(s["vertex"]), int(s["enter"]), int(s["exit"]))
                    for s in entry[key]
                )
                curves.append(PeripheralCurve(k, steps))
            peripheral[k] = (curves[0], curves[1])
    tri = from_gluings(gluings, name=data.get("name", ""), peripheral=peripheral)
    if peripheral is not None and set(peripheral) != set(range(tri.num_cusps)):
        raise InputError("peripheral curves must be given for every cusp")
    return tri


def all_perms():
    return list(permutations(VERTICES))
