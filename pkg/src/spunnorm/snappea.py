"""Reader for the SnapPea "% Triangulation" text format."""

from __future__ import annotations

from .errors import InputError
from .triangulation import VERTICES, CurveStep, PeripheralCurve, Triangulation, from_gluings


class _Lines:
    def __init__(self, text: str):
        self.lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
        self.pos = 0

    def next(self, what: str) -> tuple[int, str]:
        while self.pos < len(self.lines):
            number, line = self.lines[self.pos]
            self.pos += 1
            if line:
                return number, line
        last = self.lines[-1][0] if self.lines else 0
        raise InputError(f"line {last + 1}: unexpected end of file while reading {what}")

    def ints(self, count: int, what: str) -> list[int]:
        number, line = self.next(what)
        try:
            values = [int(x) for x in line.split()]
        except ValueError:
            raise InputError(f"line {number}: expected integers for {what}") from None
        if len(values) != count:
            raise InputError(f"line {number}: expected {count} integers for {what}, got {len(values)}")
        return values


def import_snappea(text: str | bytes) -> Triangulation:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    src = _Lines(text)
    number, header = src.next("header")
    if not header.startswith("% Triangulation"):
        raise InputError(f"line {number}: unsupported header {header!r}")
    _, name = src.next("name")
    src.next("solution type")
    number, kind = src.next("orientability")
    if kind == "nonorientable_manifold":
        raise InputError(f"line {number}: non-orientable manifolds are not supported")
    if kind != "oriented_manifold":
        raise InputError(f"line {number}: unrecognised orientability {kind!r}")
    src.next("Chern-Simons line")
    num_or, num_nonor = src.ints(2, "cusp counts")
    if num_nonor:
        raise InputError("Klein bottle cusps are not supported")
    for _ in range(num_or):
        number, line = src.next("cusp")
        parts = line.split()
        if len(parts) != 3 or parts[0] != "torus":
            raise InputError(f"line {number}: unsupported cusp description {line!r}")
        if float(parts[1]) != 0.0 or float(parts[2]) != 0.0:
            raise InputError(f"line {number}: filled cusps cannot be represented; use the filled triangulation")
    (n,) = src.ints(1, "number of tetrahedra")
    if n == 0:
        raise InputError("empty triangulation")
    gluings = []
    cusp_of = []
    curves = []
    for t in range(n):
        nbrs = src.ints(4, f"neighbours of tetrahedron {t}")
        number, line = src.next(f"gluings of tetrahedron {t}")
        words = line.split()
        if len(words) != 4 or any(len(w) != 4 or not w.isdigit() for w in words):
            raise InputError(f"line {number}: malformed permutations")
        perms = [tuple(int(ch) for ch in w) for w in words]
        gluings.append(list(zip(nbrs, perms)))
        cusps = src.ints(4, f"cusp indices of tetrahedron {t}")
        if any(c < 0 for c in cusps):
            raise InputError(f"tetrahedron {t}: finite vertices are not supported")
        cusp_of.append(cusps)
        block = [src.ints(16, f"peripheral curves of tetrahedron {t}") for _ in range(4)]
        curves.append(block)
        src.next(f"shape of tetrahedron {t}")

    tri = from_gluings(gluings, name=name)
    snap_cusps = sorted({c for row in cusp_of for c in row})
    if snap_cusps != list(range(tri.num_cusps)):
        raise InputError("cusp indices disagree with the gluing table")
    for t in range(n):
        for v in VERTICES:
            for w in VERTICES:
                same = tri.vertex_class[(t, v)] == tri.vertex_class[(t, w)]
                if same != (cusp_of[t][v] == cusp_of[t][w]):
                    raise InputError(f"tetrahedron {t}: cusp indices disagree with the gluing table")
    peripheral = {}
    for k in snap_cusps:
        pair = []
        for which in (0, 2):
            if any(curves[t][which + 1][4 * v + f] for t in range(n) for v in VERTICES for f in VERTICES):
                raise InputError("peripheral curves on the left-handed sheet are not supported")
            counts = {
                (t, v): {f: curves[t][which][4 * v + f] for f in VERTICES if f != v}
                for t in range(n)
                for v in VERTICES
                if cusp_of[t][v] == k
            }
            pair.append(curve_from_counts(tri, k, counts))
        peripheral[k] = tuple(pair)
    return Triangulation(tri.neighbors, tri.perms, name=name, peripheral=peripheral)


def _arcs_in_triangle(counts: dict[int, int]) -> list[tuple[int, int]]:
    """Minimal decomposition of signed side counts into (enter, exit) arcs."""
    if sum(counts.values()) != 0:
        raise InputError("peripheral curve counts do not balance in a cusp triangle")
    pos = [f for f, c in counts.items() if c > 0]
    neg = [f for f, c in counts.items() if c < 0]
    arcs = []
    if len(pos) == 1:
        for f in neg:
            arcs += [(pos[0], f)] * (-counts[f])
    elif len(neg) == 1:
        for f in pos:
            arcs += [(f, neg[0])] * counts[f]
    return arcs


def curve_from_counts(tri: Triangulation, cusp: int, counts) -> PeripheralCurve:
    arcs = []
    for (t, v), sides in sorted(counts.items()):
        for enter, exit_ in _arcs_in_triangle(sides):
            arcs.append(CurveStep(t, v, enter, exit_))
    if not arcs:
        raise InputError(f"cusp {cusp}: missing peripheral curve")
    # pair each arc with an arc entering through the cusp edge it leaves by
    waiting: dict[tuple, list[int]] = {}
    for i, a in enumerate(arcs):
        waiting.setdefault((a.tet, a.vertex, a.enter), []).append(i)
    succ = [0] * len(arcs)
    for i, a in enumerate(arcs):
        key = tri.corner_neighbor(a.tet, a.vertex, a.exit)
        if not waiting.get(key):
            raise InputError(f"cusp {cusp}: peripheral curve does not close up")
        succ[i] = waiting[key].pop()

    def cycles():
        seen = [False] * len(arcs)
        out = []
        for i in range(len(arcs)):
            if not seen[i]:
                cyc = []
                j = i
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j)
                    j = succ[j]
                out.append(cyc)
        return out

    cyc = cycles()
    while len(cyc) > 1:
        label = {i: n for n, c in enumerate(cyc) for i in c}
        merged = False
        by_target: dict[tuple, int] = {}
        for i, a in enumerate(arcs):
            key = tri.corner_neighbor(a.tet, a.vertex, a.exit)
            j = by_target.setdefault(key, i)
            if label[j] != label[i]:
                succ[i], succ[j] = succ[j], succ[i]
                merged = True
                break
        if not merged:
            raise InputError(f"cusp {cusp}: peripheral curve splits into several loops")
        cyc = cycles()
    order = cyc[0]
    start = min(range(len(order)), key=lambda n: (arcs[order[n]].tet, arcs[order[n]].vertex,
                                                  arcs[order[n]].enter, arcs[order[n]].exit))
    order = order[start:] + order[:start]
    return PeripheralCurve(cusp, tuple(arcs[i] for i in order))
