"""Homology of the pseudo-manifold and of the cusped manifold, and the maps from quad space.

H_2 is computed simplicially on P (faces, edges, vertices of the
triangulation).  H_1 of the manifold is computed on the dual spine: one
vertex per tetrahedron, one edge per glued face pair, one disc per edge
class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import ContractViolation
from .exact import kernel_basis, rank, smith_normal_form, solve
from .quads import ORIENTED
from .triangulation import VERTICES, PeripheralCurve, Triangulation, perm_sign


def _face_vertices(f: int) -> tuple[int, int, int]:
    return tuple(v for v in VERTICES if v != f)


class ChainComplex:
    """Simplicial chains of P with integer boundary matrices."""

    def __init__(self, tri: Triangulation):
        self.tri = tri
        t = tri.num_tets
        self.faces: list[tuple[int, int]] = []
        self.face_of: dict[tuple[int, int], tuple[int, int]] = {}
        for tet in range(t):
            for f in VERTICES:
                if (tet, f) in self.face_of:
                    continue
                u, p = tri.glue(tet, f)
                idx = len(self.faces)
                self.faces.append((tet, f))
                self.face_of[(tet, f)] = (idx, 1)
                # orientation of the partner's sorted vertex order relative to ours
                image = [p[v] for v in _face_vertices(f)]
                order = sorted(range(3), key=lambda i: image[i])
                self.face_of[(u, p[f])] = (idx, perm_sign(order))
        nf, ne, nv = len(self.faces), len(tri.edges), tri.num_cusps
        self.d3 = [[0] * t for _ in range(nf)]
        for tet in range(t):
            for f in VERTICES:
                idx, s = self.face_of[(tet, f)]
                self.d3[idx][tet] += (-1) ** f * s
        self.d2 = [[0] * nf for _ in range(ne)]
        for idx, (tet, f) in enumerate(self.faces):
            a, b, c = _face_vertices(f)
            for (x, y), s in (((b, c), 1), ((a, c), -1), ((a, b), 1)):
                e = tri.edge_index(tet, x, y)
                self.d2[e][idx] += s * tri.edge_direction(tet, x, y)
        self.d1 = [[0] * ne for _ in range(nv)]
        for e in tri.edges:
            tail, head = e.endpoints
            self.d1[head][e.index] += 1
            self.d1[tail][e.index] -= 1

    def oriented_face(self, tet: int, f: int) -> list[int]:
        """Chain of face f of ``tet`` carrying the boundary orientation of the tetrahedron."""
        chain = [0] * len(self.faces)
        idx, s = self.face_of[(tet, f)]
        chain[idx] = (-1) ** f * s * self.tri.orientation[tet]
        return chain


def phi_matrix(cx: ChainComplex) -> list[list[int]]:
    """Columns: oriented quad types; rows: face classes.

    A quad pushed along its transverse orientation sweeps onto the two faces
    containing the edge on its positive side.  The sign makes the boundary of
    the image agree with the sum of the outward and inward boundary classes.
    """
    t = cx.tri.num_tets
    M = [[0] * (6 * t) for _ in range(len(cx.faces))]
    for tet in range(t):
        for k, (i, j) in enumerate(ORIENTED):
            for f in VERTICES:
                if f in (i, j):
                    continue
                idx, s = cx.face_of[(tet, f)]
                M[idx][6 * tet + k] -= (-1) ** f * s * cx.tri.orientation[tet]
    return M


def _mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x) if a) for row in A]


def _integer_kernel(A, ncols):
    """A basis of the integer kernel (saturated lattice)."""
    if not A:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    U, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


@dataclass
class H2Basis:
    """Integral basis of H_2(P; Z) = ker d2 / im d3."""

    cycles: list[list[int]]  # representative 2-cycles
    kernel: list[list[int]]  # integer basis of ker d2
    reduce: list[list[int]]  # rows mapping kernel coordinates to class coordinates

    @property
    def dim(self) -> int:
        return len(self.cycles)


def h2_basis(cx: ChainComplex) -> H2Basis:
    nf = len(cx.faces)
    K = _integer_kernel(cx.d2, nf)
    # boundaries of tetrahedra in kernel coordinates
    KT = [list(col) for col in zip(*K)]  # nf x k
    cols = []
    for j in range(cx.tri.num_tets):
        col = [row[j] for row in cx.d3]
        sol = solve(KT, col).solution
        cols.append([int(v) for v in sol])
    A = [list(r) for r in zip(*cols)] if cols else [[] for _ in K]  # k x t
    k = len(K)
    U, D, _ = smith_normal_form(A)
    r = sum(1 for i in range(min(k, len(cols))) if D[i][i])
    if any(abs(D[i][i]) != 1 for i in range(r)):
        raise AssertionError("second homology has torsion")
    Uinv = _unimodular_inverse(U)
    cycles = []
    for j in range(r, k):
        kc = [Uinv[i][j] for i in range(k)]
        cycles.append([sum(kc[i] * K[i][f] for i in range(k)) for f in range(nf)])
    return H2Basis(cycles, K, U[r:])


def _unimodular_inverse(U):
    n = len(U)
    inv = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        inv.append([int(v) for v in solve(U, e).solution])
    return [list(r) for r in zip(*inv)]


def class_coordinates(cx: ChainComplex, basis: H2Basis, chain: Sequence) -> list[Fraction]:
    if any(_mat_vec(cx.d2, chain)):
        raise ContractViolation("chain is not a cycle: the vector violates the matching equations")
    KT = [list(col) for col in zip(*basis.kernel)]
    kc = solve(KT, [Fraction(c) for c in chain]).solution
    return [sum((Fraction(a) * b for a, b in zip(row, kc)), Fraction(0)) for row in basis.reduce]


# -- first homology on the dual spine -------------------------------------

class Spine:
    def __init__(self, tri: Triangulation, cx: ChainComplex):
        self.tri = tri
        self.cx = cx
        nf = len(cx.faces)
        # dual edge of face class idx runs from the representative's tetrahedron to its partner's
        self.delta1 = [[0] * nf for _ in range(tri.num_tets)]
        for idx, (tet, f) in enumerate(cx.faces):
            u, _ = tri.glue(tet, f)
            self.delta1[u][idx] += 1
            self.delta1[tet][idx] -= 1
        self.delta2 = [[0] * len(tri.edges) for _ in range(nf)]
        for e in tri.edges:
            for step in e.around:
                idx, sign = self._crossing(step.tet, step.leave)
                self.delta2[idx][e.index] += sign
        self.kernel = _integer_kernel(self.delta1, nf)
        self._kt = [list(col) for col in zip(*self.kernel)]

    def _crossing(self, tet: int, face: int) -> tuple[int, int]:
        idx, _ = self.cx.face_of[(tet, face)]
        return idx, 1 if self.cx.faces[idx] == (tet, face) else -1

    def curve_cycle(self, curve: PeripheralCurve) -> list[int]:
        cyc = [0] * len(self.cx.faces)
        for s in curve.steps:
            idx, sign = self._crossing(s.tet, s.exit)
            cyc[idx] += sign
        return cyc

    def in_kernel(self, cycle) -> list[int]:
        return [int(v) for v in solve(self._kt, [Fraction(c) for c in cycle]).solution]

    def quotient(self, extra: list[list[int]] = ()):
        """SNF data of ker(delta1) / (im delta2 + span(extra))."""
        cols = [self.in_kernel([row[j] for row in self.delta2]) for j in range(len(self.tri.edges))]
        cols += [self.in_kernel(c) for c in extra]
        k = len(self.kernel)
        A = [[c[i] for c in cols] for i in range(k)]
        U, D, _ = smith_normal_form(A)
        diag = [D[i][i] if i < len(cols) else 0 for i in range(k)]
        return U, diag


def _order(U, diag, y) -> int | None:
    """Order of the class with kernel coordinates y; None if infinite."""
    z = [sum(a * b for a, b in zip(row, y)) for row in U]
    order = 1
    for zi, d in zip(z, diag):
        if d == 0:
            if zi != 0:
                return None
        else:
            m = abs(d) // gcd(abs(d), zi)
            order = order * m // gcd(order, m)
    return order


def _free_part(U, diag, y) -> list[int]:
    z = [sum(a * b for a, b in zip(row, y)) for row in U]
    return [zi for zi, d in zip(z, diag) if d == 0]


@dataclass
class HomologyInfo:
    b1: int
    torsion: list[int]
    h2_dim: int
    peripheral_available: bool
    longitudes: dict[int, tuple[int, int]]  # homological longitude (p, q) = p mu + q lambda
    orders: dict[int, int]


class Homology:
    def __init__(self, tri: Triangulation, bases: dict):
        self.tri = tri
        self.bases = bases
        self.cx = ChainComplex(tri)
        self.h2 = h2_basis(self.cx)
        self.phi = phi_matrix(self.cx)
        self.spine = Spine(tri, self.cx)
        U, diag = self.spine.quotient()
        self.b1 = sum(1 for d in diag if d == 0)
        self.torsion = sorted(abs(d) for d in diag if abs(d) > 1)
        self.peripheral_available = self._surjective(U, diag)
        self.longitudes: dict[int, tuple[int, int]] = {}
        self.orders: dict[int, int] = {}
        if self.peripheral_available:
            for i in range(tri.num_cusps):
                self.longitudes[i], self.orders[i] = self._longitude(i)

    def info(self) -> HomologyInfo:
        return HomologyInfo(self.b1, self.torsion, self.h2.dim, self.peripheral_available,
                            dict(self.longitudes), dict(self.orders))

    def _surjective(self, U, diag) -> bool:
        vecs = []
        for mu, lam in self.bases.values():
            for c in (mu, lam):
                vecs.append(_free_part(U, diag, self.spine.in_kernel(self.spine.curve_cycle(c))))
        return bool(vecs) and rank(vecs) == self.b1

    def _longitude(self, i: int) -> tuple[tuple[int, int], int]:
        extra = [self.spine.curve_cycle(self.bases[j][0]) for j in range(self.tri.num_cusps) if j != i]
        U, diag = self.spine.quotient(extra)
        mu, lam = self.bases[i]
        fm = _free_part(U, diag, self.spine.in_kernel(self.spine.curve_cycle(mu)))
        fl = _free_part(U, diag, self.spine.in_kernel(self.spine.curve_cycle(lam)))
        null = kernel_basis([list(r) for r in zip(fm, fl)], 2) if fm else kernel_basis([], 2)
        if len(null) != 1:
            raise ContractViolation(f"cusp {i}: no unique homological longitude")
        den = 1
        for v in null[0]:
            den = den * v.denominator // gcd(den, v.denominator)
        p, q = (int(v * den) for v in null[0])
        g = gcd(p, q)
        p, q = p // g, q // g
        if (p, q) < (-p, -q):
            p, q = -p, -q
        ym = self.spine.in_kernel(self.spine.curve_cycle(mu))
        yl = self.spine.in_kernel(self.spine.curve_cycle(lam))
        order = _order(U, diag, [p * a + q * b for a, b in zip(ym, yl)])
        return (p, q), order

    # -- maps from oriented quad space -------------------------------------

    def phi_chain(self, xo: Sequence) -> list:
        return _mat_vec(self.phi, xo)

    def homology_class(self, xo: Sequence) -> list[Fraction]:
        return class_coordinates(self.cx, self.h2, self.phi_chain(xo))

    def peripheral_class(self, boundary_total: Sequence[tuple]) -> list[Fraction]:
        """Coordinates along the homological longitudes of p(d+ + d-), scaled by 1/n."""
        if not self.peripheral_available:
            raise ContractViolation("peripheral map unavailable; simplicial map used")
        out = []
        for i, (a, b) in enumerate(boundary_total):
            p, q = self.longitudes[i]
            # complement of the longitude: the meridian unless the longitude is the meridian
            comp = (1, 0) if q != 0 else (0, 1)
            beta = Fraction(comp[0] * b - comp[1] * a, comp[0] * q - comp[1] * p)
            out.append(beta / self.orders[i])
        return out

    def coordinates(self, xo: Sequence, boundary_total=None) -> list[Fraction]:
        """Report coordinates: longitude basis when available, else the simplicial basis."""
        if self.peripheral_available:
            return self.peripheral_class(boundary_total)
        return self.homology_class(xo)

    # -- connecting map ----------------------------------------------------

    def connecting(self, chain: Sequence, tori) -> list[tuple[int, int]]:
        """Boundary on the cusp tori of the truncated 2-chain, as (a, b) = a mu + b lambda."""
        prim: dict[int, dict] = {k: {} for k in range(self.tri.num_cusps)}
        for idx, c in enumerate(chain):
            if not c:
                continue
            tet, f = self.cx.faces[idx]
            verts = _face_vertices(f)
            for i, v in enumerate(verts):
                before, after = verts[i - 1], verts[(i + 1) % 3]
                k = self.tri.vertex_class[(tet, v)]
                torus = tori[k]
                key = torus.edge_key[(tet, v, f)]
                sign = torus.side_direction(tet, v, f, before, after)
                prim[k][key] = prim[k].get(key, 0) + c * sign
        out = []
        for k in range(self.tri.num_cusps):
            mu, lam = self.bases[k]
            torus = tori[k]
            chain_k = prim[k]

            def iota(curve):
                total = 0
                for s in curve.steps:
                    key = torus.edge_key[(s.tet, s.vertex, s.exit)]
                    if chain_k.get(key):
                        total += chain_k[key] * torus.crossing(s, key)
                return total

            out.append((iota(lam), -iota(mu)))
        return out
