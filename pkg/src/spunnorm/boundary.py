"""Boundary curve maps of spun-normal surfaces.

Every quad arc in a face cuts off one vertex ``a``; it runs parallel to the
side of the cusp triangle at ``a`` lying in that face.  Arcs cutting off a
vertex on the quad's positive side are outward, the others inward.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .quads import ORIENTED, slope
from .triangulation import PeripheralCurve, Triangulation, other_two


def quad_arcs(k: int) -> list[tuple[int, int, bool]]:
    """(cut-off vertex, face, outward) for the four arcs of oriented quad type k."""
    a, b = ORIENTED[k]
    c, d = other_two(a, b)
    return [(a, b, True), (b, a, True), (c, d, False), (d, c, False)]


def crossing_table(curve: PeripheralCurve) -> dict[tuple[int, int, int], int]:
    """Signed count of the curve passing each cusp-triangle side (t, v, side): +1 in, -1 out."""
    table: dict[tuple[int, int, int], int] = {}
    for s in curve.steps:
        key_in = (s.tet, s.vertex, s.enter)
        key_out = (s.tet, s.vertex, s.exit)
        table[key_in] = table.get(key_in, 0) + 1
        table[key_out] = table.get(key_out, 0) - 1
    return table


def quad_weights(tri: Triangulation, curve: PeripheralCurve) -> tuple[list[int], list[int]]:
    """Per oriented quad coordinate, the outward and inward weights against ``curve``."""
    table = crossing_table(curve)
    n = 6 * tri.num_tets
    plus, minus = [0] * n, [0] * n
    for t in range(tri.num_tets):
        for k in range(6):
            for vertex, face, outward in quad_arcs(k):
                c = table.get((t, vertex, face), 0)
                if outward:
                    plus[6 * t + k] += c
                else:
                    minus[6 * t + k] -= c
    return plus, minus


def w_pm(tri: Triangulation, curve: PeripheralCurve, xo: Sequence) -> tuple:
    plus, minus = quad_weights(tri, curve)
    wp = sum(a * b for a, b in zip(plus, xo) if a)
    wm = sum(a * b for a, b in zip(minus, xo) if a)
    return wp, wm


@dataclass(frozen=True)
class BoundaryClass:
    outward: tuple[tuple, ...]  # per cusp (a, b) meaning a*mu + b*lambda
    inward: tuple[tuple, ...]

    @property
    def total(self) -> tuple[tuple, ...]:
        return tuple((a + c, b + d) for (a, b), (c, d) in zip(self.outward, self.inward))

    @property
    def difference(self) -> tuple[tuple, ...]:
        return tuple((a - c, b - d) for (a, b), (c, d) in zip(self.outward, self.inward))


class BoundaryMaps:
    """Precomputed linear functionals for the boundary maps of one triangulation."""

    def __init__(self, tri: Triangulation, bases: dict[int, tuple[PeripheralCurve, PeripheralCurve]]):
        self.tri = tri
        self.bases = bases
        self.plus = []
        self.minus = []
        self.spin = []
        for k in range(tri.num_cusps):
            mu, lam = bases[k]
            mu_p, mu_m = quad_weights(tri, mu)
            lam_p, lam_m = quad_weights(tri, lam)
            # (a, b) = (-w_lambda, w_mu)
            self.plus.append(([-x for x in lam_p], mu_p))
            self.minus.append(([-x for x in lam_m], mu_m))
            self.spin.append((spin_functional(tri, lam, negate=True), spin_functional(tri, mu)))  # (-f_lambda, f_mu)

    def classes(self, xo: Sequence) -> BoundaryClass:
        def ev(pair):
            return tuple(_dot(f, xo) for f in pair)

        return BoundaryClass(tuple(ev(p) for p in self.plus), tuple(ev(m) for m in self.minus))

    def spinning(self, x: Sequence) -> list[tuple]:
        return [tuple(_dot(f, x) for f in pair) for pair in self.spin]


def _dot(f, x):
    return sum(a * b for a, b in zip(f, x) if a)


def spin_functional(tri: Triangulation, curve: PeripheralCurve, negate: bool = False) -> list[int]:
    """Unoriented functional counting how far the surface spins across ``curve``.

    Each step of the curve cuts off a corner of its cusp triangle, lying on
    an edge of the tetrahedron; the quads meeting that edge contribute their
    slopes, negated when the corner lies to the left of the curve.
    """
    f = [0] * (3 * tri.num_tets)
    for s in curve.steps:
        g = s.cut_off()
        sign = -1 if tri.cuts_left(s) else 1
        if negate:
            sign = -sign
        for quad in range(3):
            sl = slope(tri, s.tet, s.vertex, g, quad)
            if sl:
                f[3 * s.tet + quad] += sign * sl
    return f


def primitive_pair(p) -> tuple:
    a, b = (Fraction(v) for v in p)
    if a == 0 and b == 0:
        return (0, 0)
    den = a.denominator * b.denominator
    a, b = int(a * den), int(b * den)
    g = gcd(a, b)
    return (a // g, b // g)


def pair_gcd(p) -> int:
    a, b = p
    return gcd(int(a), int(b))


def num_boundary_components(bc: BoundaryClass) -> tuple[list[tuple[int, int]], int]:
    per = [(pair_gcd(o), pair_gcd(i)) for o, i in zip(bc.outward, bc.inward)]
    return per, sum(a + b for a, b in per)


def ends_embeddable(bc: BoundaryClass) -> bool:
    for o, i in zip(bc.outward, bc.inward):
        po = primitive_pair(o)
        pi = primitive_pair((-i[0], -i[1]))
        if po != (0, 0) and pi != (0, 0) and po != pi:
            return False
    return True
