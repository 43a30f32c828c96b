"""Quadrilateral coordinates, slopes and the matching equations.

Oriented quad types per tetrahedron, in storage order::

    q01 q02 q03 q12 q13 q23

``q_ab`` is the quad with vertices a and b on its positive side.  The three
unoriented types are ``01|23``, ``02|13``, ``03|12``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .triangulation import Triangulation, other_two, perm_sign

ORIENTED = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
UNORIENTED = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
OTYPE = {pair: k for k, pair in enumerate(ORIENTED)}


def partition_of(a: int, b: int) -> int:
    """Unoriented quad type separating {a, b} from the other two vertices."""
    s = {a, b}
    for k, (p, q) in enumerate(UNORIENTED):
        if s == set(p) or s == set(q):
            return k
    raise ValueError((a, b))


def oriented_index(a: int, b: int) -> int:
    """Index within a tetrahedron of the quad with {a, b} on its positive side."""
    return OTYPE[(min(a, b), max(a, b))]


def forget_type(k: int) -> int:
    return partition_of(*ORIENTED[k])


def reverse_type(k: int) -> int:
    """The same quad with the opposite transverse orientation."""
    return oriented_index(*other_two(*ORIENTED[k]))


def slope(tri: Triangulation, tet: int, u: int, w: int, quad: int) -> int:
    """Slope of unoriented quad ``quad`` at the edge uw of ``tet``; 0 if disjoint."""
    p, q = UNORIENTED[quad]
    if {u, w} == set(p) or {u, w} == set(q):
        return 0
    y = next(v for v in (p + q) if v not in (u, w) and partition_of(u, v) == quad)
    z = next(v for v in (0, 1, 2, 3) if v not in (u, w, y))
    return tri.orientation[tet] * perm_sign((u, w, y, z))


def forget_orientation(xo: Sequence) -> list:
    t = len(xo) // 6
    out = [0] * (3 * t)
    for i, v in enumerate(xo):
        out[3 * (i // 6) + forget_type(i % 6)] += v
    return out


def reverse_orientation(xo: Sequence) -> list:
    out = [0] * len(xo)
    for i, v in enumerate(xo):
        out[6 * (i // 6) + reverse_type(i % 6)] = v
    return out


def is_admissible(x: Sequence, oriented: bool = False) -> bool:
    """Nonnegative, with at most one unoriented quad type positive per tetrahedron."""
    if any(v < 0 for v in x):
        return False
    if oriented:
        x = forget_orientation(x)
    for t in range(len(x) // 3):
        if sum(1 for v in x[3 * t:3 * t + 3] if v) > 1:
            return False
    return True


def admissible_support(t: int):
    """Support filter (bitmask over 6t oriented coordinates) for double description."""
    masks = []
    for tet in range(t):
        group = []
        for k in range(3):
            m = 0
            for j in range(6):
                if forget_type(j) == k:
                    m |= 1 << (6 * tet + j)
            group.append(m)
        masks.append(group)

    def check(support: int) -> bool:
        for a, b, c in masks:
            if ((support & a) != 0) + ((support & b) != 0) + ((support & c) != 0) > 1:
                return False
        return True

    return check


@dataclass
class MatchingSystem:
    oriented: list[list[int]]  # 2E rows x 6t
    unoriented: list[list[int]]  # E rows x 3t
    labels: list[tuple[int, int]]  # (edge class, +1 along class orientation / -1 against)

    def oriented_values(self, xo) -> list:
        return [sum(a * b for a, b in zip(row, xo) if a) for row in self.oriented]

    def unoriented_values(self, x) -> list:
        return [sum(a * b for a, b in zip(row, x) if a) for row in self.unoriented]


def build_matching(tri: Triangulation) -> MatchingSystem:
    t = tri.num_tets
    oriented, labels = [], []
    unoriented = []
    for e in tri.edges:
        for direction in (1, -1):
            row = [0] * (6 * t)
            for step in e.around:
                tail, head = (step.tail, step.head) if direction == 1 else (step.head, step.tail)
                for c in other_two(tail, head):
                    # quads with head on the positive side and tail on the negative side
                    quad = partition_of(head, c)
                    row[6 * step.tet + oriented_index(head, c)] += slope(tri, step.tet, tail, head, quad)
            oriented.append(row)
            labels.append((e.index, direction))
        urow = [0] * (3 * t)
        for step in e.around:
            for quad in range(3):
                urow[3 * step.tet + quad] += slope(tri, step.tet, step.tail, step.head, quad)
        unoriented.append(urow)
    return MatchingSystem(oriented, unoriented, labels)


def check_vector(x: Sequence, length: int, what: str = "coordinate vector") -> list:
    if len(x) != length:
        raise InputError(f"{what} has length {len(x)}, expected {length}")
    out = []
    for v in x:
        v = Fraction(v)
        if v < 0:
            raise InputError(f"{what} has a negative entry")
        out.append(int(v) if v.denominator == 1 else v)
    return out


# -- translations of corner labels ----------------------------------------

def step_shifts(tri: Triangulation, edge: int, direction: int, xo: Sequence) -> list:
    """Label shift of the arcs cutting off the head vertex, one entry per tetrahedron step.

    Short arcs dual to a vertex ``a`` in the face opposite ``c`` are numbered
    after the quads with {a, c} on their positive side, so a small triangle
    at ``a`` whose label is L on entering through the face opposite ``c``
    leaves through the face opposite ``d`` with label L - x(q_ac) + x(q_ad).
    """
    shifts = []
    for step in tri.edges[edge].around:
        head = step.head if direction == 1 else step.tail
        base = 6 * step.tet
        shifts.append(xo[base + oriented_index(head, step.leave)] - xo[base + oriented_index(head, step.enter)])
    return shifts


def edge_translation(tri: Triangulation, edge: int, direction: int, xo: Sequence) -> int:
    """Composed label shift after one trip around the oriented edge class."""
    return sum(step_shifts(tri, edge, direction, xo))
