"""Generalized angle structures with vanishing peripheral holonomy, and the Euler functional.

Angles are exact rationals in units of pi, one per unoriented quad type.
The dihedral angle at an edge of a tetrahedron is the value of the quad
type disjoint from that edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .exact import solve
from .quads import UNORIENTED, forget_orientation, partition_of
from .triangulation import PeripheralCurve, Triangulation


def edge_index(tri: Triangulation, edge: int, tet: int, quad: int) -> int:
    """How many of the two tetrahedron edges missed by ``quad`` belong to ``edge``."""
    (a, b), (c, d) = UNORIENTED[quad]
    return (tri.edge_index(tet, a, b) == edge) + (tri.edge_index(tet, c, d) == edge)


def holonomy_row(tri: Triangulation, curve: PeripheralCurve) -> list[int]:
    row = [0] * (3 * tri.num_tets)
    for s in curve.steps:
        sign = 1 if tri.cuts_left(s) else -1
        row[3 * s.tet + partition_of(s.vertex, s.cut_off())] += sign
    return row


def rotational_holonomy(tri: Triangulation, angles: Sequence, curve: PeripheralCurve) -> Fraction:
    return sum((Fraction(c) * a for c, a in zip(holonomy_row(tri, curve), angles) if c), Fraction(0))


@dataclass
class AngleStructure:
    angles: list[Fraction]
    ledger: dict[int, tuple[Fraction, Fraction]]  # cusp -> (h_mu, h_lambda)

    def chi(self, x: Sequence, oriented: bool = False) -> Fraction:
        return euler_char(x, self.angles, oriented)


def gas_system(tri: Triangulation, bases) -> tuple[list[list[int]], list[int]]:
    n = 3 * tri.num_tets
    rows, rhs = [], []
    for t in range(tri.num_tets):
        row = [0] * n
        row[3 * t:3 * t + 3] = [1, 1, 1]
        rows.append(row)
        rhs.append(1)
    for e in tri.edges:
        row = [0] * n
        for t in range(tri.num_tets):
            for q in range(3):
                row[3 * t + q] = edge_index(tri, e.index, t, q)
        rows.append(row)
        rhs.append(2)
    for k in range(tri.num_cusps):
        for curve in bases[k]:
            rows.append(holonomy_row(tri, curve))
            rhs.append(0)
    return rows, rhs


def solve_gas(tri: Triangulation, bases) -> AngleStructure:
    rows, rhs = gas_system(tri, bases)
    res = solve(rows, rhs)
    if not res.feasible:
        raise InputError("no generalized angle structure")
    angles = res.solution
    ledger = {
        k: tuple(rotational_holonomy(tri, angles, c) for c in bases[k])
        for k in range(tri.num_cusps)
    }
    return AngleStructure(angles, ledger)


def euler_char(x: Sequence, angles: Sequence, oriented: bool = False) -> Fraction:
    """chi*(x) = -sum a(q) x(q)."""
    if oriented:
        x = forget_orientation(x)
    return -sum((Fraction(a) * v for a, v in zip(angles, x) if v), Fraction(0))
