"""Exact linear algebra and polyhedral computation over the rationals.

Matrices are lists of rows; entries are ints or Fractions.  Nothing in this
module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

import numpy as np

Matrix = list[list[Fraction]]


def to_fraction_matrix(A) -> Matrix:
    return [[Fraction(x) for x in row] for row in A]


def mat_vec(A, x) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def mat_mul(A, B) -> list:
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def rref(A, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = to_fraction_matrix(A)
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R, pivots


def rank(A) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def kernel_basis(A, ncols: int | None = None) -> list[list[Fraction]]:
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(A, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


@dataclass
class SolveResult:
    solution: list[Fraction] | None
    certificate: list[Fraction] | None = None

    @property
    def feasible(self) -> bool:
        return self.solution is not None


def solve(A, b) -> SolveResult:
    """Solve A x = b exactly, free variables set to zero.

    When infeasible, ``certificate`` is a row vector y with y A = 0, y b != 0.
    """
    m = len(A)
    if len(b) != m:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    n = len(A[0]) if m else 0
    aug = [list(row) + [bi] + [int(i == j) for j in range(m)] for i, (row, bi) in enumerate(zip(A, b))]
    R, pivots = rref(aug, n)
    x = [Fraction(0)] * n
    for i, row in enumerate(R):
        if i < len(pivots):
            x[pivots[i]] = row[n]
        elif row[n] != 0:
            return SolveResult(None, row[n + 1:])
    return SolveResult(x)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers (sign preserved)."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# -- Smith normal form ----------------------------------------------------

def smith_normal_form(A) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with U A V = D, U and V unimodular, d_i | d_{i+1}."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[int(x) for x in row] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(i, t, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(j, t, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def det_int(A) -> int:
    R = to_fraction_matrix(A)
    n = len(R)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if R[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            R[c], R[p] = R[p], R[c]
            det = -det
        det *= R[c][c]
        for i in range(c + 1, n):
            f = R[i][c] / R[c][c]
            if f:
                R[i] = [a - f * b for a, b in zip(R[i], R[c])]
    return int(det)


# -- double description ---------------------------------------------------

class _Rays:
    """Integer rays with their supports packed into uint64 words."""

    def __init__(self, n: int):
        self.n = n
        self.words = (n + 63) // 64
        self.vectors: list[tuple[int, ...]] = []
        self.masks: list[int] = []

    def add(self, v, mask):
        self.vectors.append(v)
        self.masks.append(mask)

    def packed(self) -> np.ndarray:
        out = np.zeros((len(self.masks), self.words), dtype=np.uint64)
        for r, m in enumerate(self.masks):
            for w in range(self.words):
                out[r, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
        return out


def _support(v) -> int:
    m = 0
    for i, x in enumerate(v):
        if x:
            m |= 1 << i
    return m


def extreme_rays(A, n: int, admissible: Callable[[int], bool] | None = None) -> list[tuple[int, ...]]:
    """Extreme rays of {x : A x = 0, x >= 0} as primitive integer vectors.

    ``admissible`` optionally filters supports (given as bitmasks); it must be
    monotone (a failing support fails for every superset), and then only
    the admissible extreme rays are produced.
    """
    A = [primitive(row) for row in A if any(row)]
    rays = _Rays(n)
    for i in range(n):
        v = tuple(int(i == j) for j in range(n))
        if admissible is None or admissible(1 << i):
            rays.add(v, 1 << i)
    pending = list(range(len(A)))
    processed: list[tuple[int, ...]] = []
    while pending:
        # insert next the constraint that splits the current rays least
        def cost(k):
            row = A[k]
            pos = neg = 0
            for v in rays.vectors:
                s = sum(a * b for a, b in zip(row, v) if a)
                if s > 0:
                    pos += 1
                elif s < 0:
                    neg += 1
            return (pos * neg, k)

        k = min(pending, key=cost)
        pending.remove(k)
        processed.append(A[k])
        rays = _insert(rays, A[k], rank(processed), admissible)
    return sorted(rays.vectors)


def _insert(rays: _Rays, row, rank_now: int, admissible) -> _Rays:
    values = [sum(a * b for a, b in zip(row, v) if a) for v in rays.vectors]
    out = _Rays(rays.n)
    pos = [i for i, s in enumerate(values) if s > 0]
    neg = [i for i, s in enumerate(values) if s < 0]
    for i, s in enumerate(values):
        if s == 0:
            out.add(rays.vectors[i], rays.masks[i])
    if not pos or not neg:
        return out
    packed = rays.packed()
    limit = rank_now + 1  # a 2-face of the cut cone has support at most rank + 2 before the cut
    for i in pos:
        vi, mi = rays.vectors[i], rays.masks[i]
        for j in neg:
            u = mi | rays.masks[j]
            if u.bit_count() > limit + 1:
                continue
            if admissible is not None and not admissible(u):
                continue
            if not _adjacent(packed, u, rays.words):
                continue
            a, b = values[i], -values[j]
            w = primitive([b * x + a * y for x, y in zip(vi, rays.vectors[j])])
            out.add(w, _support(w))
    return out


def _adjacent(packed: np.ndarray, union: int, words: int) -> bool:
    inside = np.ones(packed.shape[0], dtype=bool)
    for w in range(words):
        uw = np.uint64((union >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
        inside &= (packed[:, w] & ~uw) == 0
    return int(inside.sum()) <= 2


# -- convex hull ----------------------------------------------------------

@dataclass
class Polytope:
    dim: int
    affine_dim: int
    vertices: list[tuple[Fraction, ...]]
    facets: list[tuple[tuple[Fraction, ...], Fraction]]  # (normal, offset): normal.x <= offset
    face_vertices: list[list[int]]

    def contains(self, p) -> bool:
        return all(sum(a * b for a, b in zip(nrm, p)) <= off for nrm, off in self.facets)


def affine_hull(points) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Base point and a basis of the directions spanned by ``points``."""
    base = [Fraction(x) for x in points[0]]
    diffs = [[Fraction(x) - b for x, b in zip(p, base)] for p in points[1:]]
    if not diffs:
        return base, []
    R, pivots = rref(diffs)
    return base, [R[i] for i in range(len(pivots))]


def convex_hull(points) -> Polytope:
    """Exact hull by homogenising and running double description on the dual cone."""
    pts = sorted({tuple(Fraction(x) for x in p) for p in points})
    if not pts:
        raise ValueError("convex hull of no points")
    d = len(pts[0])
    base, basis = affine_hull(pts)
    k = len(basis)
    if k == 0:
        return Polytope(d, 0, [pts[0]], [], [])
    # coordinates of each point in the affine basis
    local = [_coords_in(basis, [x - b for x, b in zip(p, base)]) for p in pts]
    # dual cone {y in Q^(k+1) : y0 + y.c >= 0 for every point}; M y >= 0
    M = [[Fraction(1)] + list(c) for c in local]
    facets_local = [[Fraction(x) for x in y] for y in cone_generators(M)]
    vertices = []
    tight_sets = []
    for idx, c in enumerate(local):
        tight = [f for f, y in enumerate(facets_local) if y[0] + sum(a * b for a, b in zip(y[1:], c)) == 0]
        normals = [facets_local[f][1:] for f in tight]
        if normals and rank(normals) == k:
            vertices.append(idx)
        tight_sets.append(tight)
    verts = [pts[i] for i in vertices]
    facets = []
    face_vertices = []
    for f, y in enumerate(facets_local):
        # y0 + y.c >= 0 where p = base + sum c_i basis_i, rewritten as normal.p <= offset
        pulled = _pull_back(basis, y[1:], d)
        normal = tuple(-x for x in pulled)
        offset = y[0] - sum(a * b for a, b in zip(pulled, base))
        facets.append((normal, offset))
        face_vertices.append([n for n, i in enumerate(vertices) if f in tight_sets[i]])
    return Polytope(d, k, verts, facets, face_vertices)


def cone_generators(rows) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y : r.y >= 0 for every row r}.

    Inequality-form double description in the ambient dimension: start
    from a simplicial cone on independent rows, then cut by the others.
    """
    rows = [primitive(r) for r in rows]
    d = len(rows[0])
    first = rref([list(c) for c in zip(*rows)])[1]
    if len(first) < d:
        raise ValueError("cone is not pointed")
    B = [[Fraction(x) for x in rows[i]] for i in first]
    # columns of B^-1 generate {y : B y >= 0}
    rays = []
    for j in range(d):
        e = [Fraction(int(i == j)) for i in range(d)]
        rays.append(primitive(solve(B, e).solution))

    def tight(v, done):
        return frozenset(i for i in done if sum(a * b for a, b in zip(rows[i], v)) == 0)

    done = list(first)
    tights = [tight(v, done) for v in rays]
    for k in range(len(rows)):
        if k in first:
            continue
        row = rows[k]
        vals = [sum(a * b for a, b in zip(row, v)) for v in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        keep = [i for i, s in enumerate(vals) if s >= 0]
        new_rays = [rays[i] for i in keep]
        new_tights = [tights[i] | ({k} if vals[i] == 0 else set()) for i in keep]
        for i in pos:
            for j in neg:
                common = tights[i] & tights[j]
                if len(common) < d - 2:
                    continue
                if any(m != i and m != j and common <= tights[m] for m in range(len(rays))):
                    continue
                a, b = vals[i], -vals[j]
                w = primitive([b * x + a * y for x, y in zip(rays[i], rays[j])])
                new_rays.append(w)
                new_tights.append(common | {k})
        rays, tights = new_rays, [frozenset(t) for t in new_tights]
        done.append(k)
    return sorted(rays)


def _coords_in(basis, v) -> list[Fraction]:
    T = [list(col) for col in zip(*basis)]
    res = solve(T, v)
    return res.solution


def _pull_back(basis, y, d) -> list[Fraction]:
    """Normal vector n in Q^d with n.(sum c_i b_i) = y.c on the affine span."""
    # least-norm choice: n = B^T (B B^T)^-1 y, exact
    gram = [[sum(a * b for a, b in zip(u, v)) for v in basis] for u in basis]
    z = solve(gram, list(y)).solution
    return [sum(z[i] * basis[i][j] for i in range(len(basis))) for j in range(d)]
