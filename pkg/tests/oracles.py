"""Brute-force reference computations, deliberately independent of spunnorm.exact."""

import itertools
from fractions import Fraction
from math import gcd


def nullspace(rows, ncols):
    """Basis of {x : rows x = 0} by plain Gauss-Jordan over the rationals."""
    R = [[Fraction(v) for v in r] for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        R[r] = [v / R[r][c] for v in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][free]
        basis.append(v)
    return basis


def integral(v):
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def brute_rays(A, n, admissible=None):
    """Extreme rays of {Ax = 0, x >= 0}: supports whose restricted kernel is a positive line."""
    found = set()
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            sub = [[row[j] for j in S] for row in A]
            ker = nullspace(sub, size)
            if len(ker) != 1:
                continue
            v = ker[0]
            if all(x > 0 for x in v) or all(x < 0 for x in v):
                full = [Fraction(0)] * n
                for j, x in zip(S, v):
                    full[j] = abs(x)
                if admissible is None or admissible(sum(1 << j for j in S)):
                    found.add(integral(full))
    return sorted(found)


def brute_facets_3d(points):
    """Supporting planes through every affinely independent triple, as primitive (normal, offset)."""
    out = set()
    for a, b, c in itertools.combinations(points, 3):
        u = [x - y for x, y in zip(b, a)]
        w = [x - y for x, y in zip(c, a)]
        n = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]]
        if not any(n):
            continue
        off = sum(x * y for x, y in zip(n, a))
        vals = [sum(x * y for x, y in zip(n, p)) - off for p in points]
        if all(v <= 0 for v in vals):
            out.add(integral([Fraction(x) for x in n + [off]]))
        elif all(v >= 0 for v in vals):
            out.add(integral([Fraction(-x) for x in n + [off]]))
    return out


def laplace_det(M):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * laplace_det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(len(M)))


def determinantal_divisors(A):
    """d_k = gcd of all k x k minors, for k = 1 .. min(m, n)."""
    m, n = len(A), len(A[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, laplace_det([[A[r][c] for c in cs] for r in rs]))
        out.append(g)
    return out
